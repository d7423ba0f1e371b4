use std::time::Duration;

use super::config::Algorithm;
use super::experiment::CellResult;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    /// `(seed, final best cost)`; `None` marks a failed run.
    pub per_seed: Vec<(u64, Option<f64>)>,
    pub evaluations: Vec<u64>,
    pub wall_times: Vec<(u64, Option<Duration>)>,
    pub best: Option<f64>,
    pub median: Option<f64>,
}

impl ReportRow {
    pub fn failures(&self) -> usize {
        self.per_seed.iter().filter(|(_, c)| c.is_none()).count()
    }
}

/// Comparison table; rows are sorted by median cost ascending, ties and
/// all-failed rows falling back to the canonical algorithm order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub objective: String,
    pub rows: Vec<ReportRow>,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

impl ComparisonReport {
    pub fn from_cells(objective: &str, cells: &[CellResult]) -> Self {
        let mut algorithms: Vec<Algorithm> = cells.iter().map(|c| c.algorithm).collect();
        algorithms.dedup();
        let mut rows: Vec<ReportRow> = algorithms
            .into_iter()
            .map(|algorithm| {
                let mine: Vec<&CellResult> =
                    cells.iter().filter(|c| c.algorithm == algorithm).collect();
                let per_seed: Vec<(u64, Option<f64>)> = mine
                    .iter()
                    .map(|c| (c.seed, c.outcome.as_ref().ok().map(|r| r.best_cost)))
                    .collect();
                let costs: Vec<f64> = per_seed.iter().filter_map(|(_, c)| *c).collect();
                ReportRow {
                    algorithm,
                    evaluations: mine
                        .iter()
                        .filter_map(|c| c.outcome.as_ref().ok().map(|r| r.evaluations))
                        .collect(),
                    wall_times: mine
                        .iter()
                        .map(|c| (c.seed, c.outcome.as_ref().ok().map(|r| r.wall_time)))
                        .collect(),
                    best: costs.iter().copied().min_by(f64::total_cmp),
                    median: median(&costs),
                    per_seed,
                }
            })
            .collect();
        rows.sort_by(|a, b| {
            let key = |r: &ReportRow| r.median.unwrap_or(f64::INFINITY);
            key(a)
                .total_cmp(&key(b))
                .then(a.algorithm.table_rank().cmp(&b.algorithm.table_rank()))
        });
        Self {
            objective: objective.to_string(),
            rows,
        }
    }

    pub fn row(&self, algorithm: Algorithm) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }

    /// Aligned table with one row per algorithm.
    /// Contains no timing data, so equal configs give equal bytes.
    pub fn to_text(&self) -> String {
        let runs = self.rows.first().map_or(0, |r| r.per_seed.len());
        let header = ["Algorithms", "Cost", "Median", "Evaluations", "Runs"];
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                let failed = r.failures();
                let evals = if r.evaluations.is_empty() {
                    "-".to_string()
                } else {
                    format!(
                        "{:.1}",
                        r.evaluations.iter().sum::<u64>() as f64 / r.evaluations.len() as f64
                    )
                };
                [
                    r.algorithm.display_name().to_string(),
                    r.best.map_or("FAILED".into(), |c| format!("{c:.4}")),
                    r.median.map_or("FAILED".into(), |c| format!("{c:.4}")),
                    evals,
                    if failed > 0 {
                        format!(
                            "{}/{} FAILED {failed}",
                            r.per_seed.len() - failed,
                            r.per_seed.len()
                        )
                    } else {
                        format!("{}/{}", r.per_seed.len(), r.per_seed.len())
                    },
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let rule: String = width
            .iter()
            .map(|w| "-".repeat(w + 2))
            .collect::<Vec<_>>()
            .join("+");
        let line = |row: &[String]| -> String {
            let parts: Vec<String> = row
                .iter()
                .zip(&width)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i == 0 {
                        format!(" {c:<w$} ")
                    } else {
                        format!(" {c:>w$} ")
                    }
                })
                .collect();
            format!("|{}|\n", parts.join("|"))
        };
        let mut out = String::from("Best cost optimization algorithms comparison\n");
        out.push_str(&format!(
            "objective: {}, runs per algorithm: {runs}\n",
            self.objective
        ));
        out.push_str(&format!("+{rule}+\n"));
        out.push_str(&line(&header.map(String::from)));
        out.push_str(&format!("+{rule}+\n"));
        for row in &cells {
            out.push_str(&line(row));
        }
        out.push_str(&format!("+{rule}+\n"));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("algorithm,best_cost,median_cost,runs,failed,mean_evaluations\n");
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or(String::new(), |c| c.to_string());
            let mean = if r.evaluations.is_empty() {
                String::new()
            } else {
                (r.evaluations.iter().sum::<u64>() as f64 / r.evaluations.len() as f64).to_string()
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.algorithm.name(),
                opt(r.best),
                opt(r.median),
                r.per_seed.len(),
                r.failures(),
                mean
            ));
        }
        out
    }

    /// Wall time per run in seconds, one column per seed.
    pub fn timings_text(&self) -> String {
        let mut out = String::from("Time Comparisons. Time shown in seconds.\n");
        let width = self
            .rows
            .iter()
            .map(|r| r.algorithm.display_name().len())
            .max()
            .unwrap_or(0)
            .max("Algorithms".len());
        out.push_str(&format!("{:width$}", "Algorithms"));
        if let Some(first) = self.rows.first() {
            for (seed, _) in &first.wall_times {
                out.push_str(&format!("  {:>12}", format!("seed {seed}")));
            }
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{:width$}", r.algorithm.display_name()));
            for (_, t) in &r.wall_times {
                let cell = t.map_or("FAILED".into(), |d| format!("{:.6}", d.as_secs_f64()));
                out.push_str(&format!("  {cell:>12}"));
            }
            out.push('\n');
        }
        out
    }
}
