use std::fs;
use std::path::{Path, PathBuf};

use super::config::{Algorithm, AlgorithmSettings, ExperimentConfig};
use super::report::ComparisonReport;
use crate::bpso::run_bpso;
use crate::classic::{run_abc, run_aco, run_alo, run_sa};
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::{Evaluator, Objective};
use crate::record::RunRecord;
use crate::rlbpso::{run_rlbpso_trained, ActorCritic};
use crate::rng::RngStream;

/// Run one algorithm against an evaluator.
pub fn run_algorithm(
    algorithm: Algorithm,
    settings: &AlgorithmSettings,
    ev: &mut Evaluator<'_>,
    seed: u64,
) -> Result<RunRecord> {
    run_algorithm_full(algorithm, settings, ev, seed).map(|(r, _)| r)
}

fn run_algorithm_full(
    algorithm: Algorithm,
    settings: &AlgorithmSettings,
    ev: &mut Evaluator<'_>,
    seed: u64,
) -> Result<(RunRecord, Option<ActorCritic>)> {
    match algorithm {
        Algorithm::Bpso => run_bpso(ev, &settings.bpso, seed).map(|r| (r, None)),
        Algorithm::SaRandom | Algorithm::SaSwap => {
            run_sa(ev, &settings.sa_for(algorithm), seed).map(|r| (r, None))
        }
        Algorithm::Abc => run_abc(ev, &settings.abc, seed).map(|r| (r, None)),
        Algorithm::Aco => run_aco(ev, &settings.aco, seed).map(|r| (r, None)),
        Algorithm::Alo => run_alo(ev, &settings.alo, seed).map(|r| (r, None)),
        Algorithm::Rlbpso => run_rlbpso_trained(ev, &settings.rlbpso, seed),
    }
}

/// Best cost among `samples` uniform random genomes.
pub fn random_search(objective: &dyn Objective, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = RngStream::child(seed, "random/sample");
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let g = Genome::random(objective.dim(), &mut rng);
        best = best.min(objective.cost(&g)?);
    }
    Ok(best)
}

/// One (algorithm, seed) cell of a campaign.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub budget: u64,
    pub outcome: Result<RunRecord>,
    pub weights: Option<ActorCritic>,
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub cells: Vec<CellResult>,
    pub report: ComparisonReport,
}

impl Campaign {
    pub fn failures(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.outcome.is_err())
    }
}

/// Run every (algorithm, seed) pair, each with its own cache and meter.
/// A failing cell is recorded and the campaign carries on.
pub fn execute(cfg: &ExperimentConfig, objective: &dyn Objective) -> Result<Campaign> {
    cfg.validate()?;
    let mut cells = Vec::with_capacity(cfg.algorithms.len() * cfg.seeds.len());
    for &algorithm in &cfg.algorithms {
        for &seed in &cfg.seeds {
            let budget = cfg.budget_for(algorithm);
            let mut ev = Evaluator::new(objective, budget);
            let (outcome, weights) =
                match run_algorithm_full(algorithm, &cfg.settings, &mut ev, seed) {
                    Ok((record, w)) => (Ok(record), w),
                    Err(e) => (Err(e), None),
                };
            cells.push(CellResult {
                algorithm,
                seed,
                budget,
                outcome,
                weights,
            });
        }
    }
    let report = ComparisonReport::from_cells(&cfg.objective.to_string(), &cells);
    Ok(Campaign { cells, report })
}

/// [`execute`] and write every artifact under `cfg.out`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Campaign> {
    cfg.validate()?;
    let objective = cfg.objective.build()?;
    let campaign = execute(cfg, objective.as_ref())?;
    write_outputs(cfg, &campaign)?;
    Ok(campaign)
}

pub fn run_file_stem(algorithm: Algorithm, seed: u64) -> String {
    format!("{}_seed{}", algorithm.name(), seed)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

/// Layout:
///
/// ```text
/// <out>/report.txt          comparison table (deterministic)
/// <out>/report.csv          same, machine readable (deterministic)
/// <out>/runs.csv            one row per cell (deterministic)
/// <out>/hyperparameters.txt settings used
/// <out>/timings.txt         wall time per run (not deterministic)
/// <out>/runs/<algo>_seed<s>.csv      convergence trace
/// <out>/runs/<algo>_seed<s>.genome   best genome
/// <out>/runs/<algo>_seed<s>.weights  trained controller (rlbpso only)
/// ```
pub fn write_outputs(cfg: &ExperimentConfig, campaign: &Campaign) -> Result<PathBuf> {
    let runs = cfg.out.join("runs");
    fs::create_dir_all(&runs)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", runs.display())))?;
    for cell in &campaign.cells {
        let stem = run_file_stem(cell.algorithm, cell.seed);
        match &cell.outcome {
            Ok(record) => {
                write(&runs.join(format!("{stem}.csv")), &record.convergence_csv())?;
                write(&runs.join(format!("{stem}.genome")), &record.best.to_line())?;
            }
            Err(e) => write(&runs.join(format!("{stem}.error")), &format!("{e}\n"))?,
        }
        if let Some(ac) = &cell.weights {
            write(&runs.join(format!("{stem}.weights")), &ac.to_snapshot())?;
        }
    }
    let report = &campaign.report;
    write(&cfg.out.join("report.txt"), &report.to_text())?;
    write(&cfg.out.join("report.csv"), &report.to_csv())?;
    write(&cfg.out.join("runs.csv"), &runs_csv(&campaign.cells))?;
    write(&cfg.out.join("timings.txt"), &report.timings_text())?;
    write(
        &cfg.out.join("hyperparameters.txt"),
        &hyperparameters_text(cfg),
    )?;
    Ok(cfg.out.clone())
}

fn runs_csv(cells: &[CellResult]) -> String {
    let mut out = String::from(
        "algorithm,seed,budget,best_cost,evaluations,cache_hits,iterations,stop,status\n",
    );
    for c in cells {
        match &c.outcome {
            Ok(r) => out.push_str(&format!(
                "{},{},{},{},{},{},{},{:?},ok\n",
                c.algorithm,
                c.seed,
                c.budget,
                r.best_cost,
                r.evaluations,
                r.cache_hits,
                r.iterations_completed(),
                r.stop
            )),
            Err(e) => out.push_str(&format!(
                "{},{},{},,,,,,\"failed: {}\"\n",
                c.algorithm,
                c.seed,
                c.budget,
                e.to_string().replace('"', "'")
            )),
        }
    }
    out
}

pub fn hyperparameters_text(cfg: &ExperimentConfig) -> String {
    let width = cfg
        .algorithms
        .iter()
        .map(|a| a.display_name().len())
        .max()
        .unwrap_or(0)
        .max("Algorithms".len());
    let mut out = String::from("Hyperparameters\n");
    out.push_str(&format!("{:width$}  Hyperparameters\n", "Algorithms"));
    for &a in &cfg.algorithms {
        out.push_str(&format!(
            "{:width$}  {}, budget = {}\n",
            a.display_name(),
            cfg.settings.describe(a),
            cfg.budget_for(a)
        ));
    }
    out
}
