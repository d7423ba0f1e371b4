//! Run traces shared by every optimizer.

use std::fmt::Write as _;
use std::time::Duration;

use crate::genome::Genome;
use crate::objective::Evaluator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationEntry {
    /// 0 is the initialization step.
    pub iteration: usize,
    pub evaluations: u64,
    pub best_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    IterationLimit,
    BudgetExhausted,
}

/// Trace of one seeded run.
///
/// Equality ignores `wall_time`, which is the only non-reproducible field.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algorithm: String,
    pub seed: u64,
    pub entries: Vec<IterationEntry>,
    pub best: Genome,
    pub best_cost: f64,
    pub evaluations: u64,
    pub cache_hits: u64,
    pub stop: StopReason,
    pub wall_time: Duration,
}

impl PartialEq for RunRecord {
    fn eq(&self, other: &Self) -> bool {
        self.algorithm == other.algorithm
            && self.seed == other.seed
            && self.entries == other.entries
            && self.best == other.best
            && self.best_cost.to_bits() == other.best_cost.to_bits()
            && self.evaluations == other.evaluations
            && self.cache_hits == other.cache_hits
            && self.stop == other.stop
    }
}

impl RunRecord {
    /// Recorded iterations, the initialization step (iteration 0) included.
    pub fn iterations_completed(&self) -> usize {
        self.entries.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[1].best_cost <= w[0].best_cost)
    }

    /// `iteration,evaluations,best_cost` with one row per entry.
    pub fn convergence_csv(&self) -> String {
        let mut out = String::from("iteration,evaluations,best_cost\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{}", e.iteration, e.evaluations, e.best_cost);
        }
        out
    }
}

/// Incumbent tracking plus per-iteration trace. Replacements require a
/// strictly lower cost, so ties keep the incumbent.
#[derive(Debug)]
pub(crate) struct Tracker {
    algorithm: String,
    seed: u64,
    started: std::time::Instant,
    best: Option<(Genome, f64)>,
    entries: Vec<IterationEntry>,
}

impl Tracker {
    pub fn new(algorithm: &str, seed: u64) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            seed,
            started: std::time::Instant::now(),
            best: None,
            entries: Vec::new(),
        }
    }

    /// Offer a candidate; returns true if it became the new best.
    pub fn offer(&mut self, genome: &Genome, cost: f64) -> bool {
        match &self.best {
            Some((_, best)) if cost >= *best => false,
            _ => {
                self.best = Some((genome.clone(), cost));
                true
            }
        }
    }

    pub fn best_cost(&self) -> Option<f64> {
        self.best.as_ref().map(|(_, c)| *c)
    }

    pub fn best_genome(&self) -> Option<&Genome> {
        self.best.as_ref().map(|(g, _)| g)
    }

    pub fn record(&mut self, iteration: usize, ev: &Evaluator<'_>) {
        if let Some(best_cost) = self.best_cost() {
            self.entries.push(IterationEntry {
                iteration,
                evaluations: ev.meter().used(),
                best_cost,
            });
        }
    }

    /// Close the run. Fails only when nothing could be evaluated at all.
    pub fn finish(self, ev: &Evaluator<'_>, stop: StopReason) -> crate::Result<RunRecord> {
        let meter = ev.meter();
        let Some((best, best_cost)) = self.best else {
            return Err(crate::Error::BudgetExhausted { max: meter.max() });
        };
        Ok(RunRecord {
            algorithm: self.algorithm,
            seed: self.seed,
            entries: self.entries,
            best,
            best_cost,
            evaluations: meter.used(),
            cache_hits: meter.cache_hits(),
            stop,
            wall_time: self.started.elapsed(),
        })
    }
}
