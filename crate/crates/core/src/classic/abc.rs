//! Binary artificial bee colony.
//!
//! Food sources are held by the employed bees. Neighbours flip one uniformly
//! chosen bit and are accepted only on strict improvement. Every source whose
//! trial counter reaches `limit` is abandoned and rescouted in the same
//! iteration, so counters never exceed the limit between iterations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Evaluator;
use crate::record::{RunRecord, StopReason, Tracker};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct AbcConfig {
    pub total: usize,
    pub employed: usize,
    pub onlookers: usize,
    pub limit: usize,
    pub max_iter: usize,
}

impl Default for AbcConfig {
    fn default() -> Self {
        Self {
            total: 30,
            employed: 22,
            onlookers: 5,
            limit: 50,
            max_iter: 25,
        }
    }
}

impl AbcConfig {
    /// The larger colony from the pseudo-code listing.
    pub fn listing() -> Self {
        Self {
            total: 50,
            employed: 25,
            onlookers: 25,
            limit: 50,
            max_iter: 50,
        }
    }

    /// Bees left over after the employed and onlooker roles.
    pub fn scouts(&self) -> usize {
        self.total - self.employed - self.onlookers
    }

    pub fn validate(&self) -> Result<()> {
        if self.employed == 0 {
            return Err(Error::config("abc: employed must be at least 1"));
        }
        if self.employed + self.onlookers > self.total {
            return Err(Error::config(format!(
                "abc: employed + onlookers ({}) exceeds total bees ({})",
                self.employed + self.onlookers,
                self.total
            )));
        }
        if self.limit == 0 {
            return Err(Error::config("abc: limit must be at least 1"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("abc: max_iter must be at least 1"));
        }
        Ok(())
    }

    /// Initial sources plus one full colony per iteration.
    pub fn natural_budget(&self) -> u64 {
        (self.employed + self.max_iter * self.total) as u64
    }
}

/// Roulette probabilities from fitness `1 / (1 + cost)`.
pub fn abc_selection_probs(costs: &[f64]) -> Result<Vec<f64>> {
    if costs.is_empty() {
        return Err(Error::domain("selection over an empty population"));
    }
    if let Some(c) = costs.iter().find(|c| !(**c >= 0.0) || !c.is_finite()) {
        return Err(Error::domain(format!(
            "cost must be finite and >= 0, got {c}"
        )));
    }
    let fitness: Vec<f64> = costs.iter().map(|c| 1.0 / (1.0 + c)).collect();
    let total: f64 = fitness.iter().sum();
    Ok(fitness.into_iter().map(|f| f / total).collect())
}

pub(crate) fn roulette(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

#[derive(Debug, Clone)]
struct Source {
    genome: Genome,
    cost: f64,
    trial: usize,
}

/// Per-iteration scout activity, for tests and diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AbcTrace {
    pub scouts: Vec<usize>,
    pub max_trial: Vec<usize>,
}

pub fn run_abc(ev: &mut Evaluator<'_>, config: &AbcConfig, seed: u64) -> Result<RunRecord> {
    run_abc_traced(ev, config, seed).map(|(record, _)| record)
}

pub fn run_abc_traced(
    ev: &mut Evaluator<'_>,
    config: &AbcConfig,
    seed: u64,
) -> Result<(RunRecord, AbcTrace)> {
    config.validate()?;
    let dim = ev.dim();
    let mut init_rng = RngStream::child(seed, "abc/init");
    let mut employed_rng = RngStream::child(seed, "abc/employed");
    let mut onlooker_rng = RngStream::child(seed, "abc/onlooker");
    let mut scout_rng = RngStream::child(seed, "abc/scout");
    let mut tracker = Tracker::new("abc", seed);
    let mut trace = AbcTrace::default();

    macro_rules! eval_or_stop {
        ($g:expr, $iter:expr) => {
            match ev.try_evaluate($g)? {
                Some(c) => c,
                None => {
                    tracker.record($iter, ev);
                    let record = tracker.finish(ev, StopReason::BudgetExhausted)?;
                    return Ok((record, trace));
                }
            }
        };
    }

    let mut sources = Vec::with_capacity(config.employed);
    for _ in 0..config.employed {
        let genome = Genome::random(dim, &mut init_rng);
        let cost = eval_or_stop!(&genome, 0);
        tracker.offer(&genome, cost);
        sources.push(Source {
            genome,
            cost,
            trial: 0,
        });
    }
    tracker.record(0, ev);

    for iter in 1..=config.max_iter {
        for k in 0..sources.len() {
            let mut candidate = sources[k].genome.clone();
            candidate.flip(employed_rng.random_range(0..dim));
            let cost = eval_or_stop!(&candidate, iter);
            tracker.offer(&candidate, cost);
            let source = &mut sources[k];
            if cost < source.cost {
                source.genome = candidate;
                source.cost = cost;
                source.trial = 0;
            } else {
                source.trial += 1;
            }
        }

        for _ in 0..config.onlookers {
            let costs: Vec<f64> = sources.iter().map(|s| s.cost).collect();
            let probs = abc_selection_probs(&costs)?;
            let k = roulette(&probs, onlooker_rng.random());
            let mut candidate = sources[k].genome.clone();
            candidate.flip(onlooker_rng.random_range(0..dim));
            let cost = eval_or_stop!(&candidate, iter);
            tracker.offer(&candidate, cost);
            let source = &mut sources[k];
            if cost < source.cost {
                source.genome = candidate;
                source.cost = cost;
                source.trial = 0;
            } else {
                source.trial += 1;
            }
        }

        let mut scouted = 0;
        for k in 0..sources.len() {
            if sources[k].trial >= config.limit {
                let genome = Genome::random(dim, &mut scout_rng);
                let cost = eval_or_stop!(&genome, iter);
                tracker.offer(&genome, cost);
                sources[k] = Source {
                    genome,
                    cost,
                    trial: 0,
                };
                scouted += 1;
            }
        }
        trace.scouts.push(scouted);
        trace
            .max_trial
            .push(sources.iter().map(|s| s.trial).max().unwrap_or(0));
        tracker.record(iter, ev);
    }
    let record = tracker.finish(ev, StopReason::IterationLimit)?;
    Ok((record, trace))
}
