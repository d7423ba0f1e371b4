//! Single-solution simulated annealing with geometric cooling.

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Evaluator;
use crate::record::{RunRecord, StopReason, Tracker};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flip one uniformly chosen bit.
    Random,
    /// Exchange a random 1 with a random 0.
    Swap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaSchedule {
    /// `None`: calibrate as `10 x` the median |Δcost| over
    /// `calibration_samples` neighbours of the initial solution.
    pub t0: Option<f64>,
    /// Final temperature as a fraction of `T0`.
    pub t_end_ratio: f64,
    pub alpha: f64,
    pub max_iter: usize,
    pub mutation: Mutation,
    pub calibration_samples: usize,
}

impl Default for SaSchedule {
    fn default() -> Self {
        Self {
            t0: None,
            t_end_ratio: 1e-3,
            alpha: 0.95,
            max_iter: 100,
            mutation: Mutation::Random,
            calibration_samples: 20,
        }
    }
}

impl SaSchedule {
    pub fn swap() -> Self {
        Self {
            mutation: Mutation::Swap,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!(
                "sa: alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.t_end_ratio > 0.0 && self.t_end_ratio < 1.0) {
            return Err(Error::config("sa: t_end_ratio must lie in (0, 1)"));
        }
        if let Some(t0) = self.t0 {
            if !(t0 > 0.0 && t0.is_finite()) {
                return Err(Error::config("sa: t0 must be positive"));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::config("sa: max_iter must be at least 1"));
        }
        Ok(())
    }

    pub fn natural_budget(&self) -> u64 {
        let calibration = if self.t0.is_some() {
            0
        } else {
            self.calibration_samples
        };
        (1 + calibration + self.max_iter) as u64
    }
}

pub fn sa_random_mutation(genome: &Genome, rng: &mut RngStream) -> Genome {
    let mut next = genome.clone();
    next.flip(rng.random_range(0..genome.len()));
    next
}

/// Popcount-preserving swap. A genome without both a 0 and a 1 falls back
/// to [`sa_random_mutation`].
pub fn sa_swap_mutation(genome: &Genome, rng: &mut RngStream) -> Genome {
    let ones: Vec<usize> = (0..genome.len()).filter(|&i| genome.get(i)).collect();
    if ones.is_empty() || ones.len() == genome.len() {
        return sa_random_mutation(genome, rng);
    }
    let zeros: Vec<usize> = (0..genome.len()).filter(|&i| !genome.get(i)).collect();
    let i = ones[rng.random_range(0..ones.len())];
    let j = zeros[rng.random_range(0..zeros.len())];
    let mut next = genome.clone();
    next.flip(i);
    next.flip(j);
    next
}

fn mutate(genome: &Genome, mutation: Mutation, rng: &mut RngStream) -> Genome {
    match mutation {
        Mutation::Random => sa_random_mutation(genome, rng),
        Mutation::Swap => sa_swap_mutation(genome, rng),
    }
}

/// Metropolis acceptance probability for a cost increase `delta`.
pub fn sa_accept(delta: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(if delta <= 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

pub fn run_sa(ev: &mut Evaluator<'_>, schedule: &SaSchedule, seed: u64) -> Result<RunRecord> {
    schedule.validate()?;
    let label = match schedule.mutation {
        Mutation::Random => "sa-random",
        Mutation::Swap => "sa-swap",
    };
    let mut init_rng = RngStream::child(seed, "sa/init");
    let mut calib_rng = RngStream::child(seed, "sa/calibrate");
    let mut move_rng = RngStream::child(seed, "sa/move");
    let mut accept_rng = RngStream::child(seed, "sa/accept");
    let mut tracker = Tracker::new(label, seed);

    let mut current = Genome::random(ev.dim(), &mut init_rng);
    let Some(mut current_cost) = ev.try_evaluate(&current)? else {
        return tracker.finish(ev, StopReason::BudgetExhausted);
    };
    tracker.offer(&current, current_cost);

    let t0 = match schedule.t0 {
        Some(t0) => t0,
        None => {
            let mut deltas = Vec::with_capacity(schedule.calibration_samples);
            for _ in 0..schedule.calibration_samples {
                let probe = mutate(&current, schedule.mutation, &mut calib_rng);
                let Some(c) = ev.try_evaluate(&probe)? else {
                    tracker.record(0, ev);
                    return tracker.finish(ev, StopReason::BudgetExhausted);
                };
                tracker.offer(&probe, c);
                deltas.push((c - current_cost).abs());
            }
            let m = if deltas.is_empty() {
                0.0
            } else {
                median(&mut deltas)
            };
            if m > 0.0 {
                10.0 * m
            } else {
                1.0
            }
        }
    };
    let t_end = schedule.t_end_ratio * t0;
    let mut temperature = t0;
    tracker.record(0, ev);

    for iter in 1..=schedule.max_iter {
        let candidate = mutate(&current, schedule.mutation, &mut move_rng);
        let Some(cost) = ev.try_evaluate(&candidate)? else {
            tracker.record(iter, ev);
            return tracker.finish(ev, StopReason::BudgetExhausted);
        };
        let p = sa_accept(cost - current_cost, temperature)?;
        let u: f64 = accept_rng.random();
        if u < p {
            current = candidate;
            current_cost = cost;
            tracker.offer(&current, current_cost);
        }
        temperature = (schedule.alpha * temperature).max(t_end);
        tracker.record(iter, ev);
    }
    tracker.finish(ev, StopReason::IterationLimit)
}
