//! Binary ant colony with a per-dimension pheromone table.
//!
//! Each dimension keeps one trail per bit value. Heuristic information is
//! uniform, so construction samples bit 1 with probability
//! `tau1 / (tau0 + tau1)`. Deposits are proportional to `1 / (1 + cost)`,
//! with an extra elitist deposit on the best-so-far genome.

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Evaluator;
use crate::record::{RunRecord, StopReason, Tracker};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneTable {
    /// `tau[d] = [trail for 0, trail for 1]`.
    pub tau: Vec<[f64; 2]>,
    pub rho: f64,
    pub q: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub elitist_weight: f64,
}

impl PheromoneTable {
    pub fn new(dim: usize, params: &AcoParams) -> Self {
        Self {
            tau: vec![[params.tau0; 2]; dim],
            rho: params.rho,
            q: params.q,
            tau_min: params.tau_min,
            tau_max: params.tau_max,
            elitist_weight: params.elitist_weight,
        }
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }

    pub fn p_one(&self, d: usize) -> f64 {
        let [t0, t1] = self.tau[d];
        t1 / (t0 + t1)
    }

    pub fn within_bounds(&self) -> bool {
        self.tau
            .iter()
            .flatten()
            .all(|t| (self.tau_min..=self.tau_max).contains(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcoParams {
    pub ants: usize,
    pub max_iter: usize,
    pub rho: f64,
    pub q: f64,
    pub tau0: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub elitist_weight: f64,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            ants: 25,
            max_iter: 25,
            rho: 0.1,
            q: 1.0,
            tau0: 1.0,
            tau_min: 0.01,
            tau_max: 10.0,
            elitist_weight: 1.0,
        }
    }
}

impl AcoParams {
    pub fn validate(&self) -> Result<()> {
        if self.ants == 0 || self.max_iter == 0 {
            return Err(Error::config("aco: ants and max_iter must be at least 1"));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::config(format!(
                "aco: rho must lie in (0, 1), got {}",
                self.rho
            )));
        }
        if !(self.tau_min > 0.0 && self.tau_min <= self.tau0 && self.tau0 <= self.tau_max) {
            return Err(Error::config("aco: need 0 < tau_min <= tau0 <= tau_max"));
        }
        if !(self.q >= 0.0 && self.elitist_weight >= 0.0) {
            return Err(Error::config(
                "aco: q and elitist_weight must be non-negative",
            ));
        }
        Ok(())
    }

    pub fn natural_budget(&self) -> u64 {
        (self.ants * self.max_iter) as u64
    }
}

pub fn aco_construct(table: &PheromoneTable, rng: &mut RngStream) -> Genome {
    Genome::from_bits(
        (0..table.dim())
            .map(|d| rng.random::<f64>() < table.p_one(d))
            .collect(),
    )
}

/// Evaporate, deposit for every ant and the elite, then clamp.
pub fn aco_deposit(
    table: &mut PheromoneTable,
    ants: &[(Genome, f64)],
    elite: Option<(&Genome, f64)>,
) {
    for entry in table.tau.iter_mut().flatten() {
        *entry *= 1.0 - table.rho;
    }
    let mut lay = |g: &Genome, amount: f64| {
        for (d, &bit) in g.bits().iter().enumerate() {
            table.tau[d][bit as usize] += amount;
        }
    };
    for (g, cost) in ants {
        lay(g, table.q / (1.0 + cost));
    }
    if let Some((g, cost)) = elite {
        lay(g, table.elitist_weight * table.q / (1.0 + cost));
    }
    let (lo, hi) = (table.tau_min, table.tau_max);
    for entry in table.tau.iter_mut().flatten() {
        *entry = entry.clamp(lo, hi);
    }
}

pub fn run_aco(ev: &mut Evaluator<'_>, params: &AcoParams, seed: u64) -> Result<RunRecord> {
    params.validate()?;
    let mut rng = RngStream::child(seed, "aco/construct");
    let mut table = PheromoneTable::new(ev.dim(), params);
    let mut tracker = Tracker::new("aco", seed);

    // The first colony is built from the uniform table and plays the role
    // of the random initial population.
    for iter in 0..params.max_iter {
        let mut colony = Vec::with_capacity(params.ants);
        for _ in 0..params.ants {
            let genome = aco_construct(&table, &mut rng);
            let Some(cost) = ev.try_evaluate(&genome)? else {
                tracker.record(iter, ev);
                return tracker.finish(ev, StopReason::BudgetExhausted);
            };
            tracker.offer(&genome, cost);
            colony.push((genome, cost));
        }
        let elite = tracker.best_genome().cloned().zip(tracker.best_cost());
        aco_deposit(&mut table, &colony, elite.as_ref().map(|(g, c)| (g, *c)));
        tracker.record(iter, ev);
    }
    tracker.finish(ev, StopReason::IterationLimit)
}
