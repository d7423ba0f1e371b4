//! Binary PSO with a V-shaped transfer function and flip-based position
//! update.
//!
//! Per particle and dimension:
//!
//! ```text
//! v' = w v + c1 r1 (p - x) + c2 r2 (g - x)
//! a  = e - (e - d) / i                      (i = current iteration, 1-based)
//! TF = 2 / (1 + exp(-a v')) - 1             if v' > 0
//!      1 - 2 / (1 + exp(-a v'))             otherwise
//! x' = !x if TF > r else x
//! ```

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Evaluator;
use crate::record::{RunRecord, StopReason, Tracker};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct BpsoParams {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    /// Maximum transfer factor.
    pub e: f64,
    /// Minimum transfer factor.
    pub d: f64,
    pub swarm: usize,
    pub max_iter: usize,
    /// `None` leaves velocities unbounded.
    pub v_clamp: Option<f64>,
}

impl Default for BpsoParams {
    fn default() -> Self {
        Self {
            w: 1.0,
            c1: 2.0,
            c2: 2.0,
            e: 2.0,
            d: 1.0,
            swarm: 25,
            max_iter: 25,
            v_clamp: Some(6.0),
        }
    }
}

impl BpsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.swarm == 0 || self.max_iter == 0 {
            return Err(Error::config("bpso: swarm and max_iter must be at least 1"));
        }
        if !(self.e > self.d && self.d > 0.0) {
            return Err(Error::config(format!(
                "bpso: need e > d > 0, got e = {}, d = {}",
                self.e, self.d
            )));
        }
        if let Some(v) = self.v_clamp {
            if !(v > 0.0) {
                return Err(Error::config("bpso: v_clamp must be positive"));
            }
        }
        Ok(())
    }

    /// Evaluations used when the iteration cap binds: `N (maxIter + 1)`.
    pub fn natural_budget(&self) -> u64 {
        (self.swarm * (self.max_iter + 1)) as u64
    }
}

#[derive(Debug, Clone)]
pub struct ParticleState {
    pub position: Genome,
    pub velocity: Vec<f64>,
    pub best: Genome,
    pub best_cost: f64,
}

/// One velocity step. `r1`/`r2` hold one uniform draw per dimension.
#[allow(clippy::too_many_arguments)]
pub fn velocity_update(
    velocity: &[f64],
    position: &Genome,
    personal: &Genome,
    global: &Genome,
    params: &BpsoParams,
    r1: &[f64],
    r2: &[f64],
) -> Result<Vec<f64>> {
    let dim = velocity.len();
    if [
        position.len(),
        personal.len(),
        global.len(),
        r1.len(),
        r2.len(),
    ]
    .iter()
    .any(|&n| n != dim)
    {
        return Err(Error::domain("velocity_update: dimension mismatch"));
    }
    let bit = |g: &Genome, i: usize| if g.get(i) { 1.0 } else { 0.0 };
    Ok((0..dim)
        .map(|i| {
            let x = bit(position, i);
            let v = params.w * velocity[i]
                + params.c1 * r1[i] * (bit(personal, i) - x)
                + params.c2 * r2[i] * (bit(global, i) - x);
            match params.v_clamp {
                Some(m) => v.clamp(-m, m),
                None => v,
            }
        })
        .collect())
}

/// Transfer factor at 1-based iteration `i`.
pub fn transfer_factor(i: usize, e: f64, d: f64) -> Result<f64> {
    if i < 1 {
        return Err(Error::domain(
            "transfer_factor: iteration index starts at 1",
        ));
    }
    Ok(e - (e - d) / i as f64)
}

/// V-shaped flip probability; `TF(-v) = TF(v)`, `TF(0) = 0`.
pub fn transfer_function(v: f64, a: f64) -> f64 {
    let s = 2.0 / (1.0 + (-a * v).exp());
    if v > 0.0 {
        s - 1.0
    } else {
        1.0 - s
    }
}

/// Flip bit `i` when `tf[i] > r[i]`.
pub fn position_update(position: &Genome, tf: &[f64], r: &[f64]) -> Genome {
    let mut next = position.clone();
    for (i, (&p, &u)) in tf.iter().zip(r).enumerate() {
        if p > u {
            next.flip(i);
        }
    }
    next
}

fn uniform_vec(rng: &mut RngStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

pub fn run_bpso(ev: &mut Evaluator<'_>, params: &BpsoParams, seed: u64) -> Result<RunRecord> {
    params.validate()?;
    let dim = ev.dim();
    let mut init_rng = RngStream::child(seed, "bpso/init");
    let mut vel_rng = RngStream::child(seed, "bpso/velocity");
    let mut pos_rng = RngStream::child(seed, "bpso/position");
    let mut tracker = Tracker::new("bpso", seed);

    let mut swarm: Vec<ParticleState> = Vec::with_capacity(params.swarm);
    for _ in 0..params.swarm {
        let position = Genome::random(dim, &mut init_rng);
        let velocity = (0..dim)
            .map(|_| init_rng.random_range(-1.0..=1.0))
            .collect();
        let Some(cost) = ev.try_evaluate(&position)? else {
            tracker.record(0, ev);
            return tracker.finish(ev, StopReason::BudgetExhausted);
        };
        tracker.offer(&position, cost);
        swarm.push(ParticleState {
            best: position.clone(),
            position,
            velocity,
            best_cost: cost,
        });
    }
    tracker.record(0, ev);

    for iter in 1..=params.max_iter {
        let a = transfer_factor(iter, params.e, params.d)?;
        for particle in swarm.iter_mut() {
            let r1 = uniform_vec(&mut vel_rng, dim);
            let r2 = uniform_vec(&mut vel_rng, dim);
            let global = tracker.best_genome().expect("initialized").clone();
            particle.velocity = velocity_update(
                &particle.velocity,
                &particle.position,
                &particle.best,
                &global,
                params,
                &r1,
                &r2,
            )?;
            let tf: Vec<f64> = particle
                .velocity
                .iter()
                .map(|&v| transfer_function(v, a))
                .collect();
            let r = uniform_vec(&mut pos_rng, dim);
            particle.position = position_update(&particle.position, &tf, &r);
            let Some(cost) = ev.try_evaluate(&particle.position)? else {
                tracker.record(iter, ev);
                return tracker.finish(ev, StopReason::BudgetExhausted);
            };
            if cost < particle.best_cost {
                particle.best = particle.position.clone();
                particle.best_cost = cost;
            }
            tracker.offer(&particle.position, cost);
        }
        tracker.record(iter, ev);
    }
    tracker.finish(ev, StopReason::IterationLimit)
}
