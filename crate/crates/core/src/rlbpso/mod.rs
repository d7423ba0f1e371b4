//! Reinforcement-learning-controlled binary PSO.
//!
//! Particles move in `[0, 1]^D` and are thresholded at 0.5 for evaluation.
//! Each iteration the actor proposes `(w, c1, c2, c3, c4)` per particle
//! group, particles follow the four-term update
//!
//! ```text
//! v' = w v + c1 r1 (pbest_fi(d) - x) + c2 r2 (gbest - x) + c3 r3 (pbest - x)
//! ```
//!
//! and a stalled particle (pbest unchanged for `stall_flag` iterations) is
//! re-seeded with probability `0.01 c4`. The improvement of the global best
//! is fed back as reward to train the controller.

mod agent;
mod network;

pub use agent::{
    act, reward, state_features, train_step, ActorCritic, GroupParams, ReplayBuffer, RlAction,
    RlState, Transition, PARAMS_PER_GROUP, PARAM_RANGES,
};
pub use network::{Dense, Mlp};

use rand::Rng;

use crate::diversity::swarm_diversity;
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Evaluator;
use crate::record::{RunRecord, StopReason, Tracker};
use crate::rng::RngStream;

/// Where the per-group parameters come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSource {
    /// Actor-critic, optionally warm-started from saved weights.
    Learned { warm_start: Option<ActorCritic> },
    /// The same parameters for every group and iteration; no learning.
    Fixed(GroupParams),
}

/// How the `pbest_fi(d)` exemplar of each dimension is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExemplarMode {
    /// With probability `learn_prob` per dimension take the better pbest of
    /// two other random particles, else the particle's own. Rebuilt after
    /// `refresh_gap` iterations without pbest improvement.
    Comprehensive { learn_prob: f64, refresh_gap: usize },
    /// Always the particle's own pbest.
    SelfOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RlbpsoParams {
    pub swarm: usize,
    pub max_iter: usize,
    pub groups: usize,
    pub v_clamp: f64,
    /// Iterations without pbest improvement before the reinit flag is raised.
    pub stall_flag: usize,
    pub exemplar: ExemplarMode,
    pub params: ParamSource,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub gamma: f64,
    pub noise_start: f64,
    pub noise_end: f64,
    pub replay_capacity: usize,
    pub batch: usize,
}

impl Default for RlbpsoParams {
    fn default() -> Self {
        Self {
            swarm: 25,
            max_iter: 25,
            groups: 5,
            v_clamp: 0.2,
            stall_flag: 5,
            exemplar: ExemplarMode::Comprehensive {
                learn_prob: 0.3,
                refresh_gap: 7,
            },
            params: ParamSource::Learned { warm_start: None },
            actor_lr: 1e-3,
            critic_lr: 1e-2,
            gamma: 0.9,
            noise_start: 0.1,
            noise_end: 0.01,
            replay_capacity: 256,
            batch: 16,
        }
    }
}

impl RlbpsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.swarm == 0 || self.max_iter == 0 || self.groups == 0 {
            return Err(Error::config(
                "rlbpso: swarm, max_iter and groups must be at least 1",
            ));
        }
        if !(self.v_clamp > 0.0) {
            return Err(Error::config("rlbpso: v_clamp must be positive"));
        }
        if self.batch == 0 || self.replay_capacity < self.batch {
            return Err(Error::config("rlbpso: need 1 <= batch <= replay_capacity"));
        }
        if let ParamSource::Learned {
            warm_start: Some(ac),
        } = &self.params
        {
            if ac.groups() != self.effective_groups() {
                return Err(Error::config(format!(
                    "rlbpso: warm-start weights are for {} groups, swarm uses {}",
                    ac.groups(),
                    self.effective_groups()
                )));
            }
        }
        Ok(())
    }

    pub fn natural_budget(&self) -> u64 {
        (self.swarm * (self.max_iter + 1)) as u64
    }

    /// Never more groups than particles.
    pub fn effective_groups(&self) -> usize {
        self.groups.min(self.swarm)
    }

    /// Group of particle `k`; the remainder of an uneven split joins the last group.
    pub fn group_of(&self, k: usize) -> usize {
        let groups = self.effective_groups();
        (k / (self.swarm / groups)).min(groups - 1)
    }

    fn noise_at(&self, iteration: usize) -> f64 {
        let t = iteration as f64 / self.max_iter as f64;
        self.noise_start + (self.noise_end - self.noise_start) * t.clamp(0.0, 1.0)
    }
}

/// Four-term velocity step, clamped to `±v_clamp`.
///
/// `exemplar_best[d]` is `pbest_fi(d)` at dimension `d`.
#[allow(clippy::too_many_arguments)]
pub fn rl_velocity_update(
    velocity: &[f64],
    position: &[f64],
    exemplar_best: &[f64],
    global_best: &[f64],
    personal_best: &[f64],
    p: &GroupParams,
    r: [&[f64]; 3],
    v_clamp: f64,
) -> Result<Vec<f64>> {
    let dim = velocity.len();
    let lens = [
        position.len(),
        exemplar_best.len(),
        global_best.len(),
        personal_best.len(),
        r[0].len(),
        r[1].len(),
        r[2].len(),
    ];
    if lens.iter().any(|&n| n != dim) {
        return Err(Error::domain("rl_velocity_update: dimension mismatch"));
    }
    Ok((0..dim)
        .map(|d| {
            let x = position[d];
            let v = p.w * velocity[d]
                + p.c1 * r[0][d] * (exemplar_best[d] - x)
                + p.c2 * r[1][d] * (global_best[d] - x)
                + p.c3 * r[2][d] * (personal_best[d] - x);
            v.clamp(-v_clamp, v_clamp)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Reinitialize,
    Step,
}

/// Reinitialize when `u < c4 * 0.01 * flag` for one uniform draw `u`.
pub fn reinit_check(flag: bool, c4: f64, rng: &mut RngStream) -> Move {
    let u: f64 = rng.random();
    let threshold = c4 * 0.01 * if flag { 1.0 } else { 0.0 };
    if u < threshold {
        Move::Reinitialize
    } else {
        Move::Step
    }
}

#[derive(Debug, Clone)]
pub struct RlParticle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_cost: f64,
    /// `fi(d)`: particle whose pbest guides dimension `d`.
    pub exemplar: Vec<usize>,
    /// Iterations since the pbest last improved.
    pub stall: usize,
    exemplar_age: usize,
}

impl RlParticle {
    pub fn genome(&self) -> Genome {
        Genome::binarize(&self.position)
    }
}

fn build_exemplar(
    k: usize,
    swarm: &[RlParticle],
    dim: usize,
    mode: ExemplarMode,
    rng: &mut RngStream,
) -> Vec<usize> {
    match mode {
        ExemplarMode::SelfOnly => vec![k; dim],
        ExemplarMode::Comprehensive { learn_prob, .. } => {
            let n = swarm.len();
            (0..dim)
                .map(|_| {
                    if n < 2 || rng.random::<f64>() >= learn_prob {
                        return k;
                    }
                    let mut pick = || {
                        let j = rng.random_range(0..n - 1);
                        if j >= k {
                            j + 1
                        } else {
                            j
                        }
                    };
                    let (a, b) = (pick(), pick());
                    if swarm[b].best_cost < swarm[a].best_cost {
                        b
                    } else {
                        a
                    }
                })
                .collect()
        }
    }
}

fn uniform_vec(rng: &mut RngStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

struct Controller {
    agent: Option<ActorCritic>,
    fixed: Option<GroupParams>,
    replay: ReplayBuffer,
    noise_rng: RngStream,
    replay_rng: RngStream,
}

impl Controller {
    fn new(params: &RlbpsoParams, seed: u64) -> Self {
        let groups = params.effective_groups();
        let (agent, fixed) = match &params.params {
            ParamSource::Fixed(g) => (None, Some(*g)),
            ParamSource::Learned { warm_start } => {
                let mut ac = match warm_start {
                    Some(ac) => ac.clone(),
                    None => ActorCritic::new(groups, &mut RngStream::child(seed, "rlbpso/weights")),
                };
                ac.actor_lr = params.actor_lr;
                ac.critic_lr = params.critic_lr;
                ac.gamma = params.gamma;
                (Some(ac), None)
            }
        };
        Self {
            agent,
            fixed,
            replay: ReplayBuffer::new(params.replay_capacity),
            noise_rng: RngStream::child(seed, "rlbpso/noise"),
            replay_rng: RngStream::child(seed, "rlbpso/replay"),
        }
    }

    fn decide(&mut self, s: RlState, noise: f64, groups: usize) -> RlAction {
        match (&self.agent, self.fixed) {
            (Some(ac), _) => act(ac, s, noise, &mut self.noise_rng),
            (None, Some(g)) => RlAction {
                unit: Vec::new(),
                groups: vec![g; groups],
            },
            (None, None) => unreachable!("controller has a parameter source"),
        }
    }

    fn learn(&mut self, t: Transition, batch: usize) {
        let Some(ac) = self.agent.as_mut() else {
            return;
        };
        self.replay.push(t);
        if self.replay.len() >= batch {
            let sample = self.replay.sample(batch, &mut self.replay_rng);
            train_step(ac, &sample);
        }
    }
}

pub fn run_rlbpso(ev: &mut Evaluator<'_>, params: &RlbpsoParams, seed: u64) -> Result<RunRecord> {
    run_rlbpso_trained(ev, params, seed).map(|(record, _)| record)
}

/// Like [`run_rlbpso`], also returning the trained controller (`None` for
/// [`ParamSource::Fixed`]) so its weights can be saved.
pub fn run_rlbpso_trained(
    ev: &mut Evaluator<'_>,
    params: &RlbpsoParams,
    seed: u64,
) -> Result<(RunRecord, Option<ActorCritic>)> {
    params.validate()?;
    let dim = ev.dim();
    let groups = params.effective_groups();
    let mut init_rng = RngStream::child(seed, "rlbpso/init");
    let mut vel_rng = RngStream::child(seed, "rlbpso/velocity");
    let mut reinit_rng = RngStream::child(seed, "rlbpso/reinit");
    let mut exemplar_rng = RngStream::child(seed, "rlbpso/exemplar");
    let mut controller = Controller::new(params, seed);
    let mut tracker = Tracker::new("rlbpso", seed);
    let vc = params.v_clamp;

    let mut swarm: Vec<RlParticle> = Vec::with_capacity(params.swarm);
    let mut gbest_pos: Vec<f64> = Vec::new();
    for _ in 0..params.swarm {
        let position: Vec<f64> = uniform_vec(&mut init_rng, dim);
        let velocity: Vec<f64> = (0..dim).map(|_| init_rng.random_range(-vc..=vc)).collect();
        let genome = Genome::binarize(&position);
        let Some(cost) = ev.try_evaluate(&genome)? else {
            tracker.record(0, ev);
            let record = tracker.finish(ev, StopReason::BudgetExhausted)?;
            return Ok((record, controller.agent));
        };
        if tracker.offer(&genome, cost) {
            gbest_pos = position.clone();
        }
        swarm.push(RlParticle {
            best_position: position.clone(),
            position,
            velocity,
            best_cost: cost,
            exemplar: Vec::new(),
            stall: 0,
            exemplar_age: 0,
        });
    }
    for k in 0..swarm.len() {
        swarm[k].exemplar = build_exemplar(k, &swarm, dim, params.exemplar, &mut exemplar_rng);
    }
    tracker.record(0, ev);

    let positions = |swarm: &[RlParticle]| -> Vec<Vec<f64>> {
        swarm.iter().map(|p| p.position.clone()).collect()
    };
    let mut stagnation = 0usize;
    let mut state = state_features(
        0,
        params.max_iter,
        swarm_diversity(&positions(&swarm), &gbest_pos)?,
        0,
    );
    let mut stop = StopReason::IterationLimit;

    'run: for iter in 1..=params.max_iter {
        let action = controller.decide(state, params.noise_at(iter - 1), groups);
        let prev_best = tracker.best_cost().expect("initialized");

        for k in 0..swarm.len() {
            let p = action.groups[params.group_of(k)];
            let r1 = uniform_vec(&mut vel_rng, dim);
            let r2 = uniform_vec(&mut vel_rng, dim);
            let r3 = uniform_vec(&mut vel_rng, dim);
            let exemplar_best: Vec<f64> = swarm[k]
                .exemplar
                .iter()
                .enumerate()
                .map(|(d, &j)| swarm[j].best_position[d])
                .collect();
            let particle = &mut swarm[k];
            particle.velocity = rl_velocity_update(
                &particle.velocity,
                &particle.position,
                &exemplar_best,
                &gbest_pos,
                &particle.best_position,
                &p,
                [&r1, &r2, &r3],
                vc,
            )?;
            match reinit_check(particle.stall >= params.stall_flag, p.c4, &mut reinit_rng) {
                Move::Reinitialize => {
                    particle.position = uniform_vec(&mut reinit_rng, dim);
                    particle.velocity.iter_mut().for_each(|v| *v = 0.0);
                }
                Move::Step => {
                    for (x, v) in particle.position.iter_mut().zip(&particle.velocity) {
                        *x = (*x + v).clamp(0.0, 1.0);
                    }
                }
            }
            let genome = particle.genome();
            let Some(cost) = ev.try_evaluate(&genome)? else {
                tracker.record(iter, ev);
                stop = StopReason::BudgetExhausted;
                break 'run;
            };
            if cost < particle.best_cost {
                particle.best_cost = cost;
                particle.best_position = particle.position.clone();
                particle.stall = 0;
                particle.exemplar_age = 0;
            } else {
                particle.stall += 1;
                particle.exemplar_age += 1;
            }
            if tracker.offer(&genome, cost) {
                gbest_pos = particle.position.clone();
            }
        }

        if let ExemplarMode::Comprehensive { refresh_gap, .. } = params.exemplar {
            for k in 0..swarm.len() {
                if swarm[k].exemplar_age >= refresh_gap {
                    swarm[k].exemplar =
                        build_exemplar(k, &swarm, dim, params.exemplar, &mut exemplar_rng);
                    swarm[k].exemplar_age = 0;
                }
            }
        }

        let new_best = tracker.best_cost().expect("initialized");
        if new_best < prev_best {
            stagnation = 0;
        } else {
            stagnation += 1;
        }
        let next_state = state_features(
            iter,
            params.max_iter,
            swarm_diversity(&positions(&swarm), &gbest_pos)?,
            stagnation,
        );
        controller.learn(
            Transition {
                state,
                action: action.unit,
                reward: reward(prev_best, new_best),
                next_state,
            },
            params.batch,
        );
        state = next_state;
        tracker.record(iter, ev);
    }
    let record = tracker.finish(ev, stop)?;
    Ok((record, controller.agent))
}
