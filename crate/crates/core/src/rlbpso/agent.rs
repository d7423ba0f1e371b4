//! Actor-critic parameter controller.
//!
//! The actor maps the swarm state (iteration fraction, diversity,
//! stagnation fraction) to one parameter set `(w, c1, c2, c3, c4)` per
//! particle group. The critic scores `(state, action)` pairs and is trained
//! by one-step temporal differences; the actor follows the critic's action
//! gradient (deterministic policy gradient). Both are tiny fixed networks
//! trained with hand-written backprop.
//!
//! The state, action and reward formulas here are this crate's own
//! instantiation: the swarm-level quantities are named in the method
//! description but their exact definitions are not, so each is documented
//! where it is defined.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;

use super::network::{Dense, Mlp};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const STATE_DIM: usize = 3;
pub const PARAMS_PER_GROUP: usize = 5;
pub const HIDDEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlState {
    pub iter_pct: f64,
    pub diversity: f64,
    pub stagnation_pct: f64,
}

impl RlState {
    pub fn to_vec(self) -> [f64; STATE_DIM] {
        [self.iter_pct, self.diversity, self.stagnation_pct]
    }
}

/// Build a state, clipping each feature to `[0, 1]`.
///
/// `diversity` is expected already normalized (see [`crate::swarm_diversity`]).
pub fn state_features(
    iteration: usize,
    max_iter: usize,
    diversity: f64,
    stagnation: usize,
) -> RlState {
    let max = max_iter.max(1) as f64;
    RlState {
        iter_pct: (iteration as f64 / max).clamp(0.0, 1.0),
        diversity: diversity.clamp(0.0, 1.0),
        stagnation_pct: (stagnation as f64 / max).clamp(0.0, 1.0),
    }
}

/// Operating parameters for one particle group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupParams {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Closed interval each parameter is mapped into, in `(w, c1, c2, c3, c4)` order.
pub const PARAM_RANGES: [(f64, f64); PARAMS_PER_GROUP] =
    [(0.4, 1.0), (0.5, 2.5), (0.5, 2.5), (0.5, 2.5), (0.0, 1.0)];

impl GroupParams {
    /// Map unit-interval outputs onto [`PARAM_RANGES`].
    pub fn from_unit(unit: &[f64]) -> Self {
        let p: Vec<f64> = unit
            .iter()
            .zip(PARAM_RANGES)
            .map(|(&u, (lo, hi))| lo + u.clamp(0.0, 1.0) * (hi - lo))
            .collect();
        Self {
            w: p[0],
            c1: p[1],
            c2: p[2],
            c3: p[3],
            c4: p[4],
        }
    }

    pub fn midpoint() -> Self {
        Self::from_unit(&[0.5; PARAMS_PER_GROUP])
    }

    pub fn in_range(&self) -> bool {
        [self.w, self.c1, self.c2, self.c3, self.c4]
            .iter()
            .zip(PARAM_RANGES)
            .all(|(&v, (lo, hi))| (lo..=hi).contains(&v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RlAction {
    /// Sigmoid outputs in `[0, 1]`, `PARAMS_PER_GROUP` per group; this is
    /// what the critic sees.
    pub unit: Vec<f64>,
    pub groups: Vec<GroupParams>,
}

impl RlAction {
    pub fn from_unit(unit: Vec<f64>) -> Self {
        let groups = unit
            .chunks(PARAMS_PER_GROUP)
            .map(GroupParams::from_unit)
            .collect();
        Self { unit, groups }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `(prev - new) / prev` on strict improvement, else `-0.01`.
pub fn reward(prev_best: f64, new_best: f64) -> f64 {
    if new_best < prev_best && prev_best > 0.0 {
        (prev_best - new_best) / prev_best
    } else {
        -0.01
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: RlState,
    pub action: Vec<f64>,
    pub reward: f64,
    pub next_state: RlState,
}

#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: VecDeque<Transition>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            items: VecDeque::new(),
        }
    }

    pub fn push(&mut self, t: Transition) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(t);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Uniform sample with replacement.
    pub fn sample(&self, batch: usize, rng: &mut RngStream) -> Vec<Transition> {
        if self.items.is_empty() {
            return Vec::new();
        }
        (0..batch)
            .map(|_| self.items[rng.random_range(0..self.items.len())].clone())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActorCritic {
    pub actor: Mlp,
    pub critic: Mlp,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub gamma: f64,
    pub grad_clip: f64,
}

impl ActorCritic {
    pub fn new(groups: usize, rng: &mut RngStream) -> Self {
        let actions = groups * PARAMS_PER_GROUP;
        Self {
            actor: Mlp::new(STATE_DIM, HIDDEN, actions, rng),
            critic: Mlp::new(STATE_DIM + actions, HIDDEN, 1, rng),
            actor_lr: 1e-3,
            critic_lr: 1e-2,
            gamma: 0.9,
            grad_clip: 10.0,
        }
    }

    /// All-zero weights: the actor emits 0.5 for every unit output.
    pub fn zeros(groups: usize) -> Self {
        let actions = groups * PARAMS_PER_GROUP;
        Self {
            actor: Mlp::zeros(STATE_DIM, HIDDEN, actions),
            critic: Mlp::zeros(STATE_DIM + actions, HIDDEN, 1),
            actor_lr: 1e-3,
            critic_lr: 1e-2,
            gamma: 0.9,
            grad_clip: 10.0,
        }
    }

    pub fn groups(&self) -> usize {
        self.actor.outputs() / PARAMS_PER_GROUP
    }

    /// Deterministic policy output in unit space.
    pub fn policy(&self, s: RlState) -> Vec<f64> {
        self.actor
            .forward(&s.to_vec())
            .output
            .into_iter()
            .map(sigmoid)
            .collect()
    }

    pub fn q_value(&self, s: RlState, unit_action: &[f64]) -> f64 {
        self.critic.forward(&critic_input(s, unit_action)).output[0]
    }

    pub fn is_finite(&self) -> bool {
        self.actor.is_finite() && self.critic.is_finite()
    }
}

fn critic_input(s: RlState, unit_action: &[f64]) -> Vec<f64> {
    let mut x = s.to_vec().to_vec();
    x.extend_from_slice(unit_action);
    x
}

/// Actor output with Gaussian noise on the logits, squashed and scaled.
///
/// One normal draw per output is always taken so the stream position does
/// not depend on `noise_scale`.
pub fn act(ac: &ActorCritic, s: RlState, noise_scale: f64, rng: &mut RngStream) -> RlAction {
    let logits = ac.actor.forward(&s.to_vec()).output;
    let unit = logits
        .into_iter()
        .map(|z| {
            let n: f64 = rng.sample(StandardNormal);
            sigmoid(z + noise_scale * n)
        })
        .collect();
    RlAction::from_unit(unit)
}

/// One critic TD step followed by one actor step along `dQ/da`.
pub fn train_step(ac: &mut ActorCritic, batch: &[Transition]) {
    if batch.is_empty() {
        return;
    }
    let n = batch.len() as f64;

    let mut critic_grad = ac.critic.zero_like();
    for t in batch {
        let next_action = ac.policy(t.next_state);
        let target = t.reward + ac.gamma * ac.q_value(t.next_state, &next_action);
        let trace = ac.critic.forward(&critic_input(t.state, &t.action));
        let d_q = 2.0 * (trace.output[0] - target) / n;
        ac.critic.backward(&trace, &[d_q], &mut critic_grad);
    }
    ac.critic.apply(&critic_grad, -ac.critic_lr, ac.grad_clip);

    let mut actor_grad = ac.actor.zero_like();
    let mut scratch = ac.critic.zero_like();
    for t in batch {
        let a_trace = ac.actor.forward(&t.state.to_vec());
        let unit: Vec<f64> = a_trace.output.iter().map(|&z| sigmoid(z)).collect();
        let c_trace = ac.critic.forward(&critic_input(t.state, &unit));
        let d_input = ac.critic.backward(&c_trace, &[1.0], &mut scratch);
        let d_logits: Vec<f64> = d_input[STATE_DIM..]
            .iter()
            .zip(&unit)
            .map(|(dq, u)| dq * u * (1.0 - u) / n)
            .collect();
        ac.actor.backward(&a_trace, &d_logits, &mut actor_grad);
    }
    ac.actor.apply(&actor_grad, ac.actor_lr, ac.grad_clip);
}

const SNAPSHOT_HEADER: &str = "# idcopt actor-critic weights v1";

fn layers(ac: &ActorCritic) -> [&Dense; 4] {
    [
        &ac.actor.hidden,
        &ac.actor.output,
        &ac.critic.hidden,
        &ac.critic.output,
    ]
}

impl ActorCritic {
    /// Plain-text weight dump.
    ///
    /// ```text
    /// # idcopt actor-critic weights v1
    /// shapes 16x3 16 25x16 25 16x28 16 1x16 1
    /// <one decimal per line>
    /// ```
    ///
    /// `shapes` lists, for actor hidden, actor output, critic hidden and
    /// critic output in turn, the weight matrix (`rows x cols`, row-major)
    /// and the bias length. Values follow in the same order.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::from(SNAPSHOT_HEADER);
        out.push_str("\nshapes");
        for l in layers(self) {
            let _ = write!(out, " {}x{} {}", l.outputs, l.inputs, l.outputs);
        }
        out.push('\n');
        for l in layers(self) {
            for v in l.weights.iter().chain(&l.bias) {
                let _ = writeln!(out, "{v:e}");
            }
        }
        out
    }

    /// Load weights written by [`ActorCritic::to_snapshot`] into a network
    /// for `groups` groups; hyperparameters keep their defaults.
    pub fn from_snapshot(text: &str, groups: usize) -> Result<Self> {
        let mut ac = Self::zeros(groups);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some(SNAPSHOT_HEADER) {
            return Err(Error::config("weight snapshot: missing header line"));
        }
        let expected: String = {
            let mut s = String::from("shapes");
            for l in layers(&ac) {
                let _ = write!(s, " {}x{} {}", l.outputs, l.inputs, l.outputs);
            }
            s
        };
        match lines.next() {
            Some(shapes) if shapes == expected => {}
            Some(shapes) => {
                return Err(Error::config(format!(
                    "weight snapshot: shapes `{shapes}` do not match `{expected}`"
                )))
            }
            None => return Err(Error::config("weight snapshot: missing shapes line")),
        }
        let values = lines
            .enumerate()
            .map(|(i, l)| {
                l.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::config(format!("weight snapshot: value {i}: `{l}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let slots: usize = layers(&ac)
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum();
        if values.len() != slots {
            return Err(Error::config(format!(
                "weight snapshot: expected {slots} values, found {}",
                values.len()
            )));
        }
        let mut it = values.into_iter();
        for l in [
            &mut ac.actor.hidden,
            &mut ac.actor.output,
            &mut ac.critic.hidden,
            &mut ac.critic.output,
        ] {
            for v in l.weights.iter_mut().chain(l.bias.iter_mut()) {
                *v = it.next().expect("length checked");
            }
        }
        Ok(ac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(a: f64, b: f64, c: f64) -> RlState {
        RlState {
            iter_pct: a,
            diversity: b,
            stagnation_pct: c,
        }
    }

    #[test]
    fn features() {
        assert_eq!(state_features(0, 25, 0.0, 0), state(0.0, 0.0, 0.0));
        assert_eq!(state_features(25, 25, 0.3, 0).iter_pct, 1.0);
        assert_eq!(state_features(3, 20, 0.3, 10).stagnation_pct, 0.5);
        let s = state_features(40, 25, 1.7, 99);
        assert_eq!(s, state(1.0, 1.0, 1.0));
    }

    #[test]
    fn zero_actor_gives_midpoints() {
        let ac = ActorCritic::zeros(5);
        let mut rng = RngStream::from_seed(0);
        let a = act(&ac, state(0.2, 0.4, 0.1), 0.0, &mut rng);
        assert_eq!(a.groups.len(), 5);
        for g in &a.groups {
            assert_eq!(*g, GroupParams::midpoint());
            let expected = [0.7, 1.5, 1.5, 1.5, 0.5];
            for (v, e) in [g.w, g.c1, g.c2, g.c3, g.c4].iter().zip(expected) {
                assert!((v - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn noiseless_act_is_deterministic() {
        let mut init = RngStream::from_seed(4);
        let ac = ActorCritic::new(5, &mut init);
        let s = state(0.5, 0.2, 0.0);
        let a = act(&ac, s, 0.0, &mut RngStream::from_seed(1));
        let b = act(&ac, s, 0.0, &mut RngStream::from_seed(2));
        assert_eq!(a, b);
    }

    #[test]
    fn reward_values() {
        assert_eq!(reward(10.0, 10.0), -0.01);
        assert_eq!(reward(10.0, 12.0), -0.01);
        assert_eq!(reward(10.0, 5.0), 0.5);
        assert_eq!(reward(0.0, 0.0), -0.01);
    }

    #[test]
    fn empty_batch_is_noop() {
        let mut ac = ActorCritic::new(2, &mut RngStream::from_seed(1));
        let before = ac.clone();
        train_step(&mut ac, &[]);
        assert_eq!(ac, before);
    }

    #[test]
    fn zero_learning_rates_freeze_weights() {
        let mut ac = ActorCritic::new(2, &mut RngStream::from_seed(1));
        ac.actor_lr = 0.0;
        ac.critic_lr = 0.0;
        let before = ac.clone();
        let s = state(0.1, 0.5, 0.0);
        let t = Transition {
            state: s,
            action: ac.policy(s),
            reward: 1.0,
            next_state: s,
        };
        train_step(&mut ac, &vec![t; 16]);
        assert_eq!(ac, before);
    }

    #[test]
    fn critic_climbs_towards_discounted_return() {
        // Self-loop with reward 1: the fixed point of Q = 1 + 0.9 Q is 10.
        let mut ac = ActorCritic::new(5, &mut RngStream::from_seed(8));
        ac.actor_lr = 0.0;
        let s = state(0.4, 0.3, 0.2);
        let a = ac.policy(s);
        let t = Transition {
            state: s,
            action: a.clone(),
            reward: 1.0,
            next_state: s,
        };
        let batch = vec![t; 16];
        let mut prev = ac.q_value(s, &a);
        for step in 0..50 {
            train_step(&mut ac, &batch);
            let q = ac.q_value(s, &a);
            assert!(q > prev, "step {step}: {q} <= {prev}");
            assert!(q < 1.0 / (1.0 - ac.gamma));
            prev = q;
        }
    }

    #[test]
    fn replay_capacity_and_sampling() {
        let mut buf = ReplayBuffer::new(3);
        let s = state(0.0, 0.0, 0.0);
        for i in 0..5 {
            buf.push(Transition {
                state: s,
                action: vec![],
                reward: i as f64,
                next_state: s,
            });
        }
        assert_eq!(buf.len(), 3);
        let mut rng = RngStream::from_seed(3);
        let batch = buf.sample(16, &mut rng);
        assert_eq!(batch.len(), 16);
        assert!(batch.iter().all(|t| t.reward >= 2.0));
        assert!(ReplayBuffer::new(4).sample(8, &mut rng).is_empty());
    }

    #[test]
    fn snapshot_roundtrip() {
        let ac = ActorCritic::new(5, &mut RngStream::from_seed(12));
        let text = ac.to_snapshot();
        assert!(text.starts_with(
            "# idcopt actor-critic weights v1\nshapes 16x3 16 25x16 25 16x28 16 1x16 1\n"
        ));
        let back = ActorCritic::from_snapshot(&text, 5).unwrap();
        assert_eq!(back.actor, ac.actor);
        assert_eq!(back.critic, ac.critic);
        assert!(ActorCritic::from_snapshot(&text, 4).is_err());
        assert!(ActorCritic::from_snapshot("garbage", 5).is_err());
    }

    proptest! {
        #[test]
        fn actions_always_in_range(
            seed in any::<u64>(),
            a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64,
            noise in 0.0..5.0f64,
        ) {
            let mut rng = RngStream::from_seed(seed);
            let ac = ActorCritic::new(5, &mut rng);
            let action = act(&ac, state(a, b, c), noise, &mut rng);
            prop_assert!(action.groups.iter().all(GroupParams::in_range));
        }

        #[test]
        fn weights_stay_finite(seed in any::<u64>(), rewards in proptest::collection::vec(-1.0..1.0f64, 1..40)) {
            let mut rng = RngStream::from_seed(seed);
            let mut ac = ActorCritic::new(2, &mut rng);
            let mut buf = ReplayBuffer::new(32);
            for (i, r) in rewards.iter().enumerate() {
                let s = state((i % 7) as f64 / 7.0, 0.5, 0.1);
                let a = act(&ac, s, 0.3, &mut rng);
                buf.push(Transition { state: s, action: a.unit, reward: *r, next_state: s });
                let batch = buf.sample(8, &mut rng);
                train_step(&mut ac, &batch);
                prop_assert!(ac.is_finite());
            }
        }
    }
}
