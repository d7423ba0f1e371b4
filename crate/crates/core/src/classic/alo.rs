//! Ant lion optimizer on continuous positions in `[0, 1]^D`, binarized at 0.5.

use rand::Rng;

use super::abc::roulette;
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Evaluator;
use crate::record::{RunRecord, StopReason, Tracker};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct AloParams {
    pub population: usize,
    pub max_iter: usize,
}

impl Default for AloParams {
    fn default() -> Self {
        Self {
            population: 25,
            max_iter: 25,
        }
    }
}

impl AloParams {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || self.max_iter == 0 {
            return Err(Error::config(
                "alo: population and max_iter must be at least 1",
            ));
        }
        Ok(())
    }

    pub fn natural_budget(&self) -> u64 {
        (self.population * (self.max_iter + 1)) as u64
    }
}

/// Cumulative sum of `steps` fair ±1 moves starting at 0 (length
/// `steps + 1`), min-max normalized. A constant walk maps to 0.5.
pub fn alo_random_walk(steps: usize, rng: &mut RngStream) -> Vec<f64> {
    let moves: Vec<bool> = (0..steps).map(|_| rng.random_bool(0.5)).collect();
    normalize_walk(&moves)
}

fn normalize_walk(moves: &[bool]) -> Vec<f64> {
    let mut walk = Vec::with_capacity(moves.len() + 1);
    let mut pos = 0i64;
    walk.push(0);
    for &up in moves {
        pos += if up { 1 } else { -1 };
        walk.push(pos);
    }
    let lo = *walk.iter().min().expect("non-empty");
    let hi = *walk.iter().max().expect("non-empty");
    if lo == hi {
        return vec![0.5; walk.len()];
    }
    let span = (hi - lo) as f64;
    walk.iter().map(|&x| (x - lo) as f64 / span).collect()
}

/// Index drawn with probability proportional to `1 / (1 + cost)`.
pub fn alo_roulette(costs: &[f64], rng: &mut RngStream) -> Result<usize> {
    let probs = super::abc_selection_probs(costs)?;
    Ok(roulette(&probs, rng.random()))
}

/// Trap-shrink ratio at iteration `t` of `max_iter`.
pub fn alo_shrink_ratio(t: usize, max_iter: usize) -> f64 {
    let frac = t as f64 / max_iter as f64;
    let w = if frac > 0.95 {
        6
    } else if frac > 0.9 {
        5
    } else if frac > 0.75 {
        4
    } else if frac > 0.5 {
        3
    } else if frac > 0.1 {
        2
    } else {
        return 1.0;
    };
    (10f64.powi(w) * frac).max(1.0)
}

/// Trap of width `1 / ratio` on a random side of `centre`, intersected with
/// `[0, 1]`. Each end is independently placed above or below the centre.
pub fn alo_bounds(centre: f64, ratio: f64, rng: &mut RngStream) -> (f64, f64) {
    let width = 1.0 / ratio;
    let lo = centre;
    let hi = if rng.random_bool(0.5) {
        centre + width
    } else {
        centre - width
    };
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    (lo.max(0.0), hi.min(1.0))
}

/// Position at step `t` of a fresh walk per coordinate, mapped into the
/// trap around `antlion`.
fn walk_around(
    antlion: &[f64],
    t: usize,
    max_iter: usize,
    ratio: f64,
    rng: &mut RngStream,
) -> Vec<f64> {
    antlion
        .iter()
        .map(|&a| {
            let walk = alo_random_walk(max_iter, rng);
            let (lo, hi) = alo_bounds(a, ratio, rng);
            lo + walk[t] * (hi - lo)
        })
        .collect()
}

/// One ant: the mean of a walk in the trap of the selected antlion and a
/// walk in the trap of the elite.
pub fn alo_ant(
    selected: &[f64],
    elite: &[f64],
    t: usize,
    max_iter: usize,
    rng: &mut RngStream,
) -> Vec<f64> {
    let ratio = alo_shrink_ratio(t, max_iter);
    let a = walk_around(selected, t, max_iter, ratio, rng);
    let b = walk_around(elite, t, max_iter, ratio, rng);
    a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AloState {
    /// Sorted by cost, best first.
    pub antlions: Vec<(Vec<f64>, f64)>,
    pub elite: (Vec<f64>, f64),
}

/// Per-iteration snapshots, for tests and diagnostics.
pub type AloObserver<'o> = dyn FnMut(usize, &AloState, &[Vec<f64>]) + 'o;

pub fn run_alo(ev: &mut Evaluator<'_>, params: &AloParams, seed: u64) -> Result<RunRecord> {
    run_alo_observed(ev, params, seed, &mut |_, _, _| {})
}

pub fn run_alo_observed(
    ev: &mut Evaluator<'_>,
    params: &AloParams,
    seed: u64,
    observer: &mut AloObserver<'_>,
) -> Result<RunRecord> {
    params.validate()?;
    let dim = ev.dim();
    let mut init_rng = RngStream::child(seed, "alo/init");
    let mut select_rng = RngStream::child(seed, "alo/select");
    let mut walk_rng = RngStream::child(seed, "alo/walk");
    let mut tracker = Tracker::new("alo", seed);

    let mut antlions = Vec::with_capacity(params.population);
    for _ in 0..params.population {
        let x: Vec<f64> = (0..dim).map(|_| init_rng.random::<f64>()).collect();
        let g = Genome::binarize(&x);
        let Some(cost) = ev.try_evaluate(&g)? else {
            tracker.record(0, ev);
            return tracker.finish(ev, StopReason::BudgetExhausted);
        };
        tracker.offer(&g, cost);
        antlions.push((x, cost));
    }
    antlions.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut state = AloState {
        elite: antlions[0].clone(),
        antlions,
    };
    tracker.record(0, ev);

    for t in 1..=params.max_iter {
        let costs: Vec<f64> = state.antlions.iter().map(|a| a.1).collect();
        let mut ants = Vec::with_capacity(params.population);
        for _ in 0..params.population {
            let k = alo_roulette(&costs, &mut select_rng)?;
            let x = alo_ant(
                &state.antlions[k].0,
                &state.elite.0,
                t,
                params.max_iter,
                &mut walk_rng,
            );
            let g = Genome::binarize(&x);
            let Some(cost) = ev.try_evaluate(&g)? else {
                tracker.record(t, ev);
                return tracker.finish(ev, StopReason::BudgetExhausted);
            };
            tracker.offer(&g, cost);
            ants.push((x, cost));
        }
        let positions: Vec<Vec<f64>> = ants.iter().map(|a| a.0.clone()).collect();
        // Stable sort with antlions first: ties keep the incumbent trap.
        let mut merged = std::mem::take(&mut state.antlions);
        merged.extend(ants);
        merged.sort_by(|a, b| a.1.total_cmp(&b.1));
        merged.truncate(params.population);
        if merged[0].1 < state.elite.1 {
            state.elite = merged[0].clone();
        }
        state.antlions = merged;
        observer(t, &state, &positions);
        tracker.record(t, ev);
    }
    tracker.finish(ev, StopReason::IterationLimit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::oracle_bruteforce;
    use crate::objectives::OneMax;

    #[test]
    fn walk_endpoints() {
        let up = normalize_walk(&[true; 10]);
        assert_eq!(up.len(), 11);
        assert_eq!(up[0], 0.0);
        assert_eq!(*up.last().unwrap(), 1.0);
        assert!(up.windows(2).all(|w| w[0] < w[1]));
        let down = normalize_walk(&[false; 10]);
        assert_eq!(*down.last().unwrap(), 0.0);
        assert_eq!(normalize_walk(&[]), vec![0.5]);
        assert_eq!(normalize_walk(&[true, false]), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn walks_are_normalized() {
        let mut rng = RngStream::from_seed(1);
        for steps in 1..60 {
            let w = alo_random_walk(steps, &mut rng);
            assert_eq!(w.len(), steps + 1);
            assert!(w.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }

    #[test]
    fn roulette_single_and_uniform() {
        let mut rng = RngStream::from_seed(2);
        assert!((0..1000).all(|_| alo_roulette(&[5.0], &mut rng).unwrap() == 0));
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[alo_roulette(&[3.0; 4], &mut rng).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() <= 0.01);
        }
    }

    #[test]
    fn roulette_weights() {
        let mut rng = RngStream::from_seed(3);
        let n = 100_000;
        let zero = (0..n)
            .filter(|_| alo_roulette(&[0.0, 9.0], &mut rng).unwrap() == 0)
            .count();
        // weights 1 and 0.1
        assert!((zero as f64 / n as f64 - 1.0 / 1.1).abs() <= 0.02);
    }

    #[test]
    fn shrink_schedule() {
        assert_eq!(alo_shrink_ratio(1, 100), 1.0);
        assert_eq!(alo_shrink_ratio(10, 100), 1.0);
        assert!((alo_shrink_ratio(20, 100) - 20.0).abs() < 1e-12);
        assert!((alo_shrink_ratio(60, 100) - 600.0).abs() < 1e-9);
        assert!((alo_shrink_ratio(100, 100) - 1e6).abs() < 1e-6);
        let ratios: Vec<f64> = (1..=100).map(|t| alo_shrink_ratio(t, 100)).collect();
        assert!(ratios.windows(2).all(|w| w[0] <= w[1]));
        let mut rng = RngStream::from_seed(4);
        let mut sides = [0usize; 2];
        for _ in 0..1000 {
            match alo_bounds(0.5, 4.0, &mut rng) {
                (lo, hi) if lo == 0.5 && hi == 0.75 => sides[1] += 1,
                (lo, hi) if lo == 0.25 && hi == 0.5 => sides[0] += 1,
                other => panic!("unexpected trap {other:?}"),
            }
        }
        assert!(sides[0] > 400 && sides[1] > 400);
        for _ in 0..100 {
            let trap = alo_bounds(0.9, 1.0, &mut rng);
            assert!(trap == (0.9, 1.0) || trap == (0.0, 0.9), "{trap:?}");
        }
    }

    #[test]
    fn population_sorted_and_elite_best() {
        let obj = OneMax::new(24);
        let mut ev = Evaluator::new(&obj, 10_000);
        let mut checked = 0;
        let params = AloParams::default();
        run_alo_observed(&mut ev, &params, 6, &mut |_, state, ants| {
            assert_eq!(state.antlions.len(), 25);
            assert_eq!(ants.len(), 25);
            assert!(state.antlions.windows(2).all(|w| w[0].1 <= w[1].1));
            assert!(state.antlions.iter().all(|a| state.elite.1 <= a.1));
            checked += 1;
        })
        .unwrap();
        assert_eq!(checked, 25);
    }

    #[test]
    fn ants_stay_inside_traps() {
        let mut rng = RngStream::from_seed(7);
        let max_iter = 40;
        for t in 1..=max_iter {
            let ratio = alo_shrink_ratio(t, max_iter);
            let sel: Vec<f64> = (0..16).map(|_| rng.random()).collect();
            let eli: Vec<f64> = (0..16).map(|_| rng.random()).collect();
            let ant = alo_ant(&sel, &eli, t, max_iter, &mut rng);
            let w = 1.0 / ratio;
            for d in 0..16 {
                let (l1, h1) = ((sel[d] - w).max(0.0), (sel[d] + w).min(1.0));
                let (l2, h2) = ((eli[d] - w).max(0.0), (eli[d] + w).min(1.0));
                let v = ant[d];
                assert!((0.0..=1.0).contains(&v));
                assert!(v >= 0.5 * (l1 + l2) - 1e-12 && v <= 0.5 * (h1 + h2) + 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_and_monotone() {
        let obj = OneMax::new(32);
        let run = || {
            let mut ev = Evaluator::new(&obj, 650);
            run_alo(&mut ev, &AloParams::default(), 9).unwrap()
        };
        let a = run();
        assert_eq!(a, run());
        assert!(a.is_monotone());
        assert_eq!(a.entries.len(), 26);
    }

    /// Run at the 2560-evaluation oracle budget. With only 25 iterations the
    /// traps close after two wide steps and the swarm stalls early.
    #[test]
    fn onemax8_optimum() {
        let obj = OneMax::new(8);
        let (_, optimum) = oracle_bruteforce(&obj).unwrap();
        let params = AloParams {
            population: 25,
            max_iter: 2560 / 25,
        };
        let hits = (0..20)
            .filter(|&seed| {
                let mut ev = Evaluator::new(&obj, 2560);
                run_alo(&mut ev, &params, seed).unwrap().best_cost == optimum
            })
            .count();
        assert!(hits >= 19, "{hits}/20");
    }
}
