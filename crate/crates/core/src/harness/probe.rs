use super::config::{Algorithm, AlgorithmSettings};
use super::experiment::run_algorithm;
use crate::error::Result;
use crate::objective::Evaluator;
use crate::objectives::Constant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeRow {
    pub n: usize,
    /// Cost requests, cache hits included.
    pub requests: u64,
    /// Uncached evaluations.
    pub evaluations: u64,
}

/// Count cost requests at each population size with a constant objective
/// and an unbounded meter. ABC uses `n` employed and `n` onlooker bees and
/// an unreachable trial limit so no scouts fire.
pub fn eval_count_probe(
    algorithm: Algorithm,
    ns: &[usize],
    max_iter: usize,
    dim: usize,
    seed: u64,
) -> Result<Vec<ProbeRow>> {
    let objective = Constant::new(dim, 1.0);
    ns.iter()
        .map(|&n| {
            let mut settings = AlgorithmSettings::default();
            settings.set_population(algorithm, n);
            settings.set_max_iter(algorithm, max_iter);
            settings.abc.limit = usize::MAX;
            let mut ev = Evaluator::new(&objective, u64::MAX);
            run_algorithm(algorithm, &settings, &mut ev, seed)?;
            let meter = ev.meter();
            Ok(ProbeRow {
                n,
                requests: meter.requests(),
                evaluations: meter.used(),
            })
        })
        .collect()
}

/// Closed-form request count for population `n`.
pub fn expected_requests(
    algorithm: Algorithm,
    n: usize,
    max_iter: usize,
    calibration: usize,
) -> u64 {
    let (n, t) = (n as u64, max_iter as u64);
    match algorithm {
        Algorithm::Bpso | Algorithm::Rlbpso | Algorithm::Alo => n * (t + 1),
        Algorithm::Aco => n * t,
        Algorithm::Abc => n + 2 * n * t,
        Algorithm::SaRandom | Algorithm::SaSwap => 1 + calibration as u64 + t,
    }
}
