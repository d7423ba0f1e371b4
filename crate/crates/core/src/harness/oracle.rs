use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Objective;

/// Largest dimension the exhaustive oracle accepts.
pub const ORACLE_MAX_DIM: usize = 20;

/// Exhaustive minimum over all `2^D` genomes. Ties keep the lowest index.
pub fn oracle_bruteforce(objective: &dyn Objective) -> Result<(Genome, f64)> {
    let dim = objective.dim();
    if dim > ORACLE_MAX_DIM {
        return Err(Error::domain(format!(
            "refusing to enumerate 2^{dim} genomes; the oracle is limited to D <= {ORACLE_MAX_DIM}"
        )));
    }
    let mut best: Option<(Genome, f64)> = None;
    for index in 0..(1u64 << dim) {
        let g = Genome::from_index(index, dim);
        let cost = objective.cost(&g)?;
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((g, cost));
        }
    }
    best.ok_or_else(|| Error::domain("empty search space"))
}
