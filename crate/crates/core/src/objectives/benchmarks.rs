//! Pseudo-Boolean benchmarks with known optima.

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::objective::Objective;

/// `D - ones`; optimum 0 at all-ones.
pub fn onemax_cost(genome: &Genome) -> f64 {
    (genome.len() - genome.count_ones()) as f64
}

/// Concatenated deceptive traps of size `k`.
///
/// A block with `u` ones contributes 0 when `u == k`, else `u + 1`, so the
/// all-zeros block (contribution 1) is a deceptive attractor next to the
/// global optimum.
pub fn trap_cost(genome: &Genome, k: usize) -> Result<f64> {
    if k == 0 || genome.len() % k != 0 {
        return Err(Error::config(format!(
            "trap block size {k} does not divide genome length {}",
            genome.len()
        )));
    }
    Ok(genome
        .bits()
        .chunks(k)
        .map(|block| {
            let u = block.iter().filter(|&&b| b).count();
            if u == k {
                0.0
            } else {
                (u + 1) as f64
            }
        })
        .sum())
}

#[derive(Debug, Clone, Copy)]
pub struct OneMax {
    dim: usize,
}

impl OneMax {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Objective for OneMax {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cost(&self, genome: &Genome) -> Result<f64> {
        Ok(onemax_cost(genome))
    }

    fn describe(&self) -> String {
        format!("onemax D={}", self.dim)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Trap {
    dim: usize,
    block: usize,
}

impl Trap {
    pub fn new(dim: usize, block: usize) -> Result<Self> {
        if block == 0 || dim % block != 0 {
            return Err(Error::config(format!(
                "trap block size {block} does not divide dimension {dim}"
            )));
        }
        Ok(Self { dim, block })
    }
}

impl Objective for Trap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cost(&self, genome: &Genome) -> Result<f64> {
        trap_cost(genome, self.block)
    }

    fn describe(&self) -> String {
        format!("trap D={} k={}", self.dim, self.block)
    }
}

/// Same cost for every genome; used by the evaluation-count probes.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    dim: usize,
    value: f64,
}

impl Constant {
    pub fn new(dim: usize, value: f64) -> Self {
        Self { dim, value }
    }
}

impl Objective for Constant {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cost(&self, _genome: &Genome) -> Result<f64> {
        Ok(self.value)
    }

    fn describe(&self) -> String {
        format!("constant {} D={}", self.value, self.dim)
    }
}
