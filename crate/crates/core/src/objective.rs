//! Cost functions, evaluation cache and budget metering.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::genome::Genome;

/// A cost to minimize over genomes of a fixed length.
///
/// Implementations must be deterministic and return finite, non-negative
/// costs for every genome of length [`Objective::dim`].
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn cost(&self, genome: &Genome) -> Result<f64>;

    fn describe(&self) -> String;
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn cost(&self, genome: &Genome) -> Result<f64> {
        (**self).cost(genome)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Counts objective evaluations against a hard ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetMeter {
    used: u64,
    max: u64,
    cache_hits: u64,
}

impl BudgetMeter {
    pub fn new(max: u64) -> Self {
        Self {
            used: 0,
            max,
            cache_hits: 0,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn cache_hits(&self) -> u64 {
        self.cache_hits
    }

    /// Evaluation requests served, cached or not.
    pub fn requests(&self) -> u64 {
        self.used + self.cache_hits
    }

    pub fn remaining(&self) -> u64 {
        self.max - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.max
    }
}

/// Metered, memoizing front end to an [`Objective`].
///
/// Cache hits are free; misses consume one unit of budget. Once the budget
/// is spent, uncached genomes yield [`Error::BudgetExhausted`].
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    cache: HashMap<Genome, f64>,
    meter: BudgetMeter,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, budget: u64) -> Self {
        Self {
            objective,
            cache: HashMap::new(),
            meter: BudgetMeter::new(budget),
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn meter(&self) -> BudgetMeter {
        self.meter
    }

    pub fn objective(&self) -> &dyn Objective {
        self.objective
    }

    pub fn evaluate(&mut self, genome: &Genome) -> Result<f64> {
        if let Some(&cost) = self.cache.get(genome) {
            self.meter.cache_hits += 1;
            return Ok(cost);
        }
        if genome.len() != self.objective.dim() {
            return Err(Error::Encoding {
                expected: self.objective.dim(),
                actual: genome.len(),
            });
        }
        if self.meter.is_exhausted() {
            return Err(Error::BudgetExhausted {
                max: self.meter.max,
            });
        }
        let cost = self.objective.cost(genome)?;
        if !cost.is_finite() || cost < 0.0 {
            return Err(Error::domain(format!(
                "objective returned {cost} for {genome}; costs must be finite and non-negative"
            )));
        }
        self.meter.used += 1;
        self.cache.insert(genome.clone(), cost);
        Ok(cost)
    }

    /// Like [`Evaluator::evaluate`] but maps budget exhaustion to `None` so
    /// optimizers can stop cleanly.
    pub fn try_evaluate(&mut self, genome: &Genome) -> Result<Option<f64>> {
        match self.evaluate(genome) {
            Ok(cost) => Ok(Some(cost)),
            Err(Error::BudgetExhausted { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}
