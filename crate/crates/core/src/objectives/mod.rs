//! Concrete cost functions.

mod benchmarks;
mod external;
mod surrogate;

pub use benchmarks::{onemax_cost, trap_cost, Constant, OneMax, Trap};
pub use external::{external_cost, ExternalConfig, ExternalEvaluator, RestartPolicy};
pub use surrogate::{
    fringe_edges, resonant_frequency, surrogate_cost, Surrogate, SurrogateProfile,
};
