//! Simulated annealing, bee colony, ant colony and ant lion optimizers.

mod abc;
mod aco;
mod alo;
mod sa;

pub use abc::{abc_selection_probs, run_abc, run_abc_traced, AbcConfig, AbcTrace};
pub use aco::{aco_construct, aco_deposit, run_aco, AcoParams, PheromoneTable};
pub use alo::{
    alo_ant, alo_bounds, alo_random_walk, alo_roulette, alo_shrink_ratio, run_alo,
    run_alo_observed, AloObserver, AloParams, AloState,
};
pub use sa::{run_sa, sa_accept, sa_random_mutation, sa_swap_mutation, Mutation, SaSchedule};
