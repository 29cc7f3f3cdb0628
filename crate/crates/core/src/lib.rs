//! Exact-arithmetic simulator and verification lab for online cooperative
//! games with coalition structures.
//!
//! Players arrive one at a time and either found a coalition or join an
//! existing one, guided by a value-distribution policy. Everything runs on
//! exact rationals: simulations, optimal coalition structures, worst-case
//! welfare ratios over all arrival orders and tie branches, and the axiom
//! checkers (non-wastefulness, irrevocability, non-anticipation, individual
//! rationality, temporal stability).

pub mod game;
pub mod io;
pub mod lab;
pub mod policy;
pub mod sim;
pub mod solver;
pub mod value;

pub use game::{
    ArrivalOrder, Coalition, CoalitionStructure, DeltaClass, Game, PlayerId, ValidationError,
};
pub use policy::{marginal_contribution, paper_threshold, Ledger, Offer, Policy, PolicySpec};
pub use sim::{simulate, simulate_all_branches, PlayerModel, TieBreak, Trace};
pub use solver::{brute_force_partition, optimal_partition, OptimalResult};
pub use value::Value;
