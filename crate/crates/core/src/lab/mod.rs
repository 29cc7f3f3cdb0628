//! Verification laboratory: axiom checkers, worst-case ratio evaluation,
//! instance generators and the named verification suites.

pub mod audit;
pub mod axioms;
pub mod instances;
pub mod ratio;
pub mod suites;

pub use audit::{check_optimal_structure, check_trace_blocks, greedy_size_cap};
pub use axioms::{
    check_ir, check_irrevocable, check_non_anticipative, check_non_wasteful, check_tns, Axiom,
    AxiomVerdict, Counterexample, NaReport,
};
pub use instances::{
    grid_family, grid_points, paper_instances, random_instance, InstanceError, NamedInstance,
    PaperCase, TableBuilder,
};
pub use ratio::{
    all_orders, competitive_ratio, family_ratio, ratio_for_order, verify_witness, FamilyReport,
    FamilyRow, RatioError, RatioMode, RatioReport,
};
pub use suites::{run_suite, SuiteCheck, SuiteConfig, SuiteError, SuiteReport, SUITE_NAMES};
