//! Fuzzy preference programming.
//!
//! Derives crisp priority weights and a consistency index from triangular
//! fuzzy pairwise comparisons, then composes them over a criteria hierarchy
//! into global weights and ranks.

pub mod config;
pub mod hierarchy;
pub mod judgments;
pub mod report;
pub mod simplex;
pub mod solver;
pub mod study;
pub mod tfn;

pub use hierarchy::{
    compose, global_weights, rank, solve_hierarchy, CriterionNode, GlobalRanking, HierarchyError,
    HierarchySolution,
};
pub use judgments::{
    aggregate_experts, build_matrix, import_crisp, validate, FuzzyComparisonMatrix, Judgment,
    MatrixError, SpreadPolicy, ValidationReport,
};
pub use report::{render, run_replay, run_solve, Format, Report, RunError, RunOptions, Warning};
pub use solver::{
    feasible_at, oracle, oracle_lambda, solve, PrioritizationResult, SolveError, SolverConfig,
};
pub use study::{parse_replay, parse_study, ReplayFile, StudyError, StudyFile};
pub use tfn::{make_tfn, membership_degree, LinguisticScale, TfnError, TriangularFuzzyNumber};
