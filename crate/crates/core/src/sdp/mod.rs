//! Hermitian semidefinite programs in equality form, a primal-dual interior-point
//! solver, and certificate checking.

mod certificate;
mod problem;
mod realify;
mod solver;

pub use certificate::{check, strict_feasibility_probe, strict_feasibility_probe_with, Certificate, FeasibilityReport, ProbeSide};
pub use problem::{Constraint, SdpProblem, PRESOLVE_THRESHOLD};
pub use realify::{complexify, realify, RealMatrix};
pub use solver::{
    solve, solve_traced, solve_with_config, solve_with_observer, IterationRecord, SdpSolution, SolveStatus,
    SolverConfig,
};
