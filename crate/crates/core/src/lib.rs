//! Two-phase quasi-Newton minimization with a BFGS baseline, a 30-problem
//! test suite, convergence diagnostics, and Dolan–Moré performance profiles.

pub mod bench;
pub mod diagnostics;
pub mod error;
pub mod line_search;
pub mod linalg;
pub mod objective;
pub mod solvers;
pub mod suite;

pub use error::{Error, Result};
pub use line_search::{wolfe_search, LineSearchOutcome, SearchStatus, WolfeParams};
pub use linalg::{cholesky, CholeskyFactor, SymMatrix, Vector};
pub use objective::{check_gradient, fd_gradient, FnObjective, GradientCheckReport, Objective};
pub use diagnostics::{psi, ConvergenceDiagnostics};
pub use solvers::{solve_bfgs, solve_two_phase, Mode, SolveResult, SolverConfig, SolverKind, Termination};
pub use suite::{lookup, suite, SuiteProblem};
