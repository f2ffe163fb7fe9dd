//! Grids, load vectors, conjugate gradients, error norms and the benchmark problems.

mod cg;
mod direct;
mod grid;
mod manufactured;
mod rhs;
mod study;

pub use cg::{solve_cg, SolveReport};
pub use direct::apply_operator_direct;
pub use grid::GridSpec;
pub use manufactured::{manufactured_rhs_2d, manufactured_solution};
pub use rhs::{assemble_rhs, discrete_l2_error};
pub use study::{
    convergence_study, convergence_study_with_reference, fitted_slope, reference_solution, solve_problem, write_csv, ConvergenceRecord, DeltaPolicy, Problem,
    ReferencePolicy, SolveOptions, Solution, StudyConfig, CSV_HEADER,
};
