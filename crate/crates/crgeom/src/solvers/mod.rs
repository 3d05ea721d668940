//! Formal ρ-expansion solvers.

pub mod complex;
pub mod eigen;
pub mod indicial;
pub mod laplacian;
pub mod lichnerowicz;
pub mod logq;
pub mod volume;

pub use complex::check_complex_property;
pub use eigen::{
    dirichlet_cross_check, eigenvalue, extract_gjms, odd_coefficients_vanish, q_transform,
    solve_eigen, solve_eigen_with, verified_gjms, EigenSolution,
};
pub use indicial::{
    indicial_from_oracle, indicial_polynomial, scalar_indicial, IndicialChannel, UniPoly,
};
pub use laplacian::{Frobenius, ProfileFile, ScalarLaplacian};
pub use lichnerowicz::{
    cross_validate, extract_obstruction, materialize, refine, solve_lichnerowicz, Channels,
    LichOperator, LichState, ObstructionResult,
};
pub use logq::{
    q_curvature, q_expected_top_perturbation, q_factor, solve_log, solve_log_with, LogSolution,
};
pub use volume::{l_over_q, total_q_check, volume_coeffs, VolumeExpansion};
