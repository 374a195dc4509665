//! Dense real symmetric linear algebra used by the protection engine and the
//! realization constructions.

mod eigen;
mod lu;
mod matrix;

pub use eigen::{
    accurate_dist_to_spectrum, check_psd, distance, eigh, frobenius, operator_norm, psd_sqrt,
    refined_eigenvalues, smallest_singular_value, EigenCluster, GapKind, SpectralDecomposition,
    SpectralGap, CLUSTER_TOL, JACOBI_MAX_SWEEPS, JACOBI_TOL, POLE_TOL, PSD_FLOOR,
};
pub use lu::{determinant, Determinant};
pub use matrix::{dot, dot_compensated, norm2, Matrix, SymmetricMatrix, SYMMETRY_TOL};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must have dimension at least 1")]
    Empty,
    #[error("expected {expected} entries, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric: entries ({row}, {col}) and ({col}, {row}) differ by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("shift {lambda} is a pole: it coincides with eigenvalue {eigenvalue}")]
    Pole { lambda: f64, eigenvalue: f64 },
    #[error("perturbation not positive semi-definite: eigenvalue {eigenvalue:e} below floor")]
    NotPsd { eigenvalue: f64 },
}
