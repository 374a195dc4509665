//! Protection criterion and its consequences.
//!
//! A real `λ` in a gap of `A` is protected for the pair `(A, B)` exactly when
//! `B (A - λ)⁻¹ B = 0`. Everything in this module is a numerical reading of
//! that identity: the relative residual that tests it, the scalar Herglotz
//! probe that locates its only possible solution in each gap, and the
//! equivalent algebraic witnesses (closed-form inverse of `A + tB - λ`,
//! nilpotency of `(A - λ)⁻¹ B`, the pseudo-resolvent identity, and the
//! two-sided bounds on `dist(λ, spec(A + tB))`).

mod flow;
mod herglotz;
mod identities;

pub use flow::{
    brute_force_unprotected, linear_grid, spectral_flow, symmetric_log_grid, FlowSample,
};
pub use herglotz::{
    gap_root, herglotz_from, herglotz_with_tol, HerglotzScalar, BISECTION_MAX_ITER,
    ENDPOINT_OFFSET, ROOT_TOL,
};
pub use identities::{DistanceBounds, InverseFormula, PseudoResolventDefect};

use thiserror::Error;

use crate::linalg::{
    check_psd, eigh, LinalgError, SpectralDecomposition, SpectralGap, SymmetricMatrix,
};

/// Default acceptance threshold on the relative protection residual.
pub const DEFAULT_TOL: f64 = 1e-8;
/// `B` counts as zero when `‖B‖_F ≤ 1e-12 · max(1, ‖A‖_F)`.
pub const ZERO_PERTURBATION_TOL: f64 = 1e-12;
/// Bounded gaps narrower than this (relative to scale) are not searched.
pub const UNRESOLVABLE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtectionError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("perturbation is zero (‖B‖_F = {norm:e}); with B = 0 every point off spec(A) is trivially protected")]
    ZeroPerturbation { norm: f64 },
    #[error("A is {expected}x{expected} but the other operand has dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("probe vector is zero")]
    ZeroProbe,
    #[error("invalid Herglotz data: {0}")]
    InvalidHerglotz(&'static str),
    #[error("{lambda} is not protected (relative residual {residual:e})")]
    NotProtected { lambda: f64, residual: f64 },
    #[error("parameter grid must be non-empty and strictly increasing")]
    BadGrid,
}

/// A validated pair `(A, B)` with `B ⪰ 0`, together with the eigen-
/// decomposition of `A` that every query reuses.
#[derive(Clone, Debug)]
pub struct Pencil {
    a: SymmetricMatrix,
    b: SymmetricMatrix,
    a_eig: SpectralDecomposition,
    b_norm: f64,
}

/// Outcome of [`Pencil::is_protected`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtectionCheck {
    pub protected: bool,
    /// `None` when `λ` sits on the spectrum of `A`.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtectedPoint {
    pub lambda: f64,
    pub residual: f64,
    pub gap: SpectralGap,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GapStatus {
    /// The probe function has no root in the gap, so nothing here is protected.
    NoProbeRoot,
    /// The probe root exists but fails the full-matrix residual test.
    Rejected { root: f64, residual: f64 },
    Protected { root: f64, residual: f64 },
    /// Gap too narrow to separate from its endpoints.
    Unresolvable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapDiagnostic {
    pub gap: SpectralGap,
    pub status: GapStatus,
}

/// Certified protected points of a pair, with per-gap diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtectionReport {
    pub spectrum: Vec<f64>,
    pub protected_points: Vec<ProtectedPoint>,
    pub gap_diagnostics: Vec<GapDiagnostic>,
    pub tol: f64,
    pub cluster_tol: f64,
    pub probe_index: usize,
}

impl ProtectionReport {
    pub fn points(&self) -> Vec<f64> {
        self.protected_points.iter().map(|p| p.lambda).collect()
    }
}

impl Pencil {
    /// Validates dimensions and `B ⪰ 0`. A zero `B` is accepted here; the
    /// queries that need `B ≠ 0` reject it themselves.
    pub fn new(a: SymmetricMatrix, b: SymmetricMatrix) -> Result<Self, ProtectionError> {
        if a.dim() != b.dim() {
            return Err(ProtectionError::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        check_psd(&b)?;
        let a_eig = eigh(&a)?;
        let b_norm = b.frobenius();
        Ok(Self {
            a,
            b,
            a_eig,
            b_norm,
        })
    }

    pub fn a(&self) -> &SymmetricMatrix {
        &self.a
    }

    pub fn b(&self) -> &SymmetricMatrix {
        &self.b
    }

    pub fn a_spectrum(&self) -> &SpectralDecomposition {
        &self.a_eig
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `max(1, ‖A‖_F)`.
    pub fn scale(&self) -> f64 {
        self.a_eig.source_scale()
    }

    pub fn is_zero_perturbation(&self) -> bool {
        self.b_norm <= ZERO_PERTURBATION_TOL * self.scale()
    }

    fn require_nonzero_b(&self) -> Result<(), ProtectionError> {
        if self.is_zero_perturbation() {
            Err(ProtectionError::ZeroPerturbation { norm: self.b_norm })
        } else {
            Ok(())
        }
    }

    /// The same pair with `A` replaced by `A - λ`.
    pub fn shifted(&self, lambda: f64) -> Result<Self, ProtectionError> {
        Self::new(self.a.shifted(-lambda), self.b.clone())
    }

    /// `r(λ) = ‖B (A - λ)⁻¹ B‖_F / (‖B‖_F² / dist(λ, spec A))`.
    ///
    /// The normalizer bounds the numerator, so `r ∈ [0, 1]` up to rounding and
    /// is invariant under `(A, B) → (cA, cB)`.
    pub fn protection_residual(&self, lambda: f64) -> Result<f64, ProtectionError> {
        let r = self.a_eig.resolvent(lambda)?;
        let brb = self.b.as_matrix() * r.as_matrix() * self.b.as_matrix();
        let dist = self.a_eig.dist_to_spectrum(lambda);
        let normalizer = (self.b_norm * self.b_norm / dist).max(1e-300);
        Ok(brb.frobenius() / normalizer)
    }

    pub fn is_protected(&self, lambda: f64, tol: f64) -> Result<ProtectionCheck, ProtectionError> {
        self.require_nonzero_b()?;
        match self.protection_residual(lambda) {
            Ok(residual) => Ok(ProtectionCheck {
                protected: residual <= tol,
                residual: Some(residual),
            }),
            Err(ProtectionError::Linalg(LinalgError::Pole { .. })) => Ok(ProtectionCheck {
                protected: false,
                residual: None,
            }),
            Err(e) => Err(e),
        }
    }

    /// Column index maximizing `‖B eᵢ‖`, lowest index on ties.
    pub fn probe_index(&self) -> usize {
        let b = self.b.as_matrix();
        let n = self.dim();
        let mut best = (0, -1.0);
        for j in 0..n {
            let norm2: f64 = (0..n).map(|i| b[(i, j)] * b[(i, j)]).sum();
            if norm2 > best.1 {
                best = (j, norm2);
            }
        }
        best.0
    }

    /// Enumerates the protected points of the pair.
    ///
    /// Any protected `λ` annihilates `⟨e, B (A - λ)⁻¹ B e⟩` for every `e`, and
    /// for `e = e_{i*}` that scalar is strictly increasing on each gap of `A`.
    /// So each bounded gap holds at most one candidate, the probe root, which
    /// is then certified against the full residual.
    pub fn protected_set(&self, tol: f64) -> Result<ProtectionReport, ProtectionError> {
        self.require_nonzero_b()?;
        let probe_index = self.probe_index();
        let y = self.b.as_matrix().column(probe_index);
        let cluster_tol = self.a_eig.default_cluster_tol();
        let h = herglotz_with_tol(&self.a_eig, &y, cluster_tol)?;

        let mut protected_points = Vec::new();
        let mut gap_diagnostics = Vec::new();
        for gap in self.a_eig.gaps(cluster_tol).into_iter().filter(|g| g.is_bounded()) {
            let status = if gap.width() < UNRESOLVABLE_GAP * self.scale() {
                GapStatus::Unresolvable
            } else {
                match gap_root(&h, &gap) {
                    None => GapStatus::NoProbeRoot,
                    Some(root) => {
                        let residual = self.protection_residual(root)?;
                        if residual <= tol {
                            protected_points.push(ProtectedPoint {
                                lambda: root,
                                residual,
                                gap,
                            });
                            GapStatus::Protected { root, residual }
                        } else {
                            GapStatus::Rejected { root, residual }
                        }
                    }
                }
            };
            gap_diagnostics.push(GapDiagnostic { gap, status });
        }
        Ok(ProtectionReport {
            spectrum: self.a_eig.eigenvalues().to_vec(),
            protected_points,
            gap_diagnostics,
            tol,
            cluster_tol,
            probe_index,
        })
    }
}

fn pencil(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<Pencil, ProtectionError> {
    Pencil::new(a.clone(), b.clone())
}

/// See [`Pencil::protection_residual`].
pub fn protection_residual(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    lambda: f64,
) -> Result<f64, ProtectionError> {
    pencil(a, b)?.protection_residual(lambda)
}

/// See [`Pencil::is_protected`].
pub fn is_protected(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    lambda: f64,
    tol: f64,
) -> Result<ProtectionCheck, ProtectionError> {
    pencil(a, b)?.is_protected(lambda, tol)
}

/// See [`Pencil::protected_set`].
pub fn protected_set(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    tol: f64,
) -> Result<ProtectionReport, ProtectionError> {
    pencil(a, b)?.protected_set(tol)
}

/// See [`Pencil::shifted_inverse_formula`].
pub fn shifted_inverse_formula(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    lambda: f64,
    t: f64,
) -> Result<InverseFormula, ProtectionError> {
    pencil(a, b)?.shifted_inverse_formula(lambda, t)
}

/// See [`Pencil::nilpotency_index`].
pub fn nilpotency_index(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    lambda: f64,
) -> Result<Option<usize>, ProtectionError> {
    pencil(a, b)?.nilpotency_index(lambda)
}

/// See [`Pencil::pseudo_resolvent_defect`].
pub fn pseudo_resolvent_defect(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    lambda: f64,
    z: f64,
    w: f64,
) -> Result<PseudoResolventDefect, ProtectionError> {
    pencil(a, b)?.pseudo_resolvent_defect(lambda, z, w)
}

/// Bounds on `dist(0, spec(A + tB))` for a pair that protects `0`.
pub fn distance_bounds(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    t: f64,
) -> Result<DistanceBounds, ProtectionError> {
    pencil(a, b)?.distance_bounds(0.0, t)
}
