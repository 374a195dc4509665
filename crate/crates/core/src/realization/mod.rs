//! Pairs `(A, B)` with a prescribed protected set.
//!
//! # Cyclic construction
//!
//! For a finite set `P = {p₁ < … < p_m}` and a vector `v` with all entries
//! positive, border `K = diag(P)` by one extra dimension:
//!
//! ```text
//!     A = [ K   v ]      B = [ 0  0 ]
//!         [ vᵀ  0 ]          [ 0  1 ]
//! ```
//!
//! Every `p ∈ P` is protected, and every other real `λ` is an eigenvalue of
//! `A + tB` for exactly one `t`. Taking the Schur complement of the `K - λ`
//! block,
//!
//! ```text
//!     det(A + tB - λ) = det(K - λ) · ((t - λ) - vᵀ (K - λ)⁻¹ v),
//! ```
//!
//! so for `λ ∉ P` the parameter is `t*(λ) = λ + Σₖ βₖ² / (pₖ - λ)` (see
//! [`RealizedPair::solve_t`]). For `λ = pⱼ` the determinant reduces to the
//! `t`-independent `-βⱼ² Π_{k≠j} (pₖ - pⱼ) ≠ 0`.
//!
//! # Pole construction
//!
//! `A = diag(μ)` with a rank-one projection `B = y yᵀ` protects exactly the
//! roots of `Σₖ yₖ² / (μₖ - λ)`, one per bounded gap. The points cannot be
//! chosen directly, but they interleave with `μ`; for `μₖ = 1/k` they crowd
//! toward `0`, which is itself never protected.

mod pencil;

pub use pencil::{pencil_spectrum, pencil_spectrum_wide, DEFAULT_PENCIL_RESOLUTION};

use thiserror::Error;

use crate::linalg::{Matrix, SymmetricMatrix};
use crate::protection::{
    gap_root, HerglotzScalar, Pencil, ProtectedPoint, ProtectionError, DEFAULT_TOL,
};

/// `solve_t` refuses `λ` within this distance (relative to scale) of `P`.
pub const PROTECTED_EXCLUSION: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("the prescribed set is empty")]
    Empty,
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("duplicate point {0}")]
    Duplicate(f64),
    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("weight {index} is {value}; weights must be strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("the pole construction needs at least two poles, got {0}")]
    TooFewPoles(usize),
    #[error("probe entry {0} is zero; every entry must be non-zero")]
    ZeroEntry(usize),
    #[error("{lambda} coincides with protected point {point}; no finite t exists")]
    AtProtectedPoint { lambda: f64, point: f64 },
    #[error("root {lambda} failed certification (residual {residual:e})")]
    Uncertified { lambda: f64, residual: f64 },
    #[error("search interval must be finite with lower < upper and resolution >= 2")]
    BadInterval,
    #[error(transparent)]
    Protection(#[from] ProtectionError),
}

/// Output of the cyclic construction.
#[derive(Clone, Debug)]
pub struct RealizedPair {
    /// Prescribed protected set, strictly increasing.
    pub points: Vec<f64>,
    /// Entries `βₖ > 0` of the unit vector `v`, aligned with `points`.
    pub weights: Vec<f64>,
    pub a: SymmetricMatrix,
    pub b: SymmetricMatrix,
}

/// Output of the pole construction.
#[derive(Clone, Debug)]
pub struct PolePair {
    pub poles: Vec<f64>,
    /// Unit vector with no zero entry, aligned with `poles`.
    pub y: Vec<f64>,
    pub a: SymmetricMatrix,
    pub b: SymmetricMatrix,
    /// One certified protected point per bounded gap of `poles`.
    pub protected: Vec<ProtectedPoint>,
}

fn sorted_distinct(values: &[f64]) -> Result<Vec<usize>, RealizeError> {
    if values.is_empty() {
        return Err(RealizeError::Empty);
    }
    if let Some(&x) = values.iter().find(|x| !x.is_finite()) {
        return Err(RealizeError::NonFinite(x));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(RealizeError::Duplicate(values[w[0]]));
    }
    Ok(order)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Cyclic construction for a finite set. `weights` (default uniform) are
/// matched to `points` in the order given and normalized.
pub fn realize(points: &[f64], weights: Option<&[f64]>) -> Result<RealizedPair, RealizeError> {
    let order = sorted_distinct(points)?;
    let m = points.len();
    let raw: Vec<f64> = match weights {
        None => vec![1.0; m],
        Some(w) => {
            if w.len() != m {
                return Err(RealizeError::WeightCount {
                    expected: m,
                    found: w.len(),
                });
            }
            if let Some((index, &value)) = w
                .iter()
                .enumerate()
                .find(|(_, x)| !(x.is_finite() && **x > 0.0))
            {
                return Err(RealizeError::NonPositiveWeight { index, value });
            }
            w.to_vec()
        }
    };
    let sorted_points: Vec<f64> = order.iter().map(|&i| points[i]).collect();
    let beta = unit(&order.iter().map(|&i| raw[i]).collect::<Vec<_>>());

    let mut a = Matrix::zeros(m + 1);
    for (k, (&p, &b)) in sorted_points.iter().zip(&beta).enumerate() {
        a[(k, k)] = p;
        a[(k, m)] = b;
        a[(m, k)] = b;
    }
    let mut b = Matrix::zeros(m + 1);
    b[(m, m)] = 1.0;
    Ok(RealizedPair {
        points: sorted_points,
        weights: beta,
        a: SymmetricMatrix::new(a).expect("bordered matrix is symmetric by construction"),
        b: SymmetricMatrix::new(b).expect("diagonal matrix is symmetric"),
    })
}

impl RealizedPair {
    pub fn dim(&self) -> usize {
        self.points.len() + 1
    }

    /// The parameter `t*` with `λ ∈ spec(A + t* B)`, for `λ ∉ P`.
    pub fn solve_t(&self, lambda: f64) -> Result<f64, RealizeError> {
        let scale = self.a.scale();
        let nearest = self
            .points
            .iter()
            .copied()
            .min_by(|x, y| (x - lambda).abs().total_cmp(&(y - lambda).abs()))
            .expect("realized set is never empty");
        if (nearest - lambda).abs() <= PROTECTED_EXCLUSION * scale {
            return Err(RealizeError::AtProtectedPoint {
                lambda,
                point: nearest,
            });
        }
        Ok(lambda
            + self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(p, b)| b * b / (p - lambda))
                .sum::<f64>())
    }

    pub fn pencil(&self) -> Result<Pencil, RealizeError> {
        Ok(Pencil::new(self.a.clone(), self.b.clone())?)
    }
}

/// Free-function form of [`RealizedPair::solve_t`].
pub fn solve_t(pair: &RealizedPair, lambda: f64) -> Result<f64, RealizeError> {
    pair.solve_t(lambda)
}

/// Pole construction: `A = diag(μ)`, `B = y yᵀ`, with the protected points
/// located per gap and certified against the full residual.
pub fn realize_via_poles(poles: &[f64], y: Option<&[f64]>) -> Result<PolePair, RealizeError> {
    let m = poles.len();
    if m < 2 {
        return Err(RealizeError::TooFewPoles(m));
    }
    let order = sorted_distinct(poles)?;
    let raw: Vec<f64> = match y {
        None => vec![1.0; m],
        Some(y) => {
            if y.len() != m {
                return Err(RealizeError::WeightCount {
                    expected: m,
                    found: y.len(),
                });
            }
            if let Some(&x) = y.iter().find(|x| !x.is_finite()) {
                return Err(RealizeError::NonFinite(x));
            }
            if let Some(i) = y.iter().position(|&x| x == 0.0) {
                return Err(RealizeError::ZeroEntry(i));
            }
            y.to_vec()
        }
    };
    let mu: Vec<f64> = order.iter().map(|&i| poles[i]).collect();
    let y = unit(&order.iter().map(|&i| raw[i]).collect::<Vec<_>>());

    let a = SymmetricMatrix::from_diagonal(&mu);
    let b = SymmetricMatrix::outer(&y);
    let pencil = Pencil::new(a.clone(), b.clone())?;
    let h = HerglotzScalar::new(mu.clone(), y.iter().map(|x| x * x).collect())?;

    let mut protected = Vec::with_capacity(m - 1);
    for gap in h.gaps().into_iter().filter(|g| g.is_bounded()) {
        // Both bounding weights are positive, so f runs from -∞ to +∞.
        let lambda = gap_root(&h, &gap).expect("sign change across a gap with positive end weights");
        let residual = pencil.protection_residual(lambda)?;
        if residual > DEFAULT_TOL {
            return Err(RealizeError::Uncertified { lambda, residual });
        }
        protected.push(ProtectedPoint {
            lambda,
            residual,
            gap,
        });
    }
    Ok(PolePair {
        poles: mu,
        y,
        a,
        b,
        protected,
    })
}
