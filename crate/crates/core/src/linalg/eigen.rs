//! Symmetric eigendecomposition by cyclic Jacobi rotations, plus the spectral
//! quantities built on it: resolvent solves, PSD square roots, norms and gaps.

use std::cmp::Ordering;

use super::matrix::{dot, dot_compensated, Matrix, SymmetricMatrix};
use super::LinalgError;

/// Off-diagonal Frobenius mass at which a sweep sequence is considered done,
/// relative to `source_scale`.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 60;
/// Relative distance to an eigenvalue below which a shift counts as a pole.
pub const POLE_TOL: f64 = 1e-12;
/// Relative floor under which a negative eigenvalue rejects a PSD input.
pub const PSD_FLOOR: f64 = 1e-10;
/// Default eigenvalue clustering tolerance, relative to `source_scale`.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with an orthonormal frame of eigenvectors
/// (column `k` belongs to `eigenvalues[k]`).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    frame: Matrix,
    source_scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapKind {
    Bounded,
    LeftUnbounded,
    RightUnbounded,
}

/// Open interval of the real resolvent set of a matrix. Unbounded ends are
/// stored as `±∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralGap {
    pub lower: f64,
    pub upper: f64,
    pub kind: GapKind,
}

impl SpectralGap {
    pub fn bounded(lower: f64, upper: f64) -> Self {
        debug_assert!(lower < upper);
        Self {
            lower,
            upper,
            kind: GapKind::Bounded,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.kind == GapKind::Bounded
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// A group of eigenvalues that lie within the clustering tolerance of each
/// other, represented by their mean.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster {
    pub value: f64,
    pub indices: std::ops::Range<usize>,
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps visit `(p, q)` pairs in row-major order and stop once the
/// off-diagonal Frobenius mass drops to `JACOBI_TOL · max(1, ‖A‖_F)`.
/// Output is sorted ascending; each eigenvector is signed so its first
/// non-negligible component is positive, and exactly tied eigenvalues are
/// ordered lexicographically by eigenvector.
pub fn eigh(a: &SymmetricMatrix) -> Result<SpectralDecomposition, LinalgError> {
    let n = a.dim();
    let source_scale = a.scale();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let target = JACOBI_TOL * source_scale;

    let mut converged = false;
    let mut off = off_diagonal_mass(&m);
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        sweep(&mut m, &mut v);
        off = off_diagonal_mass(&m);
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_diagonal: off,
        });
    }

    let mut columns: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            normalize_sign(&mut col);
            (m[(k, k)], col)
        })
        .collect();
    columns.sort_by(|(la, va), (lb, vb)| {
        la.total_cmp(lb).then_with(|| {
            va.iter()
                .zip(vb)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });

    let mut frame = Matrix::zeros(n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (k, (lambda, col)) in columns.into_iter().enumerate() {
        eigenvalues.push(lambda);
        for (i, x) in col.into_iter().enumerate() {
            frame[(i, k)] = x;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        frame,
        source_scale,
    })
}

fn off_diagonal_mass(m: &Matrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn sweep(m: &mut Matrix, v: &mut Matrix) {
    let n = m.dim();
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = m[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
            let t = if theta.abs() > 1e150 {
                0.5 / theta
            } else {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            m[(p, p)] -= t * apq;
            m[(q, q)] += t * apq;
            m[(p, q)] = 0.0;
            m[(q, p)] = 0.0;
            for r in 0..n {
                if r != p && r != q {
                    let arp = m[(r, p)];
                    let arq = m[(r, q)];
                    let new_p = c * arp - s * arq;
                    let new_q = s * arp + c * arq;
                    m[(r, p)] = new_p;
                    m[(p, r)] = new_p;
                    m[(r, q)] = new_q;
                    m[(q, r)] = new_q;
                }
            }
            for r in 0..n {
                let vrp = v[(r, p)];
                let vrq = v[(r, q)];
                v[(r, p)] = c * vrp - s * vrq;
                v[(r, q)] = s * vrp + c * vrq;
            }
        }
    }
}

fn normalize_sign(col: &mut [f64]) {
    let lead = col
        .iter()
        .copied()
        .find(|x| x.abs() > 1e-14)
        .or_else(|| col.iter().copied().find(|x| *x != 0.0));
    if let Some(x) = lead {
        if x < 0.0 {
            col.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `max(1, ‖A‖_F)` of the decomposed matrix.
    pub fn source_scale(&self) -> f64 {
        self.source_scale
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// Spectral norm, `max |μₖ|`.
    pub fn operator_norm(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    pub fn dist_to_spectrum(&self, lambda: f64) -> f64 {
        self.eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, mu| m.min((mu - lambda).abs()))
    }

    pub fn nearest_eigenvalue(&self, lambda: f64) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .min_by(|a, b| (a - lambda).abs().total_cmp(&(b - lambda).abs()))
            .expect("decomposition is never empty")
    }

    /// Fails with [`LinalgError::Pole`] when `λ` is within `POLE_TOL · scale`
    /// of an eigenvalue.
    pub fn check_regular(&self, lambda: f64) -> Result<(), LinalgError> {
        let mu = self.nearest_eigenvalue(lambda);
        if (mu - lambda).abs() <= POLE_TOL * self.source_scale {
            Err(LinalgError::Pole {
                lambda,
                eigenvalue: mu,
            })
        } else {
            Ok(())
        }
    }

    /// Coordinates of `y` in the eigenbasis, `Vᵀ y`.
    pub fn to_eigenbasis(&self, y: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| (0..self.dim()).map(|i| self.frame[(i, k)] * y[i]).sum())
            .collect()
    }

    fn out_of_eigenbasis(&self, c: &[f64]) -> Vec<f64> {
        self.frame.mat_vec(c)
    }

    /// Solves `(A - λ) x = y` in the eigenbasis.
    pub fn resolvent_apply(&self, lambda: f64, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if y.len() != self.dim() {
            return Err(LinalgError::BadLength {
                expected: self.dim(),
                found: y.len(),
            });
        }
        self.check_regular(lambda)?;
        let c: Vec<f64> = self
            .to_eigenbasis(y)
            .iter()
            .zip(&self.eigenvalues)
            .map(|(ck, mu)| ck / (mu - lambda))
            .collect();
        Ok(self.out_of_eigenbasis(&c))
    }

    /// Applies `g` to the spectrum: `V diag(g(μₖ)) Vᵀ`.
    pub fn spectral_map(&self, g: impl Fn(f64) -> f64) -> SymmetricMatrix {
        let n = self.dim();
        let gv: Vec<f64> = self.eigenvalues.iter().map(|&mu| g(mu)).collect();
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n)
                    .map(|k| self.frame[(i, k)] * gv[k] * self.frame[(j, k)])
                    .sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out.symmetrized()
    }

    /// The full resolvent `(A - λ)⁻¹`.
    pub fn resolvent(&self, lambda: f64) -> Result<SymmetricMatrix, LinalgError> {
        self.check_regular(lambda)?;
        Ok(self.spectral_map(|mu| 1.0 / (mu - lambda)))
    }

    pub fn reconstruct(&self) -> SymmetricMatrix {
        self.spectral_map(|mu| mu)
    }

    pub fn default_cluster_tol(&self) -> f64 {
        CLUSTER_TOL * self.source_scale
    }

    /// Groups consecutive eigenvalues whose spacing is at most `cluster_tol`.
    pub fn clusters(&self, cluster_tol: f64) -> Vec<EigenCluster> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.dim() {
            let split = k == self.dim() || self.eigenvalues[k] - self.eigenvalues[k - 1] > cluster_tol;
            if split {
                let members = &self.eigenvalues[start..k];
                let value = members.iter().sum::<f64>() / members.len() as f64;
                out.push(EigenCluster {
                    value,
                    indices: start..k,
                });
                start = k;
            }
        }
        out
    }

    /// The ordered, disjoint open intervals of `ℝ ∖ spec(A)`: the left ray,
    /// one bounded gap per pair of consecutive distinct clusters, the right ray.
    pub fn gaps(&self, cluster_tol: f64) -> Vec<SpectralGap> {
        let points: Vec<f64> = self.clusters(cluster_tol).iter().map(|c| c.value).collect();
        let mut out = Vec::with_capacity(points.len() + 1);
        out.push(SpectralGap {
            lower: f64::NEG_INFINITY,
            upper: points[0],
            kind: GapKind::LeftUnbounded,
        });
        out.extend(points.windows(2).map(|w| SpectralGap::bounded(w[0], w[1])));
        out.push(SpectralGap {
            lower: points[points.len() - 1],
            upper: f64::INFINITY,
            kind: GapKind::RightUnbounded,
        });
        out
    }

    /// Bounded gap of `A` strictly containing `λ`, if any.
    pub fn bounded_gap_containing(&self, lambda: f64) -> Option<SpectralGap> {
        self.gaps(self.default_cluster_tol())
            .into_iter()
            .find(|g| g.is_bounded() && g.contains(lambda))
    }
}

/// Rayleigh-quotient refinement of each eigenvalue against the source matrix,
/// with residual products in double-double. Recovers eigenvalues that are
/// tiny relative to `‖A‖` to nearly full relative precision, which plain
/// rotations cannot.
pub fn refined_eigenvalues(a: &SymmetricMatrix, d: &SpectralDecomposition) -> Vec<f64> {
    let n = a.dim();
    let m = a.as_matrix();
    (0..n)
        .map(|k| {
            let x = d.frame.column(k);
            let ax: Vec<f64> = (0..n).map(|i| dot_compensated(m.row(i), &x)).collect();
            dot_compensated(&x, &ax) / dot_compensated(&x, &x)
        })
        .collect()
}

/// `dist(λ, spec(A))` with refined eigenvalues.
pub fn accurate_dist_to_spectrum(a: &SymmetricMatrix, lambda: f64) -> Result<f64, LinalgError> {
    let shifted = a.shifted(-lambda);
    let d = eigh(&shifted)?;
    Ok(refined_eigenvalues(&shifted, &d)
        .into_iter()
        .fold(f64::INFINITY, |m, mu| m.min(mu.abs())))
}

/// Spectral norm of a symmetric matrix.
pub fn operator_norm(m: &SymmetricMatrix) -> Result<f64, LinalgError> {
    Ok(eigh(m)?.operator_norm())
}

pub fn frobenius(m: &SymmetricMatrix) -> f64 {
    m.frobenius()
}

/// Checks `B ⪰ 0` up to the relative floor, returning its decomposition.
pub fn check_psd(b: &SymmetricMatrix) -> Result<SpectralDecomposition, LinalgError> {
    let d = eigh(b)?;
    let floor = -PSD_FLOOR * b.scale();
    if d.min_eigenvalue() < floor {
        return Err(LinalgError::NotPsd {
            eigenvalue: d.min_eigenvalue(),
        });
    }
    Ok(d)
}

/// Principal square root of a positive semi-definite matrix. Negative
/// eigenvalues above the floor, and positive ones at roundoff level, are set to zero.
pub fn psd_sqrt(b: &SymmetricMatrix) -> Result<SymmetricMatrix, LinalgError> {
    let d = check_psd(b)?;
    // Eigenvalues at roundoff level are zero; their square roots are not small.
    let floor = JACOBI_TOL * d.source_scale() * d.dim() as f64;
    Ok(d.spectral_map(|mu| if mu <= floor { 0.0 } else { mu.sqrt() }))
}

/// Smallest singular value of a general square matrix, `sqrt(λ_min(MᵀM))`.
pub fn smallest_singular_value(m: &Matrix) -> Result<f64, LinalgError> {
    let gram = m.transpose().matmul(m).symmetrized();
    Ok(eigh(&gram)?.min_eigenvalue().max(0.0).sqrt())
}

/// `‖a - b‖_2` for vectors.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    dot(&d, &d).sqrt()
}
