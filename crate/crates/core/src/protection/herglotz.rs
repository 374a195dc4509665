//! Scalar Herglotz functions `f(λ) = Σₖ ρₖ / (μₖ - λ)` and root isolation
//! inside a single spectral gap.

use crate::linalg::{GapKind, SpectralDecomposition, SpectralGap};

use super::ProtectionError;

/// Relative offset from each gap endpoint at which the sign of `f` is read.
pub const ENDPOINT_OFFSET: f64 = 1e-9;
/// Bisection stops once the bracket is below this, relative to
/// `max(1, |a|, |b|)`.
pub const ROOT_TOL: f64 = 1e-14;
pub const BISECTION_MAX_ITER: usize = 80;

/// Pole/weight form of `λ ↦ ⟨y, (A - λ)⁻¹ y⟩`.
///
/// Poles are the clustered eigenvalues of `A`, weights the squared norms of
/// the projections of `y` onto the matching eigenspaces. Between consecutive
/// poles `f` is strictly increasing as soon as any weight is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct HerglotzScalar {
    poles: Vec<f64>,
    weights: Vec<f64>,
}

impl HerglotzScalar {
    /// Builds `f` directly from poles and weights. Poles must be strictly
    /// increasing and weights non-negative.
    pub fn new(poles: Vec<f64>, weights: Vec<f64>) -> Result<Self, ProtectionError> {
        if poles.is_empty() || poles.len() != weights.len() {
            return Err(ProtectionError::InvalidHerglotz(
                "poles and weights must be non-empty and of equal length",
            ));
        }
        if poles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ProtectionError::InvalidHerglotz("poles must be strictly increasing"));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(ProtectionError::InvalidHerglotz("weights must be finite and non-negative"));
        }
        Ok(Self { poles, weights })
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.poles
            .iter()
            .zip(&self.weights)
            .map(|(mu, rho)| rho / (mu - lambda))
            .sum()
    }

    /// `f′(λ) = Σₖ ρₖ / (μₖ - λ)²`.
    pub fn derivative(&self, lambda: f64) -> f64 {
        self.poles
            .iter()
            .zip(&self.weights)
            .map(|(mu, rho)| {
                let d = mu - lambda;
                rho / (d * d)
            })
            .sum()
    }

    /// Gaps of the pole set, in order: left ray, bounded gaps, right ray.
    pub fn gaps(&self) -> Vec<SpectralGap> {
        let mut out = vec![SpectralGap {
            lower: f64::NEG_INFINITY,
            upper: self.poles[0],
            kind: GapKind::LeftUnbounded,
        }];
        out.extend(self.poles.windows(2).map(|w| SpectralGap::bounded(w[0], w[1])));
        out.push(SpectralGap {
            lower: self.poles[self.poles.len() - 1],
            upper: f64::INFINITY,
            kind: GapKind::RightUnbounded,
        });
        out
    }
}

/// `⟨y, (A - λ)⁻¹ y⟩` in pole/weight form, using the default clustering of `d`.
pub fn herglotz_from(d: &SpectralDecomposition, y: &[f64]) -> Result<HerglotzScalar, ProtectionError> {
    herglotz_with_tol(d, y, d.default_cluster_tol())
}

pub fn herglotz_with_tol(
    d: &SpectralDecomposition,
    y: &[f64],
    cluster_tol: f64,
) -> Result<HerglotzScalar, ProtectionError> {
    if y.len() != d.dim() {
        return Err(ProtectionError::DimensionMismatch {
            expected: d.dim(),
            found: y.len(),
        });
    }
    if y.iter().all(|&x| x == 0.0) {
        return Err(ProtectionError::ZeroProbe);
    }
    let coords = d.to_eigenbasis(y);
    let (poles, weights) = d
        .clusters(cluster_tol)
        .into_iter()
        .map(|c| {
            let w: f64 = coords[c.indices].iter().map(|x| x * x).sum();
            (c.value, w)
        })
        .unzip();
    Ok(HerglotzScalar { poles, weights })
}

/// The unique root of `h` inside `gap`, if there is one.
///
/// Unbounded gaps never contain a root: every term is positive left of the
/// poles and negative right of them. In a bounded gap `(a, b)` the sign of
/// `f` is read at `a + ε` and `b - ε` with `ε = 1e-9 (b - a)`; a sign change
/// is refined by bisection, which always converges since `f` is increasing.
pub fn gap_root(h: &HerglotzScalar, gap: &SpectralGap) -> Option<f64> {
    if !gap.is_bounded() {
        return None;
    }
    let eps = ENDPOINT_OFFSET * gap.width();
    let mut lo = gap.lower + eps;
    let mut hi = gap.upper - eps;
    let f_lo = h.eval(lo);
    let f_hi = h.eval(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return None;
    }
    let tol = ROOT_TOL * 1f64.max(gap.lower.abs()).max(gap.upper.abs());
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = h.eval(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, SymmetricMatrix};

    #[test]
    fn weights_from_diagonal_examples() {
        let d = eigh(&SymmetricMatrix::from_diagonal(&[1.0, -1.0])).unwrap();
        let s = 0.5f64.sqrt();
        let h = herglotz_from(&d, &[s, s]).unwrap();
        assert_eq!(h.poles(), &[-1.0, 1.0]);
        assert!((h.weights()[0] - 0.5).abs() < 1e-15 && (h.weights()[1] - 0.5).abs() < 1e-15);

        let d = eigh(&SymmetricMatrix::from_diagonal(&[5.0])).unwrap();
        let h = herglotz_from(&d, &[2.0]).unwrap();
        assert_eq!((h.poles(), h.weights()), (&[5.0][..], &[4.0][..]));

        let d = eigh(&SymmetricMatrix::from_diagonal(&[1.0, 1.0, 2.0])).unwrap();
        let h = herglotz_from(&d, &[1.0, 1.0, 0.0]).unwrap();
        assert_eq!((h.poles(), h.weights()), (&[1.0, 2.0][..], &[2.0, 0.0][..]));
    }

    #[test]
    fn zero_probe_is_rejected() {
        let d = eigh(&SymmetricMatrix::from_diagonal(&[1.0, 2.0])).unwrap();
        assert!(matches!(herglotz_from(&d, &[0.0, 0.0]), Err(ProtectionError::ZeroProbe)));
    }

    #[test]
    fn root_examples() {
        let h = HerglotzScalar::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let gaps = h.gaps();
        assert!(gap_root(&h, &gaps[1]).unwrap().abs() < 1e-14);
        assert_eq!(gap_root(&h, &gaps[2]), None);
        assert_eq!(gap_root(&h, &gaps[0]), None);

        // 1/(0-λ) + 3/(2-λ) = 0  ⇒  λ = 1/2
        let h = HerglotzScalar::new(vec![0.0, 2.0], vec![1.0, 3.0]).unwrap();
        let root = gap_root(&h, &SpectralGap::bounded(0.0, 2.0)).unwrap();
        assert!((root - 0.5).abs() < 1e-14, "{root}");
    }

    #[test]
    fn same_sign_gap_has_no_root() {
        // Zero weight at the right pole keeps f negative on (0, 1).
        let h = HerglotzScalar::new(vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 0.1]).unwrap();
        assert_eq!(gap_root(&h, &SpectralGap::bounded(0.0, 1.0)), None);
        assert!(gap_root(&h, &SpectralGap::bounded(1.0, 3.0)).is_some());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(HerglotzScalar::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(HerglotzScalar::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(HerglotzScalar::new(vec![], vec![]).is_err());
    }
}
