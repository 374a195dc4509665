//! Algebraic witnesses that are equivalent to protection: the closed-form
//! inverse, nilpotency, the pseudo-resolvent identity and the distance bounds.

use crate::linalg::{
    accurate_dist_to_spectrum, eigh, psd_sqrt, Matrix, SymmetricMatrix,
};

use super::{Pencil, ProtectionError, DEFAULT_TOL};

/// Nilpotency threshold: `‖Nᵏ‖_F ≤ NILPOTENCY_TOL · ‖N‖_Fᵏ`.
pub const NILPOTENCY_TOL: f64 = 1e-10;

/// `M = R - t R B R` with `R = (A - λ)⁻¹`, and how far it is from inverting
/// `A + tB - λ`.
#[derive(Clone, Debug)]
pub struct InverseFormula {
    pub inverse: SymmetricMatrix,
    /// `‖(A + tB - λ) M - I‖_F`.
    pub defect: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoResolventDefect {
    /// `‖R(z) - R(w) - (w - z) R(z) R(w)‖_F`.
    pub absolute: f64,
    /// `absolute / max(1, ‖R(z)‖ + ‖R(w)‖ + |w - z| ‖R(z)‖ ‖R(w)‖)`.
    pub relative: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceBounds {
    pub lower: f64,
    /// Only defined for `|t| > η / ν`.
    pub upper: Option<f64>,
    pub actual: f64,
    /// `‖(A - λ)⁻¹ B (A - λ)⁻¹‖₂`.
    pub nu: f64,
    /// `‖(A - λ)⁻¹‖₂`.
    pub eta: f64,
}

impl DistanceBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.actual && self.upper.is_none_or(|u| self.actual <= u)
    }
}

impl Pencil {
    /// `(A - λ)⁻¹ B`, the operator whose nilpotency characterizes protection.
    fn resolvent_times_b(&self, lambda: f64) -> Result<Matrix, ProtectionError> {
        let r = self.a_eig.resolvent(lambda)?;
        Ok(r.as_matrix() * self.b.as_matrix())
    }

    /// Evaluates the candidate inverse `(A - λ)⁻¹ - t (A - λ)⁻¹ B (A - λ)⁻¹`
    /// and its defect. The defect is at rounding level exactly when `λ` is
    /// protected; otherwise it grows like `t² ‖B R B R‖`.
    pub fn shifted_inverse_formula(&self, lambda: f64, t: f64) -> Result<InverseFormula, ProtectionError> {
        let r = self.a_eig.resolvent(lambda)?;
        let rbr = r.as_matrix() * self.b.as_matrix() * r.as_matrix();
        let inverse = (r.as_matrix() - &rbr.scaled(t)).symmetrized();
        let pencil = self.a.add_scaled(t, &self.b).shifted(-lambda);
        let product = pencil.as_matrix() * inverse.as_matrix();
        let defect = (&product - &Matrix::identity(self.dim())).frobenius();
        Ok(InverseFormula { inverse, defect })
    }

    /// Smallest `k ≤ n` with `((A - λ)⁻¹ B)ᵏ` negligible, if any.
    ///
    /// For `B ≠ 0` this is `Some(2)` exactly at protected `λ`; a zero `B`
    /// gives `Some(1)`.
    pub fn nilpotency_index(&self, lambda: f64) -> Result<Option<usize>, ProtectionError> {
        let n_mat = self.resolvent_times_b(lambda)?;
        let base = n_mat.frobenius();
        let mut power = n_mat.clone();
        for k in 1..=self.dim() {
            if k > 1 {
                power = power.matmul(&n_mat);
            }
            if power.frobenius() <= NILPOTENCY_TOL * base.powi(k as i32) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Tests the resolvent identity on `s ↦ R(s) = (R₀ - s R₀ B R₀) B`,
    /// `R₀ = (A - λ)⁻¹`.
    ///
    /// `(A - λ + sB)⁻¹ B` satisfies `G(z) - G(w) = (w - z) G(z) G(w)`. With
    /// `N = R₀ B` the candidate `R(s) = N - sN²` leaves the defect
    /// `|w - z| ‖(z + w) N³ - zw N⁴‖`, which vanishes for all `z, w` iff `N³ = 0`.
    pub fn pseudo_resolvent_defect(
        &self,
        lambda: f64,
        z: f64,
        w: f64,
    ) -> Result<PseudoResolventDefect, ProtectionError> {
        let r0 = self.a_eig.resolvent(lambda)?;
        let r0 = r0.as_matrix();
        let b = self.b.as_matrix();
        let rbr = r0 * b * r0;
        let family = |s: f64| (r0 - &rbr.scaled(s)).matmul(b);
        let rz = family(z);
        let rw = family(w);
        let rhs = (&rz * &rw).scaled(w - z);
        let absolute = (&(&rz - &rw) - &rhs).frobenius();
        let (nz, nw) = (rz.frobenius(), rw.frobenius());
        let scale = 1f64.max(nz + nw + (w - z).abs() * nz * nw);
        Ok(PseudoResolventDefect {
            absolute,
            relative: absolute / scale,
        })
    }

    /// Two-sided bounds on `dist(λ, spec(A + tB))` for a protected `λ`:
    /// `1/(|t|ν + η) ≤ dist ≤ 1/(|t|ν - η)`, the upper one for `|t| > η/ν`.
    ///
    /// `actual` is measured independently from refined eigenvalues of
    /// `A + tB - λ`, so it stays accurate when it is many orders of magnitude
    /// below `‖A + tB‖`.
    pub fn distance_bounds(&self, lambda: f64, t: f64) -> Result<DistanceBounds, ProtectionError> {
        let check = self.is_protected(lambda, DEFAULT_TOL)?;
        if !check.protected {
            return Err(ProtectionError::NotProtected {
                lambda,
                residual: check.residual.unwrap_or(f64::INFINITY),
            });
        }
        let r = self.a_eig.resolvent(lambda)?;
        let rbr = (r.as_matrix() * self.b.as_matrix() * r.as_matrix()).symmetrized();
        let nu = eigh(&rbr)?.operator_norm();
        let eta = 1.0 / self.a_eig.dist_to_spectrum(lambda);
        let lower = 1.0 / (t.abs() * nu + eta);
        let upper = (t.abs() * nu > eta).then(|| 1.0 / (t.abs() * nu - eta));
        let actual = accurate_dist_to_spectrum(&self.a.add_scaled(t, &self.b), lambda)?;
        Ok(DistanceBounds {
            lower,
            upper,
            actual,
            nu,
            eta,
        })
    }

    /// Eigenvalues of `B^{1/2} (A - λ)⁻¹ B^{1/2}`. Away from zero they are the
    /// spectrum of `B (A - λ)⁻¹` (and of `(A - λ)⁻¹ B`), which is therefore real.
    pub fn symmetrized_spectrum(&self, lambda: f64) -> Result<Vec<f64>, ProtectionError> {
        let r = self.a_eig.resolvent(lambda)?;
        let root = psd_sqrt(&self.b)?;
        let s = (root.as_matrix() * r.as_matrix() * root.as_matrix()).symmetrized();
        Ok(eigh(&s)?.eigenvalues().to_vec())
    }

    /// Parameters `t` with `λ ∈ spec(A + tB)`.
    ///
    /// From `A + tB - λ = (A - λ)(I + t (A - λ)⁻¹ B)`, `λ` is an eigenvalue
    /// exactly when `-1/t` is a nonzero eigenvalue `κ` of `(A - λ)⁻¹ B`.
    /// Eigenvalues with `|κ| ≤ κ_tol · ‖B‖_F / dist(λ, spec A)` are treated
    /// as zero. Returned ascending, with multiplicity.
    pub fn hitting_parameters(&self, lambda: f64, kappa_tol: f64) -> Result<Vec<f64>, ProtectionError> {
        let kappas = self.symmetrized_spectrum(lambda)?;
        let kscale = self.b_norm / self.a_eig.dist_to_spectrum(lambda);
        let mut ts: Vec<f64> = kappas
            .into_iter()
            .filter(|k| k.abs() > kappa_tol * kscale)
            .map(|k| -1.0 / k)
            .collect();
        ts.sort_by(f64::total_cmp);
        Ok(ts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Pencil {
        Pencil::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap()
    }

    fn unprotected() -> Pencil {
        Pencil::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[1.0, 0.0]),
        )
        .unwrap()
    }

    #[test]
    fn inverse_formula_examples() {
        let p = example();
        let f = p.shifted_inverse_formula(0.0, 0.0).unwrap();
        assert_eq!(f.defect, 0.0);
        assert_eq!(f.inverse.as_matrix().as_slice(), &[1.0, 0.0, 0.0, -1.0]);

        let f = p.shifted_inverse_formula(0.0, 3.0).unwrap();
        assert!(f.defect <= 1e-8 * 4.0, "{}", f.defect);

        // (A + B) = diag(2, -1), M = diag(0, -1)
        let f = unprotected().shifted_inverse_formula(0.0, 1.0).unwrap();
        assert_eq!(f.inverse.as_matrix().as_slice(), &[0.0, 0.0, 0.0, -1.0]);
        assert!(f.defect > 0.1);
    }

    #[test]
    fn nilpotency_examples() {
        let p = example();
        let n = p.resolvent_times_b(0.0).unwrap();
        let expected = [0.5, 0.5, -0.5, -0.5];
        assert_eq!(n.as_slice(), &expected);
        assert_eq!(p.nilpotency_index(0.0).unwrap(), Some(2));

        let i = Pencil::new(SymmetricMatrix::identity(2), SymmetricMatrix::identity(2)).unwrap();
        assert_eq!(i.nilpotency_index(0.0).unwrap(), None);

        let zero = Pencil::new(SymmetricMatrix::identity(2), SymmetricMatrix::zeros(2)).unwrap();
        assert_eq!(zero.nilpotency_index(0.5).unwrap(), Some(1));
    }

    #[test]
    fn pseudo_resolvent_examples() {
        let d = example().pseudo_resolvent_defect(0.0, 1.0, 2.0).unwrap();
        assert!(d.absolute <= 1e-10 && d.relative <= 1e-10);

        let d = unprotected().pseudo_resolvent_defect(0.3, 1.7, 1.7).unwrap();
        assert_eq!(d.absolute, 0.0);

        let d = unprotected().pseudo_resolvent_defect(0.0, 1.0, -1.0).unwrap();
        assert!(d.absolute > 1e-3 && d.relative > 1e-3, "{d:?}");
    }

    #[test]
    fn pseudo_resolvent_matches_true_pencil_resolvent() {
        // For protected λ, R(s) = (A - λ + sB)⁻¹ B.
        let p = example();
        for s in [-4.0, 0.5, 7.0] {
            let family = p.shifted_inverse_formula(0.0, s).unwrap().inverse;
            let direct = crate::linalg::eigh(&p.a().add_scaled(s, p.b()))
                .unwrap()
                .resolvent(0.0)
                .unwrap();
            let diff = (family.as_matrix() - direct.as_matrix()).frobenius();
            assert!(diff < 1e-13, "s = {s}: {diff}");
        }
    }

    #[test]
    fn distance_bound_examples() {
        let p = example();
        let d = p.distance_bounds(0.0, 4.0).unwrap();
        assert!((d.nu - 1.0).abs() < 1e-14 && (d.eta - 1.0).abs() < 1e-14);
        assert!((d.lower - 0.2).abs() < 1e-14);
        assert!((d.upper.unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((d.actual - 1.0 / (2.0 + 5f64.sqrt())).abs() < 1e-14);
        assert!(d.holds());

        let d = p.distance_bounds(0.0, 0.0).unwrap();
        assert_eq!((d.lower, d.upper), (1.0, None));
        assert!((d.actual - 1.0).abs() < 1e-15);

        let d = p.distance_bounds(0.0, -1e3).unwrap();
        assert!((d.actual * 1e3 - 1.0).abs() < 2e-3);
        assert!(d.holds());
    }

    #[test]
    fn distance_bounds_need_protection() {
        assert!(matches!(
            unprotected().distance_bounds(0.0, 2.0),
            Err(ProtectionError::NotProtected { .. })
        ));
    }

    #[test]
    fn symmetrized_spectrum_and_hits() {
        // B (A - λ)⁻¹ = diag(1, 0) at λ = 0: κ = {0, 1}, so t = -1 hits 0.
        let p = unprotected();
        let k = p.symmetrized_spectrum(0.0).unwrap();
        assert!(k[0].abs() < 1e-15 && (k[1] - 1.0).abs() < 1e-15);
        assert_eq!(p.hitting_parameters(0.0, 1e-10).unwrap(), vec![-1.0]);

        // Protected: κ all zero, nothing ever hits.
        assert!(example().hitting_parameters(0.0, 1e-10).unwrap().is_empty());
    }
}
