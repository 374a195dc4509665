mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{protected_instance, random_psd, random_symmetric, rng, unprotected_instance};
use protset_core::linalg::{
    determinant, eigh, smallest_singular_value, Matrix, SpectralGap, SymmetricMatrix,
};
use protset_core::protection::{
    brute_force_unprotected, gap_root, herglotz_from, spectral_flow, symmetric_log_grid,
    HerglotzScalar, Pencil, DEFAULT_TOL,
};

const INVERSE_TS: [f64; 6] = [-1e3, -10.0, -1.0, 1.0, 10.0, 1e3];
const PSEUDO_PAIRS: [(f64, f64); 4] = [(1.0, 2.0), (-3.0, 0.5), (10.0, -7.0), (0.25, 4.0)];

fn herglotz() -> impl Strategy<Value = HerglotzScalar> {
    (2usize..8).prop_flat_map(|m| {
        (
            prop::collection::vec(-10.0..10.0f64, m),
            prop::collection::vec(0.0..2.0f64, m),
        )
            .prop_filter_map("distinct poles", |(mut p, w)| {
                p.sort_by(f64::total_cmp);
                if p.windows(2).any(|x| x[1] - x[0] < 1e-2) {
                    return None;
                }
                HerglotzScalar::new(p, w).ok()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_matches_central_difference(h in herglotz(), fracs in prop::collection::vec(0.05..0.95f64, 5)) {
        prop_assume!(h.total_weight() > 1e-3);
        for (g, frac) in h.gaps().iter().filter(|g| g.is_bounded()).zip(fracs.iter().cycle()) {
            let x = g.lower + frac * g.width();
            let delta = 1e-5 * g.width();
            let fd = (h.eval(x + delta) - h.eval(x - delta)) / (2.0 * delta);
            let exact = h.derivative(x);
            prop_assert!(exact > 0.0);
            prop_assert!((fd - exact).abs() <= 1e-6 * exact, "fd {} vs {}", fd, exact);
        }
    }

    #[test]
    fn roots_are_unique_per_gap_and_absent_on_rays(h in herglotz()) {
        prop_assume!(h.total_weight() > 0.0);
        for g in h.gaps() {
            let root = gap_root(&h, &g);
            if !g.is_bounded() {
                prop_assert!(root.is_none());
                // Independent sign check on the rays.
                let probe = if g.lower.is_finite() { g.lower + 1.0 } else { g.upper - 1.0 };
                let f = h.eval(probe);
                let expected_sign_ok = if g.lower.is_finite() { f <= 0.0 } else { f >= 0.0 };
                prop_assert!(expected_sign_ok);
                continue;
            }
            let samples = 400;
            let mut changes = 0;
            let mut prev = None;
            for k in 1..samples {
                let x = g.lower + g.width() * k as f64 / samples as f64;
                let s = h.eval(x).signum();
                if let Some(p) = prev {
                    if p != s {
                        changes += 1;
                    }
                }
                prev = Some(s);
            }
            prop_assert!(changes <= 1);
            if let Some(r) = root {
                prop_assert!(g.contains(r));
                prop_assert!(h.eval(r).abs() <= 1e-6 * (1.0 + h.derivative(r) * g.width()));
            }
        }
    }
}

#[test]
fn herglotz_matches_quadratic_form() {
    let mut r = rng(11);
    for _ in 0..100 {
        let n = r.gen_range(1..=8);
        let a = random_symmetric(&mut r, n, 4.0);
        let y: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let d = eigh(&a).unwrap();
        let h = herglotz_from(&d, &y).unwrap();
        let ynorm2: f64 = y.iter().map(|x| x * x).sum();
        assert!((h.total_weight() - ynorm2).abs() <= 1e-10 * ynorm2);
        for g in d.gaps(d.default_cluster_tol()) {
            let lambda = if g.is_bounded() {
                0.5 * (g.lower + g.upper)
            } else if g.lower.is_finite() {
                g.lower + 0.7
            } else {
                g.upper - 0.7
            };
            let x = d.resolvent_apply(lambda, &y).unwrap();
            let direct: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let via_h = h.eval(lambda);
            assert!((direct - via_h).abs() <= 1e-10 * direct.abs().max(1.0), "{direct} vs {via_h}");
        }
    }
}

#[test]
fn protected_instances_pass_every_witness() {
    let mut r = rng(21);
    let grid = symmetric_log_grid(-2, 6, 25);
    for _ in 0..40 {
        let inst = protected_instance(&mut r);
        let p = Pencil::new(inst.a.clone(), inst.b.clone()).unwrap();
        let lambda = inst.lambda;
        assert!(p.is_protected(lambda, DEFAULT_TOL).unwrap().protected);
        assert!(matches!(p.nilpotency_index(lambda).unwrap(), Some(1 | 2)));
        for (z, w) in PSEUDO_PAIRS {
            assert!(p.pseudo_resolvent_defect(lambda, z, w).unwrap().relative <= 1e-8);
        }
        for t in INVERSE_TS {
            let f = p.shifted_inverse_formula(lambda, t).unwrap();
            assert!(f.defect <= 1e-8 * (1.0 + t.abs()), "t = {t}: {}", f.defect);
        }
        assert!(p.hitting_parameters(lambda, 1e-10).unwrap().is_empty());

        // The oracle never comes closer than the guaranteed lower bound.
        let far = p.distance_bounds(lambda, 1e6).unwrap();
        let hit_tol = 0.5 * far.lower;
        let never = brute_force_unprotected(&inst.a, &inst.b, &[lambda], &grid, hit_tol).unwrap();
        assert_eq!(never, vec![0]);
    }
}

#[test]
fn unprotected_instances_fail_every_witness() {
    let mut r = rng(22);
    for _ in 0..40 {
        let inst = unprotected_instance(&mut r);
        let p = Pencil::new(inst.a.clone(), inst.b.clone()).unwrap();
        let lambda = inst.lambda;
        assert!(!p.is_protected(lambda, DEFAULT_TOL).unwrap().protected);
        assert!(!matches!(p.nilpotency_index(lambda).unwrap(), Some(1 | 2)));
        assert!(PSEUDO_PAIRS
            .iter()
            .any(|&(z, w)| p.pseudo_resolvent_defect(lambda, z, w).unwrap().relative > 1e-8));
        assert!(INVERSE_TS
            .iter()
            .any(|&t| p.shifted_inverse_formula(lambda, t).unwrap().defect > 1e-8 * (1.0 + t.abs())));

        let ts = p.hitting_parameters(lambda, 1e-10).unwrap();
        assert!(!ts.is_empty());
        for t in ts {
            let d = eigh(&inst.a.add_scaled(t, &inst.b)).unwrap();
            let scale = inst.a.add_scaled(t, &inst.b).scale();
            assert!(d.dist_to_spectrum(lambda) <= 1e-9 * scale, "t = {t}");
        }
    }
}

#[test]
fn distance_bounds_sandwich() {
    let mut r = rng(23);
    for _ in 0..40 {
        let inst = protected_instance(&mut r);
        let p = Pencil::new(inst.a, inst.b).unwrap();
        let b0 = p.distance_bounds(inst.lambda, 0.0).unwrap();
        for mag in [2.0 * b0.eta / b0.nu, 10.0, 1e2, 1e4] {
            for t in [-mag, mag] {
                let d = p.distance_bounds(inst.lambda, t).unwrap();
                assert!(d.holds(), "t = {t}: {d:?}");
                if mag > b0.eta / b0.nu {
                    assert!(d.upper.is_some());
                }
            }
        }
    }
}

#[test]
fn trace_moves_with_nonzero_perturbation() {
    let mut r = rng(24);
    for _ in 0..50 {
        let n = r.gen_range(1..=8);
        let a = random_symmetric(&mut r, n, 5.0);
        let rank = r.gen_range(1..=n);
        let b = random_psd(&mut r, n, rank);
        let grid = [-3.0, -1.0, 0.0, 0.5, 1.0, 7.0];
        let flow = spectral_flow(&a, &b, &grid).unwrap();
        assert!(flow.trace_defect(&a, &b) <= 1e-9);
        for row in &flow.branches {
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(row.len(), n);
        }
        let s0: f64 = flow.branches[2].iter().sum();
        let s1: f64 = flow.branches[4].iter().sum();
        assert!((s1 - s0 - b.trace()).abs() <= 1e-9 * (1.0 + s0.abs() + b.trace()));
        assert!(s1 != s0);
    }
}

#[test]
fn nonzero_spectrum_of_b_times_inverse_is_symmetrizable() {
    let mut r = rng(25);
    for _ in 0..40 {
        let n = r.gen_range(2..=6);
        let a = random_symmetric(&mut r, n, 3.0);
        let rank = r.gen_range(1..=n);
        let b = random_psd(&mut r, n, rank);
        let d = eigh(&a).unwrap();
        if d.dist_to_spectrum(0.0) < 1e-2 {
            continue;
        }
        let p = Pencil::new(a.clone(), b.clone()).unwrap();
        let kappas = p.symmetrized_spectrum(0.0).unwrap();
        let a_inv = d.resolvent(0.0).unwrap();
        let b_a_inv = b.as_matrix() * a_inv.as_matrix();
        let scale = b_a_inv.frobenius();
        for &k in kappas.iter().filter(|k| k.abs() > 1e-8 * scale) {
            let shifted = &b_a_inv - &Matrix::identity(n).scaled(k);
            let smin = smallest_singular_value(&shifted).unwrap();
            assert!(smin <= 1e-6 * scale, "κ = {k}: σ_min = {smin}");
            // Characteristic polynomial changes sign or vanishes across a simple κ.
            let mult = kappas.iter().filter(|&&x| (x - k).abs() <= 1e-6 * scale).count();
            if mult == 1 {
                let eps = 1e-6 * scale.max(k.abs());
                let left = determinant(&(&b_a_inv - &Matrix::identity(n).scaled(k - eps)));
                let right = determinant(&(&b_a_inv - &Matrix::identity(n).scaled(k + eps)));
                assert!(left.sign * right.sign <= 0);
            }
        }
        // A point away from every κ is not in the spectrum.
        let gap_point = kappas.iter().fold(0.0_f64, |m, k| m.max(k.abs())) + 1.0;
        let shifted = &b_a_inv - &Matrix::identity(n).scaled(gap_point);
        assert!(smallest_singular_value(&shifted).unwrap() > 1e-3);
    }
}

#[test]
fn pencil_factorizes_through_b_times_inverse() {
    let mut r = rng(26);
    for _ in 0..20 {
        let n = r.gen_range(2..=6);
        let a = random_symmetric(&mut r, n, 3.0);
        let b = random_psd(&mut r, n, 2.min(n));
        let d = eigh(&a).unwrap();
        if d.dist_to_spectrum(0.0) < 1e-2 {
            continue;
        }
        let a_inv = d.resolvent(0.0).unwrap();
        for z in [-2.5, 0.3, 11.0] {
            let lhs = a.add_scaled(z, &b);
            let factor = &Matrix::identity(n) + &(b.as_matrix() * a_inv.as_matrix()).scaled(z);
            let rhs = factor.matmul(a.as_matrix());
            assert!((lhs.as_matrix() - &rhs).frobenius() <= 1e-9 * lhs.scale() * a_inv.scale());
        }
    }
}

#[test]
fn residual_is_scale_invariant() {
    let mut r = rng(27);
    for _ in 0..20 {
        let inst = unprotected_instance(&mut r);
        let r1 = Pencil::new(inst.a.clone(), inst.b.clone())
            .unwrap()
            .protection_residual(inst.lambda)
            .unwrap();
        let c = 7.5;
        let r2 = Pencil::new(inst.a.scaled(c), inst.b.scaled(c))
            .unwrap()
            .protection_residual(c * inst.lambda)
            .unwrap();
        assert!((r1 - r2).abs() <= 1e-10 * r1.max(1e-12));
        assert!(r1 > 0.0 && r1 <= 1.0 + 1e-12);
    }
}

#[test]
fn protected_set_reports_at_most_one_point_per_gap() {
    let mut r = rng(28);
    for _ in 0..40 {
        let inst = protected_instance(&mut r);
        let report = Pencil::new(inst.a, inst.b).unwrap().protected_set(DEFAULT_TOL).unwrap();
        let mut gaps: Vec<SpectralGap> = report.protected_points.iter().map(|p| p.gap).collect();
        let before = gaps.len();
        gaps.dedup();
        assert_eq!(before, gaps.len());
        for p in &report.protected_points {
            assert!(p.gap.is_bounded() && p.gap.contains(p.lambda));
            assert!(p.residual <= DEFAULT_TOL);
        }
        assert!(report
            .protected_points
            .iter()
            .any(|p| (p.lambda - inst.lambda).abs() < 1e-9));
    }
}

#[test]
fn indefinite_perturbation_protects_an_interval() {
    let a = SymmetricMatrix::from_diagonal(&[1.0, -1.0]);
    let b = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    assert!(Pencil::new(a.clone(), b.clone()).is_err());
    let lambdas: Vec<f64> = (0..=20).map(|k| -0.95 + 0.095 * k as f64).collect();
    let never =
        brute_force_unprotected(&a, &b, &lambdas, &symmetric_log_grid(-2, 6, 25), 1e-3).unwrap();
    assert_eq!(never.len(), lambdas.len());
}
