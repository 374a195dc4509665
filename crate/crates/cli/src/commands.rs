//! Subcommand implementations.

use std::path::Path;

use protset_core::linalg::{accurate_dist_to_spectrum, SymmetricMatrix};
use protset_core::protection::{
    brute_force_unprotected, linear_grid, spectral_flow, Pencil, ProtectionError, DEFAULT_TOL,
};
use protset_core::realization::{pencil_spectrum_wide, DEFAULT_PENCIL_RESOLUTION};

use crate::error::CliError;
use crate::io::{fmt_real, load_matrix, to_json_bytes, write_atomic, MatrixFile};
use crate::report::{AnalysisReport, InputDigest, Inputs};
use crate::{AnalyzeArgs, FlowArgs, RealizeArgs, VerifyArgs};

const MAX_FLOW_STEPS: usize = 1_000_000;
const INVERSE_TS: [f64; 6] = [-1e3, -10.0, -1.0, 1.0, 10.0, 1e3];
const PSEUDO_PAIRS: [(f64, f64); 4] = [(1.0, 2.0), (-3.0, 0.5), (10.0, -7.0), (0.25, 4.0)];
const IDENTITY_TOL: f64 = 1e-8;
const KAPPA_TOL: f64 = 1e-10;
const HIT_CONFIRM_TOL: f64 = 1e-9;
const ROUND_TRIP_TOL: f64 = 1e-9;
const PENCIL_SEARCH: f64 = 1e6;

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("tolerance must be positive and finite, got {tol}")))
    }
}

fn digest(m: &crate::io::LoadedMatrix) -> InputDigest {
    InputDigest {
        sha256: m.sha256.clone(),
        label: m.label.clone(),
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    let a = load_matrix(&args.a)?;
    let b = load_matrix(&args.b)?;
    let inputs = Inputs {
        a: digest(&a),
        b: digest(&b),
    };
    let pencil = Pencil::new(a.matrix, b.matrix)?;
    let report = pencil.protected_set(args.tol)?;
    let gaps = pencil.a_spectrum().gaps(report.cluster_tol);
    let doc = AnalysisReport::new(inputs, &report, &gaps);
    write_atomic(&args.out, &to_json_bytes(&doc)?)?;
    for p in report.points() {
        println!("{}", fmt_real(p));
    }
    Ok(())
}

fn write_matrix(path: &Path, m: &SymmetricMatrix, label: String) -> Result<(), CliError> {
    write_atomic(path, &to_json_bytes(&MatrixFile::from_symmetric(m, label))?)
}

pub fn realize(args: &RealizeArgs) -> Result<(), CliError> {
    let pair = protset_core::realization::realize(&args.points, args.weights.as_deref())?;
    let set = pair.points.iter().map(|&p| fmt_real(p)).collect::<Vec<_>>().join(", ");
    write_matrix(&args.out_a, &pair.a, format!("A realizing {{{set}}}"))?;
    write_matrix(&args.out_b, &pair.b, format!("B realizing {{{set}}}"))?;
    println!(
        "wrote {n}x{n} pair to {} and {}",
        args.out_a.display(),
        args.out_b.display(),
        n = pair.dim()
    );
    if !args.verify {
        return Ok(());
    }

    // Certify what was written, not what is in memory.
    let a = load_matrix(&args.out_a)?;
    let b = load_matrix(&args.out_b)?;
    let pencil = Pencil::new(a.matrix, b.matrix)?;
    let report = pencil.protected_set(DEFAULT_TOL)?;
    let tol = ROUND_TRIP_TOL * pencil.scale();
    let mut matched = vec![false; report.protected_points.len()];
    let mut certified = 0;
    for &p in &pair.points {
        let hit = report
            .protected_points
            .iter()
            .position(|q| (q.lambda - p).abs() <= tol);
        match hit {
            Some(i) => {
                matched[i] = true;
                certified += 1;
                let q = &report.protected_points[i];
                println!("  {}  certified  recovered {}  residual {:.3e}", fmt_real(p), fmt_real(q.lambda), q.residual);
            }
            None => println!("  {}  missing", fmt_real(p)),
        }
    }
    for (q, _) in report.protected_points.iter().zip(&matched).filter(|(_, m)| !**m) {
        println!("  {}  unexpected", fmt_real(q.lambda));
    }
    let m = pair.points.len();
    println!("{certified}/{m} points certified");
    let extras = matched.iter().filter(|m| !**m).count();
    if certified < m || extras > 0 {
        return Err(CliError::Inconsistent(format!(
            "recovered protected set differs from the prescribed one ({certified}/{m} certified, {extras} unexpected)"
        )));
    }
    Ok(())
}

pub fn flow(args: &FlowArgs) -> Result<(), CliError> {
    if !(args.t_min.is_finite() && args.t_max.is_finite() && args.t_min < args.t_max) {
        return Err(CliError::Usage(format!(
            "--t-min must be below --t-max and both finite, got {} and {}",
            args.t_min, args.t_max
        )));
    }
    if !(2..=MAX_FLOW_STEPS).contains(&args.t_steps) {
        return Err(CliError::Usage(format!(
            "--t-steps must be in 2..={MAX_FLOW_STEPS}, got {}",
            args.t_steps
        )));
    }
    let a = load_matrix(&args.a)?;
    let b = load_matrix(&args.b)?;
    let grid = linear_grid(args.t_min, args.t_max, args.t_steps);
    let sample = spectral_flow(&a.matrix, &b.matrix, &grid)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let n = a.matrix.dim();
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=n).map(|k| format!("lambda_{k}")))
        .collect();
    let csv_err = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for (t, row) in sample.t_values.iter().zip(&sample.branches) {
        let record: Vec<String> = std::iter::once(t).chain(row).map(|x| format!("{x:.16e}")).collect();
        w.write_record(&record).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    write_atomic(&args.out, &bytes)?;
    println!("wrote {} rows of {n} branches to {}", grid.len(), args.out.display());
    Ok(())
}

struct Row {
    check: &'static str,
    verdict: String,
    detail: String,
    consistent: bool,
}

fn verdict(protected: bool) -> String {
    if protected { "protected" } else { "not protected" }.to_string()
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    check_tol(args.hit_tol)?;
    let lambda = args.lambda;
    if !lambda.is_finite() {
        return Err(CliError::Usage(format!("--lambda must be finite, got {lambda}")));
    }
    let a = load_matrix(&args.a)?;
    let b = load_matrix(&args.b)?;
    let pencil = Pencil::new(a.matrix, b.matrix)?;
    if pencil.is_zero_perturbation() {
        return Err(CliError::ZeroPerturbation {
            norm: pencil.b().frobenius(),
        });
    }
    pencil.a_spectrum().check_regular(lambda)?;
    let grid = args.t_grid.values();

    let check = pencil.is_protected(lambda, args.tol)?;
    let protected = check.protected;
    let mut rows = vec![Row {
        check: "protection residual",
        verdict: verdict(protected),
        detail: format!("r = {:.3e}, tol = {:e}", check.residual.unwrap_or(f64::NAN), args.tol),
        consistent: true,
    }];

    let index = pencil.nilpotency_index(lambda)?;
    let says = matches!(index, Some(1 | 2));
    rows.push(Row {
        check: "nilpotency index",
        verdict: verdict(says),
        detail: index.map_or("not nilpotent".to_string(), |k| format!("index {k}")),
        consistent: says == protected,
    });

    let mut worst = 0.0f64;
    for (z, w) in PSEUDO_PAIRS {
        worst = worst.max(pencil.pseudo_resolvent_defect(lambda, z, w)?.relative);
    }
    let says = worst <= IDENTITY_TOL;
    rows.push(Row {
        check: "pseudo-resolvent",
        verdict: verdict(says),
        detail: format!("max relative defect {worst:.3e}"),
        consistent: says == protected,
    });

    let mut worst = 0.0f64;
    for t in INVERSE_TS {
        worst = worst.max(pencil.shifted_inverse_formula(lambda, t)?.defect / (1.0 + t.abs()));
    }
    let says = worst <= IDENTITY_TOL;
    rows.push(Row {
        check: "inverse formula",
        verdict: verdict(says),
        detail: format!("max defect/(1+|t|) {worst:.3e}"),
        consistent: says == protected,
    });

    let hits = pencil.hitting_parameters(lambda, KAPPA_TOL)?;
    let mut confirmed = true;
    for &t in &hits {
        let shifted = pencil.a().add_scaled(t, pencil.b());
        confirmed &= accurate_dist_to_spectrum(&shifted, lambda)? <= HIT_CONFIRM_TOL * shifted.scale();
    }
    let says = hits.is_empty();
    rows.push(Row {
        check: "hitting parameters",
        verdict: verdict(says),
        detail: match hits.first() {
            None => "none".to_string(),
            Some(t) => format!(
                "{} found, first t = {}{}",
                hits.len(),
                fmt_real(*t),
                if confirmed { "" } else { ", not confirmed by eigensolve" }
            ),
        },
        consistent: says == protected && confirmed,
    });

    let mut min_lower = f64::INFINITY;
    if protected {
        let mut failures = 0;
        let mut first_failure = None;
        let mut refused = None;
        for &t in &grid {
            match pencil.distance_bounds(lambda, t) {
                Ok(bounds) => {
                    min_lower = min_lower.min(bounds.lower);
                    if !bounds.holds() {
                        failures += 1;
                        first_failure.get_or_insert(t);
                    }
                }
                // The bounds need the default tolerance, which a looser --tol can outrun.
                Err(ProtectionError::NotProtected { residual, .. }) => {
                    refused = Some(residual);
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        rows.push(Row {
            check: "distance bounds",
            verdict: match (refused, failures) {
                (Some(_), _) => "unavailable",
                (None, 0) => "hold",
                _ => "violated",
            }
            .to_string(),
            detail: match (refused, first_failure) {
                (Some(r), _) => format!("residual {r:.3e} exceeds {DEFAULT_TOL:e}"),
                (None, None) => format!("{} grid points", grid.len()),
                (None, Some(t)) => format!("{failures} violations, first at t = {}", fmt_real(t)),
            },
            consistent: failures == 0 && refused.is_none(),
        });
        if refused.is_some() {
            min_lower = args.hit_tol;
        }
    } else {
        rows.push(Row {
            check: "distance bounds",
            verdict: "n/a".to_string(),
            detail: "defined for protected points only".to_string(),
            consistent: true,
        });
    }

    let mut ts = grid.clone();
    ts.extend(&hits);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let hit_tol = if protected { args.hit_tol.min(0.5 * min_lower) } else { args.hit_tol };
    let never = brute_force_unprotected(pencil.a(), pencil.b(), &[lambda], &ts, hit_tol)?;
    let says = !never.is_empty();
    rows.push(Row {
        check: "brute-force oracle",
        verdict: verdict(says),
        detail: format!("{} values of t, hit_tol {hit_tol:.3e}", ts.len()),
        consistent: says == protected,
    });

    let reach = hits
        .iter()
        .chain(&grid)
        .fold(PENCIL_SEARCH, |m, t| m.max(2.0 * t.abs()))
        .min(1e300);
    let roots = pencil_spectrum_wide(&pencil.a().shifted(-lambda), pencil.b(), reach, DEFAULT_PENCIL_RESOLUTION)?;
    let says = roots.is_empty();
    rows.push(Row {
        check: "pencil spectrum",
        verdict: if says { "empty" } else { "non-empty" }.to_string(),
        detail: format!("{} sign-change roots in [-{reach:e}, {reach:e}]", roots.len()),
        consistent: says == protected,
    });

    println!("lambda = {}  t-grid = {} ({} points)", fmt_real(lambda), args.t_grid, grid.len());
    println!("{:<20} {:<14} {:<48} consistent", "check", "verdict", "detail");
    for r in &rows {
        println!(
            "{:<20} {:<14} {:<48} {}",
            r.check,
            r.verdict,
            r.detail,
            if r.consistent { "yes" } else { "NO" }
        );
    }
    match rows.iter().find(|r| !r.consistent) {
        None => {
            println!("consistent: {}", verdict(protected));
            Ok(())
        }
        Some(r) => Err(CliError::Inconsistent(format!(
            "inconsistent witness `{}`: {} ({}) while the residual says {}",
            r.check,
            r.verdict,
            r.detail,
            verdict(protected)
        ))),
    }
}
