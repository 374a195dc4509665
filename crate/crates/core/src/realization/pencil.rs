//! Real slice of the pencil spectrum `{μ : det(A - μB) = 0}` by sign changes
//! of the determinant.

use crate::linalg::{determinant, SymmetricMatrix};

use super::RealizeError;

pub const DEFAULT_PENCIL_RESOLUTION: usize = 200;
const ROOT_REL_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

fn det_sign(a: &SymmetricMatrix, b: &SymmetricMatrix, mu: f64) -> i8 {
    determinant(a.add_scaled(-mu, b).as_matrix()).sign
}

/// Sign-change roots of `μ ↦ det(A - μB)` on `[lower, upper]`.
///
/// The determinant is sampled at `resolution` equally spaced points; every
/// sign change is bisected to `1e-12` relative, and exact zeros on the grid are
/// reported as they are. Roots of even multiplicity that touch zero without
/// crossing are not detected.
pub fn pencil_spectrum(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    search: (f64, f64),
    resolution: usize,
) -> Result<Vec<f64>, RealizeError> {
    let (lower, upper) = search;
    if !(lower.is_finite() && upper.is_finite() && lower < upper && resolution >= 2) {
        return Err(RealizeError::BadInterval);
    }
    if a.dim() != b.dim() {
        return Err(crate::protection::ProtectionError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    let h = (upper - lower) / (resolution - 1) as f64;
    let grid: Vec<f64> = (0..resolution)
        .map(|i| if i == resolution - 1 { upper } else { lower + i as f64 * h })
        .collect();
    let signs: Vec<i8> = grid.iter().map(|&mu| det_sign(a, b, mu)).collect();

    let mut roots = Vec::new();
    for i in 0..resolution {
        if signs[i] == 0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < resolution && signs[i + 1] != 0 && signs[i + 1] != signs[i] {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            let s_lo = signs[i];
            for _ in 0..MAX_BISECTIONS {
                if hi - lo <= ROOT_REL_TOL * 1f64.max(lo.abs()).max(hi.abs()) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                match det_sign(a, b, mid) {
                    0 => {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    s if s == s_lo => lo = mid,
                    _ => hi = mid,
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    Ok(dedup(roots))
}

/// [`pencil_spectrum`] over `[-max_abs, max_abs]`, split at `0` and at `±10ᵏ`
/// for `k ≥ -3` so that every scale gets `resolution` samples.
pub fn pencil_spectrum_wide(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    max_abs: f64,
    resolution: usize,
) -> Result<Vec<f64>, RealizeError> {
    if !(max_abs.is_finite() && max_abs > 1e-3) {
        return Err(RealizeError::BadInterval);
    }
    let mut edges = vec![1e-3];
    while edges[edges.len() - 1] * 10.0 < max_abs {
        let next = edges[edges.len() - 1] * 10.0;
        edges.push(next);
    }
    edges.push(max_abs);
    let mut breaks: Vec<f64> = edges.iter().rev().map(|x| -x).collect();
    breaks.push(0.0);
    breaks.extend(edges);

    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        roots.extend(pencil_spectrum(a, b, (w[0], w[1]), resolution)?);
    }
    Ok(dedup(roots))
}

fn dedup(mut roots: Vec<f64>) -> Vec<f64> {
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-10 * 1f64.max(x.abs()));
    roots
}
