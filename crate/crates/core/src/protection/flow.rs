//! Sampling `t ↦ spec(A + tB)` on finite parameter grids.

use rayon::prelude::*;

use crate::linalg::{eigh, SymmetricMatrix};

use super::ProtectionError;

/// Sorted eigenvalues of `A + tB` for every `t` of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSample {
    pub t_values: Vec<f64>,
    pub branches: Vec<Vec<f64>>,
}

impl FlowSample {
    /// Largest relative violation of `Σ spec(A + tB) = tr A + t tr B` over the
    /// grid, each row normalized by `max(1, |tr A| + |t| |tr B|)`.
    pub fn trace_defect(&self, a: &SymmetricMatrix, b: &SymmetricMatrix) -> f64 {
        let (ta, tb) = (a.trace(), b.trace());
        self.t_values
            .iter()
            .zip(&self.branches)
            .map(|(&t, row)| {
                let sum: f64 = row.iter().sum();
                (sum - (ta + t * tb)).abs() / 1f64.max(ta.abs() + t.abs() * tb.abs())
            })
            .fold(0.0, f64::max)
    }
}

fn check_grid(grid: &[f64]) -> Result<(), ProtectionError> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|t| !t.is_finite()) {
        Err(ProtectionError::BadGrid)
    } else {
        Ok(())
    }
}

fn dims_match(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<(), ProtectionError> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(ProtectionError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    }
}

/// Eigenvalue branches of `A + tB` over a strictly increasing grid. `B` need
/// not be semi-definite here. Rows are computed in parallel and assembled in
/// grid order.
pub fn spectral_flow(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    t_grid: &[f64],
) -> Result<FlowSample, ProtectionError> {
    dims_match(a, b)?;
    check_grid(t_grid)?;
    let branches = t_grid
        .par_iter()
        .map(|&t| Ok(eigh(&a.add_scaled(t, b))?.eigenvalues().to_vec()))
        .collect::<Result<Vec<_>, ProtectionError>>()?;
    Ok(FlowSample {
        t_values: t_grid.to_vec(),
        branches,
    })
}

/// Indices of the `λ`-grid points that no `A + tB`, `t` in the grid, has an
/// eigenvalue within `hit_tol` of. Independent of the protection criterion;
/// it only diagonalizes.
pub fn brute_force_unprotected(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    lambda_grid: &[f64],
    t_grid: &[f64],
    hit_tol: f64,
) -> Result<Vec<usize>, ProtectionError> {
    dims_match(a, b)?;
    if lambda_grid.is_empty() || t_grid.is_empty() || !(hit_tol > 0.0) {
        return Err(ProtectionError::BadGrid);
    }
    let hit = t_grid
        .par_iter()
        .map(|&t| {
            let d = eigh(&a.add_scaled(t, b))?;
            Ok(lambda_grid
                .iter()
                .map(|&l| d.dist_to_spectrum(l) <= hit_tol)
                .collect::<Vec<bool>>())
        })
        .try_reduce(
            || vec![false; lambda_grid.len()],
            |mut acc, row| {
                acc.iter_mut().zip(row).for_each(|(x, h)| *x |= h);
                Ok(acc)
            },
        )
        .map_err(|e: ProtectionError| e)?;
    Ok(hit
        .iter()
        .enumerate()
        .filter_map(|(i, &h)| (!h).then_some(i))
        .collect())
}

/// `steps` equally spaced points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2 && min < max, "linear grid needs min < max and at least two steps");
    let h = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { max } else { min + i as f64 * h })
        .collect()
}

/// `±10^e` for `e` from `min_exp` to `max_exp` in steps of `1/per_decade`,
/// together with `0`, sorted ascending.
pub fn symmetric_log_grid(min_exp: i32, max_exp: i32, per_decade: usize) -> Vec<f64> {
    assert!(min_exp <= max_exp && per_decade >= 1, "malformed log grid");
    let count = (max_exp - min_exp) as usize * per_decade;
    let positive: Vec<f64> = (0..=count)
        .map(|k| 10f64.powf(f64::from(min_exp) + k as f64 / per_decade as f64))
        .collect();
    positive
        .iter()
        .rev()
        .map(|x| -x)
        .chain(std::iter::once(0.0))
        .chain(positive.iter().copied())
        .collect()
}
