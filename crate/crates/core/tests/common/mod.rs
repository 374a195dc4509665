//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use protset_core::linalg::{Matrix, SymmetricMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    let data = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Matrix::from_row_major(n, data).unwrap()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> SymmetricMatrix {
    let m = random_matrix(rng, n);
    (&m + &m.transpose()).scaled(0.5 * scale).symmetrized()
}

/// `G Gᵀ` with `G` of shape `n × rank`, embedded as an `n × n` product.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> SymmetricMatrix {
    let mut g = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..rank {
            g[(i, j)] = rng.gen_range(-1.0..1.0);
        }
    }
    g.matmul(&g.transpose()).symmetrized()
}

/// Orthogonal matrix from modified Gram–Schmidt on a random square matrix.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Matrix {
    let m = random_matrix(rng, n);
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: f64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
            let ck = cols[k].clone();
            cols[j].iter_mut().zip(&ck).for_each(|(a, b)| *a -= proj * b);
        }
        let norm = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|x| *x /= norm);
    }
    let mut q = Matrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            q[(i, j)] = x;
        }
    }
    q
}

/// `m` sorted points in `[lo, hi]` with pairwise separation at least `sep`.
pub fn random_separated_points(rng: &mut impl Rng, m: usize, lo: f64, hi: f64, sep: f64) -> Vec<f64> {
    loop {
        let mut p: Vec<f64> = (0..m).map(|_| rng.gen_range(lo..hi)).collect();
        p.sort_by(f64::total_cmp);
        if p.windows(2).all(|w| w[1] - w[0] >= sep) {
            return p;
        }
    }
}

pub struct Instance {
    pub a: SymmetricMatrix,
    pub b: SymmetricMatrix,
    pub lambda: f64,
}

/// A realized pair hidden behind a random orthogonal change of basis and a
/// positive rescaling of `B`; `lambda` is one of its prescribed points.
pub fn protected_instance(rng: &mut impl Rng) -> Instance {
    let m = rng.gen_range(1..=5);
    let points = random_separated_points(rng, m, -4.0, 4.0, 1.0);
    let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..1.5)).collect();
    let pair = protset_core::realization::realize(&points, Some(&weights)).unwrap();
    let q = random_orthogonal(rng, m + 1);
    let c = rng.gen_range(0.5..2.0);
    Instance {
        a: pair.a.congruence(&q),
        b: pair.b.congruence(&q).scaled(c),
        lambda: pair.points[rng.gen_range(0..m)],
    }
}

/// Random `A`, random semi-definite `B`, and `lambda` inside a bounded gap of
/// `A` away from its ends.
pub fn unprotected_instance(rng: &mut impl Rng) -> Instance {
    loop {
        let n = rng.gen_range(2..=6);
        let a = random_symmetric(rng, n, 3.0);
        let rank = rng.gen_range(1..=n);
        let b = random_psd(rng, n, rank);
        let d = protset_core::linalg::eigh(&a).unwrap();
        let gaps: Vec<_> = d
            .gaps(d.default_cluster_tol())
            .into_iter()
            .filter(|g| g.is_bounded() && g.width() > 1e-2)
            .collect();
        if gaps.is_empty() {
            continue;
        }
        let g = gaps[rng.gen_range(0..gaps.len())];
        let lambda = g.lower + rng.gen_range(0.2..0.8) * g.width();
        return Instance { a, b, lambda };
    }
}
