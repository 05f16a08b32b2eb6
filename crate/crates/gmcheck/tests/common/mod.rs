//! Shared helpers for the integration suites: a determinant oracle that
//! shares nothing with the library, seeded random generators, and random
//! matrix/graph builders.

#![allow(dead_code)]

use gmcheck::graph::CreationStep;
use gmcheck::linalg::SymmetricMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Determinant by LU factorization with partial pivoting. Deliberately
/// written against a dense row-major Vec<Vec<f64>> so it can never share a
/// code path with the library's rank-one determinant formula.
pub fn lu_determinant(matrix: &[Vec<f64>]) -> f64 {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        if a[pivot_row][col] == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        det *= a[col][col];
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / pivot[col];
            for (entry, &p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *entry -= factor * p;
            }
        }
    }
    det
}

/// Random symmetric matrix with entries uniform in [-scale, scale].
pub fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..=i {
            m.set(i, j, rng.gen_range(-scale..scale));
        }
    }
    m
}

/// Random matrix with `cols` orthonormal columns of length `dim`, built by
/// modified Gram-Schmidt on uniform random vectors (redrawing any vector
/// that falls too close to the span of the previous ones).
pub fn random_orthonormal_columns(rng: &mut ChaCha8Rng, dim: usize, cols: usize) -> Vec<Vec<f64>> {
    assert!(cols <= dim);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        basis.push(v);
    }
    basis
}

/// Random creation sequence for a threshold graph on `len` vertices.
pub fn random_threshold_steps(rng: &mut ChaCha8Rng, len: usize) -> Vec<CreationStep> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                CreationStep::Dominating
            } else {
                CreationStep::Isolated
            }
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
