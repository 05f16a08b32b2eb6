//! The dense symmetric eigensolver on a small matrix: eigenvalues,
//! eigenvectors, and the invariants the rotation scheme preserves.
//!
//! Run with `cargo run --example jacobi_eigensolver`.

use gmcheck::linalg::{eigen_symmetric_with_vectors, SymmetricMatrix, DEFAULT_EIGEN_TOL};

fn main() {
    // an arrowhead matrix: strong diagonal, one coupling spike in row 0
    let m = SymmetricMatrix::from_fn(5, |i, j| {
        if i == j {
            (i + 2) as f64
        } else if i == 0 || j == 0 {
            1.0
        } else {
            0.0
        }
    });

    let (spectrum, vectors) = eigen_symmetric_with_vectors(&m, DEFAULT_EIGEN_TOL)
        .expect("cyclic rotations converge for symmetric input");

    println!("eigenvalues (descending):");
    for value in spectrum.values() {
        println!("  {value:.12}");
    }
    println!(
        "trace preserved: eigenvalue total {:.12} vs matrix trace {:.12}",
        spectrum.sum(),
        m.trace()
    );

    // residual ||A v - lambda v||_inf per eigenpair
    println!("residuals:");
    for (value, vector) in spectrum.values().iter().zip(&vectors) {
        let image = m.mul_vec(vector).expect("dimension matches");
        let residual = image
            .iter()
            .zip(vector)
            .map(|(img, x)| (img - value * x).abs())
            .fold(0.0f64, f64::max);
        println!("  lambda = {value:>15.10}   ||A v - lambda v|| = {residual:.3e}");
    }

    // the eigenbasis is orthonormal
    let mut worst = 0.0f64;
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            let dot: f64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
            worst = worst.max(dot.abs());
        }
    }
    println!("largest off-diagonal inner product of eigenvectors: {worst:.3e}");
}
