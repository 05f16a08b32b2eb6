//! Dense symmetric linear algebra: storage, a cyclic Jacobi eigensolver, and
//! the majorization comparator.
//!
//! Everything here is sized for matrices of a few dozen rows. The Jacobi
//! solver is deliberately the only eigensolver in the crate; every other
//! spectral routine is validated against it, so it must not share code with
//! the rootfinding paths.

use thiserror::Error;

/// Default stopping tolerance for [`eigen_symmetric`]: sweeps continue until
/// every off-diagonal magnitude drops below `tol * frobenius_norm`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

/// Default slack accepted by [`majorizes`] before a prefix sum counts as a
/// violation.
pub const DEFAULT_MAJORIZATION_TOL: f64 = 1e-8;

/// Values of `|lambda - 1|` below this are treated as exactly 1 by
/// [`det_diag_plus_ones`], switching the formula to its cancelled form.
pub const DET_ONE_SNAP: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 64;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("invalid tolerance {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("Jacobi sweep budget of {sweeps} exhausted; off-diagonal residual {residual:e}")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("sequence is not weakly decreasing at index {index}")]
    NotSorted { index: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

// ============================================================================
// STORAGE
// ============================================================================

/// Dense real symmetric matrix.
///
/// Only the lower triangle is stored, so the symmetry invariant is enforced by
/// construction rather than by discipline: `get(i, j)` and `get(j, i)` read
/// the same cell and `set` cannot break it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    // packed lower triangle, row-major: entry (i, j) with i >= j at i(i+1)/2 + j
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    /// Builds the matrix from a callback invoked once per lower-triangle cell
    /// (`i >= j`).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymmetricMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.data[i * (i + 1) / 2 + j] = f(i, j);
            }
        }
        m
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(i: usize, j: usize) -> usize {
        if i >= j {
            i * (i + 1) / 2 + j
        } else {
            j * (j + 1) / 2 + i
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim, "index out of range");
        self.data[Self::idx(i, j)]
    }

    /// Writes the (i, j) and (j, i) cell; they are the same storage.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.dim && j < self.dim, "index out of range");
        self.data[Self::idx(i, j)] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..=i {
                let v = self.get(i, j);
                // off-diagonal cells appear twice in the full matrix
                sum += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        sum.sqrt()
    }

    /// Expands to full row-major storage (used by the eigensolver and by
    /// test oracles that want plain nested vectors).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.dim {
            return Err(LinalgError::LengthMismatch {
                left: self.dim,
                right: x.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }
}

/// Eigenvalue list, always sorted weakly decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Outcome of a prefix-sum comparison between two weakly decreasing sequences.
#[derive(Debug, Clone)]
pub struct MajorizationReport {
    /// `prefix_margins[l-1]` is `sum(a[..l]) - sum(b[..l])`.
    pub prefix_margins: Vec<f64>,
    /// True iff every margin is at least `-tolerance`.
    pub holds: bool,
    /// 1-based index of the first failing prefix, if any.
    pub first_violation: Option<usize>,
}

// ============================================================================
// EIGENSOLVER (cyclic Jacobi)
// ============================================================================

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Rotation order is row-cyclic over the strict upper triangle; sweeps stop
/// once every off-diagonal magnitude is below `tol * frobenius_norm`. The
/// rotations preserve the trace and the Frobenius norm, which the callers
/// lean on as a cheap integrity check.
pub fn eigen_symmetric(m: &SymmetricMatrix, tol: f64) -> Result<Spectrum, LinalgError> {
    jacobi(m, tol, false).map(|(s, _)| s)
}

/// Same as [`eigen_symmetric`] but also accumulates the rotations, returning
/// one orthonormal eigenvector per eigenvalue, index-aligned with the sorted
/// spectrum.
pub fn eigen_symmetric_with_vectors(
    m: &SymmetricMatrix,
    tol: f64,
) -> Result<(Spectrum, Vec<Vec<f64>>), LinalgError> {
    jacobi(m, tol, true)
}

fn jacobi(
    m: &SymmetricMatrix,
    tol: f64,
    want_vectors: bool,
) -> Result<(Spectrum, Vec<Vec<f64>>), LinalgError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(LinalgError::InvalidTolerance { tol });
    }
    let n = m.dimension();
    if n == 0 {
        return Ok((Spectrum::new(vec![]), vec![]));
    }

    let mut a: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = m.get(i, j);
        }
    }
    let mut v: Vec<f64> = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    } else {
        vec![]
    };

    let frob = m.frobenius_norm();
    if frob == 0.0 {
        let vectors = extract_vectors(&v, n, want_vectors);
        return Ok((Spectrum::new(vec![0.0; n]), vectors));
    }
    let thresh = tol * frob;

    let mut residual = 0.0;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        residual = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                residual = residual.max(a[p * n + q].abs());
            }
        }
        if residual < thresh {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[i * n + i], i)).collect();
            pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
            let values: Vec<f64> = pairs.iter().map(|&(val, _)| val).collect();
            let vectors = if want_vectors {
                pairs
                    .iter()
                    .map(|&(_, col)| (0..n).map(|row| v[row * n + col]).collect())
                    .collect()
            } else {
                vec![]
            };
            return Ok((Spectrum { values }, vectors));
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                // smaller-magnitude tangent root; keeps rotation angles <= pi/4
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[p * n + i] = a[i * n + p];
                    a[i * n + q] = s * aip + c * aiq;
                    a[q * n + i] = a[i * n + q];
                }
                if want_vectors {
                    for i in 0..n {
                        let vip = v[i * n + p];
                        let viq = v[i * n + q];
                        v[i * n + p] = c * vip - s * viq;
                        v[i * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
    }

    Err(LinalgError::NonConvergence {
        sweeps: MAX_JACOBI_SWEEPS,
        residual,
    })
}

fn extract_vectors(v: &[f64], n: usize, want: bool) -> Vec<Vec<f64>> {
    if !want {
        return vec![];
    }
    (0..n)
        .map(|col| (0..n).map(|row| v[row * n + col]).collect())
        .collect()
}

// ============================================================================
// MAJORIZATION
// ============================================================================

/// Prefix-sum comparison of two weakly decreasing sequences of equal length.
///
/// `a` majorizes `b` (within `tol`) when every prefix sum of `a` is at least
/// the matching prefix sum of `b` minus `tol`. Inputs that are not weakly
/// decreasing are rejected rather than silently sorted.
pub fn majorizes(a: &[f64], b: &[f64], tol: f64) -> Result<MajorizationReport, LinalgError> {
    if tol < 0.0 || tol.is_nan() {
        return Err(LinalgError::InvalidTolerance { tol });
    }
    if a.len() != b.len() {
        return Err(LinalgError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    check_sorted(a)?;
    check_sorted(b)?;

    let mut margins = Vec::with_capacity(a.len());
    let (mut sa, mut sb) = (0.0, 0.0);
    let mut first_violation = None;
    for (l, (&x, &y)) in a.iter().zip(b).enumerate() {
        sa += x;
        sb += y;
        let margin = sa - sb;
        if margin < -tol && first_violation.is_none() {
            first_violation = Some(l + 1);
        }
        margins.push(margin);
    }
    Ok(MajorizationReport {
        holds: first_violation.is_none(),
        prefix_margins: margins,
        first_violation,
    })
}

fn check_sorted(xs: &[f64]) -> Result<(), LinalgError> {
    for i in 1..xs.len() {
        if xs[i] > xs[i - 1] {
            return Err(LinalgError::NotSorted { index: i });
        }
    }
    Ok(())
}

/// Sum of the `l` largest entries of a spectrum (`1 <= l <= len`).
pub fn sum_top_k(s: &Spectrum, l: usize) -> Result<f64, LinalgError> {
    if l == 0 || l > s.len() {
        return Err(LinalgError::IndexOutOfRange {
            index: l,
            len: s.len(),
        });
    }
    Ok(s.values()[..l].iter().sum())
}

// ============================================================================
// RANK-ONE DETERMINANT FORMULA
// ============================================================================

/// Determinant of `diag(lambdas) + B`, where `B` has zero diagonal and ones
/// everywhere else.
///
/// Writing d_l = lambda_l - 1, the determinant equals
/// `prod(d) + sum_l prod_{m != l} d_m`, the expanded form of
/// `prod(d) * (1 + sum 1/d_l)`. The expanded form needs no division, so the
/// cancellation cases fall out of it directly: exactly one d_l = 0 leaves
/// the product of the others, two or more zeros give 0. Entries with
/// `|lambda - 1| < DET_ONE_SNAP` are snapped to exactly 1 first.
pub fn det_diag_plus_ones(lambdas: &[f64]) -> f64 {
    let d: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let dl = l - 1.0;
            if dl.abs() < DET_ONE_SNAP {
                0.0
            } else {
                dl
            }
        })
        .collect();
    let m = d.len();

    // prefix[i] = product of d[..i], suffix[i] = product of d[i..]
    let mut prefix = vec![1.0; m + 1];
    for i in 0..m {
        prefix[i + 1] = prefix[i] * d[i];
    }
    let mut suffix = vec![1.0; m + 1];
    for i in (0..m).rev() {
        suffix[i] = d[i] * suffix[i + 1];
    }

    let mut det = prefix[m];
    for l in 0..m {
        det += prefix[l] * suffix[l + 1];
    }
    det
}
