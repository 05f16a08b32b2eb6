//! The analytical core for pendant-decorated cliques: the spectral polynomial
//! F, its secular form G, bracket-certified root isolation, the shifted
//! companion matrices, and the homotopy connecting F to them.
//!
//! For parameters (n, k_1 >= ... >= k_j) the nontrivial Laplacian eigenvalues
//! are the 2j roots of
//!
//! ```text
//! F(lam) = prod_l q_l(lam) + sum_l k_l * prod_{m != l} q_m(lam),
//! q_l(lam) = (n + k_l - lam)(1 - lam) - k_l,
//! ```
//!
//! equivalently the zeros and poles of G(lam) = 1 + sum_l k_l / q_l(lam).
//! The roots r_l^± of the q_l interlace everything: they confine every zero
//! of G to an interval with a guaranteed sign change, which is what makes
//! plain bisection a certified method here. F is always evaluated in the
//! expanded product-sum form above; the factored form G * prod q is singular
//! exactly at the points we care about.

use thiserror::Error;

use crate::linalg::{eigen_symmetric, LinalgError, SymmetricMatrix, DEFAULT_EIGEN_TOL};

#[derive(Debug, Error)]
pub enum QepError {
    #[error("clique size must be positive")]
    ZeroCliqueSize,
    #[error("at least one pendant group is required")]
    NoPendantGroups,
    #[error("{j} pendant groups exceed clique size {n}")]
    TooManyGroups { j: usize, n: usize },
    #[error("pendant counts must be weakly decreasing; violated at index {index}")]
    KsNotSorted { index: usize },
    #[error("pendant count at index {index} is zero")]
    ZeroPendantCount { index: usize },
    #[error("factor index {l} out of range 1..={j}")]
    FactorIndex { l: usize, j: usize },
    #[error("lambda = {lam} is within the pole guard of r_{l}^±")]
    PoleProximity { l: usize, lam: f64 },
    #[error("bracket sign check failed on ({lo}, {hi}): G({lo}) = {g_lo:e}, G({hi}) = {g_hi:e}")]
    BracketSignCheck {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },
    #[error("shift a = {a} must be negative")]
    ShiftNotNegative { a: f64 },
    #[error("shift a = {a} must satisfy a < 1 - n = {bound}")]
    ShiftAboveHomotopyBound { a: f64, bound: f64 },
    #[error("shift a must be nonzero")]
    ZeroShift,
    #[error("homotopy time t = {t} outside [0, 1]")]
    TimeOutOfRange { t: f64 },
    #[error("root index {l} out of range 1..={j}")]
    RootIndexOutOfRange { l: usize, j: usize },
    #[error("a homotopy grid needs at least 2 points, got {steps}")]
    TooFewSteps { steps: usize },
    #[error(
        "root moved by {jump:e} between t = {t_lo} and t = {t_hi}, exceeding the continuity budget"
    )]
    StepFailure { t_lo: f64, t_hi: f64, jump: f64 },
    #[error("tracked root {index} ends at {tracked} but the companion matrix gives {companion}")]
    EndpointMismatch {
        index: usize,
        tracked: f64,
        companion: f64,
    },
    #[error("negative discriminant {value:e} in closed-form roots")]
    NegativeDiscriminant { value: f64 },
    #[error("expected exactly 2 pendant groups, got {j}")]
    NotTwoGroups { j: usize },
    #[error("expected s1 > s2 > n, got s1 = {s1}, s2 = {s2}, n = {n}")]
    J2RootsOutOfOrder { s1: f64, s2: f64, n: usize },
    #[error(transparent)]
    Eigen(#[from] LinalgError),
}

// ============================================================================
// PARAMETERS
// ============================================================================

/// Parameters (n, k_1 >= ... >= k_j >= 1) of a pendant-decorated clique:
/// clique size `n`, one pendant group per attachment vertex.
///
/// Validated on construction: 1 <= j <= n, counts positive and weakly
/// decreasing. The case j = n (every clique vertex carries pendants) is the
/// boundary where lambda = n itself becomes a root of F; several routines
/// branch on [`PencilParams::is_degenerate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilParams {
    n: usize,
    ks: Vec<usize>,
}

impl PencilParams {
    pub fn new(n: usize, ks: Vec<usize>) -> Result<Self, QepError> {
        if n == 0 {
            return Err(QepError::ZeroCliqueSize);
        }
        if ks.is_empty() {
            return Err(QepError::NoPendantGroups);
        }
        if ks.len() > n {
            return Err(QepError::TooManyGroups { j: ks.len(), n });
        }
        for (index, &k) in ks.iter().enumerate() {
            if k == 0 {
                return Err(QepError::ZeroPendantCount { index });
            }
            if index > 0 && k > ks[index - 1] {
                return Err(QepError::KsNotSorted { index });
            }
        }
        Ok(PencilParams { n, ks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    /// Number of pendant groups.
    pub fn j(&self) -> usize {
        self.ks.len()
    }

    /// Total number of pendant vertices.
    pub fn total_pendants(&self) -> usize {
        self.ks.iter().sum()
    }

    /// Vertex count of the underlying graph, n + sum(k_l).
    pub fn vertex_count(&self) -> usize {
        self.n + self.total_pendants()
    }

    /// True when j = n, the saturated case where lambda = n is a root of F.
    pub fn is_degenerate(&self) -> bool {
        self.j() == self.n
    }

    /// j*n + sum(k_l): the trace of the shifted companion matrices and the
    /// upper bound the top-j root sum is compared against.
    pub fn gm_bound(&self) -> f64 {
        (self.j() * self.n + self.total_pendants()) as f64
    }

    /// Characteristic magnitude n + k_1 + 1; every root and pole of F lies
    /// in (0, scale).
    pub fn scale(&self) -> f64 {
        (self.n + self.ks[0] + 1) as f64
    }

    /// Exclusion radius around each pole for guarded evaluation of G.
    pub fn pole_guard(&self) -> f64 {
        1e-9 * self.scale()
    }

    /// Absolute bisection tolerance for root isolation.
    pub fn bisect_tol(&self) -> f64 {
        1e-12 * self.scale()
    }

    /// Distance below which two isolated roots are merged into one root of
    /// higher multiplicity.
    pub fn root_merge_tol(&self) -> f64 {
        1e-9 * self.scale()
    }

    fn nk(&self, l0: usize) -> f64 {
        (self.n + self.ks[l0]) as f64
    }
}

// ============================================================================
// EVALUATION
// ============================================================================

#[inline]
fn q_at(nk: f64, k: f64, lam: f64) -> f64 {
    (nk - lam) * (1.0 - lam) - k
}

/// The l-th quadratic factor q_l(lam) = (n + k_l - lam)(1 - lam) - k_l,
/// with `l` 1-based.
pub fn q_factor(p: &PencilParams, l: usize, lam: f64) -> Result<f64, QepError> {
    if l == 0 || l > p.j() {
        return Err(QepError::FactorIndex { l, j: p.j() });
    }
    Ok(q_at(p.nk(l - 1), p.ks[l - 1] as f64, lam))
}

/// Expanded product-sum combination prod(q) + sum_l k_l * prod_{m != l} q_m,
/// shared by every F-like evaluation so the homotopy at t = 0 reproduces
/// eval_f bit for bit.
fn product_sum(qs: &[f64], ks: &[f64]) -> f64 {
    let j = qs.len();
    let mut prefix = vec![1.0; j + 1];
    for i in 0..j {
        prefix[i + 1] = prefix[i] * qs[i];
    }
    let mut suffix = vec![1.0; j + 1];
    for i in (0..j).rev() {
        suffix[i] = qs[i] * suffix[i + 1];
    }
    let mut f = prefix[j];
    for l in 0..j {
        f += ks[l] * prefix[l] * suffix[l + 1];
    }
    f
}

/// The spectral polynomial F(lam), a polynomial of degree 2j, evaluated in
/// the pole-free expanded form.
pub fn eval_f(p: &PencilParams, lam: f64) -> f64 {
    let qs: Vec<f64> = (0..p.j())
        .map(|l| q_at(p.nk(l), p.ks[l] as f64, lam))
        .collect();
    let ks: Vec<f64> = p.ks.iter().map(|&k| k as f64).collect();
    product_sum(&qs, &ks)
}

fn eval_g_unchecked(p: &PencilParams, lam: f64) -> f64 {
    let mut g = 1.0;
    for l in 0..p.j() {
        g += p.ks[l] as f64 / q_at(p.nk(l), p.ks[l] as f64, lam);
    }
    g
}

/// The secular function G(lam) = 1 + sum_l k_l / q_l(lam).
///
/// Refuses to evaluate within [`PencilParams::pole_guard`] of any r_l^±,
/// where the value would be dominated by the pole.
pub fn eval_g(p: &PencilParams, lam: f64) -> Result<f64, QepError> {
    for l in 0..p.j() {
        let (rm, rp) = pole_pair(p.n as f64, p.nk(l));
        if (lam - rm).abs() < p.pole_guard() || (lam - rp).abs() < p.pole_guard() {
            return Err(QepError::PoleProximity { l: l + 1, lam });
        }
    }
    Ok(eval_g_unchecked(p, lam))
}

/// Roots of q(lam) = lam^2 - (nk+1) lam + n, returned as (r_minus, r_plus).
/// The plus branch is computed by the quadratic formula (no cancellation:
/// both summands are positive) and the minus branch from the product n.
fn pole_pair(n: f64, nk: f64) -> (f64, f64) {
    let b = nk + 1.0;
    let disc = b * b - 4.0 * n;
    let rp = 0.5 * (b + disc.sqrt());
    (n / rp, rp)
}

// ============================================================================
// BRACKETS
// ============================================================================

/// What kind of sign change a G-zero interval carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// Between two adjacent distinct poles on the minus side; G runs -inf to
    /// +inf.
    BetweenMinus,
    /// Between two adjacent distinct poles on the plus side; G runs +inf to
    /// -inf.
    BetweenPlus,
    /// (r_j^-, n) with G(n) > 0; G runs -inf up to the positive anchor.
    StraddleLow,
    /// (n, r_j^+) with G(n) > 0; G runs from the positive anchor to -inf.
    StraddleHigh,
    /// Degenerate j = n only: (r_j^-, r_j^+) holds the root at n plus one
    /// more zero, isolated by bisecting the deflated G(lam)/(lam - n).
    DeflatedMiddle,
}

/// An open interval guaranteed to contain `expected_zeros` zeros of G.
#[derive(Debug, Clone, Copy)]
pub struct GZeroInterval {
    pub lo: f64,
    pub hi: f64,
    pub expected_zeros: usize,
    pub kind: IntervalKind,
}

/// A maximal run of indices sharing one pole pair (equal k up to the merge
/// rule). A group of multiplicity m contributes r^± as roots of F with
/// multiplicity m - 1.
#[derive(Debug, Clone, Copy)]
pub struct PoleGroup {
    /// Pendant count shared by the group (of its first member).
    pub k: usize,
    /// 0-based index of the first member.
    pub start: usize,
    /// Number of members.
    pub multiplicity: usize,
    pub r_minus: f64,
    pub r_plus: f64,
}

/// Pole locations and certified zero intervals for G.
#[derive(Debug, Clone)]
pub struct BracketTable {
    /// r_l^-, indexed by l (ascending in l).
    pub r_minus: Vec<f64>,
    /// r_l^+, indexed by l (descending in l).
    pub r_plus: Vec<f64>,
    /// Distinct pole groups, in order of decreasing k.
    pub groups: Vec<PoleGroup>,
    /// Intervals that bisection will search, minus side first.
    pub intervals: Vec<GZeroInterval>,
}

/// Computes every r_l^±, groups equal poles, and lays out the sign-change
/// intervals that together account for all 2j roots of F.
///
/// The ordering chain 0 < r_1^- <= ... <= r_j^- < 1 < n + k_j <= r_j^+ <=
/// ... <= r_1^+ < n + k_1 + 1 is asserted; it is a theorem for validated
/// parameters, so a violation indicates numeric breakdown.
pub fn brackets(p: &PencilParams) -> BracketTable {
    let j = p.j();
    let n = p.n as f64;
    let mut r_minus = Vec::with_capacity(j);
    let mut r_plus = Vec::with_capacity(j);
    for l in 0..j {
        let (rm, rp) = pole_pair(n, p.nk(l));
        r_minus.push(rm);
        r_plus.push(rp);
    }

    // ordering chain; float slack far below every genuine gap
    let slack = 16.0 * f64::EPSILON * p.scale();
    assert!(r_minus[0] > 0.0, "r_1^- must be positive");
    for l in 1..j {
        assert!(r_minus[l] + slack >= r_minus[l - 1], "r^- chain broken");
        assert!(r_plus[l] <= r_plus[l - 1] + slack, "r^+ chain broken");
    }
    assert!(r_minus[j - 1] < 1.0, "r_j^- must lie below 1");
    assert!(
        r_plus[j - 1] + slack >= (p.n + p.ks[j - 1]) as f64,
        "r_j^+ must lie at or above n + k_j"
    );
    assert!(r_plus[0] < p.scale(), "r_1^+ must lie below n + k_1 + 1");

    // group indistinguishable poles; equal k gives bit-identical pole pairs,
    // and distinct k closer than 4 guard radii is below numeric resolution
    let near = 4.0 * p.pole_guard();
    let mut groups: Vec<PoleGroup> = Vec::new();
    for l in 0..j {
        match groups.last_mut() {
            Some(g) if (r_plus[l] - g.r_plus).abs() < near => g.multiplicity += 1,
            _ => groups.push(PoleGroup {
                k: p.ks[l],
                start: l,
                multiplicity: 1,
                r_minus: r_minus[l],
                r_plus: r_plus[l],
            }),
        }
    }

    let mut intervals = Vec::new();
    for w in groups.windows(2) {
        intervals.push(GZeroInterval {
            lo: w[0].r_minus,
            hi: w[1].r_minus,
            expected_zeros: 1,
            kind: IntervalKind::BetweenMinus,
        });
    }
    let innermost = *groups.last().expect("at least one group");
    if p.is_degenerate() {
        intervals.push(GZeroInterval {
            lo: innermost.r_minus,
            hi: innermost.r_plus,
            expected_zeros: 2,
            kind: IntervalKind::DeflatedMiddle,
        });
    } else {
        intervals.push(GZeroInterval {
            lo: innermost.r_minus,
            hi: n,
            expected_zeros: 1,
            kind: IntervalKind::StraddleLow,
        });
        intervals.push(GZeroInterval {
            lo: n,
            hi: innermost.r_plus,
            expected_zeros: 1,
            kind: IntervalKind::StraddleHigh,
        });
    }
    for w in groups.windows(2) {
        intervals.push(GZeroInterval {
            lo: w[1].r_plus,
            hi: w[0].r_plus,
            expected_zeros: 1,
            kind: IntervalKind::BetweenPlus,
        });
    }

    BracketTable {
        r_minus,
        r_plus,
        groups,
        intervals,
    }
}

// ============================================================================
// ROOT SETS
// ============================================================================

/// Sorted roots with multiplicities; the result type of root isolation and
/// of companion eigensolves.
#[derive(Debug, Clone)]
pub struct RootSet {
    roots: Vec<f64>,
    multiplicities: Vec<usize>,
}

impl RootSet {
    /// Clusters (value, multiplicity) pairs: pairs sort descending and runs
    /// within `merge_tol` of their largest member collapse into one root of
    /// summed multiplicity, located at the multiplicity-weighted mean.
    /// `expected_total` pins the declared polynomial degree.
    pub fn from_pairs(pairs: &[(f64, usize)], merge_tol: f64, expected_total: usize) -> Self {
        let mut sorted: Vec<(f64, usize)> = pairs.iter().copied().filter(|&(_, m)| m > 0).collect();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));

        let mut roots = Vec::new();
        let mut multiplicities = Vec::new();
        let mut iter = sorted.into_iter().peekable();
        while let Some((anchor, m0)) = iter.next() {
            let mut weighted = anchor * m0 as f64;
            let mut mult = m0;
            while let Some(&(next, mn)) = iter.peek() {
                if anchor - next < merge_tol {
                    weighted += next * mn as f64;
                    mult += mn;
                    iter.next();
                } else {
                    break;
                }
            }
            roots.push(weighted / mult as f64);
            multiplicities.push(mult);
        }

        let total: usize = multiplicities.iter().sum();
        assert_eq!(
            total, expected_total,
            "root multiplicities must sum to the declared degree"
        );
        RootSet {
            roots,
            multiplicities,
        }
    }

    /// Distinct roots, descending.
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Multiplicities aligned with [`RootSet::roots`].
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Roots repeated by multiplicity, descending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for (&r, &m) in self.roots.iter().zip(&self.multiplicities) {
            out.extend(std::iter::repeat_n(r, m));
        }
        out
    }

    /// Sum of the `l` largest roots counted with multiplicity.
    pub fn top_sum(&self, l: usize) -> f64 {
        self.expanded()[..l].iter().sum()
    }
}

// ============================================================================
// ROOT ISOLATION
// ============================================================================

/// Bisects `f` on (lo, hi) given the (already verified) sign of f at lo.
/// Midpoints inside the `avoid` radius of its center are nudged off it, which
/// keeps the deflated evaluation away from its removable singularity.
fn bisect(
    f: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    lo_positive: bool,
    tol: f64,
    avoid: Option<(f64, f64)>,
) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mut mid = 0.5 * (lo + hi);
        if let Some((center, radius)) = avoid {
            if (mid - center).abs() < radius {
                let nudged = if mid >= center {
                    center + radius
                } else {
                    center - radius
                };
                if nudged > lo && nudged < hi {
                    mid = nudged;
                }
            }
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Verifies the expected signs at the two (inset) endpoints, then bisects.
fn certified_bisect(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    lo_positive: bool,
    tol: f64,
    avoid: Option<(f64, f64)>,
) -> Result<f64, QepError> {
    let g_lo = f(lo);
    let g_hi = f(hi);
    let lo_ok = (g_lo > 0.0) == lo_positive && g_lo != 0.0;
    let hi_ok = (g_hi > 0.0) != lo_positive && g_hi != 0.0;
    if !lo_ok || !hi_ok {
        return Err(QepError::BracketSignCheck { lo, hi, g_lo, g_hi });
    }
    Ok(bisect(f, lo, hi, lo_positive, tol, avoid))
}

/// Numerator of sum_l (n - k_l - 1) / k_l over the common denominator
/// prod(k_l), or None on (astronomically unlikely) i128 overflow.
fn middle_sum_numerator(p: &PencilParams) -> Option<i128> {
    let n = p.n as i128;
    let mut numerator: i128 = 0;
    for l in 0..p.j() {
        let mut term = n - p.ks[l] as i128 - 1;
        for m in 0..p.j() {
            if m != l {
                term = term.checked_mul(p.ks[m] as i128)?;
            }
        }
        numerator = numerator.checked_add(term)?;
    }
    Some(numerator)
}

/// Sign of S = sum_l (n - k_l - 1) / k_l, which controls the saturated
/// middle interval: S = 0 puts a double root of F exactly at n, S > 0 puts
/// the companion zero below n, S < 0 above.
///
/// S is rational, so the sign is decided exactly in integer arithmetic; the
/// floating fallback only matters if the integer numerator overflows i128.
fn middle_sum_sign(p: &PencilParams) -> std::cmp::Ordering {
    match middle_sum_numerator(p) {
        Some(numerator) => numerator.cmp(&0),
        None => {
            let s: f64 = (0..p.j())
                .map(|l| {
                    let k = p.ks[l] as f64;
                    (p.n as f64 - k - 1.0) / k
                })
                .sum();
            if s.abs() <= 1e-9 * p.j() as f64 {
                std::cmp::Ordering::Equal
            } else {
                s.total_cmp(&0.0)
            }
        }
    }
}

/// Isolates all 2j roots of F with multiplicity.
///
/// Each pole group of multiplicity m contributes r^± as roots of multiplicity
/// m - 1 (known in closed form); the remaining zeros of G are bisected inside
/// the bracket intervals, whose endpoint signs are certified first. In the
/// degenerate case j = n the root at lambda = n is exact, and the middle
/// interval's second zero depends on the sign of S = sum (n - k_l - 1)/k_l:
/// for S = 0 (decided exactly in integer arithmetic) it is a second copy of
/// n itself, where bisection would drown in the rounding noise of the double
/// zero; otherwise it is a simple, well-separated zero of the deflated
/// G(lam)/(lam - n) and is bisected with certified endpoint signs.
pub fn find_roots(p: &PencilParams) -> Result<RootSet, QepError> {
    let table = brackets(p);
    let eps = p.pole_guard();
    let tol = p.bisect_tol();
    let n = p.n as f64;

    let mut pairs: Vec<(f64, usize)> = Vec::new();
    for g in &table.groups {
        if g.multiplicity > 1 {
            pairs.push((g.r_minus, g.multiplicity - 1));
            pairs.push((g.r_plus, g.multiplicity - 1));
        }
    }

    let g_fn = |lam: f64| eval_g_unchecked(p, lam);
    let deflated = |lam: f64| eval_g_unchecked(p, lam) / (lam - n);

    for iv in &table.intervals {
        match iv.kind {
            IntervalKind::BetweenMinus => {
                let root = certified_bisect(&g_fn, iv.lo + eps, iv.hi - eps, false, tol, None)?;
                pairs.push((root, 1));
            }
            IntervalKind::BetweenPlus => {
                let root = certified_bisect(&g_fn, iv.lo + eps, iv.hi - eps, true, tol, None)?;
                pairs.push((root, 1));
            }
            IntervalKind::StraddleLow => {
                let root = certified_bisect(&g_fn, iv.lo + eps, iv.hi, false, tol, None)?;
                pairs.push((root, 1));
            }
            IntervalKind::StraddleHigh => {
                let root = certified_bisect(&g_fn, iv.lo, iv.hi - eps, true, tol, None)?;
                pairs.push((root, 1));
            }
            IntervalKind::DeflatedMiddle => {
                // lambda = n is a root outright; the location of the second
                // middle zero is governed by the sign of S
                if middle_sum_sign(p) == std::cmp::Ordering::Equal {
                    pairs.push((n, 2));
                } else {
                    let nudge = 1e-13 * p.scale();
                    let root = certified_bisect(
                        &deflated,
                        iv.lo + eps,
                        iv.hi - eps,
                        true,
                        tol,
                        Some((n, nudge)),
                    )?;
                    pairs.push((n, 1));
                    pairs.push((root, 1));
                }
            }
        }
    }

    Ok(RootSet::from_pairs(&pairs, p.root_merge_tol(), 2 * p.j()))
}

// ============================================================================
// THE MATRIX M
// ============================================================================

/// The (2j+1)-dimensional symmetric matrix whose spectrum is {0} plus the
/// roots of F.
///
/// Rows 0..j are the attachment vertices (diagonal n + k_l - 1, off-diagonal
/// -1 among themselves), row j aggregates the n - j pendant-free clique
/// vertices (diagonal j, coupled to each attachment by -sqrt(n - j)), and row
/// j + 1 + l aggregates pendant group l (diagonal 1, coupled to its
/// attachment by -sqrt(k_l)). The vector (1, ..., 1, sqrt(n - j), sqrt(k_1),
/// ..., sqrt(k_j)) spans the kernel. In the degenerate case n = j the
/// aggregate clique row decouples and contributes the eigenvalue n directly.
pub fn build_m(p: &PencilParams) -> SymmetricMatrix {
    let j = p.j();
    let dim = 2 * j + 1;
    let extra = (p.n - j) as f64;
    let mut m = SymmetricMatrix::zeros(dim);
    for l in 0..j {
        m.set(l, l, p.nk(l) - 1.0);
        for l2 in 0..l {
            m.set(l, l2, -1.0);
        }
        m.set(l, j, -extra.sqrt());
        m.set(l, j + 1 + l, -(p.ks[l] as f64).sqrt());
    }
    m.set(j, j, j as f64);
    for l in 0..j {
        m.set(j + 1 + l, j + 1 + l, 1.0);
    }
    m
}

/// The kernel vector of [`build_m`], unnormalized.
pub fn kernel_vector(p: &PencilParams) -> Vec<f64> {
    let j = p.j();
    let mut v = vec![1.0; j];
    v.push(((p.n - j) as f64).sqrt());
    for l in 0..j {
        v.push((p.ks[l] as f64).sqrt());
    }
    v
}

// ============================================================================
// EQUAL PENDANT COUNTS
// ============================================================================

/// Closed-form roots for equal pendant counts k_1 = ... = k_j = k, where F
/// factors as q^(j-1) (q + jk).
///
/// The outer pair r_1^± (multiplicity j - 1) comes from q and the inner pair
/// r_2^± (multiplicity 1) from q + jk; the inner discriminant equals
/// (n - k - 1)^2 + 4k(n - j), nonnegative whenever n >= j, hitting zero only
/// at n = j, k = n - 1 where the double root lands exactly on n.
pub fn equal_k_closed_form(n: usize, k: usize, j: usize) -> Result<RootSet, QepError> {
    let p = PencilParams::new(n, vec![k; j])?;
    let nf = n as f64;
    let b = (n + k + 1) as f64;

    let disc1 = b * b - 4.0 * nf;
    let r1p = 0.5 * (b + disc1.sqrt());
    let r1m = nf / r1p;

    let inner_product = (n + j * k) as f64;
    let disc2 = b * b - 4.0 * inner_product;
    if disc2 < 0.0 {
        return Err(QepError::NegativeDiscriminant { value: disc2 });
    }
    let r2p = 0.5 * (b + disc2.sqrt());
    let r2m = inner_product / r2p;

    Ok(RootSet::from_pairs(
        &[(r1p, j - 1), (r1m, j - 1), (r2p, 1), (r2m, 1)],
        p.root_merge_tol(),
        2 * j,
    ))
}

// ============================================================================
// COMPANION MATRICES AND THE HOMOTOPY
// ============================================================================

/// The j-dimensional symmetric companion matrix C_a of the shifted
/// polynomial F^a: diagonal n + k_l, off-diagonal sqrt(k_l k_m) / a.
///
/// Its characteristic polynomial satisfies F^a(lam) = (-a)^j det(lam I -
/// C_a), so its eigenvalues are exactly the roots of F^a; its trace is
/// j n + sum(k_l) for every a.
pub fn companion_matrix(p: &PencilParams, a: f64) -> Result<SymmetricMatrix, QepError> {
    if a == 0.0 || a.is_nan() {
        return Err(QepError::ZeroShift);
    }
    let j = p.j();
    Ok(SymmetricMatrix::from_fn(j, |r, c| {
        if r == c {
            p.nk(r)
        } else {
            (p.ks[r] as f64 * p.ks[c] as f64).sqrt() / a
        }
    }))
}

/// Roots s_1(a) >= ... >= s_j(a) of F^a, as the eigenvalues of the companion
/// matrix. Requires a < 0; the root sum equals j n + sum(k_l) exactly in
/// theory (the companion trace) and to eigensolver accuracy here.
pub fn companion_roots(p: &PencilParams, a: f64) -> Result<RootSet, QepError> {
    if a.is_nan() || a >= 0.0 {
        return Err(QepError::ShiftNotNegative { a });
    }
    let m = companion_matrix(p, a)?;
    let spectrum = eigen_symmetric(&m, DEFAULT_EIGEN_TOL)?;
    let pairs: Vec<(f64, usize)> = spectrum.values().iter().map(|&v| (v, 1)).collect();
    Ok(RootSet::from_pairs(&pairs, p.root_merge_tol(), p.j()))
}

fn check_homotopy_shift(p: &PencilParams, a: f64) -> Result<(), QepError> {
    let bound = 1.0 - p.n as f64;
    if a.is_nan() || a >= bound {
        return Err(QepError::ShiftAboveHomotopyBound { a, bound });
    }
    Ok(())
}

/// Homotopy factor q_l^{a,t}(lam) = (n + k_l - lam)(t a + (1-t)(1 - lam)) -
/// k_l, evaluated in this exact factored order so that t = 0 reproduces
/// q_l bit for bit.
#[inline]
fn q_homotopy(nk: f64, k: f64, a: f64, t: f64, lam: f64) -> f64 {
    (nk - lam) * (t * a + (1.0 - t) * (1.0 - lam)) - k
}

/// The homotopy polynomial F^{a,t}(lam) in expanded product-sum form.
///
/// At t = 0 this is F (degree 2j, bit-identical to [`eval_f`]); at t = 1 it
/// is the degree-j shifted polynomial F^a whose roots the companion matrix
/// carries. Requires a < 1 - n and 0 <= t <= 1.
pub fn eval_f_homotopy(p: &PencilParams, a: f64, t: f64, lam: f64) -> Result<f64, QepError> {
    check_homotopy_shift(p, a)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(QepError::TimeOutOfRange { t });
    }
    let qs: Vec<f64> = (0..p.j())
        .map(|l| q_homotopy(p.nk(l), p.ks[l] as f64, a, t, lam))
        .collect();
    let ks: Vec<f64> = p.ks.iter().map(|&k| k as f64).collect();
    Ok(product_sum(&qs, &ks))
}

/// Plus-branch root of q_l^{a,t} for t < 1, computed without cancellation.
fn homotopy_plus_pole(nk: f64, k: f64, a: f64, t: f64) -> f64 {
    let big_a = 1.0 - t;
    let c = t * a + (1.0 - t);
    // monic form: big_a lam^2 - (c + big_a nk) lam + (c nk - k)
    let b = -(c + big_a * nk);
    let cc = c * nk - k;
    let disc = (c - big_a * nk) * (c - big_a * nk) + 4.0 * big_a * k;
    let sq = disc.sqrt();
    let u = -0.5 * (b + b.signum() * sq);
    let r1 = u / big_a;
    let r2 = cc / u;
    r1.max(r2)
}

/// The top j roots of F^{a,t}, descending, repeated by multiplicity.
///
/// For 0 < t < 1 they are isolated afresh at this t: the plus-branch poles of
/// the q_l^{a,t} contribute multiplicity m - 1 per equal-k group, one zero of
/// G^{a,t} lies between adjacent distinct poles, and one more lies in
/// (n, r_j^{a,t,+}) anchored by G^{a,t}(n) > 0, which holds for every t > 0
/// even in the degenerate case. t = 0 delegates to [`find_roots`] and t = 1
/// to [`companion_roots`].
pub fn homotopy_top_roots(p: &PencilParams, a: f64, t: f64) -> Result<Vec<f64>, QepError> {
    check_homotopy_shift(p, a)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(QepError::TimeOutOfRange { t });
    }
    let j = p.j();
    if t == 0.0 {
        let all = find_roots(p)?.expanded();
        return Ok(all[..j].to_vec());
    }
    if t == 1.0 {
        return Ok(companion_roots(p, a)?.expanded());
    }

    let n = p.n as f64;
    let eps = p.pole_guard();
    let tol = p.bisect_tol();

    // one pole per distinct k; equal k yields bit-identical poles
    let mut groups: Vec<(usize, f64)> = Vec::new(); // (multiplicity, r_plus)
    for l in 0..j {
        let rp = homotopy_plus_pole(p.nk(l), p.ks[l] as f64, a, t);
        match groups.last_mut() {
            Some((m, prev)) if (*prev - rp).abs() < 4.0 * eps => *m += 1,
            _ => groups.push((1, rp)),
        }
    }

    let g_fn = |lam: f64| {
        let mut g = 1.0;
        for l in 0..j {
            g += p.ks[l] as f64 / q_homotopy(p.nk(l), p.ks[l] as f64, a, t, lam);
        }
        g
    };

    let mut pairs: Vec<(f64, usize)> = Vec::new();
    for &(m, rp) in &groups {
        if m > 1 {
            pairs.push((rp, m - 1));
        }
    }
    for w in groups.windows(2) {
        let (lo, hi) = (w[1].1, w[0].1);
        let root = certified_bisect(&g_fn, lo + eps, hi - eps, true, tol, None)?;
        pairs.push((root, 1));
    }
    let innermost = groups.last().expect("at least one group").1;
    let root = certified_bisect(&g_fn, n, innermost - eps, true, tol, None)?;
    pairs.push((root, 1));

    let set = RootSet::from_pairs(&pairs, p.root_merge_tol(), j);
    Ok(set.expanded())
}

/// One tracked root of the homotopy: s_l(a, t) on a grid from t = 0 to t = 1.
#[derive(Debug, Clone)]
pub struct HomotopyTrace {
    /// The shift, a < 1 - n.
    pub a: f64,
    /// Which root is tracked, 1-based from the largest.
    pub root_index: usize,
    /// Grid points: uniform on [0, 1 - delta], then exactly 1.
    pub t_grid: Vec<f64>,
    /// s_l(a, t) per grid point.
    pub values: Vec<f64>,
}

const HOMOTOPY_DELTA: f64 = 1e-3;
const CONTINUITY_HEADROOM: f64 = 4.0;
const CONTINUITY_DEPTH: usize = 24;

/// Tracks the l-th largest root of F^{a,t} from t = 0 to t = 1.
///
/// Every grid value comes from a full certified isolation at that t, so the
/// trace cannot jump between root branches undetected; in addition each
/// consecutive pair is checked against a continuity budget proportional to
/// the step (with recursive step-halving to confirm genuine continuity when
/// the budget is exceeded), and the t = 1 value from the companion matrix is
/// checked against an isolation at t = 1 - 1e-9.
pub fn track_root(
    p: &PencilParams,
    a: f64,
    l: usize,
    steps: usize,
) -> Result<HomotopyTrace, QepError> {
    check_homotopy_shift(p, a)?;
    if l == 0 || l > p.j() {
        return Err(QepError::RootIndexOutOfRange { l, j: p.j() });
    }
    if steps < 2 {
        return Err(QepError::TooFewSteps { steps });
    }

    let root_at = |t: f64| -> Result<f64, QepError> { Ok(homotopy_top_roots(p, a, t)?[l - 1]) };

    let mut t_grid: Vec<f64> = (0..steps)
        .map(|i| (1.0 - HOMOTOPY_DELTA) * i as f64 / (steps - 1) as f64)
        .collect();
    t_grid.push(1.0);
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in &t_grid {
        values.push(root_at(t)?);
    }

    // the tail beyond the grid: an isolated root at t close to 1 must agree
    // with the companion eigenvalue, tying the two methods together without
    // circularity
    let near_end = root_at(1.0 - 1e-9)?;
    let companion = *values.last().expect("nonempty grid");
    if (near_end - companion).abs() > 1e-6 * p.scale() {
        return Err(QepError::EndpointMismatch {
            index: l,
            tracked: near_end,
            companion,
        });
    }

    // continuity budget: proportional to the observed excursion, measured in
    // sqrt(t) because a degenerate double root at t = 0 splits like sqrt(t);
    // regular roots are analytic in t and satisfy the bound with room to
    // spare. Steps are halved to confirm continuity when the budget trips.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = hi - lo + p.root_merge_tol();
    let floor = 1e-9 * p.scale();
    for i in 1..t_grid.len() {
        verify_continuity(
            &root_at,
            t_grid[i - 1],
            values[i - 1],
            t_grid[i],
            values[i],
            span,
            floor,
            CONTINUITY_DEPTH,
        )?;
    }

    Ok(HomotopyTrace {
        a,
        root_index: l,
        t_grid,
        values,
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_continuity(
    root_at: &dyn Fn(f64) -> Result<f64, QepError>,
    t0: f64,
    s0: f64,
    t1: f64,
    s1: f64,
    span: f64,
    floor: f64,
    depth: usize,
) -> Result<(), QepError> {
    let jump = (s1 - s0).abs();
    let allowed = CONTINUITY_HEADROOM * span * (t1.sqrt() - t0.sqrt()) + floor;
    if jump <= allowed {
        return Ok(());
    }
    if depth == 0 {
        return Err(QepError::StepFailure {
            t_lo: t0,
            t_hi: t1,
            jump,
        });
    }
    let tm = 0.5 * (t0 + t1);
    let sm = root_at(tm)?;
    verify_continuity(root_at, t0, s0, tm, sm, span, floor, depth - 1)?;
    verify_continuity(root_at, tm, sm, t1, s1, span, floor, depth - 1)
}

// ============================================================================
// THE TWO-GROUP QUADRATICS
// ============================================================================

/// Roots and residuals of the two auxiliary quadratics for j = 2.
#[derive(Debug, Clone)]
pub struct J2Quadratics {
    /// Roots of Q_1, descending.
    pub q1_roots: [f64; 2],
    /// Roots of Q_2, descending.
    pub q2_roots: [f64; 2],
    /// Q_1(s_1); zero in exact arithmetic when s_1 is a root of F.
    pub q1_residual: f64,
    /// Q_2(s_2); zero in exact arithmetic when s_2 is a root of F.
    pub q2_residual: f64,
    /// (largest root of Q_2) + s_2 - (2n + k_1 + k_2); zero in exact
    /// arithmetic because both roots of Q_2 sum to the trace coefficient.
    pub pair_sum_defect: f64,
}

/// For j = 2 the identity F(s) = (n+k_1-s)(n+k_2-s)(1-s)^2 - k_1 k_2 turns
/// each large root s_i of F into a root of the quadratic
/// Q_i(lam) = (n+k_1-lam)(n+k_2-lam) - k_1 k_2 / (1-s_i)^2.
///
/// Returns both quadratics' roots plus the residuals that certify the
/// construction. Requires j = 2 and s1 > s2 > n.
pub fn j2_quadratics(p: &PencilParams, s1: f64, s2: f64) -> Result<J2Quadratics, QepError> {
    if p.j() != 2 {
        return Err(QepError::NotTwoGroups { j: p.j() });
    }
    if !(s1 > s2 && s2 > p.n as f64) {
        return Err(QepError::J2RootsOutOfOrder { s1, s2, n: p.n });
    }
    let (k1, k2) = (p.ks[0] as f64, p.ks[1] as f64);
    let (nk1, nk2) = (p.nk(0), p.nk(1));

    let solve = |s: f64| -> Result<([f64; 2], f64), QepError> {
        let w = k1 * k2 / ((1.0 - s) * (1.0 - s));
        let b = nk1 + nk2;
        let c = nk1 * nk2 - w;
        let disc = b * b - 4.0 * c;
        if disc < 0.0 {
            return Err(QepError::NegativeDiscriminant { value: disc });
        }
        let hi = 0.5 * (b + disc.sqrt());
        let lo = c / hi;
        let residual = (nk1 - s) * (nk2 - s) - w;
        Ok(([hi, lo], residual))
    };

    let (q1_roots, q1_residual) = solve(s1)?;
    let (q2_roots, q2_residual) = solve(s2)?;
    let pair_sum_defect = q2_roots[0] + s2 - (nk1 + nk2);
    Ok(J2Quadratics {
        q1_roots,
        q2_roots,
        q1_residual,
        q2_residual,
        pair_sum_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen_symmetric;

    fn params(n: usize, ks: &[usize]) -> PencilParams {
        PencilParams::new(n, ks.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b} (tol {tol:e})");
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            PencilParams::new(0, vec![1]),
            Err(QepError::ZeroCliqueSize)
        ));
        assert!(matches!(
            PencilParams::new(3, vec![]),
            Err(QepError::NoPendantGroups)
        ));
        assert!(matches!(
            PencilParams::new(2, vec![1, 1, 1]),
            Err(QepError::TooManyGroups { j: 3, n: 2 })
        ));
        assert!(matches!(
            PencilParams::new(3, vec![1, 2]),
            Err(QepError::KsNotSorted { index: 1 })
        ));
        assert!(matches!(
            PencilParams::new(3, vec![2, 0]),
            Err(QepError::ZeroPendantCount { index: 1 })
        ));
        let p = params(3, &[2, 1]);
        assert_eq!(p.j(), 2);
        assert_eq!(p.vertex_count(), 6);
        assert_eq!(p.gm_bound(), 9.0);
        assert!(!p.is_degenerate());
        assert!(params(2, &[1, 1]).is_degenerate());
    }

    #[test]
    fn q_factor_fixtures() {
        let p = params(3, &[1, 1]);
        close(q_factor(&p, 1, 0.0).unwrap(), 3.0, 1e-15);
        close(q_factor(&p, 1, 3.0).unwrap(), -3.0, 1e-15);
        let rp = 0.5 * (5.0 + 13f64.sqrt());
        close(q_factor(&p, 1, rp).unwrap(), 0.0, 1e-12);
        let rm = 3.0 / rp;
        close(q_factor(&p, 2, rm).unwrap(), 0.0, 1e-12);
        assert!(matches!(
            q_factor(&p, 0, 1.0),
            Err(QepError::FactorIndex { l: 0, j: 2 })
        ));
        assert!(matches!(
            q_factor(&p, 3, 1.0),
            Err(QepError::FactorIndex { l: 3, j: 2 })
        ));
    }

    #[test]
    fn eval_f_fixtures() {
        let p = params(3, &[1, 1]);
        close(eval_f(&p, 0.0), 15.0, 1e-12);
        close(eval_f(&p, 0.5 * (5.0 + 5f64.sqrt())), 0.0, 1e-10);
        close(eval_f(&p, 0.5 * (5.0 + 13f64.sqrt())), 0.0, 1e-10);
    }

    #[test]
    fn eval_g_fixtures() {
        let p = params(3, &[1, 1]);
        close(eval_g(&p, 3.0).unwrap(), 1.0 / 3.0, 1e-14);
        close(eval_g(&p, 0.0).unwrap(), 5.0 / 3.0, 1e-14);
    }

    #[test]
    fn eval_g_matches_factored_f() {
        let p = params(5, &[3, 2, 2]);
        for &lam in &[0.1, 0.9, 2.0, 4.9, 6.5, 11.0] {
            let g = eval_g(&p, lam).unwrap();
            let prod: f64 = (1..=3).map(|l| q_factor(&p, l, lam).unwrap()).product();
            let f = eval_f(&p, lam);
            close(f, g * prod, 1e-9 * f.abs().max(1.0));
        }
    }

    #[test]
    fn eval_g_guards_poles() {
        let p = params(3, &[1, 1]);
        let rp = 0.5 * (5.0 + 13f64.sqrt());
        assert!(matches!(
            eval_g(&p, rp + 1e-12),
            Err(QepError::PoleProximity { l: 1, .. })
        ));
        assert!(eval_g(&p, rp + 1.0).is_ok());
    }

    #[test]
    fn bracket_fixtures() {
        let p = params(3, &[1]);
        let t = brackets(&p);
        close(t.r_plus[0], 0.5 * (5.0 + 13f64.sqrt()), 1e-12);
        close(t.r_minus[0], 0.5 * (5.0 - 13f64.sqrt()), 1e-12);

        // equal counts: single group, no between-pole intervals
        let t = brackets(&params(3, &[1, 1]));
        assert_eq!(t.groups.len(), 1);
        assert_eq!(t.groups[0].multiplicity, 2);
        assert_eq!(t.intervals.len(), 2);

        // two distinct counts: one between interval on each side
        let t = brackets(&params(5, &[3, 2, 2]));
        assert_eq!(t.groups.len(), 2);
        assert_eq!(t.intervals.len(), 4);

        // chain lower bound on the innermost plus pole
        for (n, ks) in [(4, vec![2, 1]), (6, vec![4, 4, 1, 1]), (8, vec![1])] {
            let p = params(n, &ks);
            let t = brackets(&p);
            let kj = *ks.last().unwrap();
            assert!(*t.r_plus.last().unwrap() >= (n + kj) as f64);
        }
    }

    #[test]
    fn find_roots_two_equal_groups() {
        let p = params(3, &[1, 1]);
        let rs = find_roots(&p).unwrap();
        let expected = [
            0.5 * (5.0 + 13f64.sqrt()),
            0.5 * (5.0 + 5f64.sqrt()),
            0.5 * (5.0 - 5f64.sqrt()),
            0.5 * (5.0 - 13f64.sqrt()),
        ];
        assert_eq!(rs.roots().len(), 4);
        assert!(rs.multiplicities().iter().all(|&m| m == 1));
        for (got, want) in rs.roots().iter().zip(expected) {
            close(*got, want, 1e-10);
        }
        close(rs.top_sum(2), 7.920810, 1e-6);
        assert!(rs.top_sum(2) <= p.gm_bound());
    }

    #[test]
    fn find_roots_matches_matrix_oracle() {
        for (n, ks) in [
            (3usize, vec![1usize]),
            (4, vec![2, 1]),
            (5, vec![3, 2, 2]),
            (6, vec![4, 4, 1, 1]),
            (7, vec![2, 2, 2]),
        ] {
            let p = params(n, &ks);
            let rs = find_roots(&p).unwrap();
            assert_eq!(rs.total_multiplicity(), 2 * p.j());
            assert!(rs.roots().iter().all(|&r| r > 0.0));

            let m = build_m(&p);
            let spectrum = eigen_symmetric(&m, DEFAULT_EIGEN_TOL).unwrap();
            let mut expected = spectrum.values().to_vec();
            // drop the single zero eigenvalue from the kernel
            let zero_pos = expected
                .iter()
                .position(|v| v.abs() < 1e-9)
                .expect("kernel eigenvalue");
            expected.remove(zero_pos);

            let got = rs.expanded();
            assert_eq!(got.len(), expected.len());
            for (g, e) in got.iter().zip(&expected) {
                close(*g, *e, 1e-8);
            }

            // exactly j roots exceed n in the nondegenerate case
            let above = got.iter().filter(|&&r| r > n as f64).count();
            assert_eq!(above, p.j());
        }
    }

    #[test]
    fn find_roots_degenerate_cases() {
        // saturated path: double root at n = 2
        let p = params(2, &[1, 1]);
        let rs = find_roots(&p).unwrap();
        let two = rs
            .roots()
            .iter()
            .zip(rs.multiplicities())
            .find(|(r, _)| (**r - 2.0).abs() < 1e-9)
            .expect("root at n");
        assert_eq!(*two.1, 2);

        // saturated triangle: simple root at n = 3 plus a zero below it
        let p = params(3, &[1, 1, 1]);
        let rs = find_roots(&p).unwrap();
        let expanded = rs.expanded();
        assert_eq!(expanded.len(), 6);
        assert!(expanded.iter().any(|&r| (r - 3.0).abs() < 1e-9));
        assert!(expanded.iter().any(|&r| (r - 2.0).abs() < 1e-9));

        // star: roots {k + 1, 1}
        let p = params(1, &[4]);
        let rs = find_roots(&p).unwrap();
        close(rs.roots()[0], 5.0, 1e-10);
        close(rs.roots()[1], 1.0, 1e-10);

        // degenerate instances still match the matrix oracle
        for (n, ks) in [
            (2usize, vec![2usize, 1]),
            (3, vec![2, 2, 1]),
            (4, vec![1, 1, 1, 1]),
        ] {
            let p = params(n, &ks);
            let got = find_roots(&p).unwrap().expanded();
            let m = build_m(&p);
            let spectrum = eigen_symmetric(&m, DEFAULT_EIGEN_TOL).unwrap();
            let mut expected = spectrum.values().to_vec();
            let zero_pos = expected
                .iter()
                .position(|v| v.abs() < 1e-9)
                .expect("kernel eigenvalue");
            expected.remove(zero_pos);
            for (g, e) in got.iter().zip(&expected) {
                close(*g, *e, 1e-8);
            }
        }
    }

    #[test]
    fn matrix_m_kernel_and_trace() {
        for (n, ks) in [
            (3usize, vec![1usize, 1]),
            (5, vec![3, 2, 2]),
            (2, vec![1, 1]),
        ] {
            let p = params(n, &ks);
            let m = build_m(&p);
            let v = kernel_vector(&p);
            for r in m.mul_vec(&v).unwrap() {
                assert!(r.abs() < 1e-10, "kernel residual {r:e}");
            }
            let expected_trace: f64 =
                ks.iter().map(|&k| (n + k - 1) as f64).sum::<f64>() + p.j() as f64 + p.j() as f64;
            close(m.trace(), expected_trace, 1e-12);
        }
    }

    #[test]
    fn equal_k_fixtures() {
        let rs = equal_k_closed_form(3, 1, 2).unwrap();
        close(rs.roots()[0], 0.5 * (5.0 + 13f64.sqrt()), 1e-12);
        close(rs.roots()[1], 0.5 * (5.0 + 5f64.sqrt()), 1e-12);
        let concavity = rs.roots()[0] + rs.roots()[1];
        assert!(concavity <= 2.0 * 4.0);

        // matches general isolation
        for (n, k, j) in [(3usize, 1usize, 2usize), (5, 2, 3), (4, 4, 4), (6, 1, 1)] {
            let closed = equal_k_closed_form(n, k, j).unwrap().expanded();
            let general = find_roots(&params(n, &vec![k; j])).unwrap().expanded();
            assert_eq!(closed.len(), general.len());
            for (c, g) in closed.iter().zip(&general) {
                close(*c, *g, 1e-10);
            }
        }

        // the inner pair collapses onto n exactly at (n, k, j) = (n, n-1, n)
        let rs = equal_k_closed_form(3, 2, 3).unwrap();
        let at_n = rs
            .roots()
            .iter()
            .zip(rs.multiplicities())
            .find(|(r, _)| (**r - 3.0).abs() < 1e-12)
            .expect("double root at n");
        assert_eq!(*at_n.1, 2);
    }

    #[test]
    fn companion_fixture_and_normalization() {
        let p = params(3, &[2, 1]);
        let c = companion_matrix(&p, -1.0).unwrap();
        close(c.get(0, 0), 5.0, 1e-15);
        close(c.get(1, 1), 4.0, 1e-15);
        close(c.get(0, 1), -2f64.sqrt(), 1e-15);

        let rs = companion_roots(&p, -1.0).unwrap();
        close(rs.roots()[0], 6.0, 1e-10);
        close(rs.roots()[1], 3.0, 1e-10);
        close(rs.top_sum(2), p.gm_bound(), 1e-10);

        // F^a(lam) = (-a)^j det(lam I - C_a) at arbitrary sample points,
        // with shifts inside the homotopy range a < 1 - n
        for (n, ks, a) in [
            (3usize, vec![2usize, 1], -2.5),
            (3, vec![1, 1], -3.0),
            (5, vec![3, 2, 2], -7.5),
        ] {
            let p = params(n, &ks);
            let eig = companion_roots(&p, a).unwrap().expanded();
            let sign = (-a).powi(p.j() as i32);
            for &lam in &[0.0, 1.7, 4.2, 9.1] {
                let via_det: f64 = sign * eig.iter().map(|&s| lam - s).product::<f64>();
                let direct = eval_f_homotopy(&p, a, 1.0, lam).unwrap();
                close(direct, via_det, 1e-7 * direct.abs().max(1.0));
            }
        }

        // far shift: eigenvalues approach the diagonal n + k_l
        let far = companion_roots(&params(4, &[3, 1]), -1e9).unwrap();
        close(far.roots()[0], 7.0, 1e-6);
        close(far.roots()[1], 5.0, 1e-6);

        assert!(matches!(
            companion_matrix(&p, 0.0),
            Err(QepError::ZeroShift)
        ));
        assert!(matches!(
            companion_roots(&p, 1.0),
            Err(QepError::ShiftNotNegative { .. })
        ));
    }

    #[test]
    fn companion_trace_identity() {
        for (n, ks, a) in [
            (4usize, vec![2usize, 2, 1], -0.5),
            (6, vec![4, 3, 2, 1], -5.0),
            (2, vec![1, 1], -1.0001),
        ] {
            let p = params(n, &ks);
            let rs = companion_roots(&p, a).unwrap();
            close(rs.top_sum(p.j()), p.gm_bound(), 1e-9 * p.gm_bound());
        }
    }

    #[test]
    fn homotopy_t0_is_exactly_f() {
        let p = params(5, &[3, 2, 2]);
        for &lam in &[0.0, 0.3, 1.0, 2.5, 6.0, 9.9] {
            let f = eval_f(&p, lam);
            let h = eval_f_homotopy(&p, -10.0, 0.0, lam).unwrap();
            assert_eq!(f.to_bits(), h.to_bits(), "t = 0 must be bit-exact");
        }
    }

    #[test]
    fn homotopy_t1_factor_root() {
        // at t = 1 the factor q^{a,1} vanishes at n + k - k/a; for j = 1 the
        // polynomial there reduces to the bare k term
        let n = 4usize;
        let k = 3usize;
        let p = params(n, &[k]);
        let a = -5.0;
        let lam = (n + k) as f64 - k as f64 / a;
        let f = eval_f_homotopy(&p, a, 1.0, lam).unwrap();
        close(f, k as f64, 1e-12);
    }

    #[test]
    fn homotopy_rejects_bad_inputs() {
        let p = params(3, &[1, 1]);
        assert!(matches!(
            eval_f_homotopy(&p, -1.5, 0.5, 2.0),
            Err(QepError::ShiftAboveHomotopyBound { .. })
        ));
        assert!(matches!(
            eval_f_homotopy(&p, -3.0, 1.5, 2.0),
            Err(QepError::TimeOutOfRange { .. })
        ));
        assert!(matches!(
            track_root(&p, -3.0, 0, 16),
            Err(QepError::RootIndexOutOfRange { .. })
        ));
        assert!(matches!(
            track_root(&p, -3.0, 1, 1),
            Err(QepError::TooFewSteps { .. })
        ));
    }

    #[test]
    fn homotopy_roots_interpolate_endpoints() {
        let p = params(3, &[2, 1]);
        let a = -4.0;
        let t0 = homotopy_top_roots(&p, a, 0.0).unwrap();
        let from_f = find_roots(&p).unwrap().expanded();
        for (h, f) in t0.iter().zip(&from_f) {
            close(*h, *f, 1e-12);
        }
        let t1 = homotopy_top_roots(&p, a, 1.0).unwrap();
        let from_c = companion_roots(&p, a).unwrap().expanded();
        for (h, c) in t1.iter().zip(&from_c) {
            close(*h, *c, 1e-12);
        }
        // interior t: still j sorted values above n
        let mid = homotopy_top_roots(&p, a, 0.5).unwrap();
        assert_eq!(mid.len(), 2);
        assert!(mid[0] >= mid[1]);
        assert!(mid[1] > 3.0);
    }

    #[test]
    fn tracked_roots_stay_continuous_and_sorted() {
        let p = params(3, &[1, 1]);
        let a = -3.0;
        let tr1 = track_root(&p, a, 1, 16).unwrap();
        let tr2 = track_root(&p, a, 2, 16).unwrap();
        assert_eq!(tr1.t_grid.len(), 17);
        close(tr1.values[0], 0.5 * (5.0 + 13f64.sqrt()), 1e-10);
        close(tr2.values[0], 0.5 * (5.0 + 5f64.sqrt()), 1e-10);
        let companion = companion_roots(&p, a).unwrap().expanded();
        close(*tr1.values.last().unwrap(), companion[0], 1e-12);
        close(*tr2.values.last().unwrap(), companion[1], 1e-12);
        for (v1, v2) in tr1.values.iter().zip(&tr2.values) {
            assert!(v1 >= v2, "traces must not swap order");
            assert!(*v2 > 3.0, "tracked roots must stay above n");
        }
    }

    #[test]
    fn track_root_handles_degenerate_params() {
        let p = params(2, &[1, 1]);
        let tr = track_root(&p, -1.5, 2, 16).unwrap();
        // at t = 0 the second root sits exactly at n = 2 (double root)
        close(tr.values[0], 2.0, 1e-9);
        let companion = companion_roots(&p, -1.5).unwrap().expanded();
        close(*tr.values.last().unwrap(), companion[1], 1e-12);
    }

    #[test]
    fn sublemma_fixed_point() {
        // with a = 1 - s_l, the l-th companion root reproduces s_l
        for (n, ks) in [
            (3usize, vec![1usize, 1]),
            (4, vec![2, 1]),
            (5, vec![3, 2, 2]),
        ] {
            let p = params(n, &ks);
            let roots = find_roots(&p).unwrap().expanded();
            for l in 1..=p.j() {
                let s_l = roots[l - 1];
                let a = 1.0 - s_l;
                let back = companion_roots(&p, a).unwrap().expanded();
                close(back[l - 1], s_l, 1e-8);
            }
        }
    }

    #[test]
    fn j2_quadratic_identities() {
        let p = params(3, &[1, 1]);
        let roots = find_roots(&p).unwrap().expanded();
        let (s1, s2) = (roots[0], roots[1]);
        let rep = j2_quadratics(&p, s1, s2).unwrap();
        assert!(rep.q1_residual.abs() < 1e-9);
        assert!(rep.q2_residual.abs() < 1e-9);
        assert!(rep.pair_sum_defect.abs() < 1e-9);
        // Q2's larger root plus s2 hits the trace bound from below
        assert!(s1 + s2 <= rep.q2_roots[0] + s2 + 1e-12);

        assert!(matches!(
            j2_quadratics(&params(3, &[1, 1, 1]), 5.0, 4.0),
            Err(QepError::NotTwoGroups { j: 3 })
        ));
        assert!(matches!(
            j2_quadratics(&p, 4.0, 4.5),
            Err(QepError::J2RootsOutOfOrder { .. })
        ));
    }

    #[test]
    fn root_set_merging() {
        let rs = RootSet::from_pairs(&[(5.0, 1), (5.0 + 1e-12, 1), (3.0, 2)], 1e-9, 4);
        assert_eq!(rs.roots().len(), 2);
        assert_eq!(rs.multiplicities(), &[2, 2]);
        close(rs.roots()[0], 5.0, 1e-11);
        assert_eq!(
            rs.expanded(),
            vec![rs.roots()[0]; 2]
                .into_iter()
                .chain(vec![3.0; 2])
                .collect::<Vec<_>>()
        );
    }
}
