//! Verdict layer: assemble full Laplacian spectra from the structured
//! pieces, compare them against conjugate degree sequences, verify the
//! majorization chain through the companion matrices, and sweep whole
//! parameter lattices with cross-validation against the dense eigensolver.
//!
//! Two independent routes produce every spectrum here. The pipeline route
//! goes parameters -> isolated roots of F -> assembled spectrum, never
//! touching the graph; the oracle route goes parameters -> graph ->
//! Laplacian -> Jacobi eigensolve. Their agreement is the crate's central
//! acceptance gate, so nothing in this module is allowed to feed one route
//! from the other.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{build_semibipartite, degree_data, laplacian, Graph, GraphError};
use crate::linalg::{eigen_symmetric, majorizes, LinalgError, DEFAULT_EIGEN_TOL};
use crate::qep::{companion_roots, eval_g, find_roots, PencilParams, QepError, RootSet};

/// A GM verdict counts as holding when every prefix margin is at least this
/// far from negative territory.
pub const DEFAULT_GM_TOL: f64 = 1e-7;

/// A margin is reported as tight when its magnitude is below
/// `TIGHTNESS_COEFF * (1 + prefix sum of the conjugate)`.
pub const TIGHTNESS_COEFF: f64 = 1e-6;

/// How close to j the degenerate assembly requires a root of F to sit.
pub const NEAR_J_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CheckerError {
    #[error("parameters are degenerate (j = n = {n}); use the degenerate assembly")]
    DegenerateParams { n: usize },
    #[error("no root of F within {NEAR_J_TOL:e} of j = {j}; nearest root is {nearest}")]
    NoRootNearJ { j: usize, nearest: f64 },
    #[error("trace identity violated: final margin {defect:e} exceeds budget {budget:e}")]
    TraceMismatch { defect: f64, budget: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Qep(#[from] QepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

// ============================================================================
// SPECTRUM ASSEMBLY
// ============================================================================

/// Record of the one root removed by the degenerate assembly.
#[derive(Debug, Clone, Copy)]
pub struct RemovedRoot {
    /// The removed value (within [`NEAR_J_TOL`] of j).
    pub value: f64,
    /// Multiplicity of the cluster it was removed from. 2 when the classical
    /// double root is present; 1 when the root at j is simple, which does
    /// happen (the double root requires sum_l (n - k_l - 1)/k_l = 0).
    pub cluster_multiplicity: usize,
}

/// A full Laplacian spectrum built from its structured pieces.
#[derive(Debug, Clone)]
pub struct AssembledSpectrum {
    /// The isolated roots of F.
    pub f_roots: RootSet,
    /// Copies of the eigenvalue n adjoined (n - j - 1, nondegenerate only).
    pub n_copies: usize,
    /// Copies of the pendant eigenvalue 1 adjoined (sum k - j).
    pub one_copies: usize,
    /// Set when the degenerate path removed one root near j.
    pub removed_near_j: Option<RemovedRoot>,
    /// All eigenvalues, sorted descending, including the kernel zero.
    pub merged: Vec<f64>,
}

fn sort_desc(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// Assembles the Laplacian spectrum for nondegenerate parameters (j < n):
/// the 2j roots of F, n with multiplicity n - j - 1, 1 with multiplicity
/// sum(k) - j, and the kernel zero.
pub fn assemble_spectrum(p: &PencilParams) -> Result<AssembledSpectrum, CheckerError> {
    if p.is_degenerate() {
        return Err(CheckerError::DegenerateParams { n: p.n() });
    }
    let f_roots = find_roots(p)?;
    let n_copies = p.n() - p.j() - 1;
    let one_copies = p.total_pendants() - p.j();

    let mut merged = f_roots.expanded();
    merged.extend(std::iter::repeat_n(p.n() as f64, n_copies));
    merged.extend(std::iter::repeat_n(1.0, one_copies));
    merged.push(0.0);
    sort_desc(&mut merged);
    debug_assert_eq!(merged.len(), p.vertex_count());

    Ok(AssembledSpectrum {
        f_roots,
        n_copies,
        one_copies,
        removed_near_j: None,
        merged,
    })
}

/// Assembles the Laplacian spectrum for the saturated case n = j: every
/// clique vertex carries pendants, lambda = j is itself a root of F, and the
/// spectrum is the roots of F with one copy of that root removed, plus the
/// pendant ones and the kernel zero.
///
/// The root nearest j must lie within [`NEAR_J_TOL`] of j; its cluster
/// multiplicity is recorded rather than asserted to be 2, because the root
/// at j is simple whenever sum_l (n - k_l - 1)/k_l is nonzero.
pub fn assemble_spectrum_degenerate(ks: &[usize]) -> Result<AssembledSpectrum, CheckerError> {
    let j = ks.len();
    let p = PencilParams::new(j, ks.to_vec())?;
    let f_roots = find_roots(&p)?;

    let jf = j as f64;
    let (mut nearest_idx, mut nearest_gap) = (0usize, f64::INFINITY);
    for (i, &r) in f_roots.roots().iter().enumerate() {
        let gap = (r - jf).abs();
        if gap < nearest_gap {
            nearest_gap = gap;
            nearest_idx = i;
        }
    }
    if nearest_gap > NEAR_J_TOL {
        return Err(CheckerError::NoRootNearJ {
            j,
            nearest: f_roots.roots()[nearest_idx],
        });
    }
    let removed = RemovedRoot {
        value: f_roots.roots()[nearest_idx],
        cluster_multiplicity: f_roots.multiplicities()[nearest_idx],
    };

    let one_copies = p.total_pendants() - j;
    let mut merged = f_roots.expanded();
    let pos = merged
        .iter()
        .position(|&v| v == removed.value)
        .expect("removed root present in expansion");
    merged.remove(pos);
    merged.extend(std::iter::repeat_n(1.0, one_copies));
    merged.push(0.0);
    sort_desc(&mut merged);
    debug_assert_eq!(merged.len(), p.vertex_count());

    Ok(AssembledSpectrum {
        f_roots,
        n_copies: 0,
        one_copies,
        removed_near_j: Some(removed),
        merged,
    })
}

/// Dispatches to the right assembly for the parameters.
pub fn assemble_for(p: &PencilParams) -> Result<AssembledSpectrum, CheckerError> {
    if p.is_degenerate() {
        assemble_spectrum_degenerate(p.ks())
    } else {
        assemble_spectrum(p)
    }
}

// ============================================================================
// GM REPORTS
// ============================================================================

/// Which route produced the eigenvalues of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMethod {
    /// Dense Jacobi eigensolve of the constructed Laplacian.
    DirectOracle,
    /// Root isolation of F plus the structured pieces.
    QepPipeline,
    /// Pipeline eigenvalues, cross-checked against the oracle.
    Both,
}

/// Majorization comparison of a spectrum against a conjugate degree
/// sequence: the Grone-Merris inequalities, one margin per prefix.
#[derive(Debug, Clone)]
pub struct GMReport {
    /// Eigenvalues, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Conjugate degree sequence, index-aligned with the eigenvalues.
    pub conjugate: Vec<usize>,
    /// `prefix_margins[l-1]` = (sum of first l conjugate entries) - (sum of
    /// first l eigenvalues); nonnegative margins mean the inequality holds.
    pub prefix_margins: Vec<f64>,
    /// True iff every margin is at least -gm_tol.
    pub holds: bool,
    /// 1-based indices where the inequality is an equality to within the
    /// scale-aware tightness threshold.
    pub tight_indices: Vec<usize>,
    pub method: ReportMethod,
}

fn build_report(
    eigenvalues: Vec<f64>,
    conjugate: Vec<usize>,
    gm_tol: f64,
    method: ReportMethod,
) -> Result<GMReport, CheckerError> {
    let conj_f: Vec<f64> = conjugate.iter().map(|&c| c as f64).collect();
    let cmp = majorizes(&conj_f, &eigenvalues, gm_tol)?;

    let mut tight_indices = Vec::new();
    let mut prefix = 0.0;
    for (i, (&c, margin)) in conj_f.iter().zip(&cmp.prefix_margins).enumerate() {
        prefix += c;
        if margin.abs() < TIGHTNESS_COEFF * (1.0 + prefix) {
            tight_indices.push(i + 1);
        }
    }

    // the final inequality is an exact trace identity; a violation means a
    // numeric breakdown, not a counterexample
    if let Some(&final_margin) = cmp.prefix_margins.last() {
        let budget = DEFAULT_GM_TOL.max(1e-9 * prefix);
        if final_margin.abs() > budget {
            return Err(CheckerError::TraceMismatch {
                defect: final_margin,
                budget,
            });
        }
    }

    Ok(GMReport {
        eigenvalues,
        conjugate,
        prefix_margins: cmp.prefix_margins,
        holds: cmp.holds,
        tight_indices,
        method,
    })
}

/// Checks the Grone-Merris inequalities for an arbitrary graph using the
/// dense eigensolver.
pub fn gm_report(g: &Graph, eigen_tol: f64, gm_tol: f64) -> Result<GMReport, CheckerError> {
    let spectrum = eigen_symmetric(&laplacian(g), eigen_tol)?;
    let conjugate = degree_data(g).conjugate;
    build_report(
        spectrum.values().to_vec(),
        conjugate,
        gm_tol,
        ReportMethod::DirectOracle,
    )
}

/// Degree sequence of the pendant-decorated clique, read off the parameters:
/// attachment vertices have degree n - 1 + k_l, the remaining clique
/// vertices n - 1, and every pendant 1.
fn degrees_from_params(p: &PencilParams) -> Vec<usize> {
    let n = p.n();
    let mut deg = Vec::with_capacity(p.vertex_count());
    for &k in p.ks() {
        deg.push(n - 1 + k);
    }
    deg.extend(std::iter::repeat_n(n - 1, n - p.j()));
    deg.extend(std::iter::repeat_n(1, p.total_pendants()));
    deg
}

fn conjugate_from_params(p: &PencilParams) -> Vec<usize> {
    let degrees = degrees_from_params(p);
    let nv = p.vertex_count();
    (1..=nv)
        .map(|m| degrees.iter().filter(|&&d| d >= m).count())
        .collect()
}

/// A GM report produced entirely by the pipeline route, plus the assembly
/// it was built from.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub gm: GMReport,
    pub assembled: AssembledSpectrum,
}

/// Checks the Grone-Merris inequalities for a pendant-decorated clique
/// without ever forming its Laplacian: eigenvalues come from the assembled
/// root structure and the conjugate from the construction degrees.
pub fn gm_report_semibipartite(
    p: &PencilParams,
    gm_tol: f64,
) -> Result<PipelineReport, CheckerError> {
    let assembled = assemble_for(p)?;
    let conjugate = conjugate_from_params(p);
    let gm = build_report(
        assembled.merged.clone(),
        conjugate,
        gm_tol,
        ReportMethod::QepPipeline,
    )?;
    Ok(PipelineReport { gm, assembled })
}

/// Both routes side by side: the pipeline report, the oracle report of the
/// constructed graph, and their maximum entrywise eigenvalue deviation.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub pipeline: PipelineReport,
    pub oracle: GMReport,
    pub max_deviation: f64,
}

/// Runs both routes and measures their disagreement.
pub fn cross_check(p: &PencilParams, gm_tol: f64) -> Result<CrossCheck, CheckerError> {
    let pipeline = gm_report_semibipartite(p, gm_tol)?;
    let (graph, _) = build_semibipartite(p.n(), p.ks())?;
    let oracle = gm_report(&graph, DEFAULT_EIGEN_TOL, gm_tol)?;
    assert_eq!(
        pipeline.gm.conjugate, oracle.conjugate,
        "construction degrees must match the built graph"
    );
    let max_deviation = pipeline
        .gm
        .eigenvalues
        .iter()
        .zip(&oracle.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CrossCheck {
        pipeline,
        oracle,
        max_deviation,
    })
}

// ============================================================================
// THE MAJORIZATION CHAIN
// ============================================================================

/// The chain of partial-sum comparisons that descends from the companion
/// trace bound to the actual top-j root sum.
#[derive(Debug, Clone)]
pub struct LemmaChainReport {
    /// s_1 >= ... >= s_j, the top j roots of F.
    pub top_roots: Vec<f64>,
    /// a_l = 1 - s_l, the shift at which the l-th root is a fixed point.
    pub shifts: Vec<f64>,
    /// chain[0] = C_j down to chain[j-1] = C_1, where C_m = s_{m+1} + ... +
    /// s_j + (sum of the m largest companion roots at a_m). C_j is the trace
    /// bound; C_1 is the top root sum.
    pub chain: Vec<f64>,
    /// chain[i] - chain[i+1]; each must be nonnegative for the chain to
    /// descend.
    pub step_slacks: Vec<f64>,
    /// j n + sum(k): the target upper bound.
    pub bound: f64,
    /// s_1 + ... + s_j.
    pub top_sum: f64,
    /// bound - top_sum, the headroom in the key inequality.
    pub overall_slack: f64,
    /// chain[0] - bound; zero in exact arithmetic (companion trace).
    pub trace_defect: f64,
    pub holds: bool,
    /// 1-based index into step_slacks of the first negative step, if any.
    pub first_bad_step: Option<usize>,
}

/// Verifies the descending chain that bounds the top-j root sum by
/// j n + sum(k).
///
/// For each m from j down to 1 the chain value C_m replaces the m largest
/// roots by the m largest companion roots at shift a_m = 1 - s_m; the
/// fixed-point property makes C_1 the plain root sum, the trace identity
/// makes C_j the bound, and each step is verified numerically.
pub fn verify_main_lemma(p: &PencilParams) -> Result<LemmaChainReport, CheckerError> {
    let j = p.j();
    let all = find_roots(p)?.expanded();
    let top_roots: Vec<f64> = all[..j].to_vec();
    let shifts: Vec<f64> = top_roots.iter().map(|s| 1.0 - s).collect();

    let mut chain = Vec::with_capacity(j);
    for m in (1..=j).rev() {
        let companion = companion_roots(p, shifts[m - 1])?;
        let replaced: f64 = companion.expanded()[..m].iter().sum();
        let kept: f64 = top_roots[m..].iter().sum();
        chain.push(replaced + kept);
    }

    let step_slacks: Vec<f64> = chain.windows(2).map(|w| w[0] - w[1]).collect();
    let bound = p.gm_bound();
    let top_sum: f64 = top_roots.iter().sum();
    let overall_slack = bound - top_sum;
    let trace_defect = chain[0] - bound;
    let first_bad_step = step_slacks
        .iter()
        .position(|&s| s < -DEFAULT_GM_TOL)
        .map(|i| i + 1);
    let holds = first_bad_step.is_none() && overall_slack >= -DEFAULT_GM_TOL;

    Ok(LemmaChainReport {
        top_roots,
        shifts,
        chain,
        step_slacks,
        bound,
        top_sum,
        overall_slack,
        trace_defect,
        holds,
        first_bad_step,
    })
}

// ============================================================================
// PARAMETER SWEEPS
// ============================================================================

/// Which route(s) a sweep runs per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Pipeline route only.
    Pipeline,
    /// Dense oracle only.
    Oracle,
    /// Both routes with cross-validation (the default).
    Both,
}

/// Per-instance ordering facts about the assembled spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumFacts {
    /// How many eigenvalues exceed n (classified with a 1e-6 cushion).
    /// Equals j for nondegenerate parameters; the degenerate root at n makes
    /// it j - 1 or j depending on which side the companion zero falls.
    pub roots_above_n: usize,
    /// The (j+1)-th largest root of F.
    pub s_j_plus_1: f64,
    /// j - s_{j+1}; positive except at the known equality cases (j = 1 and
    /// the degenerate family).
    pub j_gap: f64,
    /// Largest root of F beyond position j + 1 (None when j = 1).
    pub tail_max: Option<f64>,
    /// G evaluated at j; its positivity is what pushes s_{j+1} below j.
    pub g_at_j: f64,
    /// Cluster multiplicity recorded by the degenerate assembly.
    pub near_j_cluster: Option<usize>,
}

fn spectrum_facts(p: &PencilParams, assembled: &AssembledSpectrum) -> SpectrumFacts {
    let expanded = assembled.f_roots.expanded();
    let j = p.j();
    let n = p.n() as f64;
    let roots_above_n = assembled.merged.iter().filter(|&&v| v > n + 1e-6).count();
    let s_j_plus_1 = expanded[j];
    let tail_max = expanded.get(j + 1).copied();
    // j is never a pole of G: it sits strictly between r_j^- and r_j^+
    let g_at_j = eval_g(p, j as f64).unwrap_or(f64::NAN);
    SpectrumFacts {
        roots_above_n,
        s_j_plus_1,
        j_gap: j as f64 - s_j_plus_1,
        tail_max,
        g_at_j,
        near_j_cluster: assembled.removed_near_j.map(|r| r.cluster_multiplicity),
    }
}

/// Everything computed for one swept instance.
#[derive(Debug, Clone)]
pub struct InstanceReport {
    pub gm: GMReport,
    /// Present for pipeline and both modes.
    pub lemma: Option<LemmaChainReport>,
    /// Present for both mode: max eigenvalue deviation between routes.
    pub cross_deviation: Option<f64>,
    /// Present for pipeline and both modes.
    pub facts: Option<SpectrumFacts>,
    /// Smallest prefix margin and its 1-based index.
    pub min_margin: f64,
    pub min_margin_index: usize,
}

/// One row of a sweep: the parameters plus either a report or the error
/// that instance produced (individual failures do not abort the sweep).
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub params: PencilParams,
    pub outcome: Result<InstanceReport, String>,
}

/// Aggregates over a sweep.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub instances: usize,
    pub failures: usize,
    /// True iff every instance succeeded and every verdict holds.
    pub all_hold: bool,
    pub min_margin: Option<f64>,
    pub argmin: Option<PencilParams>,
    pub min_margin_index: Option<usize>,
    pub max_cross_deviation: Option<f64>,
}

/// A completed sweep: per-instance records in enumeration order plus the
/// aggregate summary.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

/// Enumerates all parameters with n <= n_max, 1 <= j <= n, k_l <= k_max in
/// deterministic order: n ascending, then j ascending, then the k-vector
/// lexicographically ascending.
pub fn enumerate_params(n_max: usize, k_max: usize) -> Vec<PencilParams> {
    fn k_vectors(j: usize, max_first: usize, out: &mut Vec<Vec<usize>>, acc: &mut Vec<usize>) {
        if acc.len() == j {
            out.push(acc.clone());
            return;
        }
        for k in 1..=max_first {
            acc.push(k);
            let cap = k; // weakly decreasing
            k_vectors(j, cap.min(max_first), out, acc);
            // recursion above already bounded by the pushed k via cap
            acc.pop();
        }
    }

    let mut params = Vec::new();
    for n in 1..=n_max {
        for j in 1..=n {
            let mut vecs = Vec::new();
            let mut acc = Vec::new();
            k_vectors(j, k_max, &mut vecs, &mut acc);
            for ks in vecs {
                params.push(PencilParams::new(n, ks).expect("enumerated params are valid"));
            }
        }
    }
    params
}

fn run_instance(
    p: &PencilParams,
    mode: SweepMode,
    gm_tol: f64,
) -> Result<InstanceReport, CheckerError> {
    let (gm, lemma, cross_deviation, facts) = match mode {
        SweepMode::Oracle => {
            let (graph, _) = build_semibipartite(p.n(), p.ks())?;
            let gm = gm_report(&graph, DEFAULT_EIGEN_TOL, gm_tol)?;
            (gm, None, None, None)
        }
        SweepMode::Pipeline => {
            let pr = gm_report_semibipartite(p, gm_tol)?;
            let facts = spectrum_facts(p, &pr.assembled);
            let lemma = verify_main_lemma(p)?;
            (pr.gm, Some(lemma), None, Some(facts))
        }
        SweepMode::Both => {
            let cc = cross_check(p, gm_tol)?;
            let facts = spectrum_facts(p, &cc.pipeline.assembled);
            let lemma = verify_main_lemma(p)?;
            let mut gm = cc.pipeline.gm;
            gm.method = ReportMethod::Both;
            (gm, Some(lemma), Some(cc.max_deviation), Some(facts))
        }
    };

    let mut min_margin = f64::INFINITY;
    let mut min_margin_index = 0;
    for (i, &m) in gm.prefix_margins.iter().enumerate() {
        if m < min_margin {
            min_margin = m;
            min_margin_index = i + 1;
        }
    }

    Ok(InstanceReport {
        gm,
        lemma,
        cross_deviation,
        facts,
        min_margin,
        min_margin_index,
    })
}

/// Sweeps the whole parameter lattice, running instances in parallel on the
/// current thread pool. Records keep enumeration order regardless of worker
/// count, so sweep output is deterministic.
pub fn sweep(n_max: usize, k_max: usize, mode: SweepMode, gm_tol: f64) -> SweepOutcome {
    let params = enumerate_params(n_max, k_max);
    let records: Vec<SweepRecord> = params
        .into_par_iter()
        .map(|p| {
            let outcome = run_instance(&p, mode, gm_tol).map_err(|e| e.to_string());
            SweepRecord { params: p, outcome }
        })
        .collect();

    let mut summary = SweepSummary {
        instances: records.len(),
        failures: 0,
        all_hold: true,
        min_margin: None,
        argmin: None,
        min_margin_index: None,
        max_cross_deviation: None,
    };
    for rec in &records {
        match &rec.outcome {
            Ok(report) => {
                if !report.gm.holds {
                    summary.all_hold = false;
                }
                if summary.min_margin.is_none_or(|cur| report.min_margin < cur) {
                    summary.min_margin = Some(report.min_margin);
                    summary.argmin = Some(rec.params.clone());
                    summary.min_margin_index = Some(report.min_margin_index);
                }
                if let Some(dev) = report.cross_deviation {
                    summary.max_cross_deviation =
                        Some(summary.max_cross_deviation.map_or(dev, |cur| cur.max(dev)));
                }
            }
            Err(_) => {
                summary.failures += 1;
                summary.all_hold = false;
            }
        }
    }
    SweepOutcome { records, summary }
}
