//! Command-line front end.
//!
//! Four subcommands: `check` an edge-list file against the conjugate degree
//! sequence, `analyze` one parameterized instance in depth, `sweep` a whole
//! parameter lattice, and `majorize` two explicit sequences.
//!
//! Exit codes are a stable contract:
//!
//! * 0: requested verdict holds (or the command simply succeeded)
//! * 1: the verdict failed
//! * 2: input could not be parsed or validated
//! * 3: a numeric routine failed to certify its result
//!
//! `--json` switches machine consumers onto serialized [`ReportDocument`]
//! values (schema `gm-report/1`); sweeps emit one JSON object per line.
//! Floating-point fields serialize with shortest round-trip precision, so
//! re-parsing a report reproduces exactly the numbers computed.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::checker::{
    cross_check, gm_report, gm_report_semibipartite, sweep, verify_main_lemma, AssembledSpectrum,
    CheckerError, GMReport, LemmaChainReport, SweepMode, SweepOutcome, SweepRecord, DEFAULT_GM_TOL,
};
use crate::graph::{read_edge_list, GraphError};
use crate::linalg::{majorizes, LinalgError, DEFAULT_EIGEN_TOL, DEFAULT_MAJORIZATION_TOL};
use crate::qep::{brackets, track_root, HomotopyTrace, PencilParams, QepError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_NUMERIC_ERROR: i32 = 3;

/// Schema tag carried by every JSON document this binary emits.
pub const SCHEMA_VERSION: &str = "gm-report/1";

// ============================================================================
// ARGUMENTS
// ============================================================================

#[derive(Parser)]
#[command(
    name = "gmcheck",
    version,
    about = "Check Laplacian spectra against conjugate degree sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one graph from an edge-list file.
    Check {
        /// Edge-list file: comment lines start with '#', the first effective
        /// line is "p N", every following line is an edge "u v" (0-based).
        path: PathBuf,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Eigensolver convergence tolerance.
        #[arg(long, default_value_t = DEFAULT_EIGEN_TOL)]
        tol: f64,
        /// Margins above -gm_tol count as holding.
        #[arg(long, default_value_t = DEFAULT_GM_TOL)]
        gm_tol: f64,
    },
    /// Analyze one pendant-decorated clique in depth.
    Analyze {
        /// Clique size.
        #[arg(long)]
        n: usize,
        /// Pendant group sizes, weakly decreasing, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Emit the report as JSON instead of tables.
        #[arg(long)]
        json: bool,
        /// Also run the dense eigensolver and report the maximum deviation.
        #[arg(long)]
        cross_check: bool,
        /// Dump the tracked root paths of the companion homotopy.
        #[arg(long)]
        trace: bool,
        /// Margins above -gm_tol count as holding.
        #[arg(long, default_value_t = DEFAULT_GM_TOL)]
        gm_tol: f64,
    },
    /// Check every instance of a parameter lattice.
    Sweep {
        /// Largest clique size.
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Largest pendant group size.
        #[arg(long, default_value_t = 1)]
        k_max: usize,
        /// Which route(s) to run per instance.
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        /// Worker threads (0 = automatic). Output is identical for any count.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Emit one JSON object per record instead of CSV.
        #[arg(long)]
        json: bool,
        /// Margins above -gm_tol count as holding.
        #[arg(long, default_value_t = DEFAULT_GM_TOL)]
        gm_tol: f64,
    },
    /// Test whether sequence a majorizes sequence b.
    Majorize {
        /// First sequence (weakly decreasing), comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        a: Vec<f64>,
        /// Second sequence (weakly decreasing), comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        b: Vec<f64>,
        /// Margins above -tol count as holding.
        #[arg(long, default_value_t = DEFAULT_MAJORIZATION_TOL)]
        tol: f64,
        /// Emit the comparison as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Pipeline,
    Oracle,
    Both,
}

impl From<ModeArg> for SweepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Pipeline => SweepMode::Pipeline,
            ModeArg::Oracle => SweepMode::Oracle,
            ModeArg::Both => SweepMode::Both,
        }
    }
}

// ============================================================================
// JSON DOCUMENTS
// ============================================================================

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub n: usize,
    pub j: usize,
    pub k: Vec<usize>,
}

/// One report in the `gm-report/1` schema, emitted by `check`, `analyze`
/// and `majorize` under `--json`. For `majorize` the compared sequences
/// occupy `eigenvalues` (a) and `conjugate` (b).
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSummary>,
    pub eigenvalues: Vec<f64>,
    pub conjugate: Vec<f64>,
    pub margins: Vec<f64>,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma_chain: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check_deviation: Option<f64>,
}

/// One sweep instance in the JSON stream.
#[derive(Debug, Serialize, Deserialize)]
pub struct SweepRecordDocument {
    pub schema_version: String,
    pub command: String,
    pub params: ParamsSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_deviation: Option<f64>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The closing line of a JSON sweep stream.
#[derive(Debug, Serialize, Deserialize)]
pub struct SweepSummaryDocument {
    pub schema_version: String,
    pub command: String,
    pub instances: usize,
    pub failures: usize,
    pub all_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<ParamsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_cross_deviation: Option<f64>,
}

/// One tracked homotopy path, emitted by `analyze --trace --json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TraceDocument {
    pub schema_version: String,
    pub command: String,
    pub root_index: usize,
    pub shift: f64,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

fn params_summary(p: &PencilParams) -> ParamsSummary {
    ParamsSummary {
        n: p.n(),
        j: p.j(),
        k: p.ks().to_vec(),
    }
}

fn report_document(command: &str, report: &GMReport) -> ReportDocument {
    ReportDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        command: command.to_string(),
        graph: None,
        params: None,
        eigenvalues: report.eigenvalues.clone(),
        conjugate: report.conjugate.iter().map(|&c| c as f64).collect(),
        margins: report.prefix_margins.clone(),
        verdict: report.holds,
        lemma_chain: None,
        cross_check_deviation: None,
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, doc: &T) -> io::Result<()> {
    let line = serde_json::to_string(doc).expect("report serialization cannot fail");
    writeln!(out, "{line}")
}

// ============================================================================
// ERROR CLASSIFICATION
// ============================================================================

struct CmdFailure {
    message: String,
    code: i32,
}

fn linalg_exit_code(e: &LinalgError) -> i32 {
    match e {
        LinalgError::NonConvergence { .. } => EXIT_NUMERIC_ERROR,
        LinalgError::InvalidTolerance { .. }
        | LinalgError::LengthMismatch { .. }
        | LinalgError::NotSorted { .. }
        | LinalgError::IndexOutOfRange { .. } => EXIT_INPUT_ERROR,
    }
}

fn qep_exit_code(e: &QepError) -> i32 {
    match e {
        QepError::ZeroCliqueSize
        | QepError::NoPendantGroups
        | QepError::TooManyGroups { .. }
        | QepError::KsNotSorted { .. }
        | QepError::ZeroPendantCount { .. }
        | QepError::FactorIndex { .. }
        | QepError::ShiftNotNegative { .. }
        | QepError::ShiftAboveHomotopyBound { .. }
        | QepError::ZeroShift
        | QepError::TimeOutOfRange { .. }
        | QepError::RootIndexOutOfRange { .. }
        | QepError::TooFewSteps { .. }
        | QepError::NotTwoGroups { .. } => EXIT_INPUT_ERROR,
        QepError::PoleProximity { .. }
        | QepError::BracketSignCheck { .. }
        | QepError::StepFailure { .. }
        | QepError::EndpointMismatch { .. }
        | QepError::NegativeDiscriminant { .. }
        | QepError::J2RootsOutOfOrder { .. } => EXIT_NUMERIC_ERROR,
        QepError::Eigen(inner) => linalg_exit_code(inner),
    }
}

fn checker_exit_code(e: &CheckerError) -> i32 {
    match e {
        CheckerError::DegenerateParams { .. } => EXIT_INPUT_ERROR,
        CheckerError::NoRootNearJ { .. } | CheckerError::TraceMismatch { .. } => EXIT_NUMERIC_ERROR,
        CheckerError::Graph(_) => EXIT_INPUT_ERROR,
        CheckerError::Qep(inner) => qep_exit_code(inner),
        CheckerError::Linalg(inner) => linalg_exit_code(inner),
    }
}

impl From<GraphError> for CmdFailure {
    fn from(e: GraphError) -> Self {
        CmdFailure {
            message: e.to_string(),
            code: EXIT_INPUT_ERROR,
        }
    }
}

impl From<QepError> for CmdFailure {
    fn from(e: QepError) -> Self {
        CmdFailure {
            code: qep_exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<LinalgError> for CmdFailure {
    fn from(e: LinalgError) -> Self {
        CmdFailure {
            code: linalg_exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<CheckerError> for CmdFailure {
    fn from(e: CheckerError) -> Self {
        CmdFailure {
            code: checker_exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Runs a rendering closure against buffered, locked stdout. A closed pipe
/// (for example `gmcheck sweep | head`) counts as complete output; any other
/// write failure is a reported error.
fn render<F>(f: F) -> Result<(), CmdFailure>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = f(&mut out).and_then(|()| out.flush());
    match result {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CmdFailure {
            message: format!("could not write output: {e}"),
            code: EXIT_INPUT_ERROR,
        }),
    }
}

// ============================================================================
// ENTRY POINT
// ============================================================================

/// Parses arguments from the environment, runs the requested command, and
/// returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };

    let result = match cli.command {
        Command::Check {
            path,
            json,
            tol,
            gm_tol,
        } => cmd_check(&path, json, tol, gm_tol),
        Command::Analyze {
            n,
            k,
            json,
            cross_check,
            trace,
            gm_tol,
        } => cmd_analyze(n, k, json, cross_check, trace, gm_tol),
        Command::Sweep {
            n_max,
            k_max,
            mode,
            workers,
            json,
            gm_tol,
        } => cmd_sweep(n_max, k_max, mode.into(), workers, json, gm_tol),
        Command::Majorize { a, b, tol, json } => cmd_majorize(&a, &b, tol, json),
    };

    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn verdict_code(holds: bool) -> i32 {
    if holds {
        EXIT_OK
    } else {
        EXIT_VERDICT_FAILED
    }
}

// ============================================================================
// CHECK
// ============================================================================

fn write_margin_table(out: &mut dyn Write, report: &GMReport) -> io::Result<()> {
    writeln!(out, "  l     sum d^T       sum lambda    margin")?;
    let mut conj_sum = 0.0;
    let mut eig_sum = 0.0;
    for i in 0..report.prefix_margins.len() {
        conj_sum += report.conjugate[i] as f64;
        eig_sum += report.eigenvalues[i];
        let tight = if report.tight_indices.contains(&(i + 1)) {
            "  (tight)"
        } else {
            ""
        };
        writeln!(
            out,
            "  {:<5} {:<13.6} {:<13.6} {:<12.6}{}",
            i + 1,
            conj_sum,
            eig_sum,
            report.prefix_margins[i],
            tight
        )?;
    }
    Ok(())
}

fn write_verdict(out: &mut dyn Write, report: &GMReport) -> io::Result<()> {
    if report.holds {
        writeln!(out, "verdict: HOLDS")
    } else {
        let first = report
            .prefix_margins
            .iter()
            .position(|&m| m < -DEFAULT_GM_TOL)
            .map(|i| i + 1)
            .unwrap_or(0);
        writeln!(out, "verdict: FAILS (first violation at l = {first})")
    }
}

fn cmd_check(path: &std::path::Path, json: bool, tol: f64, gm_tol: f64) -> Result<i32, CmdFailure> {
    let graph = read_edge_list(path)?;
    let report = gm_report(&graph, tol, gm_tol)?;
    let code = verdict_code(report.holds);

    render(|out| {
        if json {
            let mut doc = report_document("check", &report);
            doc.graph = Some(GraphSummary {
                vertices: graph.vertex_count(),
                edges: graph.edge_count(),
            });
            write_json(out, &doc)
        } else {
            writeln!(
                out,
                "graph: {} vertices, {} edges",
                graph.vertex_count(),
                graph.edge_count()
            )?;
            write_margin_table(out, &report)?;
            write_verdict(out, &report)
        }
    })?;
    Ok(code)
}

// ============================================================================
// ANALYZE
// ============================================================================

/// Shift used for `--trace`: comfortably below the homotopy bound 1 - n.
fn trace_shift(n: usize) -> f64 {
    if n >= 2 {
        2.0 * (1.0 - n as f64)
    } else {
        -2.0
    }
}

fn write_lemma_chain(out: &mut dyn Write, lemma: &LemmaChainReport) -> io::Result<()> {
    let chain: Vec<String> = lemma.chain.iter().map(|c| format!("{c:.6}")).collect();
    writeln!(
        out,
        "majorization chain (C_j down to C_1): {}",
        chain.join(" >= ")
    )?;
    writeln!(
        out,
        "  bound = {:.6}, top-{} root sum = {:.6}, slack = {:.6}",
        lemma.bound,
        lemma.top_roots.len(),
        lemma.top_sum,
        lemma.overall_slack
    )?;
    match lemma.first_bad_step {
        None if lemma.holds => writeln!(out, "  every step descends: chain verified"),
        None => writeln!(out, "  chain steps descend but the final bound is violated"),
        Some(step) => writeln!(out, "  STEP {step} ASCENDS: chain violated"),
    }
}

fn write_trace(out: &mut dyn Write, trace: &HomotopyTrace) -> io::Result<()> {
    writeln!(
        out,
        "trace of root {} (shift a = {}):",
        trace.root_index, trace.a
    )?;
    writeln!(out, "  t             s_l(t)")?;
    for (t, v) in trace.t_grid.iter().zip(&trace.values) {
        writeln!(out, "  {t:<13.6} {v:.12}")?;
    }
    Ok(())
}

fn write_analysis(
    out: &mut dyn Write,
    p: &PencilParams,
    report: &GMReport,
    assembled: &AssembledSpectrum,
    lemma: &LemmaChainReport,
    deviation: Option<f64>,
    traces: Option<&[HomotopyTrace]>,
) -> io::Result<()> {
    writeln!(
        out,
        "parameters: n = {}, k = {:?} (j = {}, {} vertices{})",
        p.n(),
        p.ks(),
        p.j(),
        p.vertex_count(),
        if p.is_degenerate() { ", saturated" } else { "" }
    )?;

    let table = brackets(p);
    writeln!(out, "pole brackets:")?;
    writeln!(out, "  l     k_l   r_l^-            r_l^+")?;
    for l in 0..p.j() {
        writeln!(
            out,
            "  {:<5} {:<5} {:<16.12} {:.12}",
            l + 1,
            p.ks()[l],
            table.r_minus[l],
            table.r_plus[l]
        )?;
    }

    writeln!(out, "roots of F (value x multiplicity):")?;
    for (root, mult) in assembled
        .f_roots
        .roots()
        .iter()
        .zip(assembled.f_roots.multiplicities())
    {
        writeln!(out, "  {root:.12} x {mult}")?;
    }
    if let Some(removed) = assembled.removed_near_j {
        writeln!(
            out,
            "  (saturated case: one copy of {:.12} belongs to the clique block, cluster size {})",
            removed.value, removed.cluster_multiplicity
        )?;
    }

    let spectrum: Vec<String> = report
        .eigenvalues
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect();
    writeln!(out, "assembled spectrum: [{}]", spectrum.join(", "))?;
    let conj: Vec<String> = report.conjugate.iter().map(|c| c.to_string()).collect();
    writeln!(out, "conjugate degrees:  [{}]", conj.join(", "))?;

    write_margin_table(out, report)?;
    write_lemma_chain(out, lemma)?;
    if let Some(dev) = deviation {
        writeln!(
            out,
            "cross-check: max deviation from dense eigensolver = {dev:.3e}"
        )?;
    }
    if let Some(traces) = traces {
        for trace in traces {
            write_trace(out, trace)?;
        }
    }
    write_verdict(out, report)
}

fn cmd_analyze(
    n: usize,
    k: Vec<usize>,
    json: bool,
    with_cross: bool,
    with_trace: bool,
    gm_tol: f64,
) -> Result<i32, CmdFailure> {
    let p = PencilParams::new(n, k)?;
    let lemma = verify_main_lemma(&p)?;

    let (report, assembled, deviation) = if with_cross {
        let cc = cross_check(&p, gm_tol)?;
        (
            cc.pipeline.gm,
            cc.pipeline.assembled,
            Some(cc.max_deviation),
        )
    } else {
        let pr = gm_report_semibipartite(&p, gm_tol)?;
        (pr.gm, pr.assembled, None)
    };

    let traces = if with_trace {
        let a = trace_shift(p.n());
        let mut all = Vec::with_capacity(p.j());
        for l in 1..=p.j() {
            all.push(track_root(&p, a, l, 64)?);
        }
        Some(all)
    } else {
        None
    };
    let code = verdict_code(report.holds);

    render(|out| {
        if json {
            let mut doc = report_document("analyze", &report);
            doc.params = Some(params_summary(&p));
            doc.lemma_chain = Some(lemma.chain.clone());
            doc.cross_check_deviation = deviation;
            write_json(out, &doc)?;
            if let Some(traces) = &traces {
                for trace in traces {
                    write_json(
                        out,
                        &TraceDocument {
                            schema_version: SCHEMA_VERSION.to_string(),
                            command: "trace".to_string(),
                            root_index: trace.root_index,
                            shift: trace.a,
                            t: trace.t_grid.clone(),
                            values: trace.values.clone(),
                        },
                    )?;
                }
            }
            Ok(())
        } else {
            write_analysis(
                out,
                &p,
                &report,
                &assembled,
                &lemma,
                deviation,
                traces.as_deref(),
            )
        }
    })?;
    Ok(code)
}

// ============================================================================
// SWEEP
// ============================================================================

fn k_joined(p: &PencilParams) -> String {
    p.ks()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_row(rec: &SweepRecord) -> String {
    let p = &rec.params;
    match &rec.outcome {
        Ok(rep) => {
            let tight = rep
                .gm
                .tight_indices
                .first()
                .map(ToString::to_string)
                .unwrap_or_default();
            let cross = rep
                .cross_deviation
                .map(|d| format!("{d}"))
                .unwrap_or_default();
            let verdict = if rep.gm.holds { "holds" } else { "fails" };
            format!(
                "{},{},{},{},{},{},{}",
                p.n(),
                p.j(),
                k_joined(p),
                rep.min_margin,
                tight,
                cross,
                verdict
            )
        }
        Err(message) => {
            let sanitized = message.replace([',', '\n'], ";");
            format!(
                "{},{},{},,,,error: {}",
                p.n(),
                p.j(),
                k_joined(p),
                sanitized
            )
        }
    }
}

fn record_document(rec: &SweepRecord) -> SweepRecordDocument {
    let params = params_summary(&rec.params);
    match &rec.outcome {
        Ok(rep) => SweepRecordDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: "sweep-record".to_string(),
            params,
            min_margin: Some(rep.min_margin),
            min_margin_index: Some(rep.min_margin_index),
            tight_index: rep.gm.tight_indices.first().copied(),
            cross_deviation: rep.cross_deviation,
            verdict: if rep.gm.holds { "holds" } else { "fails" }.to_string(),
            error: None,
        },
        Err(message) => SweepRecordDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: "sweep-record".to_string(),
            params,
            min_margin: None,
            min_margin_index: None,
            tight_index: None,
            cross_deviation: None,
            verdict: "error".to_string(),
            error: Some(message.clone()),
        },
    }
}

fn write_sweep(out: &mut dyn Write, outcome: &SweepOutcome, json: bool) -> io::Result<()> {
    let summary = &outcome.summary;
    if json {
        for rec in &outcome.records {
            write_json(out, &record_document(rec))?;
        }
        return write_json(
            out,
            &SweepSummaryDocument {
                schema_version: SCHEMA_VERSION.to_string(),
                command: "sweep-summary".to_string(),
                instances: summary.instances,
                failures: summary.failures,
                all_hold: summary.all_hold,
                min_margin: summary.min_margin,
                argmin: summary.argmin.as_ref().map(params_summary),
                max_cross_deviation: summary.max_cross_deviation,
            },
        );
    }

    for rec in &outcome.records {
        writeln!(out, "{}", csv_row(rec))?;
    }
    let argmin = summary
        .argmin
        .as_ref()
        .map(|p| format!("n={} k={}", p.n(), k_joined(p)))
        .unwrap_or_else(|| "none".to_string());
    let min_margin = summary
        .min_margin
        .map(|m| format!("{m}"))
        .unwrap_or_else(|| "none".to_string());
    let cross = summary
        .max_cross_deviation
        .map(|d| format!("{d}"))
        .unwrap_or_else(|| "none".to_string());
    writeln!(
        out,
        "# summary instances={} failures={} all_hold={} min_margin={} argmin={} max_cross_dev={}",
        summary.instances, summary.failures, summary.all_hold, min_margin, argmin, cross
    )
}

fn cmd_sweep(
    n_max: usize,
    k_max: usize,
    mode: SweepMode,
    workers: usize,
    json: bool,
    gm_tol: f64,
) -> Result<i32, CmdFailure> {
    if n_max == 0 || k_max == 0 {
        return Err(CmdFailure {
            message: "sweep bounds must be positive".to_string(),
            code: EXIT_INPUT_ERROR,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CmdFailure {
            message: format!("could not build worker pool: {e}"),
            code: EXIT_INPUT_ERROR,
        })?;
    let outcome = pool.install(|| sweep(n_max, k_max, mode, gm_tol));
    render(|out| write_sweep(out, &outcome, json))?;
    Ok(verdict_code(outcome.summary.all_hold))
}

// ============================================================================
// MAJORIZE
// ============================================================================

fn cmd_majorize(a: &[f64], b: &[f64], tol: f64, json: bool) -> Result<i32, CmdFailure> {
    let report = majorizes(a, b, tol)?;
    let code = verdict_code(report.holds);

    render(|out| {
        if json {
            write_json(
                out,
                &ReportDocument {
                    schema_version: SCHEMA_VERSION.to_string(),
                    command: "majorize".to_string(),
                    graph: None,
                    params: None,
                    eigenvalues: a.to_vec(),
                    conjugate: b.to_vec(),
                    margins: report.prefix_margins.clone(),
                    verdict: report.holds,
                    lemma_chain: None,
                    cross_check_deviation: None,
                },
            )
        } else {
            let margins: Vec<String> = report
                .prefix_margins
                .iter()
                .map(|m| format!("{m:.6}"))
                .collect();
            writeln!(out, "prefix margins: [{}]", margins.join(", "))?;
            match report.first_violation {
                None => writeln!(out, "verdict: a majorizes b"),
                Some(index) => writeln!(out, "verdict: fails at prefix {index}"),
            }
        }
    })?;
    Ok(code)
}
