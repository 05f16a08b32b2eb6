//! Full verdicts: eigenvalues against conjugate degrees for an arbitrary
//! graph, the quartic pipeline for clique-with-pendants parameters, the
//! two routes cross-checked, and the chain argument behind the bound.
//!
//! Run with `cargo run --example gm_reports`.

use gmcheck::checker::{cross_check, gm_report, verify_main_lemma, DEFAULT_GM_TOL};
use gmcheck::graph::build_graph;
use gmcheck::linalg::DEFAULT_EIGEN_TOL;
use gmcheck::qep::PencilParams;

fn main() {
    // any graph works through the dense route; here a 5-cycle
    let cycle = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).expect("simple graph");
    let report = gm_report(&cycle, DEFAULT_EIGEN_TOL, DEFAULT_GM_TOL).expect("eigensolve");
    println!("5-cycle:");
    println!("  eigenvalues: {:?}", rounded(&report.eigenvalues));
    println!("  conjugate:   {:?}", report.conjugate);
    println!("  margins:     {:?}", rounded(&report.prefix_margins));
    println!(
        "  holds: {}, tight prefixes: {:?}",
        report.holds, report.tight_indices
    );

    // the structured family gets the quartic pipeline and an independent
    // dense oracle; the two assembled spectra must agree entrywise
    let p = PencilParams::new(3, vec![1, 1]).expect("profile is sorted");
    let cc = cross_check(&p, DEFAULT_GM_TOL).expect("both routes succeed");
    println!("clique of 3 with pendant profile (1, 1):");
    println!(
        "  pipeline spectrum: {:?}",
        rounded(&cc.pipeline.gm.eigenvalues)
    );
    println!("  oracle spectrum:   {:?}", rounded(&cc.oracle.eigenvalues));
    println!("  max deviation: {:.3e}", cc.max_deviation);
    println!("  margins: {:?}", rounded(&cc.pipeline.gm.prefix_margins));

    // the chain argument: interpolating sums C_j >= ... >= C_1 descend
    // from the prefix bound down to the top root sum
    let lemma = verify_main_lemma(&p).expect("chain construction succeeds");
    println!("chain for the top-{} prefix:", lemma.top_roots.len());
    println!("  bound = {:.6}", lemma.bound);
    for (step, value) in lemma.chain.iter().enumerate() {
        println!("  C_{} = {:.6}", lemma.chain.len() - step, value);
    }
    println!("  top root sum = {:.6}", lemma.top_sum);
    println!(
        "  slack = {:.6}, every step descends: {}",
        lemma.overall_slack,
        lemma.first_bad_step.is_none()
    );
}

fn rounded(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| (v * 1e6).round() / 1e6).collect()
}
