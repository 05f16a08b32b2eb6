//! Sweeping every pendant profile up to chosen bounds, with both the
//! quartic pipeline and the dense oracle on each instance, and a summary
//! of the worst margins seen.
//!
//! Run with `cargo run --example parameter_sweep`.

use gmcheck::checker::{sweep, SweepMode, DEFAULT_GM_TOL};

fn main() {
    let outcome = sweep(4, 2, SweepMode::Both, DEFAULT_GM_TOL);
    let summary = &outcome.summary;

    println!(
        "swept {} instances (cliques up to 4, pendant groups up to 2): failures = {}",
        summary.instances, summary.failures
    );
    println!("every verdict holds: {}", summary.all_hold);
    if let (Some(margin), Some(argmin)) = (summary.min_margin, &summary.argmin) {
        println!(
            "smallest prefix margin {margin:.3e} at n = {}, k = {:?} (prefix {})",
            argmin.n(),
            argmin.ks(),
            summary
                .min_margin_index
                .expect("index accompanies the margin")
        );
    }
    if let Some(dev) = summary.max_cross_deviation {
        println!("largest pipeline/oracle deviation: {dev:.3e}");
    }

    // the per-instance records keep everything: margins, tight prefixes,
    // chain data, and diagnostic facts about the root layout
    println!("instances with a root pushed above the clique size:");
    for record in &outcome.records {
        let report = record.outcome.as_ref().expect("no failures in this range");
        let facts = report.facts.as_ref().expect("both mode records facts");
        if facts.roots_above_n > 0 {
            println!(
                "  n = {}, k = {:?}: {} roots above n, margin floor {:.3e}",
                record.params.n(),
                record.params.ks(),
                facts.roots_above_n,
                report.min_margin
            );
        }
    }
}
