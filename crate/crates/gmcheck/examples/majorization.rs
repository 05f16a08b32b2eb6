//! Prefix-sum dominance between weakly decreasing sequences, the order
//! behind every verdict the toolkit produces.
//!
//! Run with `cargo run --example majorization`.

use gmcheck::linalg::{majorizes, DEFAULT_MAJORIZATION_TOL};

fn show(label: &str, a: &[f64], b: &[f64]) {
    let report = majorizes(a, b, DEFAULT_MAJORIZATION_TOL).expect("inputs weakly decreasing");
    println!("{label}: {a:?} vs {b:?}");
    println!("  prefix margins: {:?}", report.prefix_margins);
    match report.first_violation {
        None => println!("  holds at every prefix"),
        Some(l) => println!("  fails first at prefix {l}"),
    }
}

fn main() {
    // the classic pair: (3,1,1) dominates (2,2,1) with margins (1, 0, 0)
    show("textbook pair", &[3.0, 1.0, 1.0], &[2.0, 2.0, 1.0]);

    // the reverse direction fails immediately
    show("reversed", &[2.0, 2.0, 1.0], &[3.0, 1.0, 1.0]);

    // equal sums are not required: dominance is prefix-wise
    show("strict dominance", &[5.0, 2.0], &[4.0, 1.0]);

    // a Robin Hood transfer from the smallest to the largest entry always
    // increases the sequence in this order
    let base = [4.0, 3.0, 2.0, 1.0];
    let mut spread = base;
    spread[0] += 1.5;
    spread[3] -= 1.5;
    show("after transfer", &spread, &base);

    // incomparable sequences exist: neither direction holds
    let u = [5.0, 1.0, 1.0, 1.0];
    let v = [4.0, 4.0, 0.0, 0.0];
    show("incomparable, u vs v", &u, &v);
    show("incomparable, v vs u", &v, &u);
}
