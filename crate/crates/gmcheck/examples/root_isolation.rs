//! Certified isolation of the 2j pencil roots for a clique-with-pendants
//! instance: pole brackets, bisection output, and the closed form that
//! equal pendant groups admit.
//!
//! Run with `cargo run --example root_isolation`.

use gmcheck::qep::{brackets, equal_k_closed_form, eval_f, find_roots, PencilParams};

fn main() {
    // clique of 5, three pendant groups of sizes 3, 2, 2
    let p = PencilParams::new(5, vec![3, 2, 2]).expect("profile is sorted");
    println!(
        "instance: n = {}, k = {:?}, {} vertices",
        p.n(),
        p.ks(),
        p.vertex_count()
    );

    // each group contributes a quadratic q_l with roots r_l^- < 1 < r_l^+;
    // every pencil root is bracketed between consecutive poles
    let table = brackets(&p);
    println!("pole pairs (r_l^-, r_l^+):");
    for l in 0..p.j() {
        println!(
            "  l = {}: ({:.12}, {:.12})",
            l + 1,
            table.r_minus[l],
            table.r_plus[l]
        );
    }
    println!("certified sign-change intervals: {}", table.intervals.len());

    let roots = find_roots(&p).expect("isolation succeeds for valid parameters");
    println!("roots of F (value x multiplicity):");
    for (root, mult) in roots.roots().iter().zip(roots.multiplicities()) {
        println!(
            "  {root:.12} x {mult}   residual F = {:+.3e}",
            eval_f(&p, *root)
        );
    }
    let top = roots.top_sum(p.j());
    println!(
        "top-{} sum = {:.12}, prefix bound j*n + sum(k) = {}",
        p.j(),
        top,
        p.gm_bound()
    );

    // with all groups equal the quartic factors and the roots come in
    // closed form; the isolated roots must agree to full precision
    let q = PencilParams::new(5, vec![2; 3]).expect("equal profile");
    let closed = equal_k_closed_form(5, 2, 3).expect("closed form exists");
    let isolated = find_roots(&q).expect("isolation succeeds");
    println!("equal groups k = 2, j = 3: closed form vs isolation");
    for (c, i) in closed.expanded().iter().zip(isolated.expanded()) {
        println!("  {c:.15}  vs  {i:.15}  (diff {:.1e})", (c - i).abs());
    }
}
