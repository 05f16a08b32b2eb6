//! Three ways to build a graph, and what the toolkit derives from each:
//! degree data, the conjugate sequence, and the Laplacian quadratic form.
//!
//! Run with `cargo run --example graphs_and_laplacians`.

use gmcheck::graph::{
    build_semibipartite, build_threshold, degree_data, laplacian, parse_edge_list, quadratic_form,
    CreationStep,
};

fn main() {
    // a path on four vertices, written as edge-list text
    let path = parse_edge_list("p 4\n0 1\n1 2\n2 3\n", "inline").expect("text is well formed");
    let data = degree_data(&path);
    println!(
        "path on 4 vertices: degrees {:?}, conjugate {:?}",
        data.degrees, data.conjugate
    );

    // the Laplacian as a dense matrix; every row sums to zero
    let lap = laplacian(&path);
    println!("Laplacian rows:");
    for i in 0..path.vertex_count() {
        let row: Vec<f64> = (0..path.vertex_count()).map(|j| lap.get(i, j)).collect();
        println!("  {row:?}");
    }

    // x^T L x equals the sum of squared differences across edges
    let x = [1.0, 2.0, 4.0, 8.0];
    let form = quadratic_form(&path, &x).expect("dimension matches");
    println!("quadratic form at {x:?}: {form} (= 1 + 4 + 16)");

    // a threshold graph replayed from its creation sequence
    let steps = [
        CreationStep::Isolated,
        CreationStep::Dominating,
        CreationStep::Isolated,
        CreationStep::Dominating,
    ];
    let threshold = build_threshold(&steps).expect("sequence is valid");
    println!(
        "threshold graph from {:?}: {} vertices, {} edges, degrees {:?}",
        steps,
        threshold.vertex_count(),
        threshold.edge_count(),
        threshold.degrees()
    );

    // the clique-with-pendant-groups family, the main object of study:
    // a clique on 4 vertices where two of them carry 3 and 1 pendants
    let (graph, partition) = build_semibipartite(4, &[3, 1]).expect("profile is sorted");
    println!(
        "clique of 4 with pendant profile (3, 1): {} vertices, {} edges",
        graph.vertex_count(),
        graph.edge_count()
    );
    println!(
        "  attachment vertices {:?}, bare clique vertices {:?}, pendant groups {:?}",
        partition.attachment_vertices, partition.extra_vertices, partition.pendant_groups
    );
    println!("  edge-list form:\n{}", indent(&graph.to_edge_list()));
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("    {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}
