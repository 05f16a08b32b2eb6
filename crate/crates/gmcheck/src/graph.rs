//! Undirected simple graphs: construction (generic, pendant-decorated clique,
//! threshold), Laplacians, degree data, and edge-list file ingestion.
//!
//! The pendant-decorated clique builder is the entry point for the structured
//! family the rest of the crate analyzes: a clique on `n` vertices where the
//! first `j` clique vertices each hold a private group of degree-1 pendants.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::linalg::SymmetricMatrix;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge {index}: endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        index: usize,
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("edge {index}: self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("{j} pendant groups exceed clique size {n}")]
    TooManyGroups { j: usize, n: usize },
    #[error("pendant group {index} is empty")]
    EmptyPendantGroup { index: usize },
    #[error("pendant counts must be weakly decreasing; violated at index {index}")]
    GroupSizesNotSorted { index: usize },
    #[error("creation sequence is empty")]
    EmptyCreationSequence,
    #[error("vector length {actual} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

// ============================================================================
// GRAPH
// ============================================================================

/// Undirected simple graph with a canonical edge order.
///
/// Every edge is stored as `(u, v)` with `u < v`, and the edge list is sorted
/// lexicographically with duplicates removed, so two graphs compare equal iff
/// they are equal as labeled graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex degrees, indexed by vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Serializes the graph in the edge-list file format understood by
    /// [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {}", self.vertex_count);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Validates and canonicalizes an edge list into a [`Graph`].
///
/// Duplicate edges (in either orientation) are collapsed. Self-loops and
/// out-of-range endpoints are rejected with the offending input position.
pub fn build_graph(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let mut canonical = Vec::with_capacity(edges.len());
    for (index, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            return Err(GraphError::SelfLoop { index, vertex: u });
        }
        for endpoint in [u, v] {
            if endpoint >= vertex_count {
                return Err(GraphError::EndpointOutOfRange {
                    index,
                    endpoint,
                    vertex_count,
                });
            }
        }
        canonical.push((u.min(v), u.max(v)));
    }
    canonical.sort_unstable();
    canonical.dedup();
    Ok(Graph {
        vertex_count,
        edges: canonical,
    })
}

// ============================================================================
// STRUCTURED FAMILIES
// ============================================================================

/// Vertex bookkeeping for a pendant-decorated clique, recording which vertex
/// plays which role in the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiBipartitePartition {
    /// All clique vertices, `0..n`.
    pub clique_vertices: Vec<usize>,
    /// Clique vertices that carry a pendant group, `0..j`.
    pub attachment_vertices: Vec<usize>,
    /// Clique vertices without pendants, `j..n`.
    pub extra_vertices: Vec<usize>,
    /// `pendant_groups[l]` lists the pendants joined to attachment vertex `l`.
    pub pendant_groups: Vec<Vec<usize>>,
}

/// Builds the clique-with-pendant-groups graph for parameters `(n, ks)`.
///
/// Vertices `0..n` form a clique. For each `l`, `ks[l]` fresh pendant
/// vertices are joined to clique vertex `l` alone; pendant groups are
/// numbered contiguously after the clique, in order of `l`. The group sizes
/// must be positive and weakly decreasing, and there can be at most `n`
/// groups. An empty `ks` yields the bare clique.
pub fn build_semibipartite(
    n: usize,
    ks: &[usize],
) -> Result<(Graph, SemiBipartitePartition), GraphError> {
    let j = ks.len();
    if j > n {
        return Err(GraphError::TooManyGroups { j, n });
    }
    for (index, &k) in ks.iter().enumerate() {
        if k == 0 {
            return Err(GraphError::EmptyPendantGroup { index });
        }
        if index > 0 && k > ks[index - 1] {
            return Err(GraphError::GroupSizesNotSorted { index });
        }
    }

    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    let mut next = n;
    let mut pendant_groups = Vec::with_capacity(j);
    for (l, &k) in ks.iter().enumerate() {
        let group: Vec<usize> = (next..next + k).collect();
        for &w in &group {
            edges.push((l, w));
        }
        next += k;
        pendant_groups.push(group);
    }

    let graph = build_graph(next, &edges)?;
    let partition = SemiBipartitePartition {
        clique_vertices: (0..n).collect(),
        attachment_vertices: (0..j).collect(),
        extra_vertices: (j..n).collect(),
        pendant_groups,
    };
    Ok((graph, partition))
}

/// One step of a threshold-graph creation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreationStep {
    /// Add a vertex with no edges.
    Isolated,
    /// Add a vertex joined to every vertex added so far.
    Dominating,
}

/// Builds a threshold graph by replaying a creation sequence.
pub fn build_threshold(steps: &[CreationStep]) -> Result<Graph, GraphError> {
    if steps.is_empty() {
        return Err(GraphError::EmptyCreationSequence);
    }
    let mut edges = Vec::new();
    for (v, step) in steps.iter().enumerate() {
        if *step == CreationStep::Dominating {
            for u in 0..v {
                edges.push((u, v));
            }
        }
    }
    build_graph(steps.len(), &edges)
}

// ============================================================================
// LAPLACIAN AND DEGREES
// ============================================================================

/// Graph Laplacian `L = D - A`: degrees on the diagonal, -1 on edges.
pub fn laplacian(g: &Graph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.vertex_count());
    for (v, deg) in g.degrees().into_iter().enumerate() {
        m.set(v, v, deg as f64);
    }
    for &(u, v) in g.edges() {
        m.set(u, v, -1.0);
    }
    m
}

/// Degree sequence and its conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeData {
    /// Vertex degrees, indexed by vertex.
    pub degrees: Vec<usize>,
    /// `conjugate[m-1] = #{v : degree(v) >= m}`, zero-padded to length
    /// `vertex_count` so it is index-aligned with the Laplacian spectrum.
    pub conjugate: Vec<usize>,
}

/// Computes the degree sequence and its conjugate for a graph.
///
/// The conjugate is weakly decreasing and sums to `2 |E|`, the same total as
/// the degrees; the last property is what makes the final majorization
/// inequality an exact trace identity.
pub fn degree_data(g: &Graph) -> DegreeData {
    let degrees = g.degrees();
    let nv = g.vertex_count();
    let conjugate: Vec<usize> = (1..=nv)
        .map(|m| degrees.iter().filter(|&&d| d >= m).count())
        .collect();
    DegreeData { degrees, conjugate }
}

/// Evaluates the Laplacian quadratic form `sum over edges of (x_u - x_v)^2`
/// directly from the edge list, without forming the matrix.
pub fn quadratic_form(g: &Graph, x: &[f64]) -> Result<f64, GraphError> {
    if x.len() != g.vertex_count() {
        return Err(GraphError::LengthMismatch {
            expected: g.vertex_count(),
            actual: x.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| {
            let d = x[u] - x[v];
            d * d
        })
        .sum())
}

// ============================================================================
// EDGE-LIST FILES
// ============================================================================

/// Parses the edge-list text format.
///
/// Lines whose first non-blank character is `#` are comments; blank lines are
/// skipped. The first effective line must be `p N` giving the vertex count;
/// every later effective line is `u v` with 0-based endpoints. Tokens may be
/// separated by any whitespace. Duplicate edges are collapsed; self-loops and
/// out-of-range endpoints are reported with their line number.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<Graph, GraphError> {
    let err = |line: usize, message: String| GraphError::Parse {
        path: origin.to_string(),
        line,
        message,
    };

    let mut vertex_count: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();

        match vertex_count {
            None => {
                if tokens.len() != 2 || tokens[0] != "p" {
                    return Err(err(
                        line_no,
                        format!("expected header \"p N\", found \"{line}\""),
                    ));
                }
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid vertex count \"{}\"", tokens[1])))?;
                vertex_count = Some(n);
            }
            Some(n) => {
                if tokens.len() != 2 {
                    return Err(err(line_no, format!("expected \"u v\", found \"{line}\"")));
                }
                let mut pair = [0usize; 2];
                for (slot, tok) in pair.iter_mut().zip(&tokens) {
                    *slot = tok
                        .parse()
                        .map_err(|_| err(line_no, format!("invalid vertex index \"{tok}\"")))?;
                }
                let [u, v] = pair;
                if u == v {
                    return Err(err(line_no, format!("self-loop at vertex {u}")));
                }
                if u >= n || v >= n {
                    return Err(err(
                        line_no,
                        format!("endpoint out of range for {n} vertices"),
                    ));
                }
                edges.push((u, v));
            }
        }
    }

    match vertex_count {
        Some(n) => build_graph(n, &edges),
        None => Err(err(0, "missing \"p N\" header".to_string())),
    }
}

/// Reads and parses an edge-list file.
pub fn read_edge_list(path: &Path) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigen_symmetric, DEFAULT_EIGEN_TOL};

    fn p4() -> Graph {
        build_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn build_graph_canonicalizes() {
        let g = build_graph(3, &[(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn build_graph_rejects_bad_edges() {
        assert!(matches!(
            build_graph(3, &[(0, 1), (2, 2)]),
            Err(GraphError::SelfLoop {
                index: 1,
                vertex: 2
            })
        ));
        assert!(matches!(
            build_graph(2, &[(0, 5)]),
            Err(GraphError::EndpointOutOfRange {
                index: 0,
                endpoint: 5,
                ..
            })
        ));
    }

    #[test]
    fn semibipartite_layout_matches_contract() {
        let (g, part) = build_semibipartite(3, &[1, 1]).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4)]);
        assert_eq!(part.clique_vertices, vec![0, 1, 2]);
        assert_eq!(part.attachment_vertices, vec![0, 1]);
        assert_eq!(part.extra_vertices, vec![2]);
        assert_eq!(part.pendant_groups, vec![vec![3], vec![4]]);
    }

    #[test]
    fn semibipartite_saturated_case_is_a_path() {
        // n = 2 with one pendant on each clique vertex is a labeled P4
        let (g, _) = build_semibipartite(2, &[1, 1]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 3)]);
        let degs = g.degrees();
        degs.iter().for_each(|&d| assert!(d == 1 || d == 2));
    }

    #[test]
    fn semibipartite_without_pendants_is_a_clique() {
        let (g, part) = build_semibipartite(3, &[]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(part.attachment_vertices.is_empty());
        assert_eq!(part.extra_vertices, vec![0, 1, 2]);
    }

    #[test]
    fn semibipartite_validates_parameters() {
        assert!(matches!(
            build_semibipartite(2, &[1, 1, 1]),
            Err(GraphError::TooManyGroups { j: 3, n: 2 })
        ));
        assert!(matches!(
            build_semibipartite(3, &[2, 0]),
            Err(GraphError::EmptyPendantGroup { index: 1 })
        ));
        assert!(matches!(
            build_semibipartite(3, &[1, 2]),
            Err(GraphError::GroupSizesNotSorted { index: 1 })
        ));
    }

    #[test]
    fn semibipartite_pendants_have_degree_one() {
        let (g, part) = build_semibipartite(5, &[3, 2, 2]).unwrap();
        let degs = g.degrees();
        for group in &part.pendant_groups {
            for &w in group {
                assert_eq!(degs[w], 1);
            }
        }
        for (&v, group) in part.attachment_vertices.iter().zip(&part.pendant_groups) {
            assert_eq!(degs[v], 5 - 1 + group.len());
        }
    }

    #[test]
    fn threshold_examples() {
        use CreationStep::{Dominating, Isolated};
        let single = build_threshold(&[Isolated, Dominating]).unwrap();
        assert_eq!(single.edges(), &[(0, 1)]);

        let star = build_threshold(&[Isolated, Isolated, Dominating]).unwrap();
        assert_eq!(star.edges(), &[(0, 2), (1, 2)]);

        let triangle = build_threshold(&[Isolated, Dominating, Dominating]).unwrap();
        assert_eq!(triangle.edge_count(), 3);

        assert!(matches!(
            build_threshold(&[]),
            Err(GraphError::EmptyCreationSequence)
        ));
    }

    #[test]
    fn laplacian_of_single_edge() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.get(0, 0), 1.0);
        assert_eq!(l.get(1, 1), 1.0);
        assert_eq!(l.get(0, 1), -1.0);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let (g, _) = build_semibipartite(4, &[2, 1]).unwrap();
        let l = laplacian(&g);
        let ones = vec![1.0; g.vertex_count()];
        for r in l.mul_vec(&ones).unwrap() {
            assert!(r.abs() < 1e-15);
        }
    }

    #[test]
    fn path_spectrum_closed_form() {
        let s = eigen_symmetric(&laplacian(&p4()), DEFAULT_EIGEN_TOL).unwrap();
        let expected = [2.0 + 2f64.sqrt(), 2.0, 2.0 - 2f64.sqrt(), 0.0];
        for (got, want) in s.values().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn degree_data_examples() {
        let d = degree_data(&p4());
        assert_eq!(d.degrees, vec![1, 2, 2, 1]);
        assert_eq!(d.conjugate, vec![4, 2, 0, 0]);

        let (g, _) = build_semibipartite(3, &[1, 1]).unwrap();
        let d = degree_data(&g);
        assert_eq!(d.degrees, vec![3, 3, 2, 1, 1]);
        assert_eq!(d.conjugate, vec![5, 3, 2, 0, 0]);

        let empty = build_graph(3, &[]).unwrap();
        assert_eq!(degree_data(&empty).conjugate, vec![0, 0, 0]);
    }

    #[test]
    fn conjugate_sums_match_degree_sums() {
        let (g, _) = build_semibipartite(6, &[4, 2, 1]).unwrap();
        let d = degree_data(&g);
        let via_deg: usize = d.degrees.iter().sum();
        let via_conj: usize = d.conjugate.iter().sum();
        assert_eq!(via_deg, via_conj);
        assert_eq!(via_deg, 2 * g.edge_count());
    }

    #[test]
    fn quadratic_form_examples() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        assert_eq!(quadratic_form(&g, &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(quadratic_form(&g, &[1.0, 0.0]).unwrap(), 1.0);

        let k3 = build_graph(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(quadratic_form(&k3, &[1.0, 0.0, 0.0]).unwrap(), 2.0);

        assert!(matches!(
            quadratic_form(&k3, &[1.0]),
            Err(GraphError::LengthMismatch {
                expected: 3,
                actual: 1
            })
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "\
# sample file
p 4

0 1
  1   2
2 3
1 0
";
        let g = parse_edge_list(text, "sample").unwrap();
        assert_eq!(g, p4());
        let again = parse_edge_list(&g.to_edge_list(), "round-trip").unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let selfloop = parse_edge_list("p 3\n0 1\n2 2\n", "t");
        match selfloop {
            Err(GraphError::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("self-loop"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        assert!(matches!(
            parse_edge_list("0 1\n", "t"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("p 2\n0 5\n", "t"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("p 2\n0 x\n", "t"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("# only comments\n", "t"),
            Err(GraphError::Parse { line: 0, .. })
        ));
    }
}
