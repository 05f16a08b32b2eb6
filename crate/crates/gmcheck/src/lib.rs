//! Laplacian spectra of pendant-decorated cliques, checked against the
//! conjugate degree sequence.
//!
//! The toolkit verifies spectral majorization: the sorted Laplacian
//! eigenvalues of a graph, compared prefix-by-prefix against the conjugate of
//! its degree sequence. For cliques decorated with pendant groups the
//! spectrum reduces to the roots of an explicit polynomial, and the crate
//! follows that reduction end to end with certified root isolation, a
//! companion-matrix bound, and a homotopy that connects the two. Every
//! pipeline number is cross-checked against a dense Jacobi eigensolver that
//! shares no code with the pipeline.
//!
//! Module layout, bottom up:
//!
//! | module | contents |
//! |--------|----------|
//! | [`linalg`] | symmetric storage, Jacobi eigensolver, majorization, rank-one determinant |
//! | [`graph`] | graph construction, Laplacians, degree data, edge-list files |
//! | [`qep`] | the polynomial F, certified root isolation, companion matrices, homotopy |
//! | [`checker`] | spectrum assembly, majorization reports, the chain bound, lattice sweeps |
//! | [`cli`] | the `gmcheck` binary: check, analyze, sweep, majorize |

pub mod checker;
pub mod cli;
pub mod graph;
pub mod linalg;
pub mod qep;
