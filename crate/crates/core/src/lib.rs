//! Independence polynomials of graphs and trees.
//!
//! The crate computes `I(G; x) = Σ s_k x^k`, where `s_k` counts independent
//! sets of size `k`, checks the coefficient sequence for log-concavity and
//! unimodality, builds the tree families whose polynomials fail
//! log-concavity, and scans every free tree of a given order for further
//! counterexamples.

pub mod checks;
pub mod engine;
pub mod enumeration;
pub mod families;
pub mod graph;
pub mod poly;
pub mod search;

pub use checks::{check_log_concave, check_unimodal, ConcavityReport, UnimodalReport, Violation};
pub use engine::{
    independence_polynomial_auto, independence_polynomial_bruteforce,
    independence_polynomial_general, independence_polynomial_tree,
};
pub use graph::{Graph, GraphError, Tree};
pub use poly::Polynomial;
