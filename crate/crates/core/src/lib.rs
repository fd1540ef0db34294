//! Edge-isoperimetric problem on Sierpinski graphs `S(n, m)`.
//!
//! Vertices are words of length `n` over `{0, .., m-1}` and are identified
//! with their base-`m` index throughout; the lexicographic rank of index `v`
//! is `v + 1`. The crate computes the lex-segment boundary profile, runs the
//! Steiner-type compression operations, and verifies the subadditivity
//! inequality behind lex optimality exhaustively on small instances.

pub mod boundary;
pub mod cli;
pub mod error;
pub mod graph;
pub mod lex;
pub mod metrics;
pub mod steiner;
pub mod verifier;

/// Largest vertex count for which full enumerations (edge lists, sweeps,
/// profile tables) are attempted.
pub const ENUM_CAP: u64 = 1 << 24;

pub use boundary::{
    profile_direct, profile_recurrence, theta, theta_decorated, CornerBranch, ProfileTable,
    VertexSet,
};
pub use error::{EipError, Result};
pub use graph::{Decoration, GraphParams, LabelClass, Vertex};
pub use lex::{k_of, lex_rank, lex_unrank, q_of, sigma, split, LexRank, SplitResult};
pub use metrics::{metrics, ExactRational, MetricsReport};
pub use steiner::{compress_h, compress_inf, ell_vector, reduce_to_lex, subadd, EllVector};
pub use verifier::{
    classify_case, sigma_decomposition, sigma_gap, verify_lemma_suite, verify_lex_optimality,
    verify_subadditivity, CaseId, SubaddReport,
};
