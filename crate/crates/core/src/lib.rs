//! Weighted distances over multi-attributed graphs.
//!
//! A multi-attributed graph labels every vertex with an `n`-dimensional real
//! vector and every vertex pair with an `m`-dimensional vector of
//! relationship strengths. This crate turns such a graph into a plain
//! weighted similarity graph:
//!
//! 1. [`distance::magdist`] shrinks the Euclidean distance between two
//!    vertices by a factor driven by their aggregated edge weight.
//! 2. [`simgraph::magsim`] rescales the distances into similarities in `[0, 1]`.
//! 3. [`mcl::mcl_cluster`] clusters the similarity graph with Markov Clustering.
//! 4. [`eval`] scores clusters against known classes (contingency, TPR/FPR).
//!
//! Gaussian-kernel and k-nearest-neighbour similarity graphs are provided as
//! baselines, and [`io`] defines the CSV files exchanged between stages.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distance;
pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod mcl;
pub mod norms;
pub mod pipeline;
pub mod simgraph;

pub use distance::{DistanceParams, DistanceRecord, PairsMode};
pub use error::{Error, Result};
pub use eval::{ContingencyTable, EvaluationReport, LabeledDataset};
pub use graph::{canonical_pair, EdgeVector, MultiAttributedGraph, VertexVector, WeightVector};
pub use mcl::{Clustering, MclParams};
pub use simgraph::{KnnMode, SimilarityEdge, SimilarityGraph};
