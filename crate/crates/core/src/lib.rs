//! Hausdorff distance between unrooted trees.
//!
//! The distance between two trees is the smallest possible "overhang" when
//! the trees are glued along a common subtree: over every way of identifying
//! isomorphic subtrees, take the largest hop distance from any vertex to the
//! shared part, and minimize. It is 0 exactly for isomorphic trees.
//!
//! [`engine::hausdorff_distance`] computes it in polynomial time and returns
//! the mapping that realizes it. [`oracle`] is an exhaustive reference for
//! small trees, and [`engine::verify_mapping`] re-derives the cover distance
//! of any mapping by BFS.

pub mod bench;
pub mod engine;
pub mod generate;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod tree;

pub use engine::{
    hausdorff_distance, hausdorff_distance_with, verify_mapping, CoverDistanceReport,
    HausdorffResult, PairSet, Parallelism,
};
pub use tree::{is_isomorphic, MetricSummary, RootedTree, Tree, TreeError, Vertex};
