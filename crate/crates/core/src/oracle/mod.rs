//! Reference implementations the search is checked against.
//!
//! None of these share code with [`crate::search`]: the intersection has its
//! own label matcher and graph, the edit-distance matrix and the classical
//! Viterbi recursion work directly on strings and probability tables.

pub mod edit_distance;
pub mod hmm;
pub mod intersection;

use thiserror::Error;

use crate::machine::ModelError;

pub use edit_distance::{edit_distance_matrix, EditCosts, EditDistance, EditOp};
pub use hmm::{classical_viterbi, hmm_to_wfsm, HmmError, HmmModel, ViterbiPath};
pub use intersection::{
    bellman_ford, best_weight_by_intersection, dijkstra, enumerate_accepting_paths, intersect_with_tuple,
    EnumeratedPath, IntersectionGraph, ShortestPath, Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{found} input strings given for {expected} input tapes")]
    InputArity { expected: usize, found: usize },
    #[error("ε-cycle reachable in the intersection")]
    EpsilonCycle,
    #[error("arc {arc} improves on the semiring one")]
    NegativeWeight { arc: usize },
    #[error("negative cycle")]
    NegativeCycle,
}
