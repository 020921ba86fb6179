use thiserror::Error;

use crate::graph::Edge;
use crate::network::{Arc, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("both sides of a bipartite graph must be non-empty")]
    EmptySide,
    #[error("edge {0} is outside the ambient graph")]
    EdgeOutOfRange(Edge),
    #[error("edges do not form a matching")]
    NotAMatching,
    #[error("member {0} does not exist")]
    MemberOutOfRange(usize),
    #[error("edge {edge} does not belong to member {member}")]
    EdgeNotInMember { member: usize, edge: Edge },
    #[error("member {member} is represented more than once")]
    RepresentationClash { member: usize },
    #[error("no member is represented twice")]
    NoDoubleRepresentation,
    #[error("k = {k} is out of range for a family of {len} members")]
    KOutOfRange { k: usize, len: usize },
    #[error("invalid alternating walk: {0}")]
    InvalidAlternating(String),
    #[error("invalid arc {0}")]
    InvalidArc(Arc),
    #[error("{0} is not an inner vertex of the network")]
    NotInner(Vertex),
    #[error("invalid s-t path: {0}")]
    InvalidPath(String),
    #[error("arc {arc} has no preimage in member {member}")]
    MissingPreimage { member: usize, arc: Arc },
    #[error("representation does not fit the path: {0}")]
    InvalidRepresentation(String),
    #[error("network has {inner} inner vertices, search bound is {bound}")]
    BoundExceeded { inner: usize, bound: usize },
    #[error("family has {actual} members, expected {expected}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("{empty} empty members exceed the allowed {allowed}")]
    TooManyEmpty { empty: usize, allowed: usize },
    #[error("hypothesis fails on members {0:?}")]
    HypothesisFailure(Vec<usize>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constructive loop stalled: {0}")]
    Stalled(String),
    #[error("search budget of {budget} instances exhausted after {checked}")]
    BudgetExhausted { budget: u64, checked: u64 },
}
