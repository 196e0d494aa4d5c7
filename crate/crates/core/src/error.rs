use thiserror::Error;

use crate::edgeset::EdgeSubset;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph not connected")]
    NotConnected,
    #[error("no 2-forest exists (graph has {0} vertices)")]
    NoTwoForest(usize),
    #[error("edge {edge} has endpoint {vertex} outside 0..{n}")]
    InvalidEndpoint { edge: usize, vertex: usize, n: usize },
    #[error("{0} edges exceed the supported maximum of 64")]
    TooManyEdges(usize),
    #[error("{0} is not a spanning tree")]
    NotSpanningTree(EdgeSubset),
    #[error("{0} is not a spanning 2-forest")]
    NotSpanningTwoForest(EdgeSubset),
    #[error("{0} is not a disjoint union of a spanning tree and a spanning 2-forest")]
    NotTreeForestSplit(EdgeSubset),
    #[error("invalid vertex partition: {0}")]
    InvalidPartition(String),
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("momentum not conserved in coordinate {0}")]
    MomentumNotConserved(usize),
    #[error("invalid momenta: {0}")]
    InvalidMomenta(String),
    #[error("edge weights must be positive and of length {expected}")]
    InvalidWeights { expected: usize },
    #[error("psi vanishes at the given weights")]
    VanishingPsi,
    #[error("illegal pivot on e{edge}: {reason}")]
    IllegalPivot { edge: usize, reason: String },
    #[error("condition (ii) violated at t = {0}")]
    ConditionIiViolated(Rational),
    #[error("component {0} contains a special vertex")]
    SpecialComponent(usize),
    #[error("determinant and enumeration routes disagree: {0}")]
    OracleMismatch(String),
    #[error("invalid perturbation spec: {0}")]
    InvalidSpec(String),
    #[error("{what}: {count} exceeds budget {cap}")]
    BudgetExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
