use thiserror::Error;

use crate::drg::DrgViolation;
use crate::labelings::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,

    #[error("partition does not match the vertex set: {0}")]
    PartitionMismatch(String),
    #[error(
        "partition is not equitable: vertices {u} and {v} of block {block} have {count_u} and {count_v} neighbours in block {target}"
    )]
    NotEquitable {
        block: usize,
        target: usize,
        u: usize,
        v: usize,
        count_u: usize,
        count_v: usize,
    },
    #[error("block {0} has no outgoing edges")]
    IsolatedBlock(usize),
    #[error("partition is not stabilized: block 0 has {0} vertices")]
    NotStabilized(usize),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("random walk request invalid: {0}")]
    InvalidWalk(String),
    #[error("all {0} walks exceeded the step cap")]
    AllTruncated(u64),

    #[error("labeling is invalid: {0}")]
    InvalidLabeling(String),
    #[error("graph is not f-equitable: {0}")]
    Violation(Violation),

    #[error("not distance-regular: {0}")]
    NotDrg(DrgViolation),
    #[error("intersection array is invalid: {0}")]
    InvalidArray(String),
    #[error("subconstituent size k_{0} is not an integer")]
    NonIntegralKi(usize),

    #[error("not strongly regular: {0}")]
    NotSrg(String),
    #[error("strongly regular parameters infeasible: {0}")]
    InvalidSrgParams(String),
    #[error("closed form has a vanishing denominator")]
    DegenerateDenominator,

    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("2k must divide x-1 (x = {x}, k = {k})")]
    BadCongruence { x: u64, k: u64 },
    #[error("common-neighbour count is not constant on power class {0}")]
    NonConstantClass(usize),
    #[error("column {column} sums to {found}, expected {expected}")]
    ColumnSumMismatch {
        column: usize,
        expected: i64,
        found: i64,
    },
    #[error("1 + c_1 + c_3 = {0} is odd")]
    OddParity(i64),
    #[error("c_2 + c_4 = 2 c_3 fails: {0}")]
    ConstraintViolation(String),
    #[error("expected {expected} parameters, got {found}")]
    WrongClassCount { expected: u64, found: u64 },
}

impl Error {
    /// Stable machine-readable name for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SelfLoop(_) => "SelfLoop",
            Error::DuplicateEdge(..) => "DuplicateEdge",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::Disconnected => "Disconnected",
            Error::PartitionMismatch(_) => "PartitionMismatch",
            Error::NotEquitable { .. } => "NotEquitable",
            Error::IsolatedBlock(_) => "IsolatedBlock",
            Error::NotStabilized(_) => "NotStabilized",
            Error::SingularSystem => "SingularSystem",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidWalk(_) => "InvalidWalk",
            Error::AllTruncated(_) => "AllTruncated",
            Error::InvalidLabeling(_) => "InvalidLabeling",
            Error::Violation(_) => "Violation",
            Error::NotDrg(_) => "NotDRG",
            Error::InvalidArray(_) => "InvalidArray",
            Error::NonIntegralKi(_) => "NonIntegralKi",
            Error::NotSrg(_) => "NotSRG",
            Error::InvalidSrgParams(_) => "InvalidSrgParams",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::NotPrime(_) => "NotPrime",
            Error::BadCongruence { .. } => "BadCongruence",
            Error::NonConstantClass(_) => "NonConstantClass",
            Error::ColumnSumMismatch { .. } => "ColumnSumMismatch",
            Error::OddParity(_) => "OddParity",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::WrongClassCount { .. } => "WrongClassCount",
        }
    }
}
