use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} repeats a coordinate")]
    RepeatedCoordinate { edge: String },
    #[error("edge {edge} uses undeclared vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {edge} has length {found}, expected arity {expected}")]
    WrongEdgeLength { edge: String, expected: usize, found: usize },
    #[error("arity must be positive")]
    ZeroArity,
    #[error("bad edge type {ty:?}: {reason}")]
    BadEdgeType { ty: Vec<usize>, reason: &'static str },
    #[error("edge {edge}: coordinate {vertex} is not a vertex of part {part}")]
    PartMismatch { edge: String, part: usize, vertex: String },
    #[error("tuple {tuple} is outside the edge universe: {reason}")]
    UniverseMismatch { tuple: String, reason: String },
    #[error("template and host are incompatible: {0}")]
    ArityMismatch(String),
    #[error("search budget of {budget} nodes exceeded ({nodes} nodes visited)")]
    BudgetExceeded { budget: u64, nodes: u64 },
    #[error("{found} copies exceed the cap of {cap}")]
    CapExceeded { cap: usize, found: usize },
    #[error("the template has no edges; removal is meaningless")]
    EmptyTemplate,
    #[error("the host has no vertices for some template vertex, so there are no maps")]
    NoMaps,
    #[error("generator {generator} is not an automorphism: edge {edge} maps to a non-edge")]
    NotAutomorphism { generator: usize, edge: String },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group action needs at least one generator")]
    NoGenerators,
    #[error("modulus must be at least 1")]
    BadModulus,
    #[error("table is not closed: {0}")]
    NotClosed(String),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("unknown group element {0}")]
    UnknownElement(String),
    #[error("the identity element may not be in a connection set")]
    IdentityInConnectionSet,
    #[error("edge ({0}, {0}) lies on the diagonal")]
    DiagonalPair(String),
    #[error("psi map {index} does not have kernel p(H): {reason}")]
    KernelMismatch { index: usize, reason: String },
    #[error("group is not a cyclic product")]
    NotAbelian,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}
