use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("{n} vertices exceeds the supported maximum of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("unknown vertex label {label}")]
    UnknownLabel { label: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate vertex label {label}")]
    DuplicateLabel { label: usize },
    #[error("edge probability {p} is outside [0, 1]")]
    InvalidProbability { p: f64 },
    #[error("graph6: {kind} at byte offset {offset}")]
    Graph6 { offset: usize, kind: Graph6ErrorKind },
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Graph6ErrorKind {
    #[error("empty input")]
    Empty,
    #[error("malformed header byte {0:#04x} (only single-byte headers for n <= 62 are supported)")]
    Header(u8),
    #[error("byte {0:#04x} outside the printable range 63..=126")]
    ByteRange(u8),
    #[error("truncated payload")]
    Truncated,
    #[error("unexpected trailing bytes")]
    Trailing,
    #[error("nonzero padding bits")]
    Padding,
    #[error("graph has {0} vertices; encoding supports at most 62")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("need at least {needed} vertices, got {n}")]
    TooSmall { n: usize, needed: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("vector entries sum to {sum:e}, expected zero")]
    NotZeroSum { sum: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoutingError {
    #[error("a path needs at least two vertices")]
    PathTooShort,
    #[error("more than one path given for pair {{{x}, {y}}}")]
    DuplicatePair { x: usize, y: usize },
    #[error("invalid routing: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("base routing needs diameter at most 2, found {0}")]
    DiameterTooLarge(crate::graph::Diameter),
    #[error("witness search needs both the graph and its complement to have diameter 3")]
    NotDiameterThree,
    #[error("no distance-3 witness pairs found")]
    NoWitnesses,
    #[error("missing edge between u = {u} and v = {v}")]
    MissingEdge { u: usize, v: usize },
    #[error("vertex {z} is adjacent to neither u nor v")]
    DominationFailure { z: usize },
    #[error("v' = {vp} is not adjacent to v = {v}")]
    VpNotAdjacent { v: usize, vp: usize },
    #[error("v' = {vp} coincides with u or v")]
    VpCollision { vp: usize },
    #[error("unknown vertex label {0}")]
    UnknownLabel(usize),
    #[error("sub-routing is not a valid routing of the reduced graph: {0}")]
    InvalidSubRouting(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle limited to {max} vertices, graph has {n}")]
    TooLarge { n: usize, max: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("built-in enumeration supports orders 2..=7, requested {0}")]
    OrderOutOfRange(usize),
    #[error("graph {id} has fewer than two vertices")]
    TooSmall { id: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
