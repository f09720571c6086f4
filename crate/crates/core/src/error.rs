use thiserror::Error;

/// Errors shared across the library.
///
/// Every fallible operation reports through this enum so the CLI can print a
/// single diagnostic line and exit non-zero.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex `{0}` is not present in this quiver")]
    VertexNotPresent(String),

    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),

    #[error("invalid vertex name `{0}`: names must be non-empty and free of whitespace and the reserved characters (){{}}.^*,⊙∗")]
    BadVertexName(String),

    #[error("duplicate edge ({0}, {1}): a quiver holds at most one edge per ordered pair")]
    DuplicateEdge(String, String),

    #[error("no edge ({0}, {1}) in the quiver")]
    MissingEdge(String, String),

    #[error("source and target coincide at `{0}`; the only simple path from a vertex to itself is the trivial path, handled by the cycle-ensemble form")]
    SameEndpoints(String),

    #[error("enumeration exceeded the cap of {0} walks")]
    CapExceeded(usize),

    #[error("walk length {len} exceeds the divisibility search bound {bound}")]
    LengthBound { len: usize, bound: usize },

    #[error("total length {len} exceeds the factorization enumeration bound {bound}")]
    FactorBound { len: usize, bound: usize },

    #[error("graph has {n} vertices, above the exhaustive search bound {bound}")]
    VertexBound { n: usize, bound: usize },

    #[error("nesting powers need a cycle: got an open walk with exponent {0}")]
    OpenWalkPower(u32),

    #[error("walks live on different quivers")]
    DifferentQuivers,

    #[error("tree recomposes to zero; only trees with non-zero recomposition can be normalized")]
    ZeroRecomposition,

    #[error("required inverse does not exist: the cycle sum at vertex `{vertex}` (deleted: {deleted:?}) is identically 1")]
    MissingInverse {
        vertex: String,
        deleted: Vec<String>,
    },

    #[error("bracket at vertex `{vertex}` (deleted: {deleted:?}) is numerically singular: rcond {rcond:.3e}")]
    SingularBracket {
        vertex: String,
        deleted: Vec<String>,
        rcond: f64,
    },

    #[error("zero denominator in rational function arithmetic")]
    ZeroDenominator,

    #[error("series expansion needs a denominator with non-zero constant term")]
    PoleAtZero,

    #[error("edge ({0}, {1}) carries no label")]
    MissingLabel(String, String),

    #[error("edge ({0}, {1}) carries no weight matrix")]
    MissingWeight(String, String),

    #[error("weight matrix for edge ({edge_tail}, {edge_head}) has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    WeightShape {
        edge_tail: String,
        edge_head: String,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },

    #[error("the closed form needs a bidirectional graph: edge ({0}, {1}) has no reverse")]
    NotUndirected(String, String),

    #[error("the closed form needs a connected graph")]
    NotConnected,

    #[error("not a walk: no edge ({0}, {1})")]
    NotAWalk(String, String),

    #[error("empty vertex sequence: a walk visits at least one vertex")]
    EmptyWalk,

    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),

    #[error("bad family parameters: {0}")]
    BadFamilyParams(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("expression has no rendering in this mode: {0}")]
    Render(String),
}

pub type Result<T> = std::result::Result<T, Error>;
