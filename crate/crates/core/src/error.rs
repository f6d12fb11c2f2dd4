use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("signature must be a non-empty list of arities >= 1")]
    BadSignature,
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("relation {rel}: tuple {tuple:?} is invalid for arity {arity} over domain {domain}")]
    BadTuple {
        rel: usize,
        tuple: Vec<usize>,
        arity: usize,
        domain: usize,
    },
    #[error("relation of arity {arity} over domain {domain} is too large to materialize")]
    RelationTooLarge { arity: usize, domain: usize },
    #[error("signatures do not match")]
    SignatureMismatch,
    #[error("domain sizes do not match: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },
    #[error("map values must be total with entries in [0, target size)")]
    BadMap,
    #[error("operation requires a non-empty family of structures")]
    EmptyFamily,
    #[error("expected a graph: one binary symbol, irreflexive and symmetric")]
    NotAGraph,
    #[error("domain size {domain} exceeds the permutation-orbit cap {cap}")]
    OrbitCapExceeded { domain: usize, cap: usize },
    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound free variable v{0}")]
    UnboundVariable(usize),
    #[error("unknown relation symbol R{0}")]
    UnknownRelation(usize),
    #[error("relation R{rel} expects arity {expected}, got {got} arguments")]
    ArityMismatch {
        rel: usize,
        expected: usize,
        got: usize,
    },
    #[error("valuation assigns v{var} to {value}, outside domain of size {domain}")]
    BadValuation {
        var: usize,
        value: usize,
        domain: usize,
    },
    #[error("invalid class specification: {0}")]
    InvalidClassSpec(String),
    #[error("structure is not a member of the class")]
    NonMember,
    #[error("input structures do not form an inclusion chain")]
    NotAChain,
    #[error("builtin '{0}' has no complement dual")]
    NonDualizableBuiltin(String),
    #[error("structure contains a copy of the forbidden complete graph on {0} vertices")]
    NotKnFree(usize),
    #[error("graph violates the degree bound {0}")]
    DegreeBoundViolated(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cardinality bounds are malformed: {0}")]
    MalformedBounds(String),
    #[error("operation requires a complete census, got a sampled one")]
    SampledCensus,
    #[error("blowup sizes list has {got} entries, structure has {expected} vertices")]
    SizesMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
