use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("digon between {0} and {1}")]
    Digon(usize, usize),
    #[error("tournament has no arc between {0} and {1}")]
    MissingArc(usize, usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("{what}: size {size} exceeds the configured cap {cap}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("vertex set is not a chain")]
    NotAChain,
    #[error("chain enumeration does not match the requested orientation")]
    WrongEnumeration,
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("family has {have} parts but budget({k}) = {need} are required")]
    BudgetUnderflow { k: usize, need: u64, have: usize },
    #[error("invalid interval family: {0}")]
    InvalidFamily(String),
    #[error("the two vertex sets intersect")]
    Overlap,
    #[error("invalid merge at step {step}: {reason}")]
    InvalidMerge { step: usize, reason: String },
    #[error("permutation too small: need at least {need} elements, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("tournament is not in the image of the obstruction construction: {0}")]
    NotInImage(String),
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("division is {rows}x{cols}, expected {k}x{k}")]
    DivisionShape { rows: usize, cols: usize, k: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
