use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not a prime")]
    NotPrime(u64),

    #[error("symbol {symbol} is out of range for F_{q}")]
    SymbolOutOfRange { symbol: u64, q: u32 },

    #[error("vectors over different fields (F_{0} vs F_{1})")]
    FieldMismatch(u32, u32),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{what}: {count} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("rank {rank} is out of range for {q}^{n}")]
    RankOutOfRange { rank: u64, q: u32, n: usize },

    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("operation needs a linear function")]
    NotLinear,

    #[error("unknown image label {0}")]
    UnknownLabel(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("budget exceeded in {what} after {nodes} nodes (best lower {lower}, upper {})", upper_text(*.upper))]
    Budget {
        what: &'static str,
        nodes: u64,
        lower: u64,
        upper: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `u64::MAX` marks an unknown upper end.
fn upper_text(upper: u64) -> String {
    if upper == u64::MAX {
        "unknown".into()
    } else {
        upper.to_string()
    }
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
