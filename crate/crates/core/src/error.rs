use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {q} is outside the supported range: {reason}")]
    UnsupportedField { q: u64, reason: &'static str },

    #[error("modulus {0:?} is not irreducible")]
    NotIrreducible(Vec<u32>),

    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: usize, got: Vec<u32> },

    #[error("wrong length: expected {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("symbol {value} is outside the alphabet of size {size}{}{}", position_suffix(*.position), line_suffix(*.line))]
    AlphabetViolation {
        value: u64,
        size: u64,
        position: Option<usize>,
        /// 1-based input line, when parsed from a file
        line: Option<usize>,
    },

    #[error("basis elements are linearly dependent")]
    DependentBasis,

    #[error("self-dual basis search over a field of order {order} exceeds the cap {cap}")]
    SearchCapExceeded { order: u64, cap: u64 },

    #[error("minimum distance is undefined for the zero code")]
    ZeroCode,

    #[error("enumeration of {size} words exceeds the cap {cap}")]
    CapExceeded { size: u128, cap: u64 },

    #[error("index {index} out of range 0..{bound}")]
    BadIndex { index: usize, bound: usize },

    #[error("block sizes {0:?} are not sorted nonincreasing")]
    NotSorted(Vec<usize>),

    #[error("block sizes must be positive, got {0:?}")]
    EmptyBlock(Vec<usize>),

    #[error("columns {cols:?} are not uniform: tuple {first:?} occurs {first_count} times but {second:?} occurs {second_count} times")]
    NotUniform {
        cols: Vec<usize>,
        first: Vec<u32>,
        first_count: u64,
        second: Vec<u32>,
        second_count: u64,
    },

    #[error("array does not have strength {0}")]
    StrengthViolation(usize),

    #[error("Singleton-type bound violated: {0}")]
    BoundViolation(String),

    #[error("array rows do not form an F_q-linear subspace")]
    NotLinear,

    #[error("array is not irredundant at strength {0}")]
    NotIrredundant(usize),

    #[error("partition mismatch: expected {expected:?}, got {got:?}")]
    PartitionMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },

    #[error("column {0} uses a different field than the conversion context")]
    FieldMismatch(usize),

    #[error("self-dual bases are unavailable for q = {q} with block sizes {sizes:?}")]
    SelfDualBasisUnavailable { q: u64, sizes: Vec<usize> },

    #[error("array has duplicate rows")]
    DuplicateRows,

    #[error("array needs at least two rows, got {0}")]
    TooFewRows(usize),

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("input contains no data")]
    EmptyFile,
}

fn position_suffix(position: Option<usize>) -> String {
    match position {
        Some(p) => format!(" (position {p})"),
        None => String::new(),
    }
}

fn line_suffix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!(" at line {l}"),
        None => String::new(),
    }
}

impl Error {
    /// Short variant name, used by the CLI when surfacing failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::UnsupportedField { .. } => "UnsupportedField",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::BadModulus { .. } => "BadModulus",
            Error::WrongLength { .. } => "WrongLength",
            Error::AlphabetViolation { .. } => "AlphabetViolation",
            Error::DependentBasis => "DependentBasis",
            Error::SearchCapExceeded { .. } => "SearchCapExceeded",
            Error::ZeroCode => "ZeroCode",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::BadIndex { .. } => "BadIndex",
            Error::NotSorted(_) => "NotSorted",
            Error::EmptyBlock(_) => "EmptyBlock",
            Error::NotUniform { .. } => "NotUniform",
            Error::StrengthViolation(_) => "StrengthViolation",
            Error::BoundViolation(_) => "BoundViolation",
            Error::NotLinear => "NotLinear",
            Error::NotIrredundant(_) => "NotIrredundant",
            Error::PartitionMismatch { .. } => "PartitionMismatch",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::SelfDualBasisUnavailable { .. } => "SelfDualBasisUnavailable",
            Error::DuplicateRows => "DuplicateRows",
            Error::TooFewRows(_) => "TooFewRows",
            Error::Overflow(_) => "Overflow",
            Error::Inconsistent(_) => "Inconsistent",
            Error::Parse { .. } => "ParseError",
            Error::EmptyFile => "EmptyFile",
        }
    }
}
