use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("length mismatch: {left} != {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("at least {required} values are needed, got {got}")]
    TooFew { required: usize, got: usize },

    #[error("rank correlation is undefined when a ranking is constant")]
    ConstantRanking,

    #[error("variant {variant} supports only two groups, got {groups}")]
    VariantGroups {
        variant: &'static str,
        groups: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("record {index}: field `{field}` = {value}: {constraint}")]
    Record {
        index: usize,
        field: &'static str,
        value: String,
        constraint: &'static str,
    },

    #[error("duplicate record for group `{group}`, algorithm `{algorithm}`, demographic `{demographic}`")]
    DuplicateKey {
        group: String,
        algorithm: String,
        demographic: String,
    },

    #[error("ragged block `{group}`: algorithm `{algorithm}` {problem}")]
    RaggedBlock {
        group: String,
        algorithm: String,
        problem: String,
    },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
