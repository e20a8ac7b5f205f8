use thiserror::Error;

use crate::validate::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("0/0 is not a fraction")]
    ZeroZero,
    #[error("operation is undefined for the infinite fraction")]
    InfiniteInput,
    #[error("malformed fraction {0:?}")]
    BadFraction(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("expression tree has height {0}, more than the limit of {1}")]
    TooDeep(usize, usize),
    #[error("Montesinos entry {0} has denominator 0")]
    MontesinosDenominator(String),
    #[error("expression failed validation: {}", fmt_violations(.0))]
    ValidationFailed(Vec<Violation>),
    #[error("expression is not in normal form")]
    NotNormalized,
    #[error("a large arborescent link needs two non-rational tangles; {0} is rational")]
    NotLargeLink(String),
    #[error("numerator closure of {0} is not supported: it is neither rational nor a sum of rational tangles; write it with glue(...) or M(...)")]
    UnsupportedClosure(String),
    #[error("{0} has open strands; only closed links can be exported")]
    OpenStrands(String),
    #[error("diagram of {0} would need more than {1} crossings")]
    DiagramTooLarge(String, usize),
    #[error("census would list {0} surfaces, more than the limit of {1}")]
    CensusTooLarge(u64, u64),
    #[error("corrupt corpus record on line {line}: {msg}")]
    CorruptCorpus { line: usize, msg: String },
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
