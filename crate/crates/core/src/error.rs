use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid format F({total_bits},{exponent_bits}): {reason}")]
    InvalidFormat {
        total_bits: u32,
        exponent_bits: u32,
        reason: &'static str,
    },

    #[error("no {direction} neighbour for {what}")]
    NoNeighbour {
        direction: &'static str,
        what: String,
    },

    #[error("{0} is outside the domain of {1}")]
    Domain(String, &'static str),

    #[error("oracle precision exhausted at {bits} bits for {func}({input}); missed exactness case?")]
    PrecisionExhausted {
        func: &'static str,
        input: String,
        bits: u32,
    },

    #[error("reduced interval for input {input} is empty after guard shrinking")]
    EmptyReducedInterval { input: String },

    #[error("target format F({k},{ebits}) is not in the supported range for F({n},{ebits})")]
    TargetFormat { k: u32, n: u32, ebits: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Config(String),

    #[error("generation infeasible: {0}")]
    Infeasible(crate::polygen::GenFailure),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
