use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series scalings differ ({0:?} vs {1:?})")]
    ScalingMismatch(crate::zseries::Scaling, crate::zseries::Scaling),

    #[error("series truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),

    #[error("series must have zero constant term")]
    NonzeroConstantTerm,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    /// Exact division was requested but a remainder survived. Every exact
    /// division in the solver doubles as a consistency check, so this always
    /// indicates an arithmetic bug upstream, never bad user input.
    #[error("inexact polynomial division: ({dividend}) / ({divisor}) leaves remainder {remainder}")]
    InexactDivision {
        dividend: String,
        divisor: String,
        remainder: String,
    },

    #[error("series solved to order {have} but order {need} is required")]
    InsufficientOrder { have: usize, need: usize },

    #[error("{context}: coefficient of u^{power} is {value}, not a nonnegative integer")]
    NonIntegerCoefficient {
        context: String,
        power: usize,
        value: String,
    },

    /// Two independently computed forms of the same series disagree.
    #[error("computation paths disagree at z^{n}: {lhs} vs {rhs}")]
    PathDisagreement { n: usize, lhs: String, rhs: String },

    #[error("invalid Betti table for {context}: {reason}")]
    InvalidTable { context: String, reason: String },

    #[error("distribution is degenerate (zero variance)")]
    ZeroVariance,

    #[error("{0}")]
    Domain(String),

    #[error("no table for n = {0} in dataset")]
    MissingTable(u32),

    #[error("record {record}: {reason}")]
    Ingest { record: usize, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
