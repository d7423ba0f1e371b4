use std::fmt;

use thiserror::Error;

/// Why an external evaluator failed to produce a cost.
#[derive(Debug, Clone, PartialEq)]
pub enum EvaluatorFailure {
    Spawn(String),
    Io(String),
    Timeout { secs: f64 },
    Exited,
    Malformed(String),
    RestartsExhausted,
}

impl fmt::Display for EvaluatorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Spawn(msg) => write!(f, "could not start evaluator: {msg}"),
            Self::Io(msg) => write!(f, "i/o error talking to evaluator: {msg}"),
            Self::Timeout { secs } => write!(f, "no reply within {secs} s"),
            Self::Exited => write!(f, "evaluator exited before replying"),
            Self::Malformed(line) => write!(f, "malformed reply {line:?}"),
            Self::RestartsExhausted => write!(f, "evaluator restart limit reached"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("genome has {actual} bits but the grid has {expected} free cells")]
    Encoding { expected: usize, actual: usize },

    #[error("invalid genome text: {0}")]
    GenomeText(String),

    #[error("evaluation budget of {max} exhausted")]
    BudgetExhausted { max: u64 },

    #[error("evaluator error on genome {genome}: {failure}")]
    Evaluator {
        genome: String,
        failure: EvaluatorFailure,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Self::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
