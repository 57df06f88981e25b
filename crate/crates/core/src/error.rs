use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the empty word has no cyclic class")]
    EmptyWord,

    #[error("letter index {0} is outside the alphabet")]
    UnknownLetter(usize),

    #[error("unknown letter name `{0}`")]
    UnknownLetterName(String),

    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),

    #[error("polynomial has a nonzero constant term")]
    ConstantTerm,

    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,

    #[error("partition has {parts} parts but only {nvars} variables are available")]
    TooManyParts { parts: usize, nvars: usize },

    #[error("{needed} variables are required, got {nvars}")]
    InsufficientVariables { needed: usize, nvars: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("relation uses generator `{0}` which is not declared")]
    UndeclaredGenerator(String),

    #[error("invalid level: {0}")]
    InvalidLevel(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Renders a parse error as the input line followed by a caret under the
    /// offending position. Other errors render as their message.
    pub fn render_with_input(&self, input: &str) -> String {
        match self {
            Error::Parse { pos, msg } => {
                let caret = " ".repeat(input[..(*pos).min(input.len())].chars().count());
                format!("{input}\n{caret}^ {msg}")
            }
            other => other.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
