use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("empty word text (write `1` for the identity)")]
    Empty,
    #[error("column {column}: unexpected character {found:?} in word")]
    BadChar { column: usize, found: char },
}

/// Presentation file diagnostics carry a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct PresentationParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("{0}: the empty word has no primitive root")]
    EmptyWord(&'static str),
    #[error("generator {0:?} is not declared in the presentation")]
    UndeclaredGenerator(char),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("factor {index}: {relator} is not a relator or inverse relator")]
    NotARelator { index: usize, relator: String },
    #[error("strategy {strategy} cannot be used with this presentation: {reason}")]
    InvalidStrategy { strategy: &'static str, reason: String },
    #[error("the presentation has no relators, so the kernel is trivial")]
    TrivialKernel,
    #[error("pair {0} is not an element of the fibre product")]
    NotInFibreProduct(String),
    #[error("no exponent K in {k_start}..={k_max} gives a primitive perturbation of {word}")]
    PerturbationExhausted { word: String, k_start: u32, k_max: u32 },
    #[error("certificate rejected: {0}")]
    BadCertificate(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("search budget of {0} states exhausted")]
    BudgetExhausted(u64),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
