use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element {0} out of range for a poset of {1} elements")]
    OutOfRange(usize, usize),
    #[error("cover relation contains a cycle through element {0}")]
    Cycle(usize),
    #[error("cover pair ({0}, {1}) is implied by other covers")]
    NonReducedCover(usize, usize),
    #[error("elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("poset has no {0}")]
    NoBound(&'static str),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not a slim rectangular diagram: {0}")]
    NotSlimRectangular(String),
    #[error("no 4-cell with bottom address ({0}, {1})")]
    CellNotFound(u32, u32),
    #[error("4-cell at address ({0}, {1}) is not distributive")]
    CellNotDistributive(u32, u32),
    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("argument out of range: {0}")]
    Argument(String),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }

    /// Parse-class errors (DSL or JSON input) as opposed to semantic failures.
    pub fn is_parse_error(&self) -> bool {
        match self {
            Error::Syntax { .. } | Error::Semantic { .. } => true,
            Error::Step { source, .. } => source.is_parse_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
