use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate panel: nodes {0} and {1} coincide")]
    DegeneratePanel(usize, usize),

    #[error("divided difference of order {order} needs at least {} nodes, got {available}", order + 1)]
    OrderOutOfRange { order: usize, available: usize },

    #[error("panel is not equally spaced at node {index}")]
    UnequalSpacing { index: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("first-derivative proxy vanishes; estimate unreliable")]
    UnreliableEstimate,

    #[error("step {step} is not commensurate with the interval for {n}-point panels")]
    IncommensurateStep { step: String, n: usize },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("domain error in `{function}` at byte {offset}: argument {argument}")]
    Domain {
        function: &'static str,
        offset: usize,
        argument: String,
    },

    #[error("division by a Taylor jet with vanishing constant term at byte {offset}")]
    JetDivisionByZero { offset: usize },

    #[error("malformed weight table: {0}")]
    WeightFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
