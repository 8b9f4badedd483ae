use crate::roots::RootLabel;
use crate::skel::Violation;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("inadmissible root system spec: {0}")]
    InadmissibleSpec(String),

    #[error("unknown simple root label {0}")]
    UnknownLabel(String),

    #[error("invalid skeleton: {}", format_violations(.0))]
    InvalidSkeleton(Vec<Violation>),

    #[error("skeleton is not factorial (S = {})", format_labels(.0))]
    NotFactorial(Vec<RootLabel>),

    #[error("skeleton is not complete")]
    NotComplete,

    #[error("axiom violation: {0}")]
    AxiomViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn format_labels(labels: &[RootLabel]) -> String {
    let inner = labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{inner}}}")
}
