use thiserror::Error;

/// Errors shared across the crate. Variant names follow the contracts of the
/// operations that raise them.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Root bracket does not straddle the target value.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// A monotonicity probe of an implicit relation failed on the bracket.
    #[error("non-monotone relation: {0}")]
    NonMonotone(String),

    /// Evaluation at or too close to a pole of a closed-form expression.
    #[error("pole error: {0}")]
    Pole(String),

    /// Parameters violate a case constraint (e.g. the case-i circle).
    #[error("constraint error: {0}")]
    Constraint(String),

    /// Malformed request (axis counts, unknown case, bad flags).
    #[error("spec error: {0}")]
    Spec(String),

    /// No lattice point of a requested grid is inside the solution domain.
    #[error("empty domain: no lattice point is evaluable")]
    EmptyDomain,

    /// Degenerate input to a numeric estimate (too few points, zero residuals).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
