//! Kernel error taxonomy.
//!
//! Every fallible operation returns `Result<T, Error>`; the CLI maps error
//! classes onto process exit codes (parse/usage, unsupported input class,
//! divergence-class failures, internal).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Grammar-level rejection, with the byte offset of the offending token
    /// and a human-readable description of what was expected.
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    /// Function name is recognized but outside the kernel's function set.
    #[error("parse error at byte {offset}: function `{name}` is not supported")]
    UnsupportedFunction { offset: usize, name: String },

    /// Zero raised to a negative power, and similar exponent violations.
    #[error("invalid power: {0}")]
    Pow(String),

    /// Logs of non-positive constants, gamma-family poles, and other
    /// real-domain violations.
    #[error("domain error: {0}")]
    Domain(String),

    /// Numeric evaluation hit a free symbol with no binding.
    #[error("unbound symbol `{0}` in numeric evaluation")]
    UnboundSymbol(String),

    /// Expression cannot be expanded into the transmonomial basis.
    #[error("unsupported expansion: {0}")]
    UnsupportedExpansion(String),

    /// Growth comparison is undefined between the given monomials.
    #[error("incomparable monomials: {0}")]
    IncomparableMonomials(String),

    /// Symbolic antidifferentiation/integration has no closed form in the
    /// supported function class.
    #[error("no closed-form antiderivative: {0}")]
    NoAntiderivative(String),

    /// Functional inversion failed (dominant term outside the invertible
    /// classes, or exact inversion impossible).
    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// Asymptotic refinement could not reach the requested order.
    #[error("requested expansion order unreachable: {0}")]
    OrderUnreachable(String),

    /// Sequence term outside the supported polynomial/geometric classes.
    #[error("unsupported sequence class: {0}")]
    UnsupportedSequenceClass(String),

    /// sequence_from_numerosity could not solve S(omega) = k.
    #[error("not solvable for a sequence: {0}")]
    NotSolvable(String),

    /// Weight passed to set integration must be purely infinite.
    #[error("not purely infinite: {0}")]
    NotPurelyInfinite(String),

    /// delta_power requires a positive rational exponent.
    #[error("invalid delta power: {0}")]
    InvalidPower(String),

    /// Series body outside the supported families.
    #[error("unsupported series: {0}")]
    UnsupportedSeries(String),

    /// A series value's germ left the ring of purely-infinite-plus-real
    /// surreals.
    #[error("germ is not in J + R: {0}")]
    GermNotInJPlusR(String),

    /// Invariant breach inside the kernel; always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
