use thiserror::Error;

/// Errors raised when an operation's domain preconditions are violated.
///
/// Every variant names the constraint that failed so callers (and the CLI)
/// can surface the exact precondition to the user.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent part must be >= 1 in a plain or star index (got a 0 part)")]
    ZeroPart,

    #[error("harmonic order p must be >= 1 (got 0)")]
    ZeroHarmonicOrder,

    #[error("{name} must be >= 1 (got {got})")]
    PositiveRequired { name: &'static str, got: u64 },

    #[error("inner depth k must be >= 1; k = 0 is only defined through the binomial convention of the recurrence and closed-form routes")]
    InnerDepthZero,

    #[error("zeta(s) requires s >= 2; the series diverges for s <= 1 (got {got})")]
    DivergentZeta { got: i64 },

    #[error("leading exponent must be >= 2 for a convergent (star) multiple zeta value (got {got})")]
    DivergentLeadingExponent { got: u32 },

    #[error("S(k,m;p) requires p >= m+1 for convergence (got p = {p}, m = {m})")]
    EulerSumDivergent { p: u32, m: u32 },

    #[error("the closed form of S(k,r+1;p) requires p >= r+2 (got p = {p}, r = {r})")]
    ClosedFormRange { p: u32, r: u32 },

    #[error("U- and V-type series require p >= 2 (got {got})")]
    SeriesExponentTooSmall { got: u32 },

    #[error("Bell polynomial of order {order} needs at least {order} arguments (got {got})")]
    BellArgumentsTooShort { order: usize, got: usize },

    #[error("partial-fraction shifts must be pairwise distinct (shift {shift} repeats)")]
    RepeatedShift { shift: u64 },

    #[error("partial-fraction decomposition needs at least one shift")]
    EmptyShifts,

    #[error("the power/pole split of 1/(n^p (n+r)) requires r >= 1")]
    ZeroSplitShift,

    #[error("bivariate series weight must be >= 2 (got {got})")]
    WeightTooSmall { got: u32 },

    #[error("series exponential requires a zero constant term")]
    NonzeroConstantTerm,

    #[error("grid limit {name} = {got} outside the documented range {min}..={max}")]
    GridLimit {
        name: &'static str,
        got: u64,
        min: u64,
        max: u64,
    },

    #[error("margin must be a positive number (got {got})")]
    InvalidMargin { got: String },

    #[error("unknown suite name {got:?}; expected one of exact, numeric, all")]
    UnknownSuite { got: String },

    #[error("harness self-test failed: identity {id} produced no case")]
    HarnessIncomplete { id: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
