use thiserror::Error;

/// Errors raised while building or checking solutions and fields.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{label}: value {x} is outside the domain {domain}")]
    OutOfDomain { label: String, x: f64, domain: String },

    #[error("{label}: non-finite value at x = {x}")]
    NonFinite { label: String, x: f64 },

    #[error("profile is not even: |psi(x) - psi(-x)| = {diff:e} at x = {x}")]
    NotEven { x: f64, diff: f64 },

    #[error("profile slope {slope} at x = {x} is not below 1 in magnitude")]
    SlopeTooLarge { x: f64, slope: f64 },

    #[error("not an involution: |phi(phi(x)) - x| = {err:e} at x = {x}")]
    NotInvolution { x: f64, err: f64 },

    #[error("domain mismatch: phi({x}) = {y} leaves the target interval {target}")]
    DomainMismatch { x: f64, y: f64, target: String },

    #[error("conjugation needs a nonzero scale")]
    ZeroScale,

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("no admissible sample points for {0}")]
    EmptyGrid(String),

    #[error("phi(x) - x does not change sign on {0}")]
    NoSignChange(String),

    #[error("value {y} is outside the range [{lo}, {hi}]")]
    OutOfRange { y: f64, lo: f64, hi: f64 },

    #[error("{label}: monotonicity violated near x = {x}")]
    NonMonotone { label: String, x: f64 },

    #[error("{label}: function jumps over {y} near x = {x}")]
    Discontinuous { label: String, x: f64, y: f64 },

    #[error("bisection did not converge for y = {y} within {iterations} iterations (bracket [{lo}, {hi}])")]
    IterationLimit { y: f64, iterations: usize, lo: f64, hi: f64 },

    #[error("round trip error {err:e} at x = {x} exceeds tolerance")]
    RoundTrip { x: f64, err: f64 },

    #[error("functional equation residual {residual:e} at x = {x} exceeds {tolerance:e}")]
    ResidualTooLarge { x: f64, residual: f64, tolerance: f64 },

    #[error("problem is not admissible: {hypothesis} fails{}", witness.map(|w| format!(" at x = {w}")).unwrap_or_default())]
    NotAdmissible { hypothesis: String, witness: Option<f64> },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("fixture `{fixture}` has no {what}")]
    MissingClosedForm { fixture: String, what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
