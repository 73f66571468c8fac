use thiserror::Error;

/// Errors surfaced by operator construction, scheme runners, certificates
/// and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed operator spec: {0}")]
    MalformedSpec(String),

    #[error("operator is not monotone: {0}")]
    NotMonotone(String),

    #[error("iterative resolvent did not reach tolerance {tol:e} within {budget} iterations (residual {residual:e})")]
    NonConvergedSolve {
        tol: f64,
        budget: usize,
        residual: f64,
    },

    #[error("minimal-section limit did not stabilize within the iteration budget")]
    NonConvergedLimit,

    #[error("operator is not forward-capable at the requested point: {0}")]
    NotForwardCapable(String),

    #[error("solution set is unknown or empty for this operator")]
    UnknownSolutionSet,

    #[error("operator has no objective value: {0}")]
    NoObjective(String),

    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),

    #[error("schedule exhausted: requested step {requested} but only {available} steps are defined")]
    ScheduleExhausted { requested: usize, available: usize },

    #[error("step too large for the Yosida flow: dt*(2/lambda) = {0} exceeds 1")]
    StepTooLarge(f64),

    #[error("resolvent iteration budget exceeded: m would exceed 2^20 for the requested tolerance")]
    BudgetExceeded,

    #[error("perturbation sequence too short: needs {needed} entries, has {available}")]
    PerturbationTooShort { needed: usize, available: usize },

    #[error("query time {0} is outside the sampled range [{1}, {2}]")]
    OutOfRange(f64, f64, f64),

    #[error("trajectories were generated by different operators: {0} vs {1}")]
    OperatorMismatch(String, String),

    #[error("certificate requires a different operator kind: {0}")]
    WrongOperatorKind(String),

    #[error("point is not a solution: resolvent fixed-point residual {0:e} exceeds 1e-8")]
    NotASolution(f64),

    #[error("probe is not in the operator graph: residual {0:e} exceeds 1e-8")]
    InvalidProbe(f64),

    #[error("trajectory has no velocities: {0}")]
    NoVelocities(String),

    #[error("trajectory too short: {has} samples, need at least {needs}")]
    TooShort { has: usize, needs: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("config parse error: {0}")]
    ParseError(String),

    #[error("config validation error: {0}")]
    ValidationError(String),

    #[error("unknown column: {0}")]
    UnknownColumn(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
