use thiserror::Error;

/// Errors raised by the numerical operations and the experiment driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a circle grid needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("circumference must be positive and finite, got {0}")]
    BadCircumference(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("restriction needs an even number of grid points, got {0}")]
    OddGrid(usize),

    #[error("restricted multipliers need an even number of grid points, got {0}")]
    OddGridForRestricted(usize),

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("nu must be positive and finite, got {0}")]
    NonpositiveNu(f64),

    #[error("unstable scheme: 2r = {two_r} but the explicit stencil needs 2r <= 1 (r = 1/(4 h^2 nu))")]
    UnstableParams { two_r: f64 },

    #[error("the +-2 chain needs an odd number of states, got {0}")]
    EvenStateCount(usize),

    #[error("state {state} out of range for a chain with {num_states} states")]
    StateOutOfRange { state: usize, num_states: usize },

    #[error("probability distribution invalid: {0}")]
    NotAProbability(String),

    #[error("kappa = {kappa} exceeds the limit {max}")]
    KappaTooLarge { kappa: u32, max: u32 },

    #[error("initial condition must be nonnegative, value {value} at index {index}")]
    NegativeInitial { index: usize, value: f64 },

    #[error("number of summands must be a positive odd integer, got {0}")]
    EvenSummandCount(u64),

    #[error("lattice point {j} is outside the support [-{n}, {n}]")]
    OutOfSupport { n: u64, j: i64 },

    #[error("diffusion time must be positive, got {0}")]
    NonpositiveTime(f64),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("level {level} out of range for kappa = {kappa}")]
    LevelRange { level: u32, kappa: u32 },

    #[error("base point {j} out of range for eta = {eta}")]
    RangeError { j: usize, eta: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
