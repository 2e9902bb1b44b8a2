use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of the gamma function at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("gamma-factor pole for spectral parameter index {index}")]
    GammaFactorPole { index: usize },

    #[error("sieve limit {limit} exceeds the configured cap {cap}")]
    SieveCapacity { limit: u64, cap: u64 },

    #[error("sieve table covers n <= {limit}, but {needed} is required")]
    TableTooSmall { limit: u64, needed: u64 },

    #[error("character is not primitive: {0}")]
    NonPrimitive(String),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("root number unknown for this descriptor")]
    UnknownRootNumber,

    #[error("operation needs a self-dual L-function")]
    NotSelfDual,

    #[error("evaluation precision lost at t = {t}: relative imaginary residue {residue:e}")]
    Precision { t: f64, residue: f64 },

    #[error("height {requested} exceeds certified completeness height {complete_to}")]
    Completeness { requested: f64, complete_to: f64 },

    #[error("height {requested} exceeds the configured cap {cap}")]
    HeightCap { requested: f64, cap: f64 },

    #[error("zero search could not certify completeness up to {height}: found {found}, expected {expected}")]
    CompletenessUncertain {
        height: f64,
        found: usize,
        expected: i64,
    },

    #[error("argument tracking failed to resolve the phase near t = {t}")]
    StepExhausted { t: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: ordinate {value} is not larger than the previous one")]
    Ordering { line: usize, value: f64 },

    #[error("ordinate #{index} mismatch: table has {table}, computed {computed}")]
    CrossCheck {
        index: usize,
        table: f64,
        computed: f64,
    },

    #[error("conductor too small: {0}")]
    Threshold(String),

    #[error("requested tolerance {requested:e} is below the attainable budget {attainable:e}")]
    BudgetInfeasible { requested: f64, attainable: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
