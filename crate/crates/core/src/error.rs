use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic {0} is even; only odd fields are supported")]
    EvenCharacteristic(u64),

    #[error("field of order {p}^{k} exceeds the supported bound")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("rejection sampling stalled after {0} trials")]
    SamplingStalled(usize),

    #[error("census of {needed} polynomials exceeds the budget of {budget}")]
    CensusBudgetExceeded { needed: u128, budget: u128 },

    #[error("histogram cell overflowed")]
    HistogramOverflow,

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("model is for q={model} but data is for q={data}")]
    ModelMismatch { model: u64, data: u64 },

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
