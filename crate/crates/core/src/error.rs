use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series exp requires a zero constant term")]
    NonzeroConstantTerm,

    #[error("series log requires constant term 1")]
    ConstantTermNotOne,

    #[error("invalid Sheffer generating pair: {0}")]
    InvalidSheffer(String),

    #[error("order {order} outside the supported range 0..={cap}")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("truncation exceeded: need order {needed}, have {available}")]
    TruncationExceeded { needed: usize, available: usize },

    #[error("functional has {available} values but {needed} are required")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("functional is empty")]
    EmptyFunctional,

    #[error("non-positive diagonal moment at index {0}")]
    NonPositiveMoment(usize),

    #[error("functional is not positive; no representing measure exists")]
    Indefinite,

    #[error("branch ambiguity: 1+lambda = {0} lies on the non-positive real axis")]
    BranchCut(String),

    #[error("missing sample at {0}")]
    MissingSample(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
}

impl Error {
    /// Errors caused by malformed or inconsistent input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Indefinite | Error::BranchCut(_) | Error::DivisionByZero
        )
    }
}
