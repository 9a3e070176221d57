//! Exact number tower: rationals, lazily known unit reals, scalars that mix
//! them, and the activation functions the network dynamics need.

mod ops;
mod rational;
mod scalar;
mod unit_real;
mod value;

pub use ops::{affine_combine, compare_with_precision, saturated_sigma, scalar_times, signal, Affine, Comparison};
pub use rational::{ParseRationalError, Rational};
pub use scalar::{ExactScalar, ScalarKind};
pub use unit_real::{Packing, UnitReal};
pub use value::{Interval, OnExhaustion, PrecisionBudget, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("horizon exceeded: index {index} is past the table horizon {horizon}")]
    HorizonExceeded { index: u64, horizon: u64 },
    #[error("unknown sign: could not decide the sign within the precision budget")]
    UnknownSign,
    #[error("precision budget exhausted")]
    BudgetExhausted,
    #[error("lazy operand needs a precision budget")]
    BudgetRequired,
    #[error("shape mismatch: expected {expected} operands, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("lazy weight multiplies a lazy state; only affine forms in lazy reals are supported")]
    NonlinearLazy,
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u8, base: u32 },
    #[error("unsupported base {0}")]
    UnsupportedBase(u32),
    #[error("digit positions start at 1")]
    DigitIndexZero,
    #[error("precision budget must allow at least one digit")]
    InvalidBudget,
    #[error("value {0} is outside [0, 1)")]
    OutOfUnitInterval(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("integer and rational scalars are computable; label `{0}` not allowed")]
    LabelOnExact(String),
}
