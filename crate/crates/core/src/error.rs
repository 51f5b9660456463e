use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live in different quadratic fields (sqrt({0}) vs sqrt({1}))")]
    FieldMismatch(u128, u128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is a perfect square")]
    PerfectSquareRadicand(u128),
    #[error("radicand does not fit in 128 bits")]
    RadicandTooLarge,
    #[error("no fixed point in (0, 1): {0}")]
    NoFixedPoint(String),
    #[error("digit {digit} outside the alphabet 1..={k}")]
    DigitOutOfRange { digit: u8, k: u8 },
    #[error("alphabet bound must satisfy 2 <= k <= 255, got {0}")]
    InvalidAlphabet(u32),
    #[error("empty word where a nonempty one is required")]
    EmptyWord,
    #[error("Q = {q} is too small for K = {k}: the full cylinder already has diameter <= 1/Q; use a larger Q")]
    ResolutionTooSmall { k: u8, q: u64 },
    #[error("insufficient context: {0}")]
    InsufficientContext(String),
    #[error("maximal period length {0} outside the supported range 1..=19")]
    PeriodTooLong(usize),
    #[error("cache: {0}")]
    Cache(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
