use thiserror::Error;

use crate::network::{BankId, LoanId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("bank index {index} out of range for {n} banks")]
    IndexOutOfRange { index: BankId, n: usize },
    #[error("self-loan on bank {0}")]
    SelfLoan(BankId),
    #[error("unknown loan id {0}")]
    UnknownLoan(LoanId),
    #[error("loan id {0} already booked")]
    DuplicateLoan(LoanId),
    #[error("loan {id} has invalid principal {principal}")]
    NegativePrincipal { id: LoanId, principal: f64 },
    #[error("entry ({debtor}, {creditor}) would become negative ({value})")]
    NegativeEntry {
        debtor: BankId,
        creditor: BankId,
        value: f64,
    },
    #[error("entry ({debtor}, {creditor}) is {matrix} but ledger sums to {ledger}")]
    Inconsistent {
        debtor: BankId,
        creditor: BankId,
        matrix: f64,
        ledger: f64,
    },
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid bank sheet: {0}")]
    InvalidSheet(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiskError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("loan term must be positive, got {0}")]
    NonPositiveTerm(f64),
    #[error("zeta must lie in (0, 1], got {0}")]
    ZetaOutOfRange(f64),
    #[error("default probability {0} outside [0, 1)")]
    InvalidProbability(f64),
    #[error("discount rate must be nonnegative, got {0}")]
    NegativeDiscountRate(f64),
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}
