//! Systemic-risk analytics on interbank liability networks: DebtRank,
//! expected systemic loss, marginal effects of individual liabilities and
//! loans, and the systemic risk tax quoted for prospective loans.

pub mod debtrank;
pub mod error;
pub mod generate;
pub mod io;
pub mod network;
pub mod systemic_loss;

pub use debtrank::{
    debtrank, debtrank_set, profile_from_impact, propagate, risk_profile, risk_profile_with, EconomicValues,
    ImpactMatrix, Propagation, RiskProfile, ValueWeights,
};
pub use error::{NetworkError, RiskError};
pub use network::{BankId, BankSheet, LiabilityNetwork, LoanId, LoanRecord};
pub use systemic_loss::{
    discount_mass, expected_loss_node, expected_loss_total, hazard_rate, marginal_liability_effect,
    marginal_loan_effect, srt_quote, DefaultModel, LoanChange, RiskDesk, SrtQuote,
};
