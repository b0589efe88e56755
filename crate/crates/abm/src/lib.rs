//! Macro-financial agent-based model with households, firms and banks on
//! credit, interbank, labor and goods markets, interbank default cascades
//! and three interbank tax regimes, plus a Monte Carlo batch harness.

pub mod cascade;
pub mod config;
pub mod markets;
pub mod metrics;
pub mod sim;
pub mod state;

pub use cascade::{default_set, resolve_cascade, CascadeReport};
pub use config::{ConfigError, ModelConfig, TaxMode};
pub use markets::{bank_rate, firm_plan, loan_request, FirmPlan};
pub use metrics::{
    marginal_scatter, quantile, run_batch, run_one, run_records, transaction_volume, RiskSample, BatchStats, BatchSummary,
    Histogram, RunRecord, ScatterPoint,
};
pub use sim::{Event, FundingPurpose, Simulation, SrtAuditEntry, StepOutcome};
pub use state::{Bank, EconomyState, Firm, FirmLoan, Household};
