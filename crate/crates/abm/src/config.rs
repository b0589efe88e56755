//! Model configuration. Every field has a default so partial JSON files are
//! accepted; rates are annual unless the name says otherwise.

use serde::{Deserialize, Serialize};
use srt_core::ValueWeights;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaxMode {
    #[default]
    None,
    Srt,
    Ftt,
}

impl TaxMode {
    pub const ALL: [TaxMode; 3] = [TaxMode::None, TaxMode::Srt, TaxMode::Ftt];
}

impl std::fmt::Display for TaxMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TaxMode::None => "none",
            TaxMode::Srt => "srt",
            TaxMode::Ftt => "ftt",
        })
    }
}

impl std::str::FromStr for TaxMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(TaxMode::None),
            "srt" => Ok(TaxMode::Srt),
            "ftt" => Ok(TaxMode::Ftt),
            other => Err(format!("unknown tax mode `{other}` (expected none, srt or ftt)")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("need at least {needed} households for {firms} firm owners plus one worker")]
    TooFewHouseholds { needed: usize, firms: usize },
    #[error("state has {found} {what}, config expects {expected}")]
    StateMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub banks: usize,
    pub firms: usize,
    pub households: usize,
    pub steps: u64,

    pub tax_mode: TaxMode,
    pub zeta: f64,
    /// Charge the full expected systemic loss increase (`ζ = 1`).
    pub srt_full: bool,
    /// Flat tax on interbank notional, charged once at origination.
    pub ftt_rate: f64,
    /// Annual default probability used for every bank in tax quotes.
    pub p_def: f64,
    pub discount_rate: f64,
    pub steps_per_year: u32,
    /// Upper bound on the loan life used in tax quotes.
    pub srt_term_cap_years: f64,
    pub value_weights: ValueWeights,

    /// Wage per worker per step.
    pub wage: f64,
    /// Goods produced per worker per step.
    pub productivity: f64,
    /// Share of its account a household spends each step.
    pub consumption_share: f64,
    /// Firms a household compares before buying.
    pub firms_compared: usize,

    /// Banks a firm asks for credit offers.
    pub banks_approached: usize,
    /// Above this rate a firm only asks for `reduced_loan_fraction` of its need.
    pub max_rate: f64,
    pub reduced_loan_fraction: f64,
    /// Upper bound of the uniform price adjustment per step.
    pub price_step_max: f64,
    /// Upper bound of the uniform demand-expectation adjustment per step.
    pub demand_step_max: f64,
    /// Share of liquidity above the cash buffer paid to the firm owner each step.
    pub firm_dividend_share: f64,
    /// Liquidity a firm keeps, in units of its current wage bill, before paying dividends.
    pub firm_cash_buffer: f64,

    /// Share of outstanding principal repaid each step (firm and interbank loans).
    pub repayment_fraction: f64,
    /// A loan whose remaining principal would fall below this is settled in full.
    pub settlement_threshold: f64,
    pub base_rate: f64,
    /// Width of the uniform bank-specific spread on firm loans.
    pub bank_spread: f64,
    /// Slope of the credit risk premium in firm fragility.
    pub fragility_premium: f64,
    /// Cap on the credit risk premium.
    pub max_premium: f64,
    /// Added to firm liquidity when computing fragility = debt / (liquidity + floor).
    pub fragility_floor: f64,
    pub interbank_base_rate: f64,
    /// Width of the uniform lender-specific spread on interbank loans.
    pub interbank_spread: f64,
    /// Slope of the borrower premium in interbank debt per unit of capital.
    pub interbank_premium: f64,
    /// Reserves a bank keeps per unit of deposits before lending.
    pub reserve_ratio: f64,
    /// Capital per unit of assets above which a bank pays out.
    pub capital_target_ratio: f64,
    /// Share of the excess over target capital paid out each step.
    pub bank_payout_share: f64,

    pub initial_account: f64,
    pub initial_bank_capital: f64,
    pub initial_firm_liquidity: f64,
    pub initial_price: f64,
    pub initial_demand: f64,

    /// End a run once its first bank-default cascade is resolved.
    pub stop_on_first_cascade: bool,
    /// Step at which transaction volume and marginal effects are recorded.
    pub volume_step: u64,
    /// DebtRank profile sampling interval; 0 disables sampling.
    pub sample_every: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            banks: 20,
            firms: 100,
            households: 1300,
            steps: 500,

            tax_mode: TaxMode::None,
            zeta: 0.02,
            srt_full: false,
            ftt_rate: 0.002,
            p_def: 0.01,
            discount_rate: 0.0,
            steps_per_year: 20,
            srt_term_cap_years: 1.0,
            value_weights: ValueWeights::Liabilities,

            wage: 1.0,
            productivity: 0.5,
            consumption_share: 0.8,
            firms_compared: 2,

            banks_approached: 2,
            max_rate: 0.1,
            reduced_loan_fraction: 0.8,
            price_step_max: 0.1,
            demand_step_max: 0.1,
            firm_dividend_share: 0.9,
            firm_cash_buffer: 1.0,

            repayment_fraction: 0.05,
            settlement_threshold: 0.05,
            base_rate: 0.02,
            bank_spread: 0.02,
            fragility_premium: 0.01,
            max_premium: 0.1,
            fragility_floor: 1.0,
            interbank_base_rate: 0.04,
            interbank_spread: 0.0,
            interbank_premium: 0.01,
            reserve_ratio: 0.3,
            capital_target_ratio: 0.1,
            bank_payout_share: 0.5,

            initial_account: 0.5,
            initial_bank_capital: 10.0,
            initial_firm_liquidity: 10.0,
            initial_price: 2.0,
            initial_demand: 6.0,

            stop_on_first_cascade: true,
            volume_step: 100,
            sample_every: 50,
        }
    }
}

impl ModelConfig {
    pub fn with_mode(mut self, mode: TaxMode) -> Self {
        self.tax_mode = mode;
        self
    }

    pub fn effective_zeta(&self) -> f64 {
        if self.srt_full {
            1.0
        } else {
            self.zeta
        }
    }

    /// Loan life used in tax quotes, in years.
    pub fn loan_term_years(&self) -> f64 {
        let life_steps = 1.0 / self.repayment_fraction;
        let years = life_steps / f64::from(self.steps_per_year);
        years.min(self.srt_term_cap_years)
    }

    /// Converts an annual rate to a per-step rate.
    pub fn per_step(&self, annual: f64) -> f64 {
        annual / f64::from(self.steps_per_year)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("banks", self.banks),
            ("firms", self.firms),
            ("households", self.households),
            ("firms_compared", self.firms_compared),
            ("banks_approached", self.banks_approached),
            ("steps_per_year", self.steps_per_year as usize),
        ] {
            if v == 0 {
                return Err(ConfigError::NotPositive(name));
            }
        }
        if self.banks < 2 {
            return Err(ConfigError::OutOfRange {
                name: "banks",
                value: self.banks as f64,
                lo: 2.0,
                hi: f64::INFINITY,
            });
        }
        if self.households <= self.firms {
            return Err(ConfigError::TooFewHouseholds {
                needed: self.firms + 1,
                firms: self.firms,
            });
        }
        let unit = [
            ("zeta", self.zeta, f64::MIN_POSITIVE),
            ("p_def", self.p_def, 0.0),
            ("consumption_share", self.consumption_share, 0.0),
            ("reduced_loan_fraction", self.reduced_loan_fraction, 0.0),
            ("repayment_fraction", self.repayment_fraction, f64::MIN_POSITIVE),
            ("price_step_max", self.price_step_max, 0.0),
            ("demand_step_max", self.demand_step_max, 0.0),
            ("firm_dividend_share", self.firm_dividend_share, 0.0),
            ("reserve_ratio", self.reserve_ratio, 0.0),
            ("capital_target_ratio", self.capital_target_ratio, 0.0),
            ("bank_payout_share", self.bank_payout_share, 0.0),
            ("ftt_rate", self.ftt_rate, 0.0),
        ];
        for (name, value, lo) in unit {
            if !(value >= lo && value <= 1.0) {
                return Err(ConfigError::OutOfRange { name, value, lo, hi: 1.0 });
            }
        }
        if self.p_def >= 1.0 {
            return Err(ConfigError::OutOfRange {
                name: "p_def",
                value: self.p_def,
                lo: 0.0,
                hi: 1.0,
            });
        }
        for (name, value) in [
            ("wage", self.wage),
            ("productivity", self.productivity),
            ("srt_term_cap_years", self.srt_term_cap_years),
            ("initial_price", self.initial_price),
            ("initial_demand", self.initial_demand),
        ] {
            if !(value > 0.0) {
                return Err(ConfigError::NotPositive(name));
            }
        }
        for (name, value) in [
            ("discount_rate", self.discount_rate),
            ("base_rate", self.base_rate),
            ("bank_spread", self.bank_spread),
            ("fragility_premium", self.fragility_premium),
            ("max_premium", self.max_premium),
            ("interbank_base_rate", self.interbank_base_rate),
            ("interbank_spread", self.interbank_spread),
            ("interbank_premium", self.interbank_premium),
            ("initial_account", self.initial_account),
            ("initial_bank_capital", self.initial_bank_capital),
            ("initial_firm_liquidity", self.initial_firm_liquidity),
            ("max_rate", self.max_rate),
            ("fragility_floor", self.fragility_floor),
            ("firm_cash_buffer", self.firm_cash_buffer),
            ("settlement_threshold", self.settlement_threshold),
        ] {
            if !(value >= 0.0) {
                return Err(ConfigError::OutOfRange {
                    name,
                    value,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(())
    }
}
