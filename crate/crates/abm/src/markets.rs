//! Behavioral rules that do not touch the shared state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::state::{Bank, Firm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirmPlan {
    pub expected_demand: f64,
    pub price: f64,
    pub workforce: usize,
    pub credit_demand: f64,
}

/// Adaptive demand and price rule. A firm that sold out raises its demand
/// estimate and, if it is not dearer than the market, its price; a firm
/// left with inventory does the opposite. Firms without last-step output keep
/// their estimates.
pub fn firm_plan<R: Rng + ?Sized>(
    firm: &Firm,
    mean_price: f64,
    config: &ModelConfig,
    rng: &mut R,
) -> FirmPlan {
    let mut demand = firm.expected_demand;
    let mut price = firm.price;
    if firm.output > 0.0 {
        let nu = config.demand_step_max * rng.gen::<f64>();
        let eta = config.price_step_max * rng.gen::<f64>();
        if firm.sold_out() {
            demand = firm.units_sold * (1.0 + nu);
            if price <= mean_price {
                price *= 1.0 + eta;
            }
        } else {
            demand = (firm.output * (1.0 - nu)).max(firm.units_sold);
            if price >= mean_price {
                price *= 1.0 - eta;
            }
        }
    }
    demand = demand.max(config.productivity);
    let workforce = (demand / config.productivity).ceil() as usize;
    let credit_demand = (config.wage * workforce as f64 - firm.liquidity).max(0.0);
    FirmPlan {
        expected_demand: demand,
        price,
        workforce,
        credit_demand,
    }
}

/// Annual rate `bank` offers `firm`: base rate, the bank's spread and a
/// capped premium linear in the firm's fragility.
pub fn bank_rate(bank: &Bank, firm: &Firm, config: &ModelConfig) -> f64 {
    config.base_rate + bank.spread + risk_premium(firm.fragility(config.fragility_floor), config)
}

pub fn risk_premium(fragility: f64, config: &ModelConfig) -> f64 {
    (config.fragility_premium * fragility).min(config.max_premium)
}

/// Amount a firm asks for after seeing its cheapest offer.
pub fn loan_request(credit_demand: f64, best_rate: f64, config: &ModelConfig) -> f64 {
    if best_rate > config.max_rate {
        config.reduced_loan_fraction * credit_demand
    } else {
        credit_demand
    }
}
