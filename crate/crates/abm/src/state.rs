//! Agents and balance sheets.
//!
//! Cash exists as bank reserves, firm liquidity and the bailout fund.
//! Household accounts are deposits, i.e. claims on the reserves of the
//! household's bank, so they are not counted again in the cash total.
//! Bank capital is reserves + firm loans + interbank claims − deposits −
//! interbank debts.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use srt_core::{BankSheet, LiabilityNetwork, LoanId};

use crate::config::ModelConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Household {
    pub account: f64,
    pub bank: usize,
    pub employer: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirmLoan {
    pub id: u64,
    pub bank: usize,
    pub principal: f64,
    pub original: f64,
    /// Annual.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Firm {
    pub owner: usize,
    pub liquidity: f64,
    pub price: f64,
    pub expected_demand: f64,
    pub workers: Vec<usize>,
    pub loans: Vec<FirmLoan>,
    pub output: f64,
    pub inventory: f64,
    pub units_sold: f64,
    pub revenue: f64,
    pub wage_bill: f64,
    pub interest_paid: f64,
}

impl Firm {
    pub fn debt(&self) -> f64 {
        self.loans.iter().map(|l| l.principal).sum()
    }

    /// Debt per unit of liquidity, with `floor` added to the denominator.
    pub fn fragility(&self, floor: f64) -> f64 {
        let denom = self.liquidity.max(0.0) + floor;
        if denom > 0.0 {
            self.debt() / denom
        } else if self.debt() > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    pub fn sold_out(&self) -> bool {
        self.output > 0.0 && self.inventory <= 1e-12 * self.output
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bank {
    pub reserves: f64,
    pub deposits: f64,
    pub firm_loans: f64,
    /// Uniform bank-specific spread on firm loans, redrawn every step.
    pub spread: f64,
    /// Uniform lender-specific spread on interbank loans, redrawn every step.
    pub interbank_spread: f64,
    /// Surcharge rate paid on this bank's most recent interbank borrowing.
    pub surcharge_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EconomyState {
    pub t: u64,
    pub households: Vec<Household>,
    pub firms: Vec<Firm>,
    pub banks: Vec<Bank>,
    pub interbank: LiabilityNetwork,
    pub bailout_fund: f64,
    pub next_firm_loan_id: u64,
}

impl EconomyState {
    /// Symmetric start: equal accounts assigned to uniformly random banks,
    /// equal bank capital, debt-free firms at a common price.
    pub fn initial<R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> Self {
        let mut banks: Vec<Bank> = (0..config.banks)
            .map(|_| Bank {
                reserves: config.initial_bank_capital,
                deposits: 0.0,
                firm_loans: 0.0,
                spread: 0.0,
                interbank_spread: 0.0,
                surcharge_estimate: 0.0,
            })
            .collect();
        let households: Vec<Household> = (0..config.households)
            .map(|_| {
                let bank = rng.gen_range(0..config.banks);
                banks[bank].deposits += config.initial_account;
                banks[bank].reserves += config.initial_account;
                Household {
                    account: config.initial_account,
                    bank,
                    employer: None,
                }
            })
            .collect();
        let firms = (0..config.firms)
            .map(|i| Firm {
                owner: i,
                liquidity: config.initial_firm_liquidity,
                price: config.initial_price,
                expected_demand: config.initial_demand,
                workers: Vec::new(),
                loans: Vec::new(),
                output: 0.0,
                inventory: 0.0,
                units_sold: 0.0,
                revenue: 0.0,
                wage_bill: 0.0,
                interest_paid: 0.0,
            })
            .collect();
        Self {
            t: 0,
            households,
            firms,
            banks,
            interbank: LiabilityNetwork::new(config.banks),
            bailout_fund: 0.0,
            next_firm_loan_id: 0,
        }
    }

    /// Reserves + firm liquidity + bailout fund.
    pub fn total_cash(&self) -> f64 {
        let reserves: f64 = self.banks.iter().map(|b| b.reserves).sum();
        let firms: f64 = self.firms.iter().map(|f| f.liquidity).sum();
        reserves + firms + self.bailout_fund
    }

    pub fn capital(&self, b: usize) -> f64 {
        let bank = &self.banks[b];
        bank.reserves + bank.firm_loans + self.interbank.total_claims(b)
            - bank.deposits
            - self.interbank.total_liabilities(b)
    }

    pub fn capitals(&self) -> Vec<f64> {
        (0..self.banks.len()).map(|b| self.capital(b)).collect()
    }

    pub fn total_assets(&self, b: usize) -> f64 {
        let bank = &self.banks[b];
        bank.reserves.max(0.0) + bank.firm_loans + self.interbank.total_claims(b)
    }

    /// Reserves above the requirement, available for new lending.
    pub fn excess_liquidity(&self, b: usize, reserve_ratio: f64) -> f64 {
        let bank = &self.banks[b];
        bank.reserves - reserve_ratio * bank.deposits
    }

    pub fn sheet(&self, b: usize, p_def: f64) -> BankSheet {
        let bank = &self.banks[b];
        let claims = self.interbank.total_claims(b);
        let debts = self.interbank.total_liabilities(b);
        BankSheet {
            capital: self.capital(b),
            liquidity: bank.reserves,
            total_assets: Some(self.total_assets(b)),
            total_liabilities: Some(bank.deposits + debts),
            due_from_banks: Some(claims),
            due_to_banks: Some(debts),
            liquid_assets: Some(bank.reserves),
            default_probability: p_def,
        }
    }

    pub fn mean_price(&self) -> f64 {
        self.firms.iter().map(|f| f.price).sum::<f64>() / self.firms.len() as f64
    }

    pub fn mean_expected_demand(&self) -> f64 {
        self.firms.iter().map(|f| f.expected_demand).sum::<f64>() / self.firms.len() as f64
    }

    pub fn employment(&self) -> usize {
        self.firms.iter().map(|f| f.workers.len()).sum()
    }

    /// Moves `amount` from a household account to firm liquidity.
    pub(crate) fn household_pays_firm(&mut self, h: usize, firm: usize, amount: f64) {
        let bank = self.households[h].bank;
        self.households[h].account -= amount;
        self.banks[bank].deposits -= amount;
        self.banks[bank].reserves -= amount;
        self.firms[firm].liquidity += amount;
    }

    /// Moves `amount` from firm liquidity to a household account.
    pub(crate) fn firm_pays_household(&mut self, firm: usize, h: usize, amount: f64) {
        let bank = self.households[h].bank;
        self.firms[firm].liquidity -= amount;
        self.households[h].account += amount;
        self.banks[bank].deposits += amount;
        self.banks[bank].reserves += amount;
    }

    /// Moves `amount` from a household account to another bank's reserves.
    pub(crate) fn household_pays_bank(&mut self, h: usize, bank: usize, amount: f64) {
        let own = self.households[h].bank;
        self.households[h].account -= amount;
        self.banks[own].deposits -= amount;
        self.banks[own].reserves -= amount;
        self.banks[bank].reserves += amount;
    }

    /// Unemployed non-owner households in random order.
    pub(crate) fn unemployed<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut owner = vec![false; self.households.len()];
        for f in &self.firms {
            owner[f.owner] = true;
        }
        let mut pool: Vec<usize> = (0..self.households.len())
            .filter(|&h| !owner[h] && self.households[h].employer.is_none())
            .collect();
        pool.shuffle(rng);
        pool
    }

    pub fn interbank_loan_ids(&self) -> Vec<LoanId> {
        self.interbank.loans().map(|l| l.id).collect()
    }
}
