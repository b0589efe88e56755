//! Expected systemic loss, marginal systemic effects of liabilities and
//! loans, and the systemic risk tax quoted for a prospective loan.
//!
//! Every comparison between a network and a modified copy of it is made
//! with the economic values `v`, total value `V` and capitals of the base
//! network held fixed, so a difference reflects a change in propagation only.

use serde::{Deserialize, Serialize};

use crate::debtrank::{
    profile_from_impact, risk_profile_with, EconomicValues, ImpactMatrix, RiskProfile, ValueWeights,
};
use crate::error::{NetworkError, RiskError};
use crate::network::{BankId, LiabilityNetwork, LoanId, LoanRecord};

/// Constant-hazard default model with continuous discounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefaultModel {
    /// Annual default probabilities.
    pub p_def: Vec<f64>,
    /// `h_i = −ln(1 − P_i)`, per year.
    pub hazard: Vec<f64>,
    /// Continuously compounded, per year.
    pub discount_rate: f64,
    pub steps_per_year: u32,
}

impl DefaultModel {
    pub fn new(p_def: Vec<f64>, discount_rate: f64, steps_per_year: u32) -> Result<Self, RiskError> {
        if let Some(&bad) = p_def.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(RiskError::InvalidProbability(bad));
        }
        if !(discount_rate >= 0.0) {
            return Err(RiskError::NegativeDiscountRate(discount_rate));
        }
        let hazard = p_def.iter().map(|&p| hazard_rate(p)).collect();
        Ok(Self {
            p_def,
            hazard,
            discount_rate,
            steps_per_year: steps_per_year.max(1),
        })
    }

    pub fn uniform(n: usize, p_def: f64) -> Result<Self, RiskError> {
        Self::new(vec![p_def; n], 0.0, 20)
    }

    pub fn with_discount_rate(mut self, r: f64) -> Result<Self, RiskError> {
        if !(r >= 0.0) {
            return Err(RiskError::NegativeDiscountRate(r));
        }
        self.discount_rate = r;
        Ok(self)
    }

    pub fn n_banks(&self) -> usize {
        self.p_def.len()
    }

    /// Discount-weighted default mass of bank `i` over `[0, term]` years.
    pub fn discount_mass(&self, i: BankId, term: f64) -> f64 {
        discount_mass(self.hazard[i], self.discount_rate, term)
    }

    pub fn steps_to_years(&self, steps: f64) -> f64 {
        steps / f64::from(self.steps_per_year)
    }
}

/// Constant hazard rate matching an annual default probability.
pub fn hazard_rate(p_def: f64) -> f64 {
    -(-p_def).ln_1p()
}

/// `∫_0^T e^{−rt} h e^{−ht} dt = h/(h+r) · (1 − e^{−(h+r)T})`.
pub fn discount_mass(hazard: f64, rate: f64, term: f64) -> f64 {
    let k = hazard + rate;
    if hazard <= 0.0 || term <= 0.0 {
        return 0.0;
    }
    -hazard / k * (-k * term).exp_m1()
}

/// `EL_i = P_i · V · R_i`, currency per year.
pub fn expected_loss_node(profile: &RiskProfile, model: &DefaultModel, i: BankId) -> f64 {
    model.p_def[i] * profile.values.total * profile.r[i]
}

/// `Σ_i EL_i`.
pub fn expected_loss_total(profile: &RiskProfile, model: &DefaultModel) -> f64 {
    (0..profile.n_banks())
        .map(|i| expected_loss_node(profile, model, i))
        .sum()
}

/// Hypothetical change to a single loan.
#[derive(Debug, Clone, Copy)]
pub enum LoanChange<'a> {
    Remove(LoanId),
    Add(&'a LoanRecord),
}

/// A frozen view of one network: capitals, value weights, default model and
/// the base risk profile. Marginal effects and quotes are computed against it.
#[derive(Debug, Clone)]
pub struct RiskDesk<'a> {
    net: &'a LiabilityNetwork,
    capital: Vec<f64>,
    values: EconomicValues,
    model: &'a DefaultModel,
    impact: ImpactMatrix,
    base: RiskProfile,
}

impl<'a> RiskDesk<'a> {
    pub fn new(
        net: &'a LiabilityNetwork,
        capital: &[f64],
        model: &'a DefaultModel,
        weights: ValueWeights,
    ) -> Result<Self, RiskError> {
        let values = EconomicValues::from_network(net, weights);
        Self::with_values(net, capital, model, values)
    }

    /// Desk over `net` using weights frozen elsewhere, e.g. those of a
    /// network this one was derived from.
    pub fn with_values(
        net: &'a LiabilityNetwork,
        capital: &[f64],
        model: &'a DefaultModel,
        values: EconomicValues,
    ) -> Result<Self, RiskError> {
        let n = net.n_banks();
        for (what, len) in [
            ("capital", capital.len()),
            ("default model", model.n_banks()),
            ("economic values", values.v.len()),
        ] {
            if len != n {
                return Err(RiskError::LengthMismatch {
                    what,
                    expected: n,
                    found: len,
                });
            }
        }
        let impact = ImpactMatrix::new(net, capital);
        let base = profile_from_impact(&impact, &values);
        Ok(Self {
            net,
            capital: capital.to_vec(),
            values,
            model,
            impact,
            base,
        })
    }

    pub fn network(&self) -> &LiabilityNetwork {
        self.net
    }

    pub fn base_profile(&self) -> &RiskProfile {
        &self.base
    }

    pub fn values(&self) -> &EconomicValues {
        &self.values
    }

    pub fn capital(&self) -> &[f64] {
        &self.capital
    }

    pub fn expected_loss_total(&self) -> f64 {
        expected_loss_total(&self.base, self.model)
    }

    /// Profile of `other` with this desk's frozen weights and capitals.
    pub fn profile_of(&self, other: &LiabilityNetwork) -> RiskProfile {
        risk_profile_with(other, &self.capital, &self.values)
    }

    /// `Σ_i P_i V (R_i(other) − R_i(base))`.
    pub fn loss_change(&self, other: &LiabilityNetwork) -> f64 {
        self.loss_change_of(&self.profile_of(other))
    }

    fn loss_change_of(&self, after: &RiskProfile) -> f64 {
        let v_total = self.values.total;
        (0..self.base.n_banks())
            .map(|i| self.model.p_def[i] * v_total * (after.r[i] - self.base.r[i]))
            .sum()
    }

    /// Marginal effect of liability `L_mn`. Negative means the liability
    /// adds to total systemic risk.
    pub fn marginal_liability_effect(&self, m: BankId, n: BankId) -> Result<f64, RiskError> {
        self.net.check_pair(m, n)?;
        if self.net.liability(m, n) == 0.0 {
            return Ok(0.0);
        }
        // only W_mn changes, so edit the impact matrix instead of the ledger
        let impact = self.impact.with_exposure(m, n, 0.0, self.capital[n]);
        Ok(self.loss_change_of(&profile_from_impact(&impact, &self.values)))
    }

    pub fn marginal_loan_effect(&self, change: LoanChange<'_>) -> Result<f64, RiskError> {
        let other = match change {
            LoanChange::Remove(id) => self.net.without_loan(id)?,
            LoanChange::Add(loan) => self.net.with_loan(loan.clone())?,
        };
        Ok(self.loss_change(&other))
    }

    /// Tax quoted for booking `prospective` with lifetime `term_years`.
    pub fn srt_quote(
        &self,
        prospective: &LoanRecord,
        term_years: f64,
        zeta: f64,
    ) -> Result<SrtQuote, RiskError> {
        if !(term_years > 0.0) {
            return Err(RiskError::NonPositiveTerm(term_years));
        }
        if !(zeta > 0.0 && zeta <= 1.0) {
            return Err(RiskError::ZetaOutOfRange(zeta));
        }
        let (d, c) = (prospective.debtor, prospective.creditor);
        self.net.check_pair(d, c)?;
        if !(prospective.principal >= 0.0) || !prospective.principal.is_finite() {
            return Err(NetworkError::NegativePrincipal {
                id: prospective.id,
                principal: prospective.principal,
            }
            .into());
        }
        // the booked loan would carry the largest id, so the ledger sum of
        // the edge is exactly the current entry plus the new principal
        let exposure = self.net.liability(d, c) + prospective.principal;
        let impact = self.impact.with_exposure(d, c, exposure, self.capital[c]);
        let after = profile_from_impact(&impact, &self.values);
        let delta_r: Vec<f64> = after
            .r
            .iter()
            .zip(&self.base.r)
            .map(|(a, b)| a - b)
            .collect();
        let v_total = self.values.total;
        let discounted: f64 = delta_r
            .iter()
            .enumerate()
            .map(|(i, dr)| dr * v_total * self.model.discount_mass(i, term_years))
            .sum();
        Ok(SrtQuote {
            debtor: prospective.debtor,
            creditor: prospective.creditor,
            principal: prospective.principal,
            term: term_years,
            delta_r,
            tax: zeta * discounted.max(0.0),
            zeta,
        })
    }
}

/// Systemic risk tax quoted for one prospective loan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrtQuote {
    pub debtor: BankId,
    pub creditor: BankId,
    pub principal: f64,
    /// Years.
    pub term: f64,
    /// `R_i(L^(+k)) − R_i(L)` per bank.
    pub delta_r: Vec<f64>,
    pub tax: f64,
    pub zeta: f64,
}

impl SrtQuote {
    /// Tax per unit of principal per year of term.
    pub fn annual_rate(&self) -> f64 {
        if self.principal > 0.0 {
            self.tax / (self.principal * self.term)
        } else {
            0.0
        }
    }
}

/// Marginal effect of `L_mn` with weights frozen at `net`.
pub fn marginal_liability_effect(
    net: &LiabilityNetwork,
    capital: &[f64],
    model: &DefaultModel,
    m: BankId,
    n: BankId,
) -> Result<f64, RiskError> {
    RiskDesk::new(net, capital, model, ValueWeights::Liabilities)?.marginal_liability_effect(m, n)
}

/// Marginal effect of removing or adding one loan, weights frozen at `net`.
pub fn marginal_loan_effect(
    net: &LiabilityNetwork,
    capital: &[f64],
    model: &DefaultModel,
    change: LoanChange<'_>,
) -> Result<f64, RiskError> {
    RiskDesk::new(net, capital, model, ValueWeights::Liabilities)?.marginal_loan_effect(change)
}

/// One-shot SRT quote against `net`.
pub fn srt_quote(
    net: &LiabilityNetwork,
    capital: &[f64],
    model: &DefaultModel,
    prospective: &LoanRecord,
    term_years: f64,
    zeta: f64,
) -> Result<SrtQuote, RiskError> {
    RiskDesk::new(net, capital, model, ValueWeights::Liabilities)?.srt_quote(
        prospective,
        term_years,
        zeta,
    )
}
