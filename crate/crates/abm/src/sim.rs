//! One simulation run: the market sequence of a step and its events.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use srt_core::{DefaultModel, LiabilityNetwork, LoanRecord, RiskDesk};

use crate::cascade::{resolve_cascade, CascadeReport};
use crate::config::{ConfigError, ModelConfig, TaxMode};
use crate::markets::{bank_rate, firm_plan, loan_request, FirmPlan};
use crate::state::{EconomyState, FirmLoan};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FundingPurpose {
    /// Funds a firm loan the bank cannot cover from its own reserves.
    Refinancing,
    /// Covers deposit withdrawals and interbank debt service.
    Liquidity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    FirmLoan {
        firm: usize,
        bank: usize,
        amount: f64,
        rate: f64,
    },
    CreditDenied {
        firm: usize,
        bank: usize,
        amount: f64,
    },
    InterbankLoan {
        id: u64,
        borrower: usize,
        lender: usize,
        amount: f64,
        rate: f64,
        tax: f64,
        purpose: FundingPurpose,
    },
    FirmBankruptcy {
        firm: usize,
        debt: f64,
        recovered: f64,
    },
    BankDefault {
        bank: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub t: u64,
    pub events: Vec<Event>,
    /// Principal of interbank loans originated this step.
    pub interbank_volume: f64,
    pub taxes: f64,
    pub cascade: Option<CascadeReport>,
    pub degenerate: bool,
    /// Banks whose reserves stayed negative after the liquidity pass.
    pub overdrafts: usize,
}

/// Everything needed to recompute one SRT charge independently.
#[derive(Debug, Clone)]
pub struct SrtAuditEntry {
    pub network: LiabilityNetwork,
    pub capital: Vec<f64>,
    pub loan: LoanRecord,
    pub term_years: f64,
    pub zeta: f64,
    pub tax: f64,
}

struct Offer {
    lender: usize,
    amount: f64,
    rate: f64,
    surcharge: f64,
    tax: f64,
}

pub struct Simulation {
    config: ModelConfig,
    state: EconomyState,
    rng: ChaCha8Rng,
    model: DefaultModel,
    term_years: f64,
    customers: Vec<Vec<usize>>,
    audit: Option<Vec<SrtAuditEntry>>,
    srt_quotes: u64,
    cascade: Option<CascadeReport>,
    degenerate: bool,
    finished: bool,
}

impl Simulation {
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = EconomyState::initial(&config, &mut rng);
        Self::build(config, state, rng)
    }

    /// Starts from a prepared state instead of the symmetric one.
    pub fn from_state(config: ModelConfig, state: EconomyState, seed: u64) -> Result<Self, ConfigError> {
        config.validate()?;
        for (what, expected, found) in [
            ("banks", config.banks, state.banks.len()),
            ("firms", config.firms, state.firms.len()),
            ("households", config.households, state.households.len()),
            ("interbank network", config.banks, state.interbank.n_banks()),
        ] {
            if expected != found {
                return Err(ConfigError::StateMismatch { what, expected, found });
            }
        }
        if let Some(h) = state.households.iter().position(|h| h.bank >= config.banks) {
            return Err(ConfigError::InvalidState(format!("household {h} banks at a missing bank")));
        }
        if let Some(f) = state.firms.iter().position(|f| f.owner >= config.households) {
            return Err(ConfigError::InvalidState(format!("firm {f} has a missing owner")));
        }
        Self::build(config, state, ChaCha8Rng::seed_from_u64(seed))
    }

    fn build(config: ModelConfig, state: EconomyState, rng: ChaCha8Rng) -> Result<Self, ConfigError> {
        let model = DefaultModel::new(
            vec![config.p_def; config.banks],
            config.discount_rate,
            config.steps_per_year,
        )
        .map_err(|_| ConfigError::OutOfRange {
            name: "p_def",
            value: config.p_def,
            lo: 0.0,
            hi: 1.0,
        })?;
        let mut customers = vec![Vec::new(); config.banks];
        for (h, household) in state.households.iter().enumerate() {
            customers[household.bank].push(h);
        }
        Ok(Self {
            term_years: config.loan_term_years(),
            config,
            state,
            rng,
            model,
            customers,
            audit: None,
            srt_quotes: 0,
            cascade: None,
            degenerate: false,
            finished: false,
        })
    }

    /// Keeps a pre-trade snapshot of every SRT charge.
    pub fn with_audit(mut self) -> Self {
        self.audit = Some(Vec::new());
        self
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn state(&self) -> &EconomyState {
        &self.state
    }

    pub fn default_model(&self) -> &DefaultModel {
        &self.model
    }

    pub fn audit_log(&self) -> &[SrtAuditEntry] {
        self.audit.as_deref().unwrap_or(&[])
    }

    /// Number of SRT quotes requested so far.
    pub fn srt_quote_count(&self) -> u64 {
        self.srt_quotes
    }

    pub fn cascade(&self) -> Option<&CascadeReport> {
        self.cascade.as_ref()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn step(&mut self) -> StepOutcome {
        self.state.t += 1;
        let mut out = StepOutcome {
            t: self.state.t,
            events: Vec::new(),
            interbank_volume: 0.0,
            taxes: 0.0,
            cascade: None,
            degenerate: false,
            overdrafts: 0,
        };
        self.draw_spreads();
        let plans = self.plan_firms();
        self.credit_market(&plans, &mut out);
        self.labor_market(&plans);
        self.goods_market();
        self.liquidity_pass(&mut out);
        let bankrupt = self.repayments();
        self.pay_firm_dividends(&bankrupt);
        self.resolve_firm_bankruptcies(&bankrupt, &mut out);
        self.resolve_bank_cascade(&mut out);
        self.bank_payouts();

        if self.state.employment() == 0 || bankrupt.len() == self.state.firms.len() {
            out.degenerate = true;
            self.degenerate = true;
        }
        if out.degenerate
            || self.state.t >= self.config.steps
            || (out.cascade.is_some() && self.config.stop_on_first_cascade)
        {
            self.finished = true;
        }
        out
    }

    fn draw_spreads(&mut self) {
        for bank in &mut self.state.banks {
            bank.spread = self.config.bank_spread * self.rng.gen::<f64>();
            bank.interbank_spread = self.config.interbank_spread * self.rng.gen::<f64>();
        }
    }

    fn plan_firms(&mut self) -> Vec<FirmPlan> {
        let mean_price = self.state.mean_price();
        let plans: Vec<FirmPlan> = self
            .state
            .firms
            .iter()
            .map(|f| firm_plan(f, mean_price, &self.config, &mut self.rng))
            .collect();
        for (firm, plan) in self.state.firms.iter_mut().zip(&plans) {
            firm.expected_demand = plan.expected_demand;
            firm.price = plan.price;
        }
        plans
    }

    fn excess(&self, b: usize) -> f64 {
        self.state.excess_liquidity(b, self.config.reserve_ratio)
    }

    /// Annual premium a lender adds for `borrower`'s interbank leverage.
    fn borrower_premium(&self, borrower: usize) -> f64 {
        let debts = self.state.interbank.total_liabilities(borrower);
        if debts <= 0.0 {
            return 0.0;
        }
        let cushion = self.state.capital(borrower).max(0.0) + self.config.fragility_floor;
        (self.config.interbank_premium * debts / cushion).min(self.config.max_premium)
    }

    fn expected_surcharge(&self, b: usize) -> f64 {
        match self.config.tax_mode {
            TaxMode::None => 0.0,
            TaxMode::Ftt => self.config.ftt_rate / self.term_years,
            TaxMode::Srt => self.state.banks[b].surcharge_estimate,
        }
    }

    /// Refinancing cost per unit of a loan of `amount` granted by `b`.
    fn expected_refinancing(&self, b: usize, amount: f64) -> f64 {
        let own = self.excess(b).max(0.0);
        if own >= amount {
            return 0.0;
        }
        let share = (amount - own) / amount;
        let rate = self.config.interbank_base_rate
            + 0.5 * self.config.interbank_spread
            + self.borrower_premium(b)
            + self.expected_surcharge(b);
        share * rate
    }

    fn pick<T, F: Fn(&T) -> f64>(&mut self, items: &[T], key: F) -> Option<usize> {
        let best = items.iter().map(&key).fold(f64::INFINITY, f64::min);
        let ties: Vec<usize> = (0..items.len()).filter(|&k| key(&items[k]) == best).collect();
        match ties.len() {
            0 => None,
            1 => Some(ties[0]),
            n => Some(ties[self.rng.gen_range(0..n)]),
        }
    }

    fn credit_market(&mut self, plans: &[FirmPlan], out: &mut StepOutcome) {
        let mut seekers: Vec<usize> = (0..plans.len())
            .filter(|&f| plans[f].credit_demand > 0.0)
            .collect();
        seekers.shuffle(&mut self.rng);
        let n_banks = self.state.banks.len();
        for f in seekers {
            let demand = plans[f].credit_demand;
            let asked = index::sample(
                &mut self.rng,
                n_banks,
                self.config.banks_approached.min(n_banks),
            );
            let offers: Vec<(usize, f64, f64)> = asked
                .iter()
                .map(|b| {
                    let rate = bank_rate(&self.state.banks[b], &self.state.firms[f], &self.config);
                    (b, rate, rate + self.expected_refinancing(b, demand))
                })
                .collect();
            let Some(k) = self.pick(&offers, |o| o.2) else {
                continue;
            };
            let (bank, rate, quoted) = offers[k];
            let request = loan_request(demand, quoted, &self.config);
            match self.fund(bank, request, out) {
                Some(pass_through) => {
                    let rate = rate + pass_through;
                    self.book_firm_loan(f, bank, request, rate);
                    out.events.push(Event::FirmLoan {
                        firm: f,
                        bank,
                        amount: request,
                        rate,
                    });
                }
                None => out.events.push(Event::CreditDenied {
                    firm: f,
                    bank,
                    amount: request,
                }),
            }
        }
    }

    /// Makes `amount` available at bank `b`, borrowing the shortfall on the
    /// interbank market. Returns the refinancing rate per unit of `amount`,
    /// or `None` if the loan cannot be paid out.
    fn fund(&mut self, b: usize, amount: f64, out: &mut StepOutcome) -> Option<f64> {
        let own = self.excess(b).max(0.0);
        if own >= amount {
            return Some(0.0);
        }
        let shortfall = amount - own;
        let supply: f64 = (0..self.state.banks.len())
            .filter(|&j| j != b)
            .map(|j| self.excess(j).max(0.0))
            .sum();
        if supply < shortfall {
            return None;
        }
        let (filled, cost) = self.interbank_borrow(b, shortfall, FundingPurpose::Refinancing, out);
        if filled + EPS < shortfall {
            return None;
        }
        Some(cost / amount)
    }

    fn book_firm_loan(&mut self, f: usize, bank: usize, amount: f64, rate: f64) {
        let id = self.state.next_firm_loan_id;
        self.state.next_firm_loan_id += 1;
        let b = &mut self.state.banks[bank];
        b.reserves -= amount;
        b.firm_loans += amount;
        let firm = &mut self.state.firms[f];
        firm.liquidity += amount;
        firm.loans.push(FirmLoan {
            id,
            bank,
            principal: amount,
            original: amount,
            rate,
        });
    }

    fn collect_offers(&mut self, borrower: usize, remaining: f64) -> Vec<Offer> {
        let premium = self.borrower_premium(borrower);
        let lenders: Vec<(usize, f64)> = (0..self.state.banks.len())
            .filter(|&j| j != borrower)
            .map(|j| (j, self.excess(j)))
            .filter(|&(_, supply)| supply > EPS)
            .collect();
        if lenders.is_empty() {
            return Vec::new();
        }
        let base = |j: usize| {
            self.config.interbank_base_rate + self.state.banks[j].interbank_spread + premium
        };
        match self.config.tax_mode {
            TaxMode::None => lenders
                .iter()
                .map(|&(j, supply)| Offer {
                    lender: j,
                    amount: remaining.min(supply),
                    rate: base(j),
                    surcharge: 0.0,
                    tax: 0.0,
                })
                .collect(),
            TaxMode::Ftt => lenders
                .iter()
                .map(|&(j, supply)| {
                    let amount = remaining.min(supply);
                    Offer {
                        lender: j,
                        amount,
                        rate: base(j),
                        surcharge: self.config.ftt_rate / self.term_years,
                        tax: self.config.ftt_rate * amount,
                    }
                })
                .collect(),
            TaxMode::Srt => {
                let capital = self.state.capitals();
                let desk = RiskDesk::new(
                    &self.state.interbank,
                    &capital,
                    &self.model,
                    self.config.value_weights,
                )
                .expect("state vectors match the bank count");
                let zeta = self.config.effective_zeta();
                let offers: Vec<Offer> = lenders
                    .iter()
                    .map(|&(j, supply)| {
                        let amount = remaining.min(supply);
                        let quote = desk
                            .srt_quote(&LoanRecord::new(0, borrower, j, amount), self.term_years, zeta)
                            .expect("valid prospective loan");
                        Offer {
                            lender: j,
                            amount,
                            rate: base(j),
                            surcharge: quote.annual_rate(),
                            tax: quote.tax,
                        }
                    })
                    .collect();
                self.srt_quotes += offers.len() as u64;
                offers
            }
        }
    }

    /// Borrows up to `amount` for `borrower` from the cheapest lenders,
    /// re-quoting after every fill. Returns the filled amount and the
    /// amount-weighted total rate paid on it.
    fn interbank_borrow(
        &mut self,
        borrower: usize,
        amount: f64,
        purpose: FundingPurpose,
        out: &mut StepOutcome,
    ) -> (f64, f64) {
        let mut remaining = amount;
        let mut filled = 0.0;
        let mut cost = 0.0;
        let mut surcharge_paid = 0.0;
        while remaining > EPS {
            let offers = self.collect_offers(borrower, remaining);
            let Some(k) = self.pick(&offers, |o| o.rate + o.surcharge) else {
                break;
            };
            let offer = &offers[k];
            let id = self.state.interbank.next_loan_id();
            let loan = LoanRecord {
                id,
                debtor: borrower,
                creditor: offer.lender,
                principal: offer.amount,
                rate: self.config.per_step(offer.rate),
                srt_paid: if self.config.tax_mode == TaxMode::Srt { offer.tax } else { 0.0 },
                origination_step: self.state.t,
            };
            if self.config.tax_mode == TaxMode::Srt {
                if let Some(log) = self.audit.as_mut() {
                    log.push(SrtAuditEntry {
                        network: self.state.interbank.clone(),
                        capital: self.state.capitals(),
                        loan: loan.clone(),
                        term_years: self.term_years,
                        zeta: self.config.effective_zeta(),
                        tax: offer.tax,
                    });
                }
            }
            self.state
                .interbank
                .insert_loan(loan)
                .expect("fresh id on an off-diagonal pair");
            self.state.banks[offer.lender].reserves -= offer.amount;
            self.state.banks[borrower].reserves += offer.amount - offer.tax;
            self.state.bailout_fund += offer.tax;
            out.interbank_volume += offer.amount;
            out.taxes += offer.tax;
            out.events.push(Event::InterbankLoan {
                id,
                borrower,
                lender: offer.lender,
                amount: offer.amount,
                rate: offer.rate,
                tax: offer.tax,
                purpose,
            });
            filled += offer.amount;
            remaining -= offer.amount;
            cost += offer.amount * (offer.rate + offer.surcharge);
            surcharge_paid += offer.amount * offer.surcharge;
        }
        if filled > 0.0 {
            self.state.banks[borrower].surcharge_estimate = surcharge_paid / filled;
        }
        (filled, cost)
    }

    fn labor_market(&mut self, plans: &[FirmPlan]) {
        let wage = self.config.wage;
        for (f, plan) in plans.iter().enumerate() {
            let affordable = (self.state.firms[f].liquidity.max(0.0) / wage + EPS).floor() as usize;
            let target = plan.workforce.min(affordable);
            while self.state.firms[f].workers.len() > target {
                let h = self.state.firms[f].workers.pop().expect("nonempty");
                self.state.households[h].employer = None;
            }
        }
        let mut pool = self.state.unemployed(&mut self.rng);
        let mut order: Vec<usize> = (0..plans.len()).collect();
        order.shuffle(&mut self.rng);
        for f in order {
            let affordable = (self.state.firms[f].liquidity.max(0.0) / wage + EPS).floor() as usize;
            let target = plans[f].workforce.min(affordable);
            while self.state.firms[f].workers.len() < target {
                let Some(h) = pool.pop() else { break };
                self.state.households[h].employer = Some(f);
                self.state.firms[f].workers.push(h);
            }
        }
        for f in 0..self.state.firms.len() {
            let workers = self.state.firms[f].workers.clone();
            for &h in &workers {
                self.state.firm_pays_household(f, h, wage);
            }
            let firm = &mut self.state.firms[f];
            firm.wage_bill = wage * workers.len() as f64;
            firm.output = self.config.productivity * workers.len() as f64;
            firm.inventory = firm.output;
            firm.units_sold = 0.0;
            firm.revenue = 0.0;
            firm.interest_paid = 0.0;
        }
    }

    fn goods_market(&mut self) {
        let mut order: Vec<usize> = (0..self.state.households.len()).collect();
        order.shuffle(&mut self.rng);
        let n_firms = self.state.firms.len();
        let compared = self.config.firms_compared.min(n_firms);
        for h in order {
            let budget = self.config.consumption_share * self.state.households[h].account;
            if budget <= 0.0 {
                continue;
            }
            let seller = index::sample(&mut self.rng, n_firms, compared)
                .iter()
                .filter(|&f| self.state.firms[f].inventory > 0.0)
                .min_by(|&a, &b| {
                    self.state.firms[a]
                        .price
                        .total_cmp(&self.state.firms[b].price)
                        .then(a.cmp(&b))
                });
            let Some(f) = seller else { continue };
            let firm = &self.state.firms[f];
            let units = (budget / firm.price).min(firm.inventory);
            let spend = if units < budget / firm.price { units * firm.price } else { budget };
            self.state.household_pays_firm(h, f, spend);
            let firm = &mut self.state.firms[f];
            firm.inventory -= units;
            firm.units_sold += units;
            firm.revenue += spend;
        }
    }

    fn interbank_due(&self, b: usize) -> f64 {
        self.state
            .interbank
            .loans()
            .filter(|l| l.debtor == b)
            .map(|l| {
                let part = self.principal_part(l.principal);
                part * (1.0 + l.rate)
            })
            .sum()
    }

    fn principal_part(&self, principal: f64) -> f64 {
        let part = self.config.repayment_fraction * principal;
        if principal - part < self.config.settlement_threshold {
            principal
        } else {
            part
        }
    }

    /// Banks whose reserves cannot cover this step's interbank debt service
    /// borrow the gap.
    fn liquidity_pass(&mut self, out: &mut StepOutcome) {
        let mut order: Vec<usize> = (0..self.state.banks.len()).collect();
        order.shuffle(&mut self.rng);
        for b in order {
            let need = self.interbank_due(b) - self.state.banks[b].reserves;
            if need > EPS {
                self.interbank_borrow(b, need, FundingPurpose::Liquidity, out);
            }
        }
        out.overdrafts = (0..self.state.banks.len())
            .filter(|&b| self.interbank_due(b) - self.state.banks[b].reserves > EPS)
            .count();
    }

    /// Services every loan; returns firms unable to pay.
    fn repayments(&mut self) -> Vec<usize> {
        let per_step = f64::from(self.config.steps_per_year);
        let mut bankrupt = Vec::new();
        for f in 0..self.state.firms.len() {
            let due: f64 = self.state.firms[f]
                .loans
                .iter()
                .map(|l| self.principal_part(l.principal) * (1.0 + l.rate / per_step))
                .sum();
            if due > self.state.firms[f].liquidity {
                bankrupt.push(f);
                continue;
            }
            let mut loans = std::mem::take(&mut self.state.firms[f].loans);
            for loan in &mut loans {
                let part = self.principal_part(loan.principal);
                let interest = part * loan.rate / per_step;
                let firm = &mut self.state.firms[f];
                firm.liquidity -= part + interest;
                firm.interest_paid += interest;
                let bank = &mut self.state.banks[loan.bank];
                bank.reserves += part + interest;
                bank.firm_loans -= part;
                loan.principal -= part;
            }
            loans.retain(|l| l.principal > 0.0);
            self.state.firms[f].loans = loans;
        }

        for id in self.state.interbank_loan_ids() {
            let loan = self.state.interbank.loan(id).expect("listed id").clone();
            let part = self.principal_part(loan.principal);
            let payment = part * (1.0 + loan.rate);
            self.state.banks[loan.debtor].reserves -= payment;
            self.state.banks[loan.creditor].reserves += payment;
            self.state
                .interbank
                .repay(id, part)
                .expect("part never exceeds principal");
        }
        bankrupt
    }

    /// Firms pay part of their liquidity above the cash buffer to their owner.
    fn pay_firm_dividends(&mut self, bankrupt: &[usize]) {
        for f in 0..self.state.firms.len() {
            if bankrupt.contains(&f) {
                continue;
            }
            let firm = &self.state.firms[f];
            let headroom = firm.liquidity - self.config.firm_cash_buffer * firm.wage_bill;
            if headroom > 0.0 {
                let owner = firm.owner;
                self.state
                    .firm_pays_household(f, owner, self.config.firm_dividend_share * headroom);
            }
        }
    }

    fn resolve_firm_bankruptcies(&mut self, bankrupt: &[usize], out: &mut StepOutcome) {
        if bankrupt.is_empty() {
            return;
        }
        let mean_price = self.state.mean_price();
        let mean_demand = self.state.mean_expected_demand();
        for &f in bankrupt {
            let loans = std::mem::take(&mut self.state.firms[f].loans);
            let debt: f64 = loans.iter().map(|l| l.principal).sum();
            let owner = self.state.firms[f].owner;
            let cash = self.state.firms[f].liquidity.max(0.0);
            let account = self.state.households[owner].account.max(0.0);
            let recovered = (cash + account).min(debt);
            let from_firm = cash.min(recovered);
            let from_owner = recovered - from_firm;
            for loan in &loans {
                let share = loan.principal / debt;
                let firm_part = from_firm * share;
                self.state.firms[f].liquidity -= firm_part;
                self.state.banks[loan.bank].reserves += firm_part;
                self.state.household_pays_bank(owner, loan.bank, from_owner * share);
                self.state.banks[loan.bank].firm_loans -= loan.principal;
            }
            out.events.push(Event::FirmBankruptcy {
                firm: f,
                debt,
                recovered,
            });
            let workers = std::mem::take(&mut self.state.firms[f].workers);
            for h in workers {
                self.state.households[h].employer = None;
            }
            let firm = &mut self.state.firms[f];
            firm.price = mean_price;
            firm.expected_demand = mean_demand;
            firm.output = 0.0;
            firm.inventory = 0.0;
            firm.units_sold = 0.0;
        }
    }

    fn resolve_bank_cascade(&mut self, out: &mut StepOutcome) {
        let capital = self.state.capitals();
        let Some(report) = resolve_cascade(&self.state.interbank, &capital, self.state.t) else {
            return;
        };
        for &b in &report.defaulted_banks {
            out.events.push(Event::BankDefault { bank: b });
            self.state.interbank.write_off_debtor(b);
        }
        if !self.config.stop_on_first_cascade {
            for &b in &report.defaulted_banks {
                self.bail_in(b);
            }
        }
        if self.cascade.is_none() {
            self.cascade = Some(report.clone());
        }
        out.cascade = Some(report);
    }

    /// Restores a defaulted bank to its initial capital by writing down
    /// its depositors' accounts pro rata.
    fn bail_in(&mut self, b: usize) {
        let gap = self.config.initial_bank_capital - self.state.capital(b);
        let deposits = self.state.banks[b].deposits;
        if gap <= 0.0 || deposits <= 0.0 {
            return;
        }
        let cut = gap.min(deposits);
        for &h in &self.customers[b] {
            let account = self.state.households[h].account;
            self.state.households[h].account -= cut * account / deposits;
        }
        self.state.banks[b].deposits -= cut;
    }

    /// Banks above their capital target pay part of the excess to their
    /// depositors.
    fn bank_payouts(&mut self) {
        for b in 0..self.state.banks.len() {
            let target = self.config.capital_target_ratio * self.state.total_assets(b);
            let excess = self.state.capital(b) - target;
            let deposits = self.state.banks[b].deposits;
            if excess <= 0.0 || deposits <= 0.0 {
                continue;
            }
            let payout = self.config.bank_payout_share * excess;
            for &h in &self.customers[b] {
                let account = self.state.households[h].account;
                self.state.households[h].account += payout * account / deposits;
            }
            self.state.banks[b].deposits += payout;
        }
    }
}
