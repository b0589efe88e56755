//! Liability networks and their loan ledgers.
//!
//! Entry `(i, j)` of the liability matrix is what bank `i` owes bank `j`
//! (rows are debtors, columns are creditors). The matrix is a cache over the
//! loan ledger: every cell is recomputed from the loans booked on that edge,
//! summed in loan-id order, so two networks with the same ledger have
//! bit-identical matrices no matter how they were built.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::NetworkError;

/// Index of a bank inside a network.
pub type BankId = usize;

/// Identifier of a single loan in a ledger.
pub type LoanId = u64;

/// Absolute tolerance used when checking matrix/ledger consistency.
pub const LEDGER_TOLERANCE: f64 = 1e-9;

/// A single interbank loan: `debtor` owes `creditor` the outstanding principal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoanRecord {
    pub id: LoanId,
    pub debtor: BankId,
    pub creditor: BankId,
    pub principal: f64,
    /// Per-step interest rate.
    pub rate: f64,
    /// Systemic risk tax charged at origination.
    pub srt_paid: f64,
    pub origination_step: u64,
}

impl LoanRecord {
    pub fn new(id: LoanId, debtor: BankId, creditor: BankId, principal: f64) -> Self {
        Self {
            id,
            debtor,
            creditor,
            principal,
            rate: 0.0,
            srt_paid: 0.0,
            origination_step: 0,
        }
    }
}

/// Directed weighted liability network with its per-loan ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct LiabilityNetwork {
    n: usize,
    matrix: Vec<f64>,
    loans: BTreeMap<LoanId, LoanRecord>,
    edges: BTreeMap<(BankId, BankId), BTreeSet<LoanId>>,
    next_id: LoanId,
}

impl LiabilityNetwork {
    /// Empty network over `n` banks.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            matrix: vec![0.0; n * n],
            loans: BTreeMap::new(),
            edges: BTreeMap::new(),
            next_id: 0,
        }
    }

    /// Builds a network from a ledger.
    pub fn from_loans<I>(n: usize, loans: I) -> Result<Self, NetworkError>
    where
        I: IntoIterator<Item = LoanRecord>,
    {
        let mut net = Self::new(n);
        for loan in loans {
            net.insert_loan(loan)?;
        }
        Ok(net)
    }

    /// Builds a network with one synthetic loan per nonzero matrix entry.
    /// `rows[i][j]` is what `i` owes `j`.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self, NetworkError> {
        let n = rows.len();
        let mut net = Self::new(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(NetworkError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &amount) in row.iter().enumerate() {
                if amount != 0.0 {
                    let id = net.next_loan_id();
                    net.insert_loan(LoanRecord::new(id, i, j, amount))?;
                }
            }
        }
        Ok(net)
    }

    pub fn n_banks(&self) -> usize {
        self.n
    }

    /// `L_ij`, what `debtor` owes `creditor`.
    #[inline]
    pub fn liability(&self, debtor: BankId, creditor: BankId) -> f64 {
        self.matrix[debtor * self.n + creditor]
    }

    /// Row-major `n × n` liability matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn loans(&self) -> impl Iterator<Item = &LoanRecord> {
        self.loans.values()
    }

    pub fn loan(&self, id: LoanId) -> Option<&LoanRecord> {
        self.loans.get(&id)
    }

    pub fn loan_count(&self) -> usize {
        self.loans.len()
    }

    /// Ids of the loans booked on edge `debtor -> creditor`, in ascending order.
    pub fn loans_on_edge(&self, debtor: BankId, creditor: BankId) -> Vec<LoanId> {
        self.edges
            .get(&(debtor, creditor))
            .map(|ids| ids.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Nonzero edges `(debtor, creditor, L)` in row-major order.
    pub fn edges(&self) -> Vec<(BankId, BankId, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let l = self.liability(i, j);
                if l != 0.0 {
                    out.push((i, j, l));
                }
            }
        }
        out
    }

    /// Fresh id not used by any loan in this ledger.
    pub fn next_loan_id(&self) -> LoanId {
        self.next_id
    }

    /// Total interbank liabilities of `bank` (row sum; "due to banks").
    pub fn total_liabilities(&self, bank: BankId) -> f64 {
        self.matrix[bank * self.n..(bank + 1) * self.n].iter().sum()
    }

    /// Total interbank claims of `bank` (column sum; "due from banks").
    pub fn total_claims(&self, bank: BankId) -> f64 {
        (0..self.n).map(|i| self.liability(i, bank)).sum()
    }

    /// `V = Σ_ij L_ij`.
    pub fn total_volume(&self) -> f64 {
        self.matrix.iter().sum()
    }

    /// Copy with entry `(m, n)` zeroed and every loan on that edge dropped.
    pub fn remove_liability(&self, m: BankId, n: BankId) -> Result<Self, NetworkError> {
        self.check_pair(m, n)?;
        let mut out = self.clone();
        if let Some(ids) = out.edges.remove(&(m, n)) {
            for id in ids {
                out.loans.remove(&id);
            }
        }
        out.matrix[m * self.n + n] = 0.0;
        Ok(out)
    }

    /// Copy without loan `id`.
    pub fn without_loan(&self, id: LoanId) -> Result<Self, NetworkError> {
        let mut out = self.clone();
        out.remove_loan(id)?;
        Ok(out)
    }

    /// Copy with `loan` added to the ledger.
    pub fn with_loan(&self, loan: LoanRecord) -> Result<Self, NetworkError> {
        let mut out = self.clone();
        out.insert_loan(loan)?;
        Ok(out)
    }

    /// Books a loan in place.
    pub fn insert_loan(&mut self, loan: LoanRecord) -> Result<(), NetworkError> {
        self.check_pair(loan.debtor, loan.creditor)?;
        if !(loan.principal >= 0.0) || !loan.principal.is_finite() {
            return Err(NetworkError::NegativePrincipal {
                id: loan.id,
                principal: loan.principal,
            });
        }
        if self.loans.contains_key(&loan.id) {
            return Err(NetworkError::DuplicateLoan(loan.id));
        }
        let key = (loan.debtor, loan.creditor);
        self.next_id = self.next_id.max(loan.id + 1);
        self.edges.entry(key).or_default().insert(loan.id);
        self.loans.insert(loan.id, loan);
        self.refresh_edge(key);
        Ok(())
    }

    /// Removes a loan in place and returns it.
    pub fn remove_loan(&mut self, id: LoanId) -> Result<LoanRecord, NetworkError> {
        let loan = self.loans.remove(&id).ok_or(NetworkError::UnknownLoan(id))?;
        let key = (loan.debtor, loan.creditor);
        if let Some(ids) = self.edges.get_mut(&key) {
            ids.remove(&id);
            if ids.is_empty() {
                self.edges.remove(&key);
            }
        }
        self.refresh_edge(key);
        Ok(loan)
    }

    /// Reduces the outstanding principal of loan `id` by `amount`.
    /// A loan whose principal reaches zero is dropped from the ledger.
    pub fn repay(&mut self, id: LoanId, amount: f64) -> Result<f64, NetworkError> {
        let loan = self.loans.get_mut(&id).ok_or(NetworkError::UnknownLoan(id))?;
        let remaining = loan.principal - amount;
        if remaining < -LEDGER_TOLERANCE {
            return Err(NetworkError::NegativeEntry {
                debtor: loan.debtor,
                creditor: loan.creditor,
                value: remaining,
            });
        }
        let key = (loan.debtor, loan.creditor);
        if remaining <= 0.0 {
            self.remove_loan(id)?;
            return Ok(0.0);
        }
        loan.principal = remaining;
        self.refresh_edge(key);
        Ok(remaining)
    }

    /// Drops every loan owed by `debtor` and returns them.
    pub fn write_off_debtor(&mut self, debtor: BankId) -> Vec<LoanRecord> {
        let keys: Vec<_> = self
            .edges
            .range((debtor, 0)..(debtor + 1, 0))
            .map(|(k, _)| *k)
            .collect();
        let mut removed = Vec::new();
        for key in keys {
            for id in self.edges.remove(&key).unwrap_or_default() {
                if let Some(loan) = self.loans.remove(&id) {
                    removed.push(loan);
                }
            }
            self.matrix[key.0 * self.n + key.1] = 0.0;
        }
        removed
    }

    /// Verifies every invariant: zero diagonal, nonnegative entries, and
    /// each entry equal to its ledger sum within [`LEDGER_TOLERANCE`].
    pub fn check_consistency(&self) -> Result<(), NetworkError> {
        let mut sums = vec![0.0; self.n * self.n];
        for loan in self.loans.values() {
            if loan.debtor == loan.creditor {
                return Err(NetworkError::SelfLoan(loan.debtor));
            }
            sums[loan.debtor * self.n + loan.creditor] += loan.principal;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let l = self.liability(i, j);
                if l < 0.0 {
                    return Err(NetworkError::NegativeEntry {
                        debtor: i,
                        creditor: j,
                        value: l,
                    });
                }
                if i == j && l != 0.0 {
                    return Err(NetworkError::SelfLoan(i));
                }
                if (l - sums[i * self.n + j]).abs() > LEDGER_TOLERANCE {
                    return Err(NetworkError::Inconsistent {
                        debtor: i,
                        creditor: j,
                        matrix: l,
                        ledger: sums[i * self.n + j],
                    });
                }
            }
        }
        Ok(())
    }

    fn refresh_edge(&mut self, key: (BankId, BankId)) {
        let sum = self
            .edges
            .get(&key)
            .map(|ids| ids.iter().map(|id| self.loans[id].principal).sum())
            .unwrap_or(0.0);
        self.matrix[key.0 * self.n + key.1] = sum;
    }

    /// Checks that `(debtor, creditor)` is an admissible off-diagonal pair.
    pub fn check_pair(&self, debtor: BankId, creditor: BankId) -> Result<(), NetworkError> {
        for idx in [debtor, creditor] {
            if idx >= self.n {
                return Err(NetworkError::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        if debtor == creditor {
            return Err(NetworkError::SelfLoan(debtor));
        }
        Ok(())
    }
}

/// Balance-sheet attributes of a bank in the shape of supervisory data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankSheet {
    pub capital: f64,
    pub liquidity: f64,
    pub total_assets: Option<f64>,
    pub total_liabilities: Option<f64>,
    pub due_from_banks: Option<f64>,
    pub due_to_banks: Option<f64>,
    pub liquid_assets: Option<f64>,
    /// Annual default probability, in `[0, 1)`.
    pub default_probability: f64,
}

impl BankSheet {
    pub fn new(capital: f64, default_probability: f64) -> Self {
        Self {
            capital,
            liquidity: 0.0,
            total_assets: None,
            total_liabilities: None,
            due_from_banks: None,
            due_to_banks: None,
            liquid_assets: None,
            default_probability,
        }
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        if !(0.0..1.0).contains(&self.default_probability) {
            return Err(NetworkError::InvalidSheet(format!(
                "default probability {} outside [0, 1)",
                self.default_probability
            )));
        }
        if let (Some(from), Some(total)) = (self.due_from_banks, self.total_assets) {
            if from > total {
                return Err(NetworkError::InvalidSheet(format!(
                    "due_from_banks {from} exceeds total_assets {total}"
                )));
            }
        }
        Ok(())
    }
}
