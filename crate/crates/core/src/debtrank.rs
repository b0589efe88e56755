//! DebtRank: the fraction of total economic value put under distress by the
//! default of one bank (or a set of banks).
//!
//! Distress travels along the impact matrix `W_ij = min(1, L_ij / C_j)`:
//! when `i` is distressed its creditors `j` lose a share of their capital.
//! Every node passes its distress on exactly once
//! (undistressed -> distressed -> inactive), so a propagation ends after at
//! most `n` sweeps.

use serde::{Deserialize, Serialize};

use crate::network::{BankId, LiabilityNetwork};

/// Which balance-sheet side sets the economic value weights `v_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueWeights {
    /// `v_i = Σ_j L_ij / V`, the bank's share of interbank liabilities.
    #[default]
    Liabilities,
    /// `v_i = Σ_j L_ji / V`, the bank's share of interbank assets.
    Assets,
}

impl std::fmt::Display for ValueWeights {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValueWeights::Liabilities => f.write_str("liabilities"),
            ValueWeights::Assets => f.write_str("assets"),
        }
    }
}

impl std::str::FromStr for ValueWeights {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "liabilities" => Ok(ValueWeights::Liabilities),
            "assets" => Ok(ValueWeights::Assets),
            other => Err(format!("unknown value weighting `{other}`")),
        }
    }
}

/// Normalised economic values `v` and the total value `V` they split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomicValues {
    pub v: Vec<f64>,
    pub total: f64,
}

impl EconomicValues {
    pub fn from_network(net: &LiabilityNetwork, weights: ValueWeights) -> Self {
        let n = net.n_banks();
        let total = net.total_volume();
        if total <= 0.0 {
            return Self::zero(n);
        }
        let v = (0..n)
            .map(|i| match weights {
                ValueWeights::Liabilities => net.total_liabilities(i),
                ValueWeights::Assets => net.total_claims(i),
            } / total)
            .collect();
        Self { v, total }
    }

    /// Externally fixed weights; `total` is the currency value they split.
    pub fn fixed(v: Vec<f64>, total: f64) -> Self {
        Self { v, total }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            v: vec![0.0; n],
            total: 0.0,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.total <= 0.0
    }
}

/// `W_ij`: fraction of `j`'s capital lost when `i` defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactMatrix {
    n: usize,
    dense: Vec<f64>,
    // nonzero (creditor, weight) pairs per debtor row, ascending creditor
    rows: Vec<Vec<(BankId, f64)>>,
}

impl ImpactMatrix {
    /// # Panics
    /// If `capital.len()` differs from the network size.
    pub fn new(net: &LiabilityNetwork, capital: &[f64]) -> Self {
        let n = net.n_banks();
        assert_eq!(capital.len(), n, "capital vector length must match network");
        let mut dense = vec![0.0; n * n];
        let mut rows = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                let w = impact(net.liability(i, j), capital[j]);
                if w > 0.0 {
                    dense[i * n + j] = w;
                    rows[i].push((j, w));
                }
            }
        }
        Self { n, dense, rows }
    }

    pub fn n_banks(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: BankId, j: BankId) -> f64 {
        self.dense[i * self.n + j]
    }

    pub fn row(&self, i: BankId) -> &[(BankId, f64)] {
        &self.rows[i]
    }

    /// Copy with the weight of edge `(i, j)` recomputed for `exposure`
    /// against creditor capital `capital_j`.
    pub fn with_exposure(&self, i: BankId, j: BankId, exposure: f64, capital_j: f64) -> Self {
        let mut out = self.clone();
        let w = impact(exposure, capital_j);
        out.dense[i * self.n + j] = w;
        let row = &mut out.rows[i];
        match row.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) if w > 0.0 => row[pos].1 = w,
            Ok(pos) => {
                row.remove(pos);
            }
            Err(pos) if w > 0.0 => row.insert(pos, (j, w)),
            Err(_) => {}
        }
        out
    }
}

/// Impact of a loss of `exposure` on a creditor holding `capital`.
#[inline]
pub fn impact(exposure: f64, capital: f64) -> f64 {
    if exposure <= 0.0 {
        0.0
    } else if capital <= 0.0 {
        1.0
    } else {
        (exposure / capital).min(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Undistressed,
    Distressed,
    Inactive,
}

/// Final distress levels of one propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub initial: Vec<f64>,
    pub distress: Vec<f64>,
    pub sweeps: usize,
}

impl Propagation {
    /// `Σ_j h_j(T) v_j − Σ_j h_j(0) v_j`.
    pub fn debtrank(&self, values: &EconomicValues) -> f64 {
        let end: f64 = self.distress.iter().zip(&values.v).map(|(h, v)| h * v).sum();
        let start: f64 = self.initial.iter().zip(&values.v).map(|(h, v)| h * v).sum();
        end - start
    }
}

/// Runs the distress recursion from `seeds`, each `(bank, ψ)` starting at
/// distress `ψ ∈ (0, 1]`.
pub fn propagate(impact: &ImpactMatrix, seeds: &[(BankId, f64)]) -> Propagation {
    let n = impact.n;
    let mut h = vec![0.0; n];
    let mut status = vec![Status::Undistressed; n];
    let mut active: Vec<BankId> = Vec::new();
    for &(seed, psi) in seeds {
        let psi = psi.clamp(0.0, 1.0);
        if psi > 0.0 && status[seed] == Status::Undistressed {
            h[seed] = psi;
            status[seed] = Status::Distressed;
            active.push(seed);
        }
    }
    active.sort_unstable();
    let initial = h.clone();

    let mut delta = vec![0.0; n];
    let mut touched: Vec<BankId> = Vec::new();
    let mut sweeps = 0;
    while !active.is_empty() {
        sweeps += 1;
        for &i in &active {
            let hi = h[i];
            for &(j, w) in impact.row(i) {
                if delta[j] == 0.0 && !touched.contains(&j) {
                    touched.push(j);
                }
                delta[j] += w * hi;
            }
        }
        for &i in &active {
            status[i] = Status::Inactive;
        }
        touched.sort_unstable();
        let mut next = Vec::new();
        for &j in &touched {
            h[j] = (h[j] + delta[j]).min(1.0);
            delta[j] = 0.0;
            if h[j] > 0.0 && status[j] == Status::Undistressed {
                status[j] = Status::Distressed;
                next.push(j);
            }
        }
        touched.clear();
        active = next;
    }
    Propagation {
        initial,
        distress: h,
        sweeps,
    }
}

/// DebtRank of a single seed under full initial distress.
pub fn debtrank(
    net: &LiabilityNetwork,
    capital: &[f64],
    values: &EconomicValues,
    seed: BankId,
) -> f64 {
    let impact = ImpactMatrix::new(net, capital);
    propagate(&impact, &[(seed, 1.0)]).debtrank(values)
}

/// DebtRank of a set of seeds, each under initial distress `psi`.
pub fn debtrank_set(
    net: &LiabilityNetwork,
    capital: &[f64],
    values: &EconomicValues,
    seeds: &[BankId],
    psi: f64,
) -> f64 {
    let impact = ImpactMatrix::new(net, capital);
    let seeds: Vec<_> = seeds.iter().map(|&s| (s, psi)).collect();
    propagate(&impact, &seeds).debtrank(values)
}

/// Per-bank DebtRank together with the weights it was computed with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskProfile {
    pub r: Vec<f64>,
    pub values: EconomicValues,
    pub iterations_used: usize,
    /// `V = 0`: nothing to propagate, every entry is zero.
    pub degenerate: bool,
}

impl RiskProfile {
    pub fn n_banks(&self) -> usize {
        self.r.len()
    }

    /// Bank indices ordered by decreasing DebtRank (ties by index).
    pub fn ranking(&self) -> Vec<BankId> {
        let mut idx: Vec<_> = (0..self.r.len()).collect();
        idx.sort_by(|&a, &b| self.r[b].total_cmp(&self.r[a]).then(a.cmp(&b)));
        idx
    }
}

/// DebtRank of every bank with weights derived from `net` itself.
pub fn risk_profile(net: &LiabilityNetwork, capital: &[f64], weights: ValueWeights) -> RiskProfile {
    let values = EconomicValues::from_network(net, weights);
    risk_profile_with(net, capital, &values)
}

/// DebtRank of every bank with externally frozen weights.
pub fn risk_profile_with(
    net: &LiabilityNetwork,
    capital: &[f64],
    values: &EconomicValues,
) -> RiskProfile {
    let n = net.n_banks();
    if values.is_degenerate() {
        return RiskProfile {
            r: vec![0.0; n],
            values: values.clone(),
            iterations_used: 0,
            degenerate: true,
        };
    }
    profile_from_impact(&ImpactMatrix::new(net, capital), values)
}

/// DebtRank of every bank for a prebuilt impact matrix.
pub fn profile_from_impact(impact: &ImpactMatrix, values: &EconomicValues) -> RiskProfile {
    let n = impact.n_banks();
    if values.is_degenerate() {
        return RiskProfile {
            r: vec![0.0; n],
            values: values.clone(),
            iterations_used: 0,
            degenerate: true,
        };
    }
    let mut r = Vec::with_capacity(n);
    let mut iterations_used = 0;
    for seed in 0..n {
        let prop = propagate(impact, &[(seed, 1.0)]);
        iterations_used = iterations_used.max(prop.sweeps);
        r.push(prop.debtrank(values));
    }
    RiskProfile {
        r,
        values: values.clone(),
        iterations_used,
        degenerate: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> (LiabilityNetwork, Vec<f64>) {
        let net = LiabilityNetwork::from_matrix(&[
            vec![0.0, 10.0, 0.0],
            vec![0.0, 0.0, 10.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        (net, vec![5.0, 5.0, 20.0])
    }

    #[test]
    fn impact_rules() {
        assert_eq!(impact(10.0, 5.0), 1.0);
        assert_eq!(impact(2.0, 10.0), 0.2);
        assert_eq!(impact(1.0, 0.0), 1.0);
        assert_eq!(impact(1.0, -3.0), 1.0);
        assert_eq!(impact(0.0, 0.0), 0.0);
    }

    #[test]
    fn impact_matrix_diagonal_is_zero() {
        let (net, cap) = chain();
        let w = ImpactMatrix::new(&net, &cap);
        for i in 0..3 {
            assert_eq!(w.get(i, i), 0.0);
        }
        assert_eq!(w.get(0, 1), 1.0);
        assert_eq!(w.get(1, 2), 0.5);
    }

    #[test]
    fn empty_network_has_zero_rank() {
        let net = LiabilityNetwork::new(4);
        let values = EconomicValues::fixed(vec![0.25; 4], 1.0);
        for seed in 0..4 {
            assert_eq!(debtrank(&net, &[1.0; 4], &values, seed), 0.0);
        }
        let profile = risk_profile(&net, &[1.0; 4], ValueWeights::Liabilities);
        assert!(profile.degenerate);
        assert!(profile.r.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn two_bank_fixed_weights() {
        let net = LiabilityNetwork::from_matrix(&[vec![0.0, 10.0], vec![0.0, 0.0]]).unwrap();
        let values = EconomicValues::fixed(vec![0.5, 0.5], 10.0);
        assert_eq!(debtrank(&net, &[1.0, 5.0], &values, 0), 0.5);
        assert_eq!(debtrank(&net, &[1.0, 5.0], &values, 1), 0.0);
    }

    #[test]
    fn three_bank_chain_fixed_thirds() {
        let (net, cap) = chain();
        let third = 1.0 / 3.0;
        let values = EconomicValues::fixed(vec![third; 3], 20.0);
        let prop = propagate(&ImpactMatrix::new(&net, &cap), &[(0, 1.0)]);
        assert_eq!(prop.distress, vec![1.0, 1.0, 0.5]);
        assert!((prop.debtrank(&values) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_bank_chain_liability_weights() {
        let (net, cap) = chain();
        let profile = risk_profile(&net, &cap, ValueWeights::Liabilities);
        assert_eq!(profile.values.v, vec![0.5, 0.5, 0.0]);
        assert_eq!(profile.r[0], 0.5);
        // bank 1's default reaches bank 2, which carries no value weight
        assert_eq!(profile.r[1], 0.0);
        assert_eq!(profile.r[2], 0.0);
        assert_eq!(profile.ranking()[0], 0);
    }

    #[test]
    fn asset_weights_use_column_sums() {
        let (net, cap) = chain();
        let profile = risk_profile(&net, &cap, ValueWeights::Assets);
        assert_eq!(profile.values.v, vec![0.0, 0.5, 0.5]);
        assert_eq!(profile.r[0], 0.75);
        assert_eq!(profile.r[1], 0.25);
    }

    #[test]
    fn multi_seed_partial_distress() {
        let (net, cap) = chain();
        let values = EconomicValues::fixed(vec![1.0 / 3.0; 3], 20.0);
        // ψ = 0.5 on bank 0 alone: h1 = 0.5, h2 = 0.25
        let r = debtrank_set(&net, &cap, &values, &[0], 0.5);
        assert!((r - 0.75 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn propagation_terminates_within_n_sweeps_on_cycles() {
        let net = LiabilityNetwork::from_matrix(&[
            vec![0.0, 5.0, 0.0, 0.0],
            vec![0.0, 0.0, 5.0, 0.0],
            vec![0.0, 0.0, 0.0, 5.0],
            vec![5.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let prop = propagate(&ImpactMatrix::new(&net, &[1.0; 4]), &[(2, 1.0)]);
        assert!(prop.sweeps <= 4);
        assert_eq!(prop.distress, vec![1.0; 4]);
    }

    #[test]
    fn value_weights_parse() {
        assert_eq!("assets".parse::<ValueWeights>().unwrap(), ValueWeights::Assets);
        assert!("equity".parse::<ValueWeights>().is_err());
        assert_eq!(ValueWeights::Liabilities.to_string(), "liabilities");
    }
}
