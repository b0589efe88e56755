//! Synthetic interbank networks with scale-free connectivity, used as a
//! stand-in for confidential supervisory data.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::io::NetworkFile;
use crate::network::{BankSheet, LiabilityNetwork, LoanRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleFreeParams {
    pub n_banks: usize,
    /// Edges attached per new node (preferential attachment).
    pub attach: usize,
    /// Pareto tail index of exposure sizes.
    pub tail_index: f64,
    /// Minimum exposure size.
    pub min_exposure: f64,
    /// Capital as a fraction of interbank claims plus `base_capital`.
    pub capital_ratio: f64,
    pub base_capital: f64,
    pub p_def: f64,
}

impl Default for ScaleFreeParams {
    fn default() -> Self {
        Self {
            n_banks: 50,
            attach: 2,
            tail_index: 1.5,
            min_exposure: 1.0,
            capital_ratio: 0.3,
            base_capital: 1.0,
            p_def: crate::io::DEFAULT_P_DEF,
        }
    }
}

/// Barabási–Albert attachment with uniformly random edge directions and
/// Pareto-distributed exposure sizes.
pub fn scale_free<R: Rng + ?Sized>(params: &ScaleFreeParams, rng: &mut R) -> NetworkFile {
    let n = params.n_banks;
    let m = params.attach.max(1).min(n.saturating_sub(1).max(1));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // degree-weighted urn: each endpoint appears once per incident edge
    let mut urn: Vec<usize> = Vec::new();
    let core = (m + 1).min(n);
    for a in 0..core {
        for b in (a + 1)..core {
            pairs.push((a, b));
            urn.extend([a, b]);
        }
    }
    for node in core..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m.min(node) {
            let t = if urn.is_empty() {
                rng.gen_range(0..node)
            } else {
                urn[rng.gen_range(0..urn.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            pairs.push((node, t));
            urn.extend([node, t]);
        }
    }

    let mut net = LiabilityNetwork::new(n);
    for (a, b) in pairs {
        let (debtor, creditor) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let amount = params.min_exposure * u.powf(-1.0 / params.tail_index);
        let id = net.next_loan_id();
        net.insert_loan(LoanRecord::new(id, debtor, creditor, amount))
            .expect("generated pairs are distinct and in range");
    }

    let sheets = (0..n)
        .map(|i| {
            let claims = net.total_claims(i);
            let debts = net.total_liabilities(i);
            let capital = params.capital_ratio * claims + params.base_capital;
            let liquid = params.base_capital;
            BankSheet {
                capital,
                liquidity: liquid,
                total_assets: Some(claims + capital + debts + liquid),
                total_liabilities: Some(debts + claims + liquid),
                due_from_banks: Some(claims),
                due_to_banks: Some(debts),
                liquid_assets: Some(liquid),
                default_probability: params.p_def,
            }
        })
        .collect();
    NetworkFile {
        ids: (0..n).map(|i| format!("B{i:03}")).collect(),
        network: net,
        sheets,
    }
}
