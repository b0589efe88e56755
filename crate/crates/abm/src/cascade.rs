//! Interbank default cascades with zero recovery.

use serde::{Deserialize, Serialize};
use srt_core::LiabilityNetwork;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeReport {
    pub step: u64,
    /// Ascending bank indices.
    pub defaulted_banks: Vec<usize>,
    pub cascade_size: usize,
    /// Interbank liabilities of the defaulted banks before the cascade.
    pub total_losses: f64,
    /// Bank with the most negative capital before the cascade.
    pub trigger: usize,
}

/// Loss to `creditor` if every bank flagged in `defaulted` fails.
fn loss_from(net: &LiabilityNetwork, defaulted: &[bool], creditor: usize) -> f64 {
    (0..defaulted.len())
        .filter(|&i| defaulted[i])
        .map(|i| net.liability(i, creditor))
        .sum()
}

/// Smallest default set containing every bank with negative capital and
/// closed under zero-recovery write-offs. Banks are re-examined in `order`;
/// losses are summed in index order, so the result does not depend on it.
pub fn default_set(net: &LiabilityNetwork, capital: &[f64], order: &[usize]) -> Vec<bool> {
    let n = capital.len();
    let mut defaulted: Vec<bool> = capital.iter().map(|&c| c < 0.0).collect();
    loop {
        let mut changed = false;
        for &j in order {
            if !defaulted[j] && capital[j] - loss_from(net, &defaulted, j) < 0.0 {
                defaulted[j] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert_eq!(defaulted.len(), n);
    defaulted
}

/// Resolves a cascade on the pre-cascade network, or `None` when every
/// capital is non-negative.
pub fn resolve_cascade(net: &LiabilityNetwork, capital: &[f64], step: u64) -> Option<CascadeReport> {
    let trigger = (0..capital.len())
        .filter(|&b| capital[b] < 0.0)
        .min_by(|&a, &b| capital[a].total_cmp(&capital[b]).then(a.cmp(&b)))?;
    let order: Vec<usize> = (0..capital.len()).collect();
    let defaulted = default_set(net, capital, &order);
    let banks: Vec<usize> = (0..capital.len()).filter(|&b| defaulted[b]).collect();
    let total_losses = banks.iter().map(|&b| net.total_liabilities(b)).sum();
    Some(CascadeReport {
        step,
        cascade_size: banks.len(),
        defaulted_banks: banks,
        total_losses,
        trigger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_default() {
        let net = LiabilityNetwork::new(3);
        let r = resolve_cascade(&net, &[-1.0, 5.0, 5.0], 7).unwrap();
        assert_eq!((r.cascade_size, r.total_losses, r.trigger), (1, 0.0, 0));
    }

    #[test]
    fn no_negative_capital_no_cascade() {
        let net = LiabilityNetwork::from_matrix(&[vec![0.0, 9.0], vec![0.0, 0.0]]).unwrap();
        assert!(resolve_cascade(&net, &[0.0, 1.0], 1).is_none());
    }

    #[test]
    fn chain_cascades_through() {
        // 0 owes 1 owes 2; each creditor's capital is just below the exposure
        let net = LiabilityNetwork::from_matrix(&[
            vec![0.0, 10.0, 0.0],
            vec![0.0, 0.0, 10.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let r = resolve_cascade(&net, &[-1.0, 9.9, 9.9], 1).unwrap();
        assert_eq!(r.defaulted_banks, vec![0, 1, 2]);
        assert_eq!(r.total_losses, 20.0);
        let r = resolve_cascade(&net, &[-1.0, 10.0, 9.9], 1).unwrap();
        assert_eq!(r.defaulted_banks, vec![0]);
    }

    #[test]
    fn joint_losses_count() {
        // bank 2 survives either default alone but not both
        let net = LiabilityNetwork::from_matrix(&[
            vec![0.0, 0.0, 6.0],
            vec![0.0, 0.0, 6.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(resolve_cascade(&net, &[-1.0, 3.0, 10.0], 1).unwrap().cascade_size, 1);
        assert_eq!(resolve_cascade(&net, &[-1.0, -1.0, 10.0], 1).unwrap().cascade_size, 3);
    }
}
