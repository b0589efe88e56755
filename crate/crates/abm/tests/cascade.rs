//! Cascade resolution against a synchronous-round contagion oracle.

use proptest::prelude::*;
use srt_abm::{default_set, resolve_cascade};
use srt_core::LiabilityNetwork;

/// Jacobi rounds: every round uses only the previous round's default set.
fn oracle(l: &[Vec<f64>], capital: &[f64]) -> Vec<bool> {
    let n = capital.len();
    let mut defaulted: Vec<bool> = capital.iter().map(|&c| c < 0.0).collect();
    for _ in 0..=n {
        let next: Vec<bool> = (0..n)
            .map(|j| {
                let loss: f64 = (0..n).filter(|&i| defaulted[i]).map(|i| l[i][j]).sum();
                defaulted[j] || capital[j] - loss < 0.0
            })
            .collect();
        if next == defaulted {
            break;
        }
        defaulted = next;
    }
    defaulted
}

fn network() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<usize>)> {
    (2usize..9).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(prop::option::weighted(0.4, 0.0f64..10.0), n), n),
            prop::collection::vec(-3.0f64..8.0, n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(cells, capital, order)| {
                let l: Vec<Vec<f64>> = cells
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, c)| if i == j { 0.0 } else { c.unwrap_or(0.0) })
                            .collect()
                    })
                    .collect();
                (l, capital, order)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn default_set_matches_oracle_in_any_order((l, capital, order) in network()) {
        let net = LiabilityNetwork::from_matrix(&l).unwrap();
        let expected = oracle(&l, &capital);
        prop_assert_eq!(&default_set(&net, &capital, &order), &expected);
        let identity: Vec<usize> = (0..capital.len()).collect();
        prop_assert_eq!(&default_set(&net, &capital, &identity), &expected);

        match resolve_cascade(&net, &capital, 3) {
            None => prop_assert!(capital.iter().all(|&c| c >= 0.0)),
            Some(report) => {
                let banks: Vec<usize> = (0..capital.len()).filter(|&b| expected[b]).collect();
                prop_assert_eq!(&report.defaulted_banks, &banks);
                prop_assert_eq!(report.cascade_size, banks.len());
                prop_assert!(report.cascade_size <= capital.len());
                let losses: f64 = banks.iter().map(|&b| l[b].iter().sum::<f64>()).sum();
                prop_assert!((report.total_losses - losses).abs() <= 1e-9 * losses.max(1.0));
                prop_assert!(capital[report.trigger] < 0.0);
                prop_assert!(capital.iter().all(|&c| c >= capital[report.trigger]));
            }
        }
    }
}

#[test]
fn chain_with_thin_capital_fails_completely() {
    // 0 owes 1, 1 owes 2; each creditor's capital is just below its claim
    let l = vec![vec![0.0, 5.0, 0.0], vec![0.0, 0.0, 4.0], vec![0.0; 3]];
    let net = LiabilityNetwork::from_matrix(&l).unwrap();
    let r = resolve_cascade(&net, &[-1.0, 4.9, 3.9], 1).unwrap();
    assert_eq!(r.cascade_size, 3);
    assert_eq!(r.total_losses, 9.0);
    let r = resolve_cascade(&net, &[-1.0, 5.0, 3.9], 1).unwrap();
    assert_eq!(r.cascade_size, 1);
    assert_eq!(r.total_losses, 5.0);
}
