mod support;

use srt_core::{
    discount_mass, expected_loss_node, expected_loss_total, hazard_rate, risk_profile,
    DefaultModel, EconomicValues, LiabilityNetwork, LoanChange, LoanRecord, RiskDesk,
    ValueWeights,
};
use support::oracle::{quadrature_discount_mass, random_capital, random_matrix, XorShift};

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
fn chain_total_loss_equals_summed_node_losses() {
    let (net, cap) = chain();
    let model = DefaultModel::uniform(3, 0.01).unwrap();
    let profile = risk_profile(&net, &cap, ValueWeights::Liabilities);
    let mut oracle = 0.0;
    for i in 0..3 {
        oracle += 0.01 * 20.0 * profile.r[i];
        assert_eq!(
            expected_loss_node(&profile, &model, i),
            0.01 * 20.0 * profile.r[i]
        );
    }
    assert!((expected_loss_total(&profile, &model) - oracle).abs() < 1e-15);
    assert!((oracle - 0.1).abs() < 1e-15);
}

#[test]
fn total_loss_is_linear_in_value_and_probability() {
    let (net, cap) = chain();
    let profile = risk_profile(&net, &cap, ValueWeights::Liabilities);
    let base = expected_loss_total(&profile, &DefaultModel::uniform(3, 0.01).unwrap());
    let mut scaled = profile.clone();
    scaled.values.total *= 3.0;
    let m = DefaultModel::uniform(3, 0.01).unwrap();
    assert!((expected_loss_total(&scaled, &m) - 3.0 * base).abs() < 1e-14);
    let doubled = DefaultModel::uniform(3, 0.02).unwrap();
    assert!((expected_loss_total(&profile, &doubled) - 2.0 * base).abs() < 1e-14);
}

#[test]
fn closed_form_discount_mass_matches_quadrature() {
    let mut worst: f64 = 0.0;
    for hi in 0..=10 {
        for ri in 0..=10 {
            for &term in &[0.01, 0.25, 1.0, 3.7, 10.0, 30.0] {
                let h = 0.05 * hi as f64;
                let r = 0.05 * ri as f64;
                let closed = discount_mass(h, r, term);
                let numeric = quadrature_discount_mass(h, r, term);
                if numeric == 0.0 {
                    assert_eq!(closed, 0.0);
                    continue;
                }
                let rel = ((closed - numeric) / numeric).abs();
                worst = worst.max(rel);
            }
        }
    }
    assert!(worst <= 1e-9, "worst relative error {worst}");
}

#[test]
fn srt_quote_worked_example() {
    // 0 owes 1; the prospective loan 1 <- 2 sends bank 0's distress on to bank 2.
    // With v fixed so that only bank 2 carries value, ΔR_0 = 0.5.
    let net = LiabilityNetwork::from_matrix(&[
        vec![0.0, 10.0, 0.0],
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0],
    ])
    .unwrap();
    let cap = [1.0, 5.0, 10.0];
    let model = DefaultModel::uniform(3, 0.01).unwrap();
    let values = EconomicValues::fixed(vec![0.0, 0.0, 1.0], 100.0);
    let desk = RiskDesk::with_values(&net, &cap, &model, values).unwrap();
    let quote = desk
        .srt_quote(&LoanRecord::new(0, 1, 2, 5.0), 1.0, 0.02)
        .unwrap();
    // W_12 = 0.5 and seeds 0 and 1 both reach bank 2 at distress 0.5
    assert_eq!(quote.delta_r, vec![0.5, 0.5, 0.0]);
    // D = 1 − e^{−h} = P = 0.01 for T = 1 year, r = 0
    let expected = 0.02 * 100.0 * (0.5 + 0.5) * 0.01;
    assert!((quote.tax - expected).abs() < 1e-15, "{}", quote.tax);
    let single: f64 = 0.02 * 100.0 * 0.5 * 0.01;
    assert!((single - 0.01).abs() < 1e-15);
    let numeric = quadrature_discount_mass(hazard_rate(0.01), 0.0, 1.0);
    assert!((numeric - 0.01).abs() < 1e-12);
}

#[test]
fn srt_quote_taylor_limit() {
    let mut rng = XorShift(42);
    let mut checked = 0;
    while checked < 300 {
        let n = 3 + rng.below(4);
        let l = random_matrix(&mut rng, n, 0.6, 10.0);
        let cap: Vec<f64> = (0..n).map(|_| 1.0 + 10.0 * rng.unit()).collect();
        let net = LiabilityNetwork::from_matrix(&l).unwrap();
        if net.total_volume() == 0.0 {
            continue;
        }
        let p = 0.001 + 0.009 * rng.unit();
        let h = hazard_rate(p);
        let term = (0.01 / h) * rng.unit().max(0.05);
        let model = DefaultModel::uniform(n, p).unwrap();
        let debtor = rng.below(n);
        let creditor = (debtor + 1 + rng.below(n - 1)) % n;
        let loan = LoanRecord::new(0, debtor, creditor, 1.0 + 5.0 * rng.unit());
        let desk = RiskDesk::new(&net, &cap, &model, ValueWeights::Liabilities).unwrap();
        let quote = desk.srt_quote(&loan, term, 0.02).unwrap();
        let sum_dr: f64 = quote.delta_r.iter().sum();
        let taylor = 0.02 * desk.values().total * sum_dr.max(0.0) * p * term;
        if taylor == 0.0 {
            assert_eq!(quote.tax, 0.0);
            continue;
        }
        assert!(
            ((quote.tax - taylor) / taylor).abs() <= 0.01,
            "{} vs {taylor}",
            quote.tax
        );
        checked += 1;
    }
}

#[test]
fn removal_and_readdition_cancel_exactly() {
    let mut rng = XorShift(99);
    for _ in 0..500 {
        let n = 3 + rng.below(4);
        let l = random_matrix(&mut rng, n, 0.6, 10.0);
        let cap = random_capital(&mut rng, n, 6.0);
        let net = LiabilityNetwork::from_matrix(&l).unwrap();
        let Some((m, k, _)) = net.edges().first().copied() else { continue };
        let model = DefaultModel::uniform(n, 0.01).unwrap();
        let desk = RiskDesk::new(&net, &cap, &model, ValueWeights::Liabilities).unwrap();
        let removal = desk.marginal_liability_effect(m, k).unwrap();

        let without = net.remove_liability(m, k).unwrap();
        let readd = RiskDesk::with_values(&without, &cap, &model, desk.values().clone()).unwrap();
        let mut restored = without.clone();
        for id in net.loans_on_edge(m, k) {
            restored.insert_loan(net.loan(id).unwrap().clone()).unwrap();
        }
        assert_eq!(restored, net);
        let back = readd.loss_change(&restored);
        assert_eq!(removal + back, 0.0);
    }
}

#[test]
fn only_loan_on_edge_equals_edge_effect() {
    let net = LiabilityNetwork::from_loans(3, [
        LoanRecord::new(0, 0, 1, 10.0),
        LoanRecord::new(1, 1, 2, 10.0),
    ])
    .unwrap();
    let cap = [5.0, 5.0, 20.0];
    let model = DefaultModel::uniform(3, 0.01).unwrap();
    let desk = RiskDesk::new(&net, &cap, &model, ValueWeights::Liabilities).unwrap();
    assert_eq!(
        desk.marginal_loan_effect(LoanChange::Remove(1)).unwrap(),
        desk.marginal_liability_effect(1, 2).unwrap()
    );
    assert!(desk.marginal_loan_effect(LoanChange::Remove(9)).is_err());
}

#[test]
fn adding_then_removing_a_loan_cancels() {
    let (net, cap) = chain();
    let model = DefaultModel::uniform(3, 0.01).unwrap();
    let desk = RiskDesk::new(&net, &cap, &model, ValueWeights::Liabilities).unwrap();
    let loan = LoanRecord::new(net.next_loan_id(), 2, 0, 4.0);
    let add = desk.marginal_loan_effect(LoanChange::Add(&loan)).unwrap();
    let grown = net.with_loan(loan.clone()).unwrap();
    let back = RiskDesk::with_values(&grown, &cap, &model, desk.values().clone())
        .unwrap()
        .marginal_loan_effect(LoanChange::Remove(loan.id))
        .unwrap();
    assert_eq!(add + back, 0.0);
}

/// The two-lender situation behind the tax: the same loan is dearer from a
/// lender that itself owes money to thinly capitalised banks.
#[test]
fn quote_prefers_lender_without_liabilities() {
    // bank 1 owes bank 3 heavily; bank 2 owes nothing
    let net = LiabilityNetwork::from_matrix(&[
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 8.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
    ])
    .unwrap();
    let cap = [10.0, 4.0, 4.0, 4.0];
    let model = DefaultModel::uniform(4, 0.01).unwrap();
    let desk = RiskDesk::new(&net, &cap, &model, ValueWeights::Liabilities).unwrap();
    let from_risky = desk.srt_quote(&LoanRecord::new(0, 0, 1, 3.0), 1.0, 0.02).unwrap();
    let from_safe = desk.srt_quote(&LoanRecord::new(0, 0, 2, 3.0), 1.0, 0.02).unwrap();
    assert!(from_risky.tax > 0.0);
    assert_eq!(from_safe.tax, 0.0);
}

#[test]
fn quote_and_edge_effect_match_ledger_recomputation_bitwise() {
    let mut rng = XorShift(41);
    let model_for = |n| DefaultModel::uniform(n, 0.01).unwrap();
    for case in 0..500 {
        let n = 2 + rng.below(6);
        let l = random_matrix(&mut rng, n, 0.5, 10.0);
        let cap = random_capital(&mut rng, n, 10.0);
        let net = LiabilityNetwork::from_matrix(&l).unwrap();
        let model = model_for(n);
        let desk = RiskDesk::new(&net, &cap, &model, ValueWeights::Liabilities).unwrap();
        let d = rng.below(n);
        let c = (d + 1 + rng.below(n - 1)) % n;
        let principal = 10.0 * rng.unit();
        let quote = desk
            .srt_quote(&LoanRecord::new(0, d, c, principal), 1.0, 1.0)
            .unwrap();
        let booked = net
            .with_loan(LoanRecord::new(net.next_loan_id(), d, c, principal))
            .unwrap();
        let after = desk.profile_of(&booked);
        for i in 0..n {
            assert_eq!(quote.delta_r[i], after.r[i] - desk.base_profile().r[i], "case {case}");
        }
        for (m, k, _) in net.edges() {
            let via_ledger = desk.loss_change(&net.remove_liability(m, k).unwrap());
            assert_eq!(desk.marginal_liability_effect(m, k).unwrap(), via_ledger, "case {case}");
        }
    }
}
