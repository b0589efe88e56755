//! Per-run observables and their aggregation over seeded batches.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use srt_core::{DefaultModel, LiabilityNetwork, RiskDesk, ValueWeights};

use crate::cascade::CascadeReport;
use crate::config::{ConfigError, ModelConfig, TaxMode};
use crate::sim::{Event, Simulation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub debtor: usize,
    pub creditor: usize,
    /// `L_mn / V`.
    pub relative_size: f64,
    /// Change in expected systemic loss when the liability is removed.
    pub effect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskSample {
    pub step: u64,
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub mode: TaxMode,
    pub steps_run: u64,
    pub degenerate: bool,
    pub cascade: Option<CascadeReport>,
    /// Interbank principal originated at the volume step; `None` if the run
    /// ended before it.
    pub volume_at_t: Option<f64>,
    pub risk_samples: Vec<RiskSample>,
    /// One point per liability at the volume step.
    pub marginal: Vec<ScatterPoint>,
    pub firm_bankruptcies: u64,
    pub taxes_collected: f64,
    pub srt_quotes: u64,
    /// Largest relative deviation of total cash from its initial value.
    pub max_cash_drift: f64,
}

/// Principal of the interbank loans in an event stream.
pub fn transaction_volume(events: &[Event]) -> f64 {
    events
        .iter()
        .map(|e| match e {
            Event::InterbankLoan { amount, .. } => *amount,
            _ => 0.0,
        })
        .sum()
}

/// `(L_mn / V, Δ^(−mn) EL)` for every nonzero liability, with weights and
/// capitals frozen at `net`.
pub fn marginal_scatter(
    net: &LiabilityNetwork,
    capital: &[f64],
    model: &DefaultModel,
    weights: ValueWeights,
) -> Vec<ScatterPoint> {
    let edges = net.edges();
    if edges.is_empty() {
        return Vec::new();
    }
    let desk = RiskDesk::new(net, capital, model, weights).expect("lengths checked by caller");
    let total = net.total_volume();
    edges
        .into_iter()
        .map(|(m, n, amount)| ScatterPoint {
            debtor: m,
            creditor: n,
            relative_size: amount / total,
            effect: desk.marginal_liability_effect(m, n).expect("edge in range"),
        })
        .collect()
}

pub fn run_one(config: &ModelConfig, seed: u64) -> Result<RunRecord, ConfigError> {
    let mut sim = Simulation::new(config.clone(), seed)?;
    let initial_cash = sim.state().total_cash();
    let mut record = RunRecord {
        seed,
        mode: config.tax_mode,
        steps_run: 0,
        degenerate: false,
        cascade: None,
        volume_at_t: None,
        risk_samples: Vec::new(),
        marginal: Vec::new(),
        firm_bankruptcies: 0,
        taxes_collected: 0.0,
        srt_quotes: 0,
        max_cash_drift: 0.0,
    };
    while !sim.is_finished() {
        let outcome = sim.step();
        let state = sim.state();
        record.steps_run = outcome.t;
        record.taxes_collected += outcome.taxes;
        record.firm_bankruptcies += outcome
            .events
            .iter()
            .filter(|e| matches!(e, Event::FirmBankruptcy { .. }))
            .count() as u64;
        let drift = (state.total_cash() - initial_cash).abs() / initial_cash;
        record.max_cash_drift = record.max_cash_drift.max(drift);
        if config.sample_every > 0 && outcome.t % config.sample_every == 0 {
            let profile = srt_core::risk_profile(
                &state.interbank,
                &state.capitals(),
                config.value_weights,
            );
            record.risk_samples.push(RiskSample {
                step: outcome.t,
                r: profile.r,
            });
        }
        if outcome.t == config.volume_step {
            record.volume_at_t = Some(outcome.interbank_volume);
            record.marginal = marginal_scatter(
                &state.interbank,
                &state.capitals(),
                sim.default_model(),
                config.value_weights,
            );
        }
    }
    record.degenerate = sim.is_degenerate();
    record.cascade = sim.cascade().cloned();
    record.srt_quotes = sim.srt_quote_count();
    Ok(record)
}

/// Runs seeds `base_seed .. base_seed + n_runs` on `workers` threads
/// (0 = all cores). Records come back in seed order.
pub fn run_records(
    config: &ModelConfig,
    n_runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<Vec<RunRecord>, ConfigError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        (0..n_runs as u64)
            .into_par_iter()
            .map(|k| run_one(config, base_seed + k))
            .collect()
    })
}

pub fn run_batch(
    config: &ModelConfig,
    n_runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<BatchSummary, ConfigError> {
    let records = run_records(config, n_runs, base_seed, workers)?;
    Ok(BatchSummary::from_records(config, &records))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Observations equal to zero, kept outside log-scaled bins.
    pub zeros: u64,
    pub log_scale: bool,
}

impl Histogram {
    /// Unit-width bins centered on `0..=max`.
    pub fn integer(values: &[usize], max: usize) -> Self {
        let mut counts = vec![0; max + 1];
        for &v in values {
            counts[v.min(max)] += 1;
        }
        Self {
            edges: (0..=max + 1).map(|k| k as f64 - 0.5).collect(),
            counts,
            zeros: 0,
            log_scale: false,
        }
    }

    /// `bins` bins of equal width in `ln x` spanning the positive values.
    pub fn log_binned(values: &[f64], bins: usize) -> Self {
        let positive: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
        let zeros = (values.len() - positive.len()) as u64;
        let lo = positive.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = positive.iter().copied().fold(0.0, f64::max);
        if positive.is_empty() {
            return Self { edges: Vec::new(), counts: Vec::new(), zeros, log_scale: true };
        }
        Self::log_binned_in(values, bins, lo, hi)
    }

    /// Log bins over `[lo, hi]`; values outside are clamped into the end bins.
    pub fn log_binned_in(values: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        let bins = bins.max(1);
        let (a, b) = (lo.ln(), hi.ln().max(lo.ln()));
        let width = if b > a { (b - a) / bins as f64 } else { 1.0 };
        let edges: Vec<f64> = (0..=bins).map(|k| (a + width * k as f64).exp()).collect();
        let mut counts = vec![0; bins];
        let mut zeros = 0;
        for &v in values {
            if v <= 0.0 {
                zeros += 1;
                continue;
            }
            let k = ((v.ln() - a) / width).floor();
            let k = if k.is_finite() { k.clamp(0.0, (bins - 1) as f64) as usize } else { 0 };
            counts[k] += 1;
        }
        Self { edges, counts, zeros, log_scale: true }
    }

    pub fn mass(&self) -> u64 {
        self.zeros + self.counts.iter().sum::<u64>()
    }
}

/// Linear-interpolation quantile of unsorted data.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub p95_loss: f64,
    pub max_cascade: usize,
    pub median_volume: Option<f64>,
    /// Median of `|Δ^(−mn) EL|` over all liabilities at the volume step.
    pub median_abs_marginal: Option<f64>,
    pub mean_loss: f64,
    pub cascade_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub mode: TaxMode,
    pub n_runs: usize,
    pub seeds: (u64, u64),
    pub degenerate_seeds: Vec<u64>,
    pub cascade_runs: usize,
    /// Bin 0 counts cascade-free runs.
    pub cascade_size: Histogram,
    /// All runs; cascade-free runs count as zero loss.
    pub losses: Histogram,
    pub losses_given_cascade: Histogram,
    pub volume: Histogram,
    pub volume_missing: usize,
    /// Mean DebtRank by rank (largest first) over all samples.
    pub rank_profile: Vec<f64>,
    pub scatter: Vec<ScatterPoint>,
    pub stats: BatchStats,
}

pub const LOG_BINS: usize = 30;

impl BatchSummary {
    /// Pure fold over `records`; their order does not matter.
    pub fn from_records(config: &ModelConfig, records: &[RunRecord]) -> Self {
        let mut records: Vec<&RunRecord> = records.iter().collect();
        records.sort_by_key(|r| r.seed);
        let sizes: Vec<usize> = records
            .iter()
            .map(|r| r.cascade.as_ref().map_or(0, |c| c.cascade_size))
            .collect();
        let losses: Vec<f64> = records
            .iter()
            .map(|r| r.cascade.as_ref().map_or(0.0, |c| c.total_losses))
            .collect();
        let conditional: Vec<f64> = records
            .iter()
            .filter_map(|r| r.cascade.as_ref().map(|c| c.total_losses))
            .collect();
        let volumes: Vec<f64> = records.iter().filter_map(|r| r.volume_at_t).collect();

        let mut rank_sum = vec![0.0; config.banks];
        let mut samples = 0usize;
        for r in &records {
            for s in &r.risk_samples {
                let mut sorted = s.r.clone();
                sorted.sort_by(|a, b| b.total_cmp(a));
                for (acc, x) in rank_sum.iter_mut().zip(&sorted) {
                    *acc += x;
                }
                samples += 1;
            }
        }
        let rank_profile = if samples > 0 {
            rank_sum.iter().map(|x| x / samples as f64).collect()
        } else {
            Vec::new()
        };

        let scatter: Vec<ScatterPoint> =
            records.iter().flat_map(|r| r.marginal.iter().cloned()).collect();
        let abs_effects: Vec<f64> = scatter.iter().map(|p| p.effect.abs()).collect();
        let n = records.len();
        let stats = BatchStats {
            p95_loss: quantile(&losses, 0.95).unwrap_or(0.0),
            max_cascade: sizes.iter().copied().max().unwrap_or(0),
            median_volume: quantile(&volumes, 0.5),
            median_abs_marginal: quantile(&abs_effects, 0.5),
            mean_loss: if n > 0 { losses.iter().sum::<f64>() / n as f64 } else { 0.0 },
            cascade_share: if n > 0 { conditional.len() as f64 / n as f64 } else { 0.0 },
        };
        Self {
            mode: config.tax_mode,
            n_runs: n,
            seeds: (
                records.first().map_or(0, |r| r.seed),
                records.last().map_or(0, |r| r.seed),
            ),
            degenerate_seeds: records.iter().filter(|r| r.degenerate).map(|r| r.seed).collect(),
            cascade_runs: conditional.len(),
            cascade_size: Histogram::integer(&sizes, config.banks),
            losses: Histogram::log_binned(&losses, LOG_BINS),
            losses_given_cascade: Histogram::log_binned(&conditional, LOG_BINS),
            volume: Histogram::log_binned(&volumes, LOG_BINS),
            volume_missing: n - volumes.len(),
            rank_profile,
            scatter,
            stats,
        }
    }
}
