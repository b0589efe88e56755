//! Monte Carlo subcommands.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use srt_abm::metrics::LOG_BINS;
use srt_abm::{run_records, BatchSummary, Histogram, ModelConfig, RunRecord, TaxMode};

use crate::meta::{self, Metadata};

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// JSON model configuration; missing fields take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of runs; seeds are `seed .. seed + runs`.
    #[arg(long, default_value_t = 200)]
    pub runs: usize,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads, 0 for all cores. Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

impl BatchArgs {
    fn load_config(&self) -> Result<ModelConfig> {
        let config = match &self.config {
            Some(path) => serde_json::from_slice(&meta::read(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
            None => ModelConfig::default(),
        };
        if self.runs == 0 {
            bail!("--runs must be at least 1");
        }
        Ok(config)
    }

    fn prepare_out(&self) -> Result<&Path> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        Ok(&self.out)
    }

    fn records(&self, config: &ModelConfig) -> Result<Vec<RunRecord>> {
        Ok(run_records(config, self.runs, self.seed, self.workers)?)
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub batch: BatchArgs,
    /// Tax regime; overrides the configuration's `tax_mode`.
    #[arg(long)]
    pub mode: Option<TaxMode>,
}

#[derive(Debug, Serialize)]
struct SummaryOutput<'a> {
    metadata: Metadata,
    summary: &'a BatchSummary,
}

/// Writes `config.json`, `records.jsonl` and `summary.json`.
pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut config = args.batch.load_config()?;
    if let Some(mode) = args.mode {
        config.tax_mode = mode;
    }
    config.validate()?;
    let dir = args.batch.prepare_out()?;
    let records = args.batch.records(&config)?;
    let summary = BatchSummary::from_records(&config, &records);
    let metadata = metadata("simulate", &config, args.batch.seed)?;

    write(&dir.join("config.json"), &meta::json(&config)?)?;
    write(&dir.join("records.jsonl"), &jsonl(&records)?)?;
    let output = SummaryOutput { metadata, summary: &summary };
    write(&dir.join("summary.json"), &meta::json(&output)?)
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub batch: BatchArgs,
}

#[derive(Debug, Serialize)]
struct ComparisonOutput<'a> {
    metadata: Metadata,
    summaries: Vec<&'a BatchSummary>,
}

/// Runs every tax regime on the same seeds and writes side-by-side
/// histograms next to the per-mode records and summaries.
pub fn compare(args: &CompareArgs) -> Result<()> {
    let base = args.batch.load_config()?;
    base.validate()?;
    let dir = args.batch.prepare_out()?;
    let metadata = metadata("compare", &base, args.batch.seed)?;

    let mut summaries = Vec::new();
    let mut all_records = Vec::new();
    for mode in TaxMode::ALL {
        let config = base.clone().with_mode(mode);
        let records = args.batch.records(&config)?;
        write(&dir.join(format!("records_{mode}.jsonl")), &jsonl(&records)?)?;
        summaries.push(BatchSummary::from_records(&config, &records));
        all_records.push(records);
    }

    write(&dir.join("config.json"), &meta::json(&base)?)?;
    let header = metadata.csv_header()?;
    let sizes: Vec<Vec<usize>> = all_records
        .iter()
        .map(|rs| rs.iter().map(|r| r.cascade.as_ref().map_or(0, |c| c.cascade_size)).collect())
        .collect();
    let size_hists: Vec<Histogram> =
        sizes.iter().map(|s| Histogram::integer(s, base.banks)).collect();
    write(&dir.join("cascade_sizes.csv"), &integer_table(&header, &size_hists)?)?;

    let losses: Vec<Vec<f64>> = all_records
        .iter()
        .map(|rs| rs.iter().map(|r| r.cascade.as_ref().map_or(0.0, |c| c.total_losses)).collect())
        .collect();
    write(&dir.join("losses.csv"), &log_table(&header, &losses)?)?;

    let volumes: Vec<Vec<f64>> = all_records
        .iter()
        .map(|rs| rs.iter().filter_map(|r| r.volume_at_t).collect())
        .collect();
    write(&dir.join("volumes.csv"), &log_table(&header, &volumes)?)?;

    let output = ComparisonOutput {
        metadata,
        summaries: summaries.iter().collect(),
    };
    write(&dir.join("comparison.json"), &meta::json(&output)?)
}

fn metadata(command: &'static str, config: &ModelConfig, seed: u64) -> Result<Metadata> {
    Metadata::new(command, config, config.value_weights, Some(seed))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn jsonl(records: &[RunRecord]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    Ok(out)
}

fn mode_header() -> Vec<String> {
    TaxMode::ALL.iter().map(|m| m.to_string()).collect()
}

/// `size,none,srt,ftt`.
fn integer_table(header: &str, hists: &[Histogram]) -> Result<Vec<u8>> {
    let mut out = header.as_bytes().to_vec();
    {
        let mut csv = csv::Writer::from_writer(&mut out);
        let mut head = vec!["size".to_string()];
        head.extend(mode_header());
        csv.write_record(&head)?;
        for k in 0..hists[0].counts.len() {
            let mut row = vec![k.to_string()];
            row.extend(hists.iter().map(|h| h.counts[k].to_string()));
            csv.write_record(&row)?;
        }
        csv.flush()?;
    }
    Ok(out)
}

/// `bin_lo,bin_hi,none,srt,ftt` on log bins shared by all modes. The first
/// row, with both edges zero, counts zero values.
fn log_table(header: &str, values: &[Vec<f64>]) -> Result<Vec<u8>> {
    let positive = values.iter().flatten().copied().filter(|&v| v > 0.0);
    let lo = positive.clone().fold(f64::INFINITY, f64::min);
    let hi = positive.fold(0.0, f64::max);
    let hists: Vec<Histogram> = if lo.is_finite() {
        values.iter().map(|v| Histogram::log_binned_in(v, LOG_BINS, lo, hi)).collect()
    } else {
        values.iter().map(|v| Histogram::log_binned(v, LOG_BINS)).collect()
    };

    let mut out = header.as_bytes().to_vec();
    {
        let mut csv = csv::Writer::from_writer(&mut out);
        let mut head = vec!["bin_lo".to_string(), "bin_hi".to_string()];
        head.extend(mode_header());
        csv.write_record(&head)?;
        let mut zeros = vec!["0".to_string(), "0".to_string()];
        zeros.extend(hists.iter().map(|h| h.zeros.to_string()));
        csv.write_record(&zeros)?;
        for k in 0..hists[0].counts.len() {
            let edges = &hists[0].edges;
            let mut row = vec![edges[k].to_string(), edges[k + 1].to_string()];
            row.extend(hists.iter().map(|h| h.counts[k].to_string()));
            csv.write_record(&row)?;
        }
        csv.flush()?;
    }
    Ok(out)
}
