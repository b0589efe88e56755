//! Subcommands working on an ingested liability network.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use srt_abm::marginal_scatter;
use srt_core::generate::{scale_free, ScaleFreeParams};
use srt_core::io::{parse_network, write_edges, write_nodes, NetworkFile};
use srt_core::{
    expected_loss_node, risk_profile, DefaultModel, LoanRecord, RiskDesk, SrtQuote, ValueWeights,
};

use crate::meta::{self, Metadata};

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Edge file: debtor_id,creditor_id,amount.
    #[arg(long)]
    pub edges: PathBuf,
    /// Node file: bank_id,capital[,p_def,...].
    #[arg(long)]
    pub nodes: PathBuf,
    /// Balance-sheet side that sets the economic value weights.
    #[arg(long, default_value_t = ValueWeights::Liabilities)]
    pub value_weights: ValueWeights,
}

struct Loaded {
    file: NetworkFile,
    edges: Vec<u8>,
    nodes: Vec<u8>,
}

impl NetworkArgs {
    fn load(&self) -> Result<Loaded> {
        let edges = meta::read(&self.edges)?;
        let nodes = meta::read(&self.nodes)?;
        let file = parse_network(edges.as_slice(), nodes.as_slice())?;
        Ok(Loaded { file, edges, nodes })
    }
}

impl Loaded {
    fn metadata<C: Serialize>(&self, command: &'static str, config: &C, w: ValueWeights) -> Result<Metadata> {
        Ok(Metadata::new(command, config, w, None)?
            .with_input("edges", &self.edges)
            .with_input("nodes", &self.nodes))
    }

    fn model(&self, rate: f64) -> Result<DefaultModel> {
        Ok(DefaultModel::new(self.file.p_def(), rate, 1)?)
    }

    fn bank(&self, id: &str) -> Result<usize> {
        self.file
            .index_of(id)
            .ok_or_else(|| anyhow!("unknown bank id `{id}`"))
    }
}

#[derive(Debug, Serialize)]
struct WeightsOnly {
    value_weights: ValueWeights,
}

#[derive(Debug, Args)]
pub struct DebtRankArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Per-bank `R_i`, `v_i` and `EL_i`.
pub fn debtrank(args: &DebtRankArgs) -> Result<()> {
    let w = args.network.value_weights;
    let loaded = args.network.load()?;
    let model = loaded.model(0.0)?;
    let profile = risk_profile(&loaded.file.network, &loaded.file.capital(), w);
    let metadata = loaded.metadata("debtrank", &WeightsOnly { value_weights: w }, w)?;

    let mut out = metadata.csv_header()?.into_bytes();
    {
        let mut csv = csv::Writer::from_writer(&mut out);
        csv.write_record(["bank_id", "r", "v", "el"])?;
        for (i, id) in loaded.file.ids.iter().enumerate() {
            let el = expected_loss_node(&profile, &model, i);
            csv.write_record([
                id.clone(),
                profile.r[i].to_string(),
                profile.values.v[i].to_string(),
                el.to_string(),
            ])?;
        }
        csv.flush()?;
    }
    meta::emit(args.out.as_deref(), &out)
}

#[derive(Debug, Args)]
pub struct MarginalArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `(L_mn / V, Δ^(−mn) EL)` for every liability.
pub fn marginal(args: &MarginalArgs) -> Result<()> {
    let w = args.network.value_weights;
    let loaded = args.network.load()?;
    let model = loaded.model(0.0)?;
    let net = &loaded.file.network;
    let points = marginal_scatter(net, &loaded.file.capital(), &model, w);
    let metadata = loaded.metadata("marginal", &WeightsOnly { value_weights: w }, w)?;

    let mut out = metadata.csv_header()?.into_bytes();
    {
        let mut csv = csv::Writer::from_writer(&mut out);
        csv.write_record(["debtor_id", "creditor_id", "amount", "relative_size", "effect"])?;
        for p in &points {
            csv.write_record([
                loaded.file.ids[p.debtor].clone(),
                loaded.file.ids[p.creditor].clone(),
                net.liability(p.debtor, p.creditor).to_string(),
                p.relative_size.to_string(),
                p.effect.to_string(),
            ])?;
        }
        csv.flush()?;
    }
    meta::emit(args.out.as_deref(), &out)
}

#[derive(Debug, Args)]
pub struct QuoteArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Borrowing bank id.
    #[arg(long)]
    pub debtor: String,
    /// Lending bank id.
    #[arg(long)]
    pub creditor: String,
    #[arg(long)]
    pub amount: f64,
    /// Loan term in years.
    #[arg(long)]
    pub term: f64,
    /// Share of the expected systemic loss charged, in (0, 1].
    #[arg(long)]
    pub zeta: f64,
    /// Continuously compounded annual discount rate.
    #[arg(long, default_value_t = 0.0)]
    pub rate: f64,
    /// Output JSON; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct QuoteParams<'a> {
    value_weights: ValueWeights,
    debtor: &'a str,
    creditor: &'a str,
    amount: f64,
    term: f64,
    zeta: f64,
    rate: f64,
}

#[derive(Debug, Serialize)]
struct QuoteOutput<'a> {
    metadata: Metadata,
    debtor_id: &'a str,
    creditor_id: &'a str,
    annual_rate: f64,
    quote: SrtQuote,
}

/// The systemic risk tax on one prospective loan.
pub fn quote(args: &QuoteArgs) -> Result<()> {
    let w = args.network.value_weights;
    let loaded = args.network.load()?;
    let debtor = loaded.bank(&args.debtor)?;
    let creditor = loaded.bank(&args.creditor)?;
    let model = loaded.model(args.rate)?;
    let net = &loaded.file.network;
    let capital = loaded.file.capital();
    let desk = RiskDesk::new(net, &capital, &model, w)?;
    let loan = LoanRecord::new(net.next_loan_id(), debtor, creditor, args.amount);
    let quote = desk.srt_quote(&loan, args.term, args.zeta)?;
    let params = QuoteParams {
        value_weights: w,
        debtor: &args.debtor,
        creditor: &args.creditor,
        amount: args.amount,
        term: args.term,
        zeta: args.zeta,
        rate: args.rate,
    };
    let output = QuoteOutput {
        metadata: loaded.metadata("quote", &params, w)?,
        debtor_id: &args.debtor,
        creditor_id: &args.creditor,
        annual_rate: quote.annual_rate(),
        quote,
    };
    meta::emit(args.out.as_deref(), &meta::json(&output)?)
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 50)]
    pub banks: usize,
    /// Edges attached per new bank.
    #[arg(long, default_value_t = 2)]
    pub attach: usize,
    /// Pareto tail index of exposure sizes.
    #[arg(long, default_value_t = 1.5)]
    pub tail_index: f64,
    #[arg(long, default_value_t = 1.0)]
    pub min_exposure: f64,
    /// Capital as a fraction of interbank claims.
    #[arg(long, default_value_t = 0.3)]
    pub capital_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    pub base_capital: f64,
    #[arg(long, default_value_t = srt_core::io::DEFAULT_P_DEF)]
    pub p_def: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge file to write.
    #[arg(long)]
    pub edges: PathBuf,
    /// Node file to write.
    #[arg(long)]
    pub nodes: PathBuf,
}

/// A synthetic scale-free network in the ingestion format.
pub fn generate(args: &GenerateArgs) -> Result<()> {
    if args.banks < 2 {
        bail!("--banks must be at least 2");
    }
    if !(0.0..1.0).contains(&args.p_def) {
        bail!("--p-def must lie in [0, 1)");
    }
    if !(args.tail_index > 0.0 && args.min_exposure > 0.0) {
        bail!("--tail-index and --min-exposure must be positive");
    }
    if !(args.capital_ratio >= 0.0 && args.base_capital >= 0.0) {
        bail!("--capital-ratio and --base-capital must be non-negative");
    }
    let params = ScaleFreeParams {
        n_banks: args.banks,
        attach: args.attach,
        tail_index: args.tail_index,
        min_exposure: args.min_exposure,
        capital_ratio: args.capital_ratio,
        base_capital: args.base_capital,
        p_def: args.p_def,
    };
    let file = scale_free(&params, &mut ChaCha8Rng::seed_from_u64(args.seed));
    let header = Metadata::new("generate", &params, ValueWeights::Liabilities, Some(args.seed))?
        .csv_header()?;
    write_csv(&args.edges, &header, |out| write_edges(&file, out))?;
    write_csv(&args.nodes, &header, |out| write_nodes(&file, out))
}

fn write_csv<F>(path: &Path, header: &str, body: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), srt_core::io::IoError>,
{
    let mut out = header.as_bytes().to_vec();
    body(&mut out)?;
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
