//! CSV ingestion and emission of liability networks.
//!
//! Edge file: `debtor_id,creditor_id,amount`, one row per exposure.
//! Node file: `bank_id,capital` followed by any of the optional columns
//! `total_assets,total_liabilities,due_from_banks,due_to_banks,liquid_assets,p_def`.
//! Bank ids are free-form strings; banks are indexed in node-file order.
//! Lines starting with `#` are comments, so ids must not start with `#`.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{BankSheet, LiabilityNetwork, LoanRecord};

/// Default probability assumed for banks without a `p_def` column.
pub const DEFAULT_P_DEF: f64 = 0.025;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{file}: line {line}: {message}")]
    Malformed {
        file: &'static str,
        line: u64,
        message: String,
    },
    #[error("edges: line {line}: unknown bank id `{id}`")]
    UnknownId { line: u64, id: String },
    #[error("edges: line {line}: negative amount {amount}")]
    NegativeAmount { line: u64, amount: f64 },
    #[error("edges: line {line}: self-edge on bank `{id}`")]
    SelfEdge { line: u64, id: String },
    #[error("nodes: line {line}: duplicate bank id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Deserialize)]
struct EdgeRow {
    debtor_id: String,
    creditor_id: String,
    amount: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRow {
    bank_id: String,
    capital: f64,
    #[serde(default)]
    total_assets: Option<f64>,
    #[serde(default)]
    total_liabilities: Option<f64>,
    #[serde(default)]
    due_from_banks: Option<f64>,
    #[serde(default)]
    due_to_banks: Option<f64>,
    #[serde(default)]
    liquid_assets: Option<f64>,
    #[serde(default)]
    p_def: Option<f64>,
}

/// A parsed network together with the node table it was built against.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkFile {
    pub ids: Vec<String>,
    pub network: LiabilityNetwork,
    pub sheets: Vec<BankSheet>,
}

impl NetworkFile {
    pub fn capital(&self) -> Vec<f64> {
        self.sheets.iter().map(|s| s.capital).collect()
    }

    pub fn p_def(&self) -> Vec<f64> {
        self.sheets.iter().map(|s| s.default_probability).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

fn read_rows<T, R>(input: R, file: &'static str) -> Result<Vec<(u64, T)>, IoError>
where
    T: serde::de::DeserializeOwned,
    R: Read,
{
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IoError::Malformed {
            file,
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = record.deserialize(Some(&headers)).map_err(|e| IoError::Malformed {
            file,
            line,
            message: e.to_string(),
        })?;
        rows.push((line, row));
    }
    Ok(rows)
}

/// Parses an edge file and a node file. Duplicate `(debtor, creditor)` rows
/// each become one loan, so the matrix entry is their sum.
pub fn parse_network<E: Read, N: Read>(edges: E, nodes: N) -> Result<NetworkFile, IoError> {
    let mut ids = Vec::new();
    let mut index = HashMap::new();
    let mut sheets = Vec::new();

    for (line, row) in read_rows::<NodeRow, _>(nodes, "nodes")? {
        if index.insert(row.bank_id.clone(), ids.len()).is_some() {
            return Err(IoError::DuplicateId { line, id: row.bank_id });
        }
        let sheet = BankSheet {
            capital: row.capital,
            liquidity: row.liquid_assets.unwrap_or(0.0),
            total_assets: row.total_assets,
            total_liabilities: row.total_liabilities,
            due_from_banks: row.due_from_banks,
            due_to_banks: row.due_to_banks,
            liquid_assets: row.liquid_assets,
            default_probability: row.p_def.unwrap_or(DEFAULT_P_DEF),
        };
        sheet.validate().map_err(|e| IoError::Malformed {
            file: "nodes",
            line,
            message: e.to_string(),
        })?;
        ids.push(row.bank_id);
        sheets.push(sheet);
    }

    let mut net = LiabilityNetwork::new(ids.len());
    for (line, row) in read_rows::<EdgeRow, _>(edges, "edges")? {
        let lookup = |id: &String| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| IoError::UnknownId { line, id: id.clone() })
        };
        let debtor = lookup(&row.debtor_id)?;
        let creditor = lookup(&row.creditor_id)?;
        if !(row.amount >= 0.0) {
            return Err(IoError::NegativeAmount { line, amount: row.amount });
        }
        if debtor == creditor {
            return Err(IoError::SelfEdge { line, id: row.debtor_id });
        }
        let id = net.next_loan_id();
        net.insert_loan(LoanRecord::new(id, debtor, creditor, row.amount))
            .map_err(|e| IoError::Malformed {
                file: "edges",
                line,
                message: e.to_string(),
            })?;
    }
    Ok(NetworkFile { ids, network: net, sheets })
}

/// Writes the aggregated edge list, one row per nonzero matrix entry.
pub fn write_edges<W: Write>(file: &NetworkFile, out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["debtor_id", "creditor_id", "amount"])?;
    for (i, j, amount) in file.network.edges() {
        w.write_record([&file.ids[i], &file.ids[j], &amount.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_nodes<W: Write>(file: &NetworkFile, out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    for (id, sheet) in file.ids.iter().zip(&file.sheets) {
        w.serialize(NodeRow {
            bank_id: id.clone(),
            capital: sheet.capital,
            total_assets: sheet.total_assets,
            total_liabilities: sheet.total_liabilities,
            due_from_banks: sheet.due_from_banks,
            due_to_banks: sheet.due_to_banks,
            liquid_assets: sheet.liquid_assets,
            p_def: Some(sheet.default_probability),
        })?;
    }
    w.flush()?;
    Ok(())
}
