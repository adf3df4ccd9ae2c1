//! Monte Carlo tables: one row per sample size, four statistics per
//! parameter (MBIAS, RMSE, MED, MAD) followed by COVERAGE and LENGTH when
//! confidence intervals were computed. Values carry three decimals.

use std::io::Read;
use std::str::FromStr;

use bundlechoice_core::summary::{ParamSummary, SummaryTable};

use crate::error::{Error, Result};

/// Output format of [`emit_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    /// Comma-separated with a single header row.
    Csv,
    /// Aligned columns under a parameter header line.
    Text,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "text" | "txt" => Ok(Self::Text),
            _ => Err(Error::format(format!("unknown table format {s:?}"))),
        }
    }
}

/// Summary of one sample size.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    /// Sample size.
    pub n: usize,
    /// Statistics per parameter.
    pub summary: SummaryTable,
}

const BASE: [&str; 4] = ["MBIAS", "RMSE", "MED", "MAD"];
const CI: [&str; 2] = ["COVERAGE", "LENGTH"];

struct Column {
    param: String,
    stats: Vec<&'static str>,
}

fn columns(rows: &[TableRow]) -> Vec<Column> {
    let mut cols: Vec<Column> = Vec::new();
    for row in rows {
        for p in &row.summary.params {
            let pos = cols.iter().position(|c| c.param == p.name).unwrap_or_else(|| {
                cols.push(Column { param: p.name.clone(), stats: BASE.to_vec() });
                cols.len() - 1
            });
            if p.coverage.is_some() && cols[pos].stats.len() == 4 {
                cols[pos].stats.extend(CI);
            }
        }
    }
    cols
}

fn stat(p: &ParamSummary, name: &str) -> Option<f64> {
    match name {
        "MBIAS" => Some(p.mbias),
        "RMSE" => Some(p.rmse),
        "MED" => Some(p.med),
        "MAD" => Some(p.mad),
        "COVERAGE" => p.coverage,
        "LENGTH" => p.length,
        _ => None,
    }
}

/// Three-decimal rendering without a negative zero.
pub fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn cells(row: &TableRow, cols: &[Column]) -> Vec<String> {
    let mut out = Vec::new();
    for c in cols {
        let p = row.summary.get(&c.param);
        for s in &c.stats {
            out.push(p.and_then(|p| stat(p, s)).map(fmt3).unwrap_or_default());
        }
    }
    out
}

/// Renders the rows.
pub fn emit_table(rows: &[TableRow], format: TableFormat) -> String {
    let cols = columns(rows);
    match format {
        TableFormat::Csv => {
            let mut out = String::from("N");
            for c in &cols {
                for s in &c.stats {
                    out.push_str(&format!(",{}.{s}", c.param));
                }
            }
            out.push('\n');
            for row in rows {
                out.push_str(&row.n.to_string());
                for cell in cells(row, &cols) {
                    out.push(',');
                    out.push_str(&cell);
                }
                out.push('\n');
            }
            out
        }
        TableFormat::Text => {
            const W: usize = 9;
            let mut top = format!("{:>6}", "");
            let mut sub = format!("{:>6}", "N");
            for c in &cols {
                let width = W * c.stats.len();
                top.push_str(&format!("{:^width$}", c.param));
                for s in &c.stats {
                    sub.push_str(&format!("{s:>W$}"));
                }
            }
            let mut out = format!("{}\n{sub}\n", top.trim_end());
            for row in rows {
                out.push_str(&format!("{:>6}", row.n));
                for cell in cells(row, &cols) {
                    out.push_str(&format!("{cell:>W$}"));
                }
                out.push('\n');
            }
            out
        }
    }
}

/// A table read back from CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedTable {
    /// Column headers after `N`, e.g. `beta_2.RMSE`.
    pub columns: Vec<String>,
    /// Sample size and values per row; empty cells are `None`.
    pub rows: Vec<(usize, Vec<Option<f64>>)>,
}

impl ParsedTable {
    /// Value in the row for sample size `n` and the named column.
    pub fn get(&self, n: usize, column: &str) -> Option<f64> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.iter().find(|r| r.0 == n).and_then(|r| r.1[j])
    }
}

/// Parses CSV produced by [`emit_table`].
pub fn read_table<R: Read>(reader: R) -> Result<ParsedTable> {
    let mut rdr = csv::Reader::from_reader(reader);
    let h = rdr.headers()?.clone();
    if h.get(0) != Some("N") {
        return Err(Error::format("table header must start with N"));
    }
    let columns: Vec<String> = h.iter().skip(1).map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let n = rec[0].parse().map_err(|_| Error::format(format!("bad sample size {:?}", &rec[0])))?;
        let vals = rec
            .iter()
            .skip(1)
            .map(|c| if c.is_empty() { Ok(None) } else { c.parse().map(Some).map_err(|_| Error::format(format!("bad table cell {c:?}"))) })
            .collect::<Result<Vec<_>>>()?;
        rows.push((n, vals));
    }
    Ok(ParsedTable { columns, rows })
}
