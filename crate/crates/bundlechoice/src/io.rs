//! CSV datasets and JSON documents.
//!
//! A dataset file has one row per observation (cross section) or per
//! agent-period (panel) with the header
//! `id[,t],d1,d2,x1_1..x1_k1,x2_1..x2_k1,w_1..w_k2,s_1..s_k3`.
//! Panel rows may come in any order; each agent must appear once in every
//! period `t = 1..T`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use bundlechoice_core::designs::SimulatedData;
use bundlechoice_core::{Block, ChoiceOutcome, ColumnKinds, Covariates, CrossSectionDataset, PanelDataset};
use bundlechoice_core::data::PanelPeriod;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// A cross-sectional or panel sample.
#[derive(Clone, Debug, PartialEq)]
pub enum Dataset {
    /// One row per agent.
    Cross(CrossSectionDataset),
    /// One row per agent and period.
    Panel(PanelDataset),
}

impl From<SimulatedData> for Dataset {
    fn from(d: SimulatedData) -> Self {
        match d {
            SimulatedData::Cross(c) => Dataset::Cross(c),
            SimulatedData::Panel(p) => Dataset::Panel(p),
        }
    }
}

impl Dataset {
    /// Column widths `(k1, k2, k3)`.
    pub fn widths(&self) -> (usize, usize, usize) {
        let c = match self {
            Dataset::Cross(d) => &d.covariates,
            Dataset::Panel(d) => &d.periods[0].covariates,
        };
        (c.k1(), c.k2(), c.k3())
    }

    /// Discreteness flags.
    pub fn kinds(&self) -> &ColumnKinds {
        match self {
            Dataset::Cross(d) => &d.kinds,
            Dataset::Panel(d) => &d.kinds,
        }
    }

    /// Same data with different discreteness flags, revalidated.
    pub fn with_kinds(self, kinds: ColumnKinds) -> Result<Self> {
        Ok(match self {
            Dataset::Cross(d) => Dataset::Cross(CrossSectionDataset::new(d.covariates, kinds, d.choices)?),
            Dataset::Panel(d) => Dataset::Panel(PanelDataset::new(d.periods, kinds)?),
        })
    }
}

/// Column header for widths `(k1, k2, k3)`.
pub fn header(panel: bool, k1: usize, k2: usize, k3: usize) -> Vec<String> {
    let mut h = vec!["id".to_string()];
    if panel {
        h.push("t".into());
    }
    h.push("d1".into());
    h.push("d2".into());
    h.extend((1..=k1).map(|j| format!("x1_{j}")));
    h.extend((1..=k1).map(|j| format!("x2_{j}")));
    h.extend((1..=k2).map(|j| format!("w_{j}")));
    h.extend((1..=k3).map(|j| format!("s_{j}")));
    h
}

/// Renders a float with 17 significant digits.
pub fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

fn covariate_fields(c: &Covariates, i: usize, out: &mut Vec<String>) {
    let r = c.row(i);
    for v in r.x1.iter().chain(r.x2).chain(r.w).chain(r.s) {
        out.push(float17(*v));
    }
}

fn bit(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// Writes a dataset as CSV.
pub fn write_dataset<W: Write>(data: &Dataset, writer: W) -> Result<()> {
    let (k1, k2, k3) = data.widths();
    let mut w = csv::Writer::from_writer(writer);
    match data {
        Dataset::Cross(d) => {
            w.write_record(header(false, k1, k2, k3))?;
            for i in 0..d.len() {
                let mut rec = vec![(i + 1).to_string(), bit(d.choices[i].d1), bit(d.choices[i].d2)];
                covariate_fields(&d.covariates, i, &mut rec);
                w.write_record(rec)?;
            }
        }
        Dataset::Panel(d) => {
            w.write_record(header(true, k1, k2, k3))?;
            for i in 0..d.n() {
                for (t, p) in d.periods.iter().enumerate() {
                    let mut rec = vec![(i + 1).to_string(), (t + 1).to_string(), bit(p.choices[i].d1), bit(p.choices[i].d2)];
                    covariate_fields(&p.covariates, i, &mut rec);
                    w.write_record(rec)?;
                }
            }
        }
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Writes a dataset to `path`.
pub fn write_dataset_file(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset(data, BufWriter::new(f))
}

struct Layout {
    panel: bool,
    k1: usize,
    k2: usize,
    k3: usize,
}

fn parse_header(h: &csv::StringRecord) -> Result<Layout> {
    let names: Vec<&str> = h.iter().map(str::trim).collect();
    let panel = names.get(1) == Some(&"t");
    let count = |prefix: &str| names.iter().filter(|n| n.strip_prefix(prefix).is_some_and(|r| r.parse::<usize>().is_ok())).count();
    let (k1, k1b, k2, k3) = (count("x1_"), count("x2_"), count("w_"), count("s_"));
    if k1 != k1b {
        return Err(Error::format(format!("header has {k1} x1 columns but {k1b} x2 columns")));
    }
    let expected = header(panel, k1, k2, k3);
    if names != expected {
        return Err(Error::format(format!("unexpected header {:?}; expected {:?}", names.join(","), expected.join(","))));
    }
    if k1 == 0 || k2 == 0 {
        return Err(Error::format("at least one x and one w column are required"));
    }
    Ok(Layout { panel, k1, k2, k3 })
}

fn parse_f64(s: &str, line: u64, col: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::format(format!("line {line}, column {col}: {s:?} is not a number")))
}

fn parse_bit(s: &str, line: u64, col: &str) -> Result<u8> {
    match s.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::format(format!("line {line}, column {col}: expected 0 or 1, found {other:?}"))),
    }
}

struct Row {
    id: String,
    t: usize,
    choice: ChoiceOutcome,
    values: Vec<f64>,
}

/// Infers discreteness: a column is discrete when every value is an
/// integer and it takes at most ten distinct values. The `x` flag holds
/// when both the `x1` and the `x2` column qualify.
pub fn infer_kinds(x1: &Block, x2: &Block, w: &Block, s: &Block) -> ColumnKinds {
    fn discrete(col: &[f64]) -> bool {
        let mut seen: Vec<f64> = Vec::new();
        for &v in col {
            if v.fract() != 0.0 {
                return false;
            }
            if !seen.contains(&v) {
                if seen.len() == 10 {
                    return false;
                }
                seen.push(v);
            }
        }
        true
    }
    let flags = |b: &Block| (0..b.cols()).map(|j| discrete(&b.column(j))).collect::<Vec<_>>();
    let x = flags(x1).into_iter().zip(flags(x2)).map(|(a, b)| a && b).collect();
    ColumnKinds { x, w: flags(w), s: flags(s) }
}

fn blocks(rows: &[&Row], l: &Layout) -> Result<Covariates> {
    let take = |from: usize, k: usize| -> Result<Block> {
        let data: Vec<Vec<f64>> = rows.iter().map(|r| r.values[from..from + k].to_vec()).collect();
        Ok(Block::from_rows(k, &data)?)
    };
    let x1 = take(0, l.k1)?;
    let x2 = take(l.k1, l.k1)?;
    let w = take(2 * l.k1, l.k2)?;
    let s = take(2 * l.k1 + l.k2, l.k3)?;
    Ok(Covariates::new(x1, x2, w, s)?)
}

/// Reads a dataset. Discreteness is taken from `kinds` when given and
/// inferred with [`infer_kinds`] otherwise.
pub fn read_dataset<R: Read>(reader: R, kinds: Option<&ColumnKinds>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let l = parse_header(rdr.headers()?)?;
    let offset = if l.panel { 4 } else { 3 };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let t = if l.panel {
            rec[1].trim().parse::<usize>().map_err(|_| Error::format(format!("line {line}: period {:?} is not a positive integer", &rec[1])))?
        } else {
            1
        };
        let d1 = parse_bit(&rec[offset - 2], line, "d1")?;
        let d2 = parse_bit(&rec[offset - 1], line, "d2")?;
        let names = header(l.panel, l.k1, l.k2, l.k3);
        let values = (offset..rec.len()).map(|j| parse_f64(&rec[j], line, &names[j])).collect::<Result<Vec<_>>>()?;
        rows.push(Row { id: rec[0].trim().to_string(), t, choice: ChoiceOutcome::from_bits(d1, d2)?, values });
    }
    if rows.is_empty() {
        return Err(Error::format("the dataset has no rows"));
    }
    if !l.panel {
        let refs: Vec<&Row> = rows.iter().collect();
        let cov = blocks(&refs, &l)?;
        let kinds = kinds.cloned().unwrap_or_else(|| infer_kinds(&cov.x1, &cov.x2, &cov.w, &cov.s));
        let choices = rows.iter().map(|r| r.choice).collect();
        return Ok(Dataset::Cross(CrossSectionDataset::new(cov, kinds, choices)?));
    }

    let mut agents: Vec<String> = Vec::new();
    let mut known = std::collections::HashSet::new();
    let mut by_period: BTreeMap<usize, BTreeMap<String, &Row>> = BTreeMap::new();
    for r in &rows {
        if known.insert(r.id.clone()) {
            agents.push(r.id.clone());
        }
        if by_period.entry(r.t).or_default().insert(r.id.clone(), r).is_some() {
            return Err(Error::format(format!("agent {} appears twice in period {}", r.id, r.t)));
        }
    }
    let periods: Vec<usize> = by_period.keys().copied().collect();
    if periods.first() != Some(&1) || periods.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::format(format!("periods must be numbered 1..T, found {periods:?}")));
    }
    let mut per = Vec::with_capacity(periods.len());
    for t in &periods {
        let m = &by_period[t];
        let ordered = agents
            .iter()
            .map(|a| m.get(a).copied().ok_or_else(|| Error::format(format!("agent {a} is missing in period {t}"))))
            .collect::<Result<Vec<_>>>()?;
        per.push((blocks(&ordered, &l)?, ordered.iter().map(|r| r.choice).collect::<Vec<_>>()));
    }
    let kinds = match kinds {
        Some(k) => k.clone(),
        None => {
            let stack = |f: fn(&Covariates) -> &Block| -> Result<Block> {
                let cols = f(&per[0].0).cols();
                let rows: Vec<Vec<f64>> = per.iter().flat_map(|(c, _)| (0..c.n()).map(move |i| f(c).row(i).to_vec())).collect();
                Ok(Block::from_rows(cols, &rows)?)
            };
            infer_kinds(&stack(|c| &c.x1)?, &stack(|c| &c.x2)?, &stack(|c| &c.w)?, &stack(|c| &c.s)?)
        }
    };
    let periods = per.into_iter().map(|(covariates, choices)| PanelPeriod { covariates, choices }).collect();
    Ok(Dataset::Panel(PanelDataset::new(periods, kinds)?))
}

/// Reads a dataset from `path`.
pub fn read_dataset_file(path: impl AsRef<Path>, kinds: Option<&ColumnKinds>) -> Result<Dataset> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(std::io::BufReader::new(f), kinds)
}

/// Writes pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Reads a JSON document.
pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(std::io::BufReader::new(f))?)
}
