//! Monte Carlo summary statistics.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{mean, median};
use crate::result::ConfidenceInterval;

/// Centre of the absolute deviations reported as MAD.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MadCenter {
    /// `median |est - truth|`.
    #[default]
    Truth,
    /// `median |est - median(est)|`.
    Median,
}

/// Statistics of one parameter across replications.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    /// Parameter name.
    pub name: String,
    /// Mean bias.
    pub mbias: f64,
    /// Root mean squared error.
    pub rmse: f64,
    /// Median bias.
    pub med: f64,
    /// Median absolute deviation.
    pub mad: f64,
    /// Empirical coverage of the confidence intervals, when available.
    pub coverage: Option<f64>,
    /// Mean interval length, when available.
    pub length: Option<f64>,
}

/// One row of statistics per parameter.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    /// Number of replications summarized.
    pub replications: usize,
    /// Per-parameter rows.
    pub params: Vec<ParamSummary>,
}

impl SummaryTable {
    /// Row of the named parameter.
    pub fn get(&self, name: &str) -> Option<&ParamSummary> {
        self.params.iter().find(|p| p.name == name)
    }
}

/// Statistics of a single column of estimates.
pub fn summarize_column(estimates: &[f64], truth: f64, center: MadCenter) -> Result<(f64, f64, f64, f64)> {
    if estimates.is_empty() {
        return Err(Error::input("at least one replication is required"));
    }
    let err: Vec<f64> = estimates.iter().map(|e| e - truth).collect();
    let mbias = mean(&err);
    let rmse = libm::sqrt(err.iter().map(|e| e * e).sum::<f64>() / err.len() as f64);
    let med = median(&err);
    let c = match center {
        MadCenter::Truth => 0.0,
        MadCenter::Median => med,
    };
    let abs: Vec<f64> = err.iter().map(|e| libm::fabs(e - c)).collect();
    Ok((mbias, rmse, med, median(&abs)))
}

/// Summary of an `R x p` matrix of estimates given as rows.
pub fn summarize(names: &[String], estimates: &[Vec<f64>], truth: &[f64]) -> Result<SummaryTable> {
    summarize_with(names, estimates, truth, MadCenter::Truth)
}

/// [`summarize`] with a choice of MAD centre.
pub fn summarize_with(names: &[String], estimates: &[Vec<f64>], truth: &[f64], center: MadCenter) -> Result<SummaryTable> {
    if names.len() != truth.len() || estimates.iter().any(|r| r.len() != truth.len()) {
        return Err(Error::input("estimate rows, names and truth must have equal length"));
    }
    let mut params = Vec::with_capacity(truth.len());
    for (j, name) in names.iter().enumerate() {
        let col: Vec<f64> = estimates.iter().map(|r| r[j]).collect();
        let (mbias, rmse, med, mad) = summarize_column(&col, truth[j], center)?;
        params.push(ParamSummary { name: name.clone(), mbias, rmse, med, mad, coverage: None, length: None });
    }
    Ok(SummaryTable { replications: estimates.len(), params })
}

/// Fraction of closed intervals containing `truth`, and their mean length.
pub fn coverage(cis: &[ConfidenceInterval], truth: f64) -> Result<(f64, f64)> {
    if cis.is_empty() {
        return Err(Error::input("no confidence intervals"));
    }
    if cis.iter().any(|c| !(c.lower <= c.upper)) {
        return Err(Error::input("interval with lo > hi"));
    }
    let hit = cis.iter().filter(|c| c.lower <= truth && truth <= c.upper).count();
    let len = cis.iter().map(|c| c.upper - c.lower).sum::<f64>() / cis.len() as f64;
    Ok((hit as f64 / cis.len() as f64, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hand_values() {
        let (b, r, m, a) = summarize_column(&[0.9, 1.0, 1.2], 1.0, MadCenter::Truth).unwrap();
        assert!((b - 0.1 / 3.0).abs() < 1e-12);
        assert!((r - libm::sqrt(0.05 / 3.0)).abs() < 1e-12);
        assert!((b - 0.03333).abs() < 1e-5 && (r - 0.12910).abs() < 1e-5);
        assert!(m.abs() < 1e-12);
        assert!((a - 0.1).abs() < 1e-12);
        let single = summarize_column(&[1.3], 1.0, MadCenter::Truth).unwrap();
        assert!((single.0 - 0.3).abs() < 1e-12 && (single.1 - 0.3).abs() < 1e-12 && (single.2 - 0.3).abs() < 1e-12);
        assert!(summarize_column(&[], 0.0, MadCenter::Truth).is_err());
    }

    #[test]
    fn coverage_hand_values() {
        let ci = |lo, hi| ConfidenceInterval { lower: lo, upper: hi };
        let (c, l) = coverage(&[ci(0.5, 1.5), ci(1.1, 1.4), ci(0.8, 1.2)], 1.0).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-12 && (l - 1.7 / 3.0).abs() < 1e-12);
        assert_eq!(coverage(&[ci(1.0, 1.0)], 1.0).unwrap(), (1.0, 0.0));
        assert!(coverage(&[], 1.0).is_err());
        assert!(coverage(&[ci(2.0, 1.0)], 1.0).is_err());
    }

    #[test]
    fn table_shape() {
        let t = summarize(&["a".into(), "b".into()], &[vec![1.0, 2.0], vec![1.5, 2.5]], &[1.0, 2.0]).unwrap();
        assert_eq!(t.replications, 2);
        assert!((t.get("b").unwrap().mbias - 0.25).abs() < 1e-12);
        assert!(summarize(&["a".into()], &[vec![1.0, 2.0]], &[1.0]).is_err());
    }
}
