//! Result types shared by all estimators.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::ParamVector;
use crate::error::{Error, Result};
use crate::math::{quantile_sorted, sorted};

/// Estimator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Cross-sectional maximum rank correlation.
    Mrc,
    /// Cross-sectional least absolute deviations.
    Lad,
    /// Panel maximum score.
    PanelMs,
    /// Panel least absolute deviations.
    PanelLad,
}

impl Method {
    /// Whether the method consumes panel data.
    pub fn is_panel(self) -> bool {
        matches!(self, Method::PanelMs | Method::PanelLad)
    }

    /// Command-line spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mrc => "mrc",
            Method::Lad => "lad",
            Method::PanelMs => "panel-ms",
            Method::PanelLad => "panel-lad",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mrc" => Ok(Method::Mrc),
            "lad" => Ok(Method::Lad),
            "panel-ms" | "panel_ms" => Ok(Method::PanelMs),
            "panel-lad" | "panel_lad" => Ok(Method::PanelLad),
            _ => Err(Error::input(alloc::format!("unknown method {s:?}"))),
        }
    }
}

/// A closed interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    /// Lower endpoint.
    pub lower: f64,
    /// Upper endpoint.
    pub upper: f64,
}

impl ConfidenceInterval {
    /// Whether `x` lies in the closed interval.
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// `upper - lower`.
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Equal-tailed percentile interval at coverage `level` from the draws of
/// one coordinate.
pub fn percentile_interval(draws: &[f64], level: f64) -> Result<ConfidenceInterval> {
    if draws.is_empty() {
        return Err(Error::input("percentile interval of zero draws"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::config("confidence level must lie in (0, 1)"));
    }
    let s = sorted(draws);
    let a = (1.0 - level) / 2.0;
    Ok(ConfidenceInterval { lower: quantile_sorted(&s, a), upper: quantile_sorted(&s, 1.0 - a) })
}

/// Bootstrap draws and the intervals built from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    /// Successful draws, one row per draw, one column per free coordinate.
    pub draws: Vec<Vec<f64>>,
    /// One interval per free coordinate.
    pub intervals: Vec<ConfidenceInterval>,
    /// Nominal coverage of the intervals.
    pub level: f64,
    /// Number of draws requested.
    pub requested: usize,
    /// Draws discarded because the resampled criterion carried no variation.
    pub failed: usize,
    /// Seed of the bootstrap stream.
    pub seed: u64,
    /// Perturbation sizes `(eps1, eps2)` for the numerical bootstrap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<[f64; 2]>,
}

/// A named scalar, used for bandwidths and other tuning values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Named {
    /// Name, e.g. `stage1.x2_1`.
    pub name: String,
    /// Value.
    pub value: f64,
}

impl Named {
    pub(crate) fn new(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value }
    }
}

/// First-stage fit summary for the LAD estimators.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FirstStageDiagnostics {
    /// `"nadaraya-watson"` or `"mlp"`.
    pub kind: String,
    /// Fraction of predictions clamped into `[0, 1]`.
    pub clamp_rate: f64,
    /// Final training loss per alternative (neural network only).
    pub training_loss: Vec<f64>,
    /// Queries with no positive kernel mass that fell back to the sample
    /// frequency.
    pub fallbacks: usize,
}

/// Diagnostics recorded during estimation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// DE generations per stage.
    pub generations: Vec<usize>,
    /// Objective evaluations per stage.
    pub evaluations: Vec<usize>,
    /// Nonzero terms in each stage's criterion.
    pub criterion_terms: Vec<usize>,
    /// Number of switching agents (panel estimators).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub switchers: Option<usize>,
    /// First-stage summary (LAD estimators).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_stage: Option<FirstStageDiagnostics>,
}

/// Point estimates with everything needed to reproduce them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    /// Estimator.
    pub method: Method,
    /// Full coefficient vectors, normalized entries included.
    pub params: ParamVector,
    /// Names of the free coordinates.
    pub names: Vec<String>,
    /// Estimated free coordinates, in the order of `names`.
    pub estimates: Vec<f64>,
    /// Criterion value at the optimum of each stage.
    pub criterion_values: Vec<f64>,
    /// Bandwidths and other tuning values used.
    pub tuning: Vec<Named>,
    /// Seed of the optimizer stream.
    pub seed: u64,
    /// Diagnostics.
    pub diagnostics: Diagnostics,
    /// Bootstrap output when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bootstrap: Option<BootstrapResult>,
}

impl EstimationResult {
    /// Value of the free coordinate called `name`.
    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|k| self.estimates[k])
    }
}

/// Outcome of a test for a positive interaction effect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaTestResult {
    /// The statistic on the full sample.
    pub statistic: f64,
    /// 5% quantile of the bootstrap statistics.
    pub lower_5pct: f64,
    /// `lower_5pct > 0`: the data favour a positive interaction effect.
    pub positive_effect: bool,
    /// Bootstrap statistics, in draw order.
    pub draws: Vec<f64>,
    /// Seed of the bootstrap stream.
    pub seed: u64,
}

impl EtaTestResult {
    pub(crate) fn from_draws(statistic: f64, draws: Vec<f64>, seed: u64) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::input("the interaction test needs at least one bootstrap draw"));
        }
        let q = quantile_sorted(&sorted(&draws), 0.05);
        Ok(Self { statistic, lower_5pct: q, positive_effect: q > 0.0, draws, seed })
    }
}
