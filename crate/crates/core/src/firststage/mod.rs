//! First-stage estimates of choice probabilities and their differences,
//! consumed by the LAD estimators.
//!
//! Cross sections use Nadaraya-Watson regression; panels use one small
//! neural network per alternative on the covariates of both periods.

pub mod mlp;
pub mod nw;

use alloc::vec::Vec;

use crate::data::{Block, ChoiceOutcome, PanelDataset};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, Stream};

pub use mlp::{mlp_predict, mlp_train, Mlp, MlpConfig, MlpModel};
pub use nw::{nw_probability, NwConfig, NwModel};

/// A fitted estimator of `P(Y = d | z)` for one alternative `d`.
#[derive(Clone, Debug)]
pub enum ChoiceProbModel {
    /// Kernel regression; the fitted state is shared across alternatives.
    NadarayaWatson {
        /// Fitted regression.
        model: NwModel,
        /// Alternative whose probability is returned.
        target: ChoiceOutcome,
    },
    /// Neural network.
    Mlp(MlpModel),
}

impl ChoiceProbModel {
    /// Alternative whose probability is modelled.
    pub fn target(&self) -> ChoiceOutcome {
        match self {
            Self::NadarayaWatson { target, .. } => *target,
            Self::Mlp(m) => m.target,
        }
    }

    /// Prediction clamped into `[0, 1]`.
    pub fn predict(&self, z: &[f64]) -> Result<f64> {
        let p = match self {
            Self::NadarayaWatson { model, target } => model.predict_raw(z)?[target.index()],
            Self::Mlp(m) => m.predict(z)?,
        };
        Ok(p.clamp(0.0, 1.0))
    }
}

/// `p_d(z_i) - p_d(z_m)`, in `[-1, 1]`.
pub fn delta_p_hat(model: &ChoiceProbModel, z_i: &[f64], z_m: &[f64]) -> Result<f64> {
    Ok(model.predict(z_i)? - model.predict(z_m)?)
}

/// Fitted cross-sectional probabilities for every row, with fallbacks and
/// clamping counted.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedProbabilities {
    /// Clamped probabilities per row, in the order of [`ChoiceOutcome::ALL`].
    pub probs: Vec<[f64; 4]>,
    /// Individual probabilities that were clamped into `[0, 1]`.
    pub clamped: usize,
    /// Rows whose kernel mass was not positive; they use the sample
    /// frequencies instead.
    pub fallbacks: usize,
}

impl FittedProbabilities {
    /// Fraction of clamped probabilities.
    pub fn clamp_rate(&self) -> f64 {
        if self.probs.is_empty() {
            0.0
        } else {
            self.clamped as f64 / (4 * self.probs.len()) as f64
        }
    }
}

/// Nadaraya-Watson probabilities at every row of `features`. Rows where
/// the higher-order kernel leaves no positive mass fall back to the sample
/// frequencies of the training data.
pub fn fitted_probabilities(model: &NwModel, features: &Block) -> Result<FittedProbabilities> {
    let mut out = FittedProbabilities { probs: Vec::with_capacity(features.rows()), clamped: 0, fallbacks: 0 };
    for r in 0..features.rows() {
        let raw = match model.predict_raw(features.row(r)) {
            Ok(p) => p,
            Err(Error::Degenerate(_)) => {
                out.fallbacks += 1;
                model.frequencies()
            }
            Err(e) => return Err(e),
        };
        let mut p = [0.0; 4];
        for d in 0..4 {
            p[d] = raw[d].clamp(0.0, 1.0);
            if p[d] != raw[d] {
                out.clamped += 1;
            }
        }
        out.probs.push(p);
    }
    Ok(out)
}

/// Four networks, one per alternative, predicting
/// `P(Y_d = 1 in the period with covariates a | covariates a, b)` from the
/// concatenated features `(a, b)` of two periods of the same agent.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PanelFirstStage {
    /// One model per alternative, in the order of [`ChoiceOutcome::ALL`].
    pub models: Vec<MlpModel>,
}

/// Per-period feature row `[x1, x2, w, s]` of agent `i`.
pub(crate) fn period_features(data: &PanelDataset, t: usize, i: usize) -> Vec<f64> {
    data.periods[t].covariates.row(i).features()
}

impl PanelFirstStage {
    /// Trains the four networks. Every ordered period pair `(t, s)` of
    /// every agent contributes the row `(Z_t, Z_s)` with target `Y_dt`.
    pub fn fit(data: &PanelDataset, config: &MlpConfig) -> Result<Self> {
        let tp = data.t_periods();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..data.n() {
            for t in 0..tp {
                for s in 0..tp {
                    if s == t {
                        continue;
                    }
                    let mut f = period_features(data, t, i);
                    f.extend(period_features(data, s, i));
                    rows.push(f);
                    labels.push(data.periods[t].choices[i]);
                }
            }
        }
        let width = rows.first().map_or(0, |r| r.len());
        let features = Block::from_rows(width, &rows)?;
        let models = ChoiceOutcome::ALL
            .iter()
            .map(|&d| {
                let targets: Vec<f64> = labels.iter().map(|y| y.indicator(d)).collect();
                let cfg = MlpConfig { seed: derive_seed(config.seed, d.index() as u64, Stream::FirstStage), ..config.clone() };
                mlp_train(&features, &targets, d, &cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { models })
    }

    /// `P(Y_dt = 1 | Z_t, Z_s) - P(Y_ds = 1 | Z_t, Z_s)` for all four
    /// alternatives.
    pub fn delta_p(&self, z_t: &[f64], z_s: &[f64]) -> Result<[f64; 4]> {
        let mut ts = z_t.to_vec();
        ts.extend_from_slice(z_s);
        let mut st = z_s.to_vec();
        st.extend_from_slice(z_t);
        let mut out = [0.0; 4];
        for (d, m) in self.models.iter().enumerate() {
            out[d] = m.predict(&ts)?.clamp(0.0, 1.0) - m.predict(&st)?.clamp(0.0, 1.0);
        }
        Ok(out)
    }

    /// Final training losses per alternative.
    pub fn training_losses(&self) -> Vec<f64> {
        self.models.iter().map(|m| m.training_loss).collect()
    }
}
