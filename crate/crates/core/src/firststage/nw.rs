//! Nadaraya-Watson choice probabilities with mixed kernels: higher-order
//! Gaussian kernels on continuous columns and Aitchison-Aitken kernels on
//! discrete ones.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::{Block, ChoiceOutcome, CrossSectionDataset};
use crate::error::{Error, Result};
use crate::kernels::{silverman_bandwidth, GaussianKernel};

/// Settings of the Nadaraya-Watson estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NwConfig {
    /// Order of the Gaussian kernel on continuous columns.
    pub kernel_order: u32,
    /// Smoothing parameter of the discrete kernel; `None` uses `1/N`.
    pub discrete_lambda: Option<f64>,
}

impl Default for NwConfig {
    fn default() -> Self {
        Self { kernel_order: 4, discrete_lambda: None }
    }
}

/// A fitted estimator of `P(Y = d | Z = z)` for all four alternatives.
#[derive(Clone, Debug)]
pub struct NwModel {
    features: Block,
    labels: Vec<ChoiceOutcome>,
    discrete: Vec<bool>,
    categories: Vec<usize>,
    bandwidths: Vec<f64>,
    lambda: f64,
    kernel: GaussianKernel,
}

impl NwModel {
    /// Fits on explicit features. `discrete[j]` marks column `j` as
    /// categorical; continuous columns get Silverman bandwidths.
    pub fn fit_features(features: Block, labels: Vec<ChoiceOutcome>, discrete: Vec<bool>, config: &NwConfig) -> Result<Self> {
        let n = features.rows();
        if n == 0 || labels.len() != n || discrete.len() != features.cols() {
            return Err(Error::input("features, labels and column kinds do not conform"));
        }
        let kernel = GaussianKernel::new(config.kernel_order)?;
        let lambda = config.discrete_lambda.unwrap_or(1.0 / n as f64);
        let mut categories = Vec::with_capacity(discrete.len());
        let mut bandwidths = Vec::with_capacity(discrete.len());
        for (j, &disc) in discrete.iter().enumerate() {
            let col = features.column(j);
            if disc {
                let mut values = crate::math::sorted(&col);
                values.dedup();
                categories.push(values.len().max(2));
                bandwidths.push(0.0);
            } else {
                categories.push(0);
                // A constant column gives every row the same weight, so any
                // bandwidth will do.
                bandwidths.push(match silverman_bandwidth(&col) {
                    Ok(h) => h,
                    Err(Error::Degenerate(_)) | Err(Error::Input(_)) => 1.0,
                    Err(e) => return Err(e),
                });
            }
        }
        let max_lambda = categories.iter().filter(|&&c| c > 0).map(|&c| (c - 1) as f64 / c as f64).fold(1.0, f64::min);
        if !(0.0..=max_lambda).contains(&lambda) {
            return Err(Error::config("discrete smoothing parameter out of range"));
        }
        Ok(Self { features, labels, discrete, categories, bandwidths, lambda, kernel })
    }

    /// Fits on `[x1, x2, w, s]` of a cross-sectional dataset.
    pub fn fit(data: &CrossSectionDataset, config: &NwConfig) -> Result<Self> {
        let c = &data.covariates;
        let rows: Vec<Vec<f64>> = (0..data.len()).map(|i| c.row(i).features()).collect();
        let features = Block::from_rows(c.k1() * 2 + c.k2() + c.k3(), &rows)?;
        Self::fit_features(features, data.choices.clone(), data.kinds.feature_mask(), config)
    }

    /// Replaces the automatically chosen bandwidths (one per column;
    /// entries for discrete columns are ignored).
    pub fn with_bandwidths(mut self, bandwidths: Vec<f64>) -> Result<Self> {
        if bandwidths.len() != self.bandwidths.len() {
            return Err(Error::input("one bandwidth per column is required"));
        }
        for (j, &h) in bandwidths.iter().enumerate() {
            if !self.discrete[j] && !(h > 0.0 && h.is_finite()) {
                return Err(Error::config("bandwidths must be positive"));
            }
        }
        self.bandwidths = bandwidths;
        Ok(self)
    }

    /// Bandwidths per column (0 for discrete columns).
    pub fn bandwidths(&self) -> &[f64] {
        &self.bandwidths
    }

    /// Discrete smoothing parameter in use.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Number of feature columns.
    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    fn weight(&self, row: &[f64], z: &[f64]) -> f64 {
        let mut w = 1.0;
        for j in 0..z.len() {
            if self.discrete[j] {
                w *= if row[j] == z[j] { 1.0 - self.lambda } else { self.lambda / (self.categories[j] - 1) as f64 };
            } else {
                w *= self.kernel.eval((row[j] - z[j]) / self.bandwidths[j]);
            }
            if w == 0.0 {
                break;
            }
        }
        w
    }

    /// Unclamped estimates of `P(Y = d | z)` in the order of
    /// [`ChoiceOutcome::ALL`]. Errors when the total kernel weight at `z` is
    /// not positive, which higher-order kernels make possible.
    pub fn predict_raw(&self, z: &[f64]) -> Result<[f64; 4]> {
        if z.len() != self.dim() {
            return Err(Error::input("query has the wrong number of features"));
        }
        let mut num = [0.0; 4];
        let mut total = 0.0;
        for i in 0..self.features.rows() {
            let w = self.weight(self.features.row(i), z);
            num[self.labels[i].index()] += w;
            total += w;
        }
        if !(total > 0.0) {
            return Err(Error::degenerate("no positive kernel mass at the query point"));
        }
        Ok(num.map(|v| v / total))
    }

    /// Estimates clamped into `[0, 1]`.
    pub fn predict(&self, z: &[f64]) -> Result<[f64; 4]> {
        Ok(self.predict_raw(z)?.map(|p| p.clamp(0.0, 1.0)))
    }

    /// Sample frequencies of the four alternatives.
    pub fn frequencies(&self) -> [f64; 4] {
        let mut f = [0.0; 4];
        for y in &self.labels {
            f[y.index()] += 1.0;
        }
        f.map(|v| v / self.labels.len() as f64)
    }
}

/// `P(Y = d | Z = z)` by Nadaraya-Watson with a fourth-order Gaussian
/// kernel (bandwidth per column) and Aitchison-Aitken kernels with
/// parameter `discrete_lambda` on discrete columns; clamped to `[0, 1]`.
pub fn nw_probability(data: &CrossSectionDataset, d: ChoiceOutcome, z: &[f64], bandwidths: &[f64], discrete_lambda: f64) -> Result<f64> {
    let config = NwConfig { kernel_order: 4, discrete_lambda: Some(discrete_lambda) };
    let model = NwModel::fit(data, &config)?.with_bandwidths(bandwidths.to_vec())?;
    Ok(model.predict(z)?[d.index()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn model(rows: &[[f64; 2]], labels: Vec<ChoiceOutcome>, discrete: Vec<bool>, lambda: f64) -> NwModel {
        let f = Block::from_rows(2, rows).unwrap();
        NwModel::fit_features(f, labels, discrete, &NwConfig { kernel_order: 4, discrete_lambda: Some(lambda) })
            .unwrap()
            .with_bandwidths(vec![1.0, 1.0])
            .unwrap()
    }

    #[test]
    fn constant_labels_give_one() {
        let m = model(&[[0.0, 0.0], [0.3, 1.0], [-0.2, 0.5]], vec![ChoiceOutcome::BUNDLE; 3], vec![false, false], 0.0);
        let p = m.predict(&[0.1, 0.2]).unwrap();
        assert!((p[3] - 1.0).abs() < 1e-15);
        assert_eq!(p[0], 0.0);
    }

    #[test]
    fn symmetric_pair_gives_one_half() {
        let m = model(&[[-1.0, 0.0], [1.0, 0.0]], vec![ChoiceOutcome::FIRST, ChoiceOutcome::NONE], vec![false, false], 0.0);
        let p = m.predict(&[0.0, 0.0]).unwrap();
        assert!((p[ChoiceOutcome::FIRST.index()] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_row_reproduces_its_label() {
        let m = model(&[[0.4, 1.0]], vec![ChoiceOutcome::SECOND], vec![false, false], 0.0);
        assert_eq!(m.predict(&[0.0, 0.0]).unwrap()[ChoiceOutcome::SECOND.index()], 1.0);
    }

    #[test]
    fn discrete_cells_reproduce_frequencies_without_smoothing() {
        let rows = [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
        let labels = vec![ChoiceOutcome::FIRST, ChoiceOutcome::NONE, ChoiceOutcome::FIRST, ChoiceOutcome::FIRST, ChoiceOutcome::NONE];
        let m = model(&rows, labels, vec![true, true], 0.0);
        let p = m.predict(&[0.0, 1.0]).unwrap();
        assert!((p[ChoiceOutcome::FIRST.index()] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn far_query_with_higher_order_kernel_is_degenerate() {
        let m = model(&[[0.0, 0.0]], vec![ChoiceOutcome::FIRST], vec![false, false], 0.0);
        // The fourth-order kernel vanishes at sqrt(3) and is negative beyond.
        assert!(matches!(m.predict(&[2.0, 0.0]), Err(Error::Degenerate(_))));
    }
}
