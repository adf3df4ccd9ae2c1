//! A small fully connected network with logistic activations, trained by
//! full-batch gradient descent on mean squared error.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Block, ChoiceOutcome};
use crate::error::{Error, Result};
use crate::seed::rng;

/// Network shape and training schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    /// Neurons in each hidden layer.
    pub hidden: Vec<usize>,
    /// Gradient-descent step size.
    pub learning_rate: f64,
    /// Number of full-batch updates.
    pub epochs: usize,
    /// Initial weights are uniform on `[-init_range, init_range]`.
    pub init_range: f64,
    /// Standardize every feature column before training.
    pub standardize: bool,
    /// Seed of the initialization stream.
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self { hidden: alloc::vec![3, 3], learning_rate: 0.5, epochs: 5000, init_range: 0.5, standardize: true, seed: 0 }
    }
}

impl MlpConfig {
    /// Checks sizes and step length.
    pub fn validate(&self) -> Result<()> {
        if self.hidden.iter().any(|&h| h == 0) {
            return Err(Error::config("hidden layers need at least one neuron"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) || !(self.init_range >= 0.0) {
            return Err(Error::config("learning rate must be positive and the init range nonnegative"));
        }
        Ok(())
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-z))
}

/// Layer sizes and flattened parameters: for each layer its weight matrix
/// (row-major, `out x in`) followed by its bias vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    /// Input width, hidden widths and output width (1).
    pub sizes: Vec<usize>,
    /// Flattened parameters.
    pub params: Vec<f64>,
}

impl Mlp {
    /// All-zero network; its output is 0.5 for every input.
    pub fn zeros(input: usize, hidden: &[usize]) -> Self {
        let mut sizes = alloc::vec![input];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let n = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        Self { sizes, params: alloc::vec![0.0; n] }
    }

    /// Network with parameters uniform on `[-range, range]`.
    pub fn random(input: usize, hidden: &[usize], range: f64, seed: u64) -> Self {
        let mut net = Self::zeros(input, hidden);
        let mut r = rng(seed);
        for p in &mut net.params {
            *p = if range > 0.0 { r.random_range(-range..=range) } else { 0.0 };
        }
        net
    }

    /// Number of inputs.
    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    fn widest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(1)
    }

    /// Output for one input row.
    pub fn forward(&self, x: &[f64]) -> f64 {
        let mut acts = Vec::new();
        self.forward_into(x, &mut acts);
        acts[acts.len() - 1]
    }

    /// Stores every layer's activations (input first) back to back.
    fn forward_into(&self, x: &[f64], acts: &mut Vec<f64>) {
        acts.clear();
        acts.extend_from_slice(x);
        let mut off = 0;
        let mut start = 0;
        for w in self.sizes.windows(2) {
            let (nin, nout) = (w[0], w[1]);
            let (weights, bias) = (&self.params[off..off + nin * nout], &self.params[off + nin * nout..off + nin * nout + nout]);
            for o in 0..nout {
                let mut z = bias[o];
                let row = &weights[o * nin..(o + 1) * nin];
                for i in 0..nin {
                    z += row[i] * acts[start + i];
                }
                acts.push(sigmoid(z));
            }
            start += nin;
            off += nin * nout + nout;
        }
    }

    /// Mean squared error on `(features, targets)` and its gradient with
    /// respect to the flattened parameters.
    pub fn loss_and_gradient(&self, features: &Block, targets: &[f64]) -> (f64, Vec<f64>) {
        let n = features.rows();
        let mut grad = alloc::vec![0.0; self.params.len()];
        let mut acts = Vec::with_capacity(self.sizes.iter().sum());
        let width = self.widest();
        let (mut delta, mut next) = (alloc::vec![0.0; width], alloc::vec![0.0; width]);
        let mut loss = 0.0;
        // Offsets of each layer's parameters and activations.
        let layers = self.sizes.len() - 1;
        let mut poff = Vec::with_capacity(layers);
        let mut aoff = Vec::with_capacity(layers + 1);
        let (mut p, mut a) = (0, 0);
        for w in self.sizes.windows(2) {
            poff.push(p);
            aoff.push(a);
            p += w[0] * w[1] + w[1];
            a += w[0];
        }
        aoff.push(a);
        for r in 0..n {
            self.forward_into(features.row(r), &mut acts);
            let out = acts[acts.len() - 1];
            let err = out - targets[r];
            loss += err * err;
            delta[0] = 2.0 * err / n as f64 * out * (1.0 - out);
            for l in (0..layers).rev() {
                let (nin, nout) = (self.sizes[l], self.sizes[l + 1]);
                let input = &acts[aoff[l]..aoff[l] + nin];
                let (wo, bo) = (poff[l], poff[l] + nin * nout);
                for o in 0..nout {
                    let d = delta[o];
                    grad[bo + o] += d;
                    let g = &mut grad[wo + o * nin..wo + (o + 1) * nin];
                    for i in 0..nin {
                        g[i] += d * input[i];
                    }
                }
                if l > 0 {
                    for i in 0..nin {
                        let mut s = 0.0;
                        for o in 0..nout {
                            s += self.params[wo + o * nin + i] * delta[o];
                        }
                        next[i] = s * input[i] * (1.0 - input[i]);
                    }
                    core::mem::swap(&mut delta, &mut next);
                }
            }
        }
        (loss / n as f64, grad)
    }

    /// Mean squared error only.
    pub fn loss(&self, features: &Block, targets: &[f64]) -> f64 {
        let n = features.rows();
        (0..n).map(|r| (self.forward(features.row(r)) - targets[r]).powi(2)).sum::<f64>() / n as f64
    }
}

/// A trained network predicting `P(Y = target)` from raw features.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    /// The network, operating on standardized features.
    pub net: Mlp,
    /// Column means subtracted before the network.
    pub mean: Vec<f64>,
    /// Column scales divided out before the network.
    pub scale: Vec<f64>,
    /// Alternative whose probability is modelled.
    pub target: ChoiceOutcome,
    /// Mean squared error after the last update.
    pub training_loss: f64,
}

impl MlpModel {
    /// Untrained model with zero weights and identity standardization.
    pub fn zeros(input: usize, hidden: &[usize], target: ChoiceOutcome) -> Self {
        Self { net: Mlp::zeros(input, hidden), mean: alloc::vec![0.0; input], scale: alloc::vec![1.0; input], target, training_loss: f64::NAN }
    }

    /// Prediction in `(0, 1)` for one raw feature row.
    pub fn predict(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.net.input_dim() {
            return Err(Error::input(alloc::format!("expected {} features, got {}", self.net.input_dim(), z.len())));
        }
        let x: Vec<f64> = z.iter().zip(&self.mean).zip(&self.scale).map(|((v, m), s)| (v - m) / s).collect();
        Ok(self.net.forward(&x))
    }
}

/// Trains a network for `P(Y = target)` with 0/1 `targets`.
pub fn mlp_train(features: &Block, targets: &[f64], target: ChoiceOutcome, config: &MlpConfig) -> Result<MlpModel> {
    config.validate()?;
    let (n, k) = (features.rows(), features.cols());
    if n == 0 || targets.len() != n {
        return Err(Error::input("training needs at least one row and one target per row"));
    }
    if features.as_slice().iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(Error::input("training data must be finite"));
    }
    let (mean, scale) = if config.standardize {
        let cols: Vec<Vec<f64>> = (0..k).map(|j| features.column(j)).collect();
        let mean: Vec<f64> = cols.iter().map(|c| crate::math::mean(c)).collect();
        let scale = cols
            .iter()
            .map(|c| {
                let s = if c.len() > 1 { crate::math::sample_std(c) } else { 0.0 };
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        (mean, scale)
    } else {
        (alloc::vec![0.0; k], alloc::vec![1.0; k])
    };
    let mut std = Vec::with_capacity(n * k);
    for r in 0..n {
        for (j, v) in features.row(r).iter().enumerate() {
            std.push((v - mean[j]) / scale[j]);
        }
    }
    let x = Block::new(n, k, std)?;
    let mut net = Mlp::random(k, &config.hidden, config.init_range, config.seed);
    for epoch in 0..config.epochs {
        let (l, g) = net.loss_and_gradient(&x, targets);
        if !l.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Training { epoch, loss: l });
        }
        for (p, gi) in net.params.iter_mut().zip(&g) {
            *p -= config.learning_rate * gi;
        }
    }
    let final_loss = net.loss(&x, targets);
    if !final_loss.is_finite() {
        return Err(Error::Training { epoch: config.epochs, loss: final_loss });
    }
    Ok(MlpModel { net, mean, scale, target, training_loss: final_loss })
}

/// Forward pass of a trained model.
pub fn mlp_predict(model: &MlpModel, z: &[f64]) -> Result<f64> {
    model.predict(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_network_predicts_one_half() {
        let m = MlpModel::zeros(3, &[3, 3], ChoiceOutcome::FIRST);
        assert_eq!(m.predict(&[1.0, -2.0, 5.0]).unwrap(), 0.5);
        assert!(m.predict(&[1.0]).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut r = rng(1);
        let f = Block::new(7, 2, (0..14).map(|_| r.random_range(-2.0..2.0)).collect()).unwrap();
        let t: Vec<f64> = (0..7).map(|i| (i % 2) as f64).collect();
        let net = Mlp::random(2, &[3, 3], 1.0, 4);
        let (_, g) = net.loss_and_gradient(&f, &t);
        for p in 0..net.params.len() {
            let (mut a, mut b) = (net.clone(), net.clone());
            a.params[p] += 1e-5;
            b.params[p] -= 1e-5;
            let fd = (a.loss(&f, &t) - b.loss(&f, &t)) / 2e-5;
            assert!((fd - g[p]).abs() <= 1e-5 * g[p].abs().max(1e-3), "{p}: {fd} vs {}", g[p]);
        }
    }

    #[test]
    fn learns_a_constant_target() {
        let f = Block::new(20, 1, (0..20).map(|i| i as f64).collect()).unwrap();
        let cfg = MlpConfig { epochs: 3000, ..MlpConfig::default() };
        let m = mlp_train(&f, &[0.0; 20], ChoiceOutcome::NONE, &cfg).unwrap();
        for i in 0..20 {
            assert!(m.predict(&[i as f64]).unwrap() < 0.05);
        }
    }

    #[test]
    fn monotone_with_positive_weights() {
        let mut net = Mlp::zeros(1, &[3, 3]);
        for p in &mut net.params {
            *p = 0.7;
        }
        let mut prev = 0.0;
        for i in -20..=20 {
            let y = net.forward(&[i as f64 * 0.5]);
            assert!(y >= prev);
            prev = y;
        }
    }

    #[test]
    fn training_is_deterministic() {
        let f = Block::new(4, 1, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let cfg = MlpConfig { epochs: 50, seed: 9, ..MlpConfig::default() };
        let a = mlp_train(&f, &[0.0, 0.0, 1.0, 1.0], ChoiceOutcome::BUNDLE, &cfg).unwrap();
        let b = mlp_train(&f, &[0.0, 0.0, 1.0, 1.0], ChoiceOutcome::BUNDLE, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
