//! Least-absolute-deviations estimation from sign predictions.
//!
//! For two observations (or two periods of one agent) the signs of the
//! three index differences
//! `dx1 = X1' b + S' r1`, `dx2 = X2' b + S' r2`, `dw = W' r + S' rb`
//! predict the sign of the choice-probability difference `dp_d` for each
//! alternative `d`. The loss of one comparison and alternative is
//!
//! ```text
//! q = [|I+ - dp| + |I- + dp|] (I+ + I-) + [1 - (I+ + I-)]
//! ```
//!
//! where `I+`/`I-` indicate the index patterns that imply `dp >= 0` and
//! `dp <= 0`. The estimator minimizes the sum over comparisons and all four
//! alternatives with `dp` replaced by first-stage estimates.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::{dot, ChoiceOutcome, CrossSectionDataset, PanelDataset, ParamLayout, ParamVector};
use crate::error::{Error, Result};
use crate::firststage::{fitted_probabilities, period_features, ChoiceProbModel, MlpConfig, NwConfig, NwModel, PanelFirstStage};
use crate::optimizer::{de_minimize_batch, DeSettings};
use crate::mrc::resample_indices;
use crate::result::{percentile_interval, BootstrapResult, Diagnostics, EstimationResult, FirstStageDiagnostics, Method, Named};
use crate::seed::{derive_seed, Stream};

/// The two prediction indicators of one alternative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indicators {
    /// The indexes imply `dp >= 0`.
    pub plus: bool,
    /// The indexes imply `dp <= 0`.
    pub minus: bool,
}

impl Indicators {
    fn count(self) -> f64 {
        (self.plus as u8 + self.minus as u8) as f64
    }
}

/// Required signs of `(dx1, dx2, dw)` for `I+` of each alternative, in the
/// order of [`ChoiceOutcome::ALL`]. `I-` requires the opposite signs.
const PLUS_PATTERN: [[f64; 3]; 4] = [
    [-1.0, -1.0, -1.0], // (0,0)
    [1.0, -1.0, -1.0],  // (1,0)
    [-1.0, 1.0, -1.0],  // (0,1)
    [1.0, 1.0, 1.0],    // (1,1)
];

/// Prediction indicators with weak inequalities, so both fire when an
/// index difference is exactly zero.
pub fn indicators(dx1: f64, dx2: f64, dw: f64, d: ChoiceOutcome) -> Indicators {
    let p = PLUS_PATTERN[d.index()];
    let z = [dx1, dx2, dw];
    Indicators { plus: (0..3).all(|k| p[k] * z[k] >= 0.0), minus: (0..3).all(|k| p[k] * z[k] <= 0.0) }
}

/// Loss with the exact probability difference: 2 when a prediction that
/// is made contradicts the sign of `delta_p`, 0 otherwise.
pub fn lad_loss(ind: Indicators, delta_p: f64) -> f64 {
    if (ind.plus && delta_p < 0.0) || (ind.minus && delta_p > 0.0) {
        2.0
    } else {
        0.0
    }
}

fn debiased(ind: Indicators, dp: f64) -> f64 {
    let (ip, im) = (ind.plus as u8 as f64, ind.minus as u8 as f64);
    let c = ind.count();
    ((ip - dp).abs() + (im + dp).abs()) * c + (1.0 - c)
}

/// Loss with an estimated probability difference; lies in `[1, 3]`.
pub fn lad_loss_debiased(ind: Indicators, delta_p_hat: f64) -> Result<f64> {
    if !(delta_p_hat.abs() <= 1.0) {
        return Err(Error::input("probability differences must lie in [-1, 1]"));
    }
    Ok(debiased(ind, delta_p_hat))
}

/// The three index differences for a row of covariate differences.
fn index_differences(theta: &ParamVector, x1: &[f64], x2: &[f64], w: &[f64], s: &[f64]) -> [f64; 3] {
    [dot(x1, &theta.beta) + dot(s, &theta.rho1), dot(x2, &theta.beta) + dot(s, &theta.rho2), dot(w, &theta.gamma) + dot(s, &theta.rho_b)]
}

fn comparison_loss(z: [f64; 3], dp: &[f64; 4], alternatives: &[ChoiceOutcome]) -> Result<f64> {
    alternatives.iter().map(|&d| lad_loss_debiased(indicators(z[0], z[1], z[2], d), dp[d.index()])).sum()
}

fn check_theta(theta: &ParamVector, k1: usize, k2: usize, k3: usize) -> Result<()> {
    theta.validate(k1, k2, k3)
}

/// Combined criterion over pairs `i < m` from per-row probabilities
/// `probs[i][d] = p_d(Z_i)`, summed over `alternatives`.
pub fn lad_objective_cross_from_probabilities(data: &CrossSectionDataset, theta: &ParamVector, probs: &[[f64; 4]], alternatives: &[ChoiceOutcome]) -> Result<f64> {
    let c = &data.covariates;
    check_theta(theta, c.k1(), c.k2(), c.k3())?;
    if probs.len() != data.len() {
        return Err(Error::input("one probability row per observation is required"));
    }
    let mut total = 0.0;
    for i in 0..data.len() {
        for m in i + 1..data.len() {
            let (a, b) = (c.row(i), c.row(m));
            let diff = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| p - q).collect() };
            let z = index_differences(theta, &diff(a.x1, b.x1), &diff(a.x2, b.x2), &diff(a.w, b.w), &diff(a.s, b.s));
            let dp: [f64; 4] = core::array::from_fn(|d| probs[i][d] - probs[m][d]);
            total += comparison_loss(z, &dp, alternatives)?;
        }
    }
    Ok(total)
}

/// Combined criterion with probabilities from fitted models, summed over
/// the models' target alternatives.
pub fn lad_objective_cross(data: &CrossSectionDataset, theta: &ParamVector, models: &[ChoiceProbModel]) -> Result<f64> {
    let mut probs = alloc::vec![[0.0; 4]; data.len()];
    let mut alternatives = Vec::new();
    for m in models {
        let d = m.target();
        if alternatives.contains(&d) {
            return Err(Error::input("one model per alternative"));
        }
        alternatives.push(d);
        for (i, p) in probs.iter_mut().enumerate() {
            p[d.index()] = m.predict(&data.covariates.row(i).features())?;
        }
    }
    lad_objective_cross_from_probabilities(data, theta, &probs, &alternatives)
}

/// Period pairs `(t, s)` with `t > s`, in the order used for panel
/// comparisons.
fn period_pairs(t_periods: usize) -> Vec<(usize, usize)> {
    (1..t_periods).flat_map(|t| (0..t).map(move |s| (t, s))).collect()
}

/// Panel criterion over agents and period pairs `t > s`, with
/// `deltas[i * pairs + p][d] = dp_d(Z_t, Z_s)` for agent `i` and pair `p`.
pub fn lad_objective_panel_from_deltas(data: &PanelDataset, theta: &ParamVector, deltas: &[[f64; 4]], alternatives: &[ChoiceOutcome]) -> Result<f64> {
    let c0 = &data.periods[0].covariates;
    check_theta(theta, c0.k1(), c0.k2(), c0.k3())?;
    let pairs = period_pairs(data.t_periods());
    if deltas.len() != data.n() * pairs.len() {
        return Err(Error::input("one probability-difference row per agent and period pair is required"));
    }
    let mut total = 0.0;
    for i in 0..data.n() {
        for (p, &(t, s)) in pairs.iter().enumerate() {
            let (a, b) = (data.periods[t].covariates.row(i), data.periods[s].covariates.row(i));
            let diff = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| p - q).collect() };
            let z = index_differences(theta, &diff(a.x1, b.x1), &diff(a.x2, b.x2), &diff(a.w, b.w), &diff(a.s, b.s));
            total += comparison_loss(z, &deltas[i * pairs.len() + p], alternatives)?;
        }
    }
    Ok(total)
}

fn panel_deltas(data: &PanelDataset, first: &PanelFirstStage) -> Result<Vec<[f64; 4]>> {
    let pairs = period_pairs(data.t_periods());
    let mut out = Vec::with_capacity(data.n() * pairs.len());
    for i in 0..data.n() {
        for &(t, s) in &pairs {
            out.push(first.delta_p(&period_features(data, t, i), &period_features(data, s, i))?);
        }
    }
    Ok(out)
}

/// Panel criterion with probability differences from a fitted first
/// stage, summed over all four alternatives.
pub fn lad_objective_panel(data: &PanelDataset, theta: &ParamVector, first: &PanelFirstStage) -> Result<f64> {
    lad_objective_panel_from_deltas(data, theta, &panel_deltas(data, first)?, &ChoiceOutcome::ALL)
}

/// Comparisons stored column by column with their loss for each strict
/// sign pattern of the three index differences. Exact zeros fall back to
/// the weak-inequality indicators.
#[derive(Clone, Debug)]
pub struct LadTerms {
    k1: usize,
    k2: usize,
    k3: usize,
    x1: Vec<Vec<f64>>,
    x2: Vec<Vec<f64>>,
    w: Vec<Vec<f64>>,
    s: Vec<Vec<f64>>,
    dp: Vec<[f64; 4]>,
    table: Vec<[f64; 8]>,
    alternatives: Vec<ChoiceOutcome>,
}

const CHUNK: usize = 128;

fn index_chunk(out: &mut [f64], cols: &[Vec<f64>], coef: &[f64], scols: &[Vec<f64>], scoef: &[f64], start: usize) {
    let len = out.len();
    let mut terms = cols.iter().zip(coef).chain(scols.iter().zip(scoef)).filter(|(_, &c)| c != 0.0);
    match terms.next() {
        Some((col, &c)) => {
            for (o, v) in out.iter_mut().zip(&col[start..start + len]) {
                *o = c * v;
            }
        }
        None => out.fill(0.0),
    }
    for (col, &c) in terms {
        for (o, v) in out.iter_mut().zip(&col[start..start + len]) {
            *o += c * v;
        }
    }
}

impl LadTerms {
    fn new(k1: usize, k2: usize, k3: usize, alternatives: &[ChoiceOutcome]) -> Self {
        Self {
            k1,
            k2,
            k3,
            x1: alloc::vec![Vec::new(); k1],
            x2: alloc::vec![Vec::new(); k1],
            w: alloc::vec![Vec::new(); k2],
            s: alloc::vec![Vec::new(); k3],
            dp: Vec::new(),
            table: Vec::new(),
            alternatives: alternatives.to_vec(),
        }
    }

    fn push(&mut self, x1: &[f64], x2: &[f64], w: &[f64], s: &[f64], dp: [f64; 4]) -> Result<()> {
        if dp.iter().any(|v| !(v.abs() <= 1.0)) {
            return Err(Error::input("probability differences must lie in [-1, 1]"));
        }
        for (col, v) in self.x1.iter_mut().zip(x1) {
            col.push(*v);
        }
        for (col, v) in self.x2.iter_mut().zip(x2) {
            col.push(*v);
        }
        for (col, v) in self.w.iter_mut().zip(w) {
            col.push(*v);
        }
        for (col, v) in self.s.iter_mut().zip(s) {
            col.push(*v);
        }
        let mut t = [0.0; 8];
        for (pattern, slot) in t.iter_mut().enumerate() {
            let sign = |bit: usize| if pattern >> bit & 1 == 1 { 1.0 } else { -1.0 };
            *slot = comparison_loss([sign(0), sign(1), sign(2)], &dp, &self.alternatives)?;
        }
        self.dp.push(dp);
        self.table.push(t);
        Ok(())
    }

    #[cold]
    #[inline(never)]
    fn exact_term(&self, z: [f64; 3], p: usize) -> f64 {
        // Cannot fail: the differences were validated on entry.
        comparison_loss(z, &self.dp[p], &self.alternatives).unwrap_or(f64::INFINITY)
    }

    /// Number of comparisons.
    pub fn len(&self) -> usize {
        self.dp.len()
    }

    /// True when there are no comparisons.
    pub fn is_empty(&self) -> bool {
        self.dp.is_empty()
    }

    /// Criterion value at `theta`.
    pub fn eval(&self, theta: &ParamVector) -> f64 {
        let mut out = [0.0];
        self.eval_batch(core::slice::from_ref(theta), &mut out);
        out[0]
    }

    /// Criterion values at several points in one pass over the comparisons.
    pub fn eval_batch(&self, thetas: &[ParamVector], out: &mut [f64]) {
        out.fill(0.0);
        let n = self.len();
        let mut z1 = [0.0; CHUNK];
        let mut z2 = [0.0; CHUNK];
        let mut zb = [0.0; CHUNK];
        let mut start = 0;
        while start < n {
            let end = n.min(start + CHUNK);
            let len = end - start;
            let table = &self.table[start..end];
            for (theta, total) in thetas.iter().zip(out.iter_mut()) {
                index_chunk(&mut z1[..len], &self.x1, &theta.beta, &self.s, &theta.rho1, start);
                index_chunk(&mut z2[..len], &self.x2, &theta.beta, &self.s, &theta.rho2, start);
                index_chunk(&mut zb[..len], &self.w, &theta.gamma, &self.s, &theta.rho_b, start);
                let mut sum = 0.0;
                for (k, row) in table.iter().enumerate() {
                    let (a, b, c) = (z1[k], z2[k], zb[k]);
                    if (a == 0.0) | (b == 0.0) | (c == 0.0) {
                        sum += self.exact_term([a, b, c], start + k);
                    } else {
                        let pattern = (a > 0.0) as usize | ((b > 0.0) as usize) << 1 | ((c > 0.0) as usize) << 2;
                        sum += row[pattern];
                    }
                }
                *total += sum;
            }
            start = end;
        }
    }

    /// Cross-sectional comparisons `i < m` from per-row probabilities.
    pub fn cross(data: &CrossSectionDataset, probs: &[[f64; 4]], alternatives: &[ChoiceOutcome]) -> Result<Self> {
        let c = &data.covariates;
        if probs.len() != data.len() {
            return Err(Error::input("one probability row per observation is required"));
        }
        let mut terms = Self::new(c.k1(), c.k2(), c.k3(), alternatives);
        let (mut x1, mut x2, mut w, mut s) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for i in 0..data.len() {
            let a = c.row(i);
            for m in i + 1..data.len() {
                let b = c.row(m);
                for (out, (p, q)) in [(&mut x1, (a.x1, b.x1)), (&mut x2, (a.x2, b.x2)), (&mut w, (a.w, b.w)), (&mut s, (a.s, b.s))] {
                    out.clear();
                    out.extend(p.iter().zip(q).map(|(u, v)| u - v));
                }
                let dp: [f64; 4] = core::array::from_fn(|d| probs[i][d] - probs[m][d]);
                terms.push(&x1, &x2, &w, &s, dp)?;
            }
        }
        Ok(terms)
    }

    /// Panel comparisons of periods `t > s` for every agent.
    pub fn panel(data: &PanelDataset, deltas: &[[f64; 4]], alternatives: &[ChoiceOutcome]) -> Result<Self> {
        let c0 = &data.periods[0].covariates;
        let pairs = period_pairs(data.t_periods());
        if deltas.len() != data.n() * pairs.len() {
            return Err(Error::input("one probability-difference row per agent and period pair is required"));
        }
        let mut terms = Self::new(c0.k1(), c0.k2(), c0.k3(), alternatives);
        let (mut x1, mut x2, mut w, mut s) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for i in 0..data.n() {
            for (p, &(t, sp)) in pairs.iter().enumerate() {
                let (a, b) = (data.periods[t].covariates.row(i), data.periods[sp].covariates.row(i));
                for (out, (u, v)) in [(&mut x1, (a.x1, b.x1)), (&mut x2, (a.x2, b.x2)), (&mut w, (a.w, b.w)), (&mut s, (a.s, b.s))] {
                    out.clear();
                    out.extend(u.iter().zip(v).map(|(u, v)| u - v));
                }
                terms.push(&x1, &x2, &w, &s, deltas[i * pairs.len() + p])?;
            }
        }
        Ok(terms)
    }

    fn dims(&self) -> (usize, usize, usize) {
        (self.k1, self.k2, self.k3)
    }
}

/// Settings of the LAD estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LadConfig {
    /// First stage for cross sections.
    pub nw: NwConfig,
    /// First stage for panels.
    pub mlp: MlpConfig,
    /// Optimizer settings.
    pub de: DeSettings,
    /// Alternatives whose losses are summed; all four by default.
    pub alternatives: Vec<ChoiceOutcome>,
    /// Confidence level of bootstrap intervals.
    pub level: f64,
}

impl Default for LadConfig {
    fn default() -> Self {
        Self { nw: NwConfig::default(), mlp: MlpConfig::default(), de: DeSettings::default(), alternatives: ChoiceOutcome::ALL.to_vec(), level: 0.95 }
    }
}

impl LadConfig {
    /// Same configuration with the optimizer and network seeds replaced.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.de.seed = derive_seed(seed, 1, Stream::Optimizer);
        c.mlp.seed = derive_seed(seed, 0, Stream::FirstStage);
        c
    }

    fn validate(&self) -> Result<()> {
        if self.alternatives.is_empty() {
            return Err(Error::config("at least one alternative must enter the LAD criterion"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::config("confidence level must lie in (0, 1)"));
        }
        Ok(())
    }
}

fn check_layout(layout: &ParamLayout, dims: (usize, usize, usize)) -> Result<()> {
    if (layout.k1, layout.k2, layout.k3) != dims || layout.k1 == 0 || layout.k2 == 0 {
        return Err(Error::input("parameter layout does not match the data"));
    }
    if layout.dim() == 0 {
        return Err(Error::config("the LAD layout has no free coordinate"));
    }
    Ok(())
}

fn minimize(terms: &LadTerms, layout: &ParamLayout, de: &DeSettings) -> Result<(Vec<f64>, f64, usize, usize)> {
    let r = de_minimize_batch(
        |xs, out| {
            let thetas: Vec<ParamVector> = xs.iter().map(|x| layout.unpack(x)).collect();
            terms.eval_batch(&thetas, out);
        },
        &de.config(layout.dim()),
    )?;
    Ok((r.argmin, r.min_value, r.generations_used, r.evaluations))
}

fn result(method: Method, layout: &ParamLayout, fit: (Vec<f64>, f64, usize, usize), terms: usize, tuning: Vec<Named>, seed: u64, first: FirstStageDiagnostics) -> EstimationResult {
    let (free, value, generations, evaluations) = fit;
    EstimationResult {
        method,
        params: layout.unpack(&free),
        names: layout.names(),
        estimates: free,
        criterion_values: alloc::vec![value],
        tuning,
        seed,
        diagnostics: Diagnostics {
            generations: alloc::vec![generations],
            evaluations: alloc::vec![evaluations],
            criterion_terms: alloc::vec![terms],
            switchers: None,
            first_stage: Some(first),
        },
        bootstrap: None,
    }
}

/// Cross-sectional LAD: Nadaraya-Watson first stage, then differential
/// evolution over the free coordinates of `layout`.
pub fn estimate_lad_cross(data: &CrossSectionDataset, layout: &ParamLayout, config: &LadConfig) -> Result<EstimationResult> {
    config.validate()?;
    let data = data.canonicalized();
    let c = &data.covariates;
    check_layout(layout, (c.k1(), c.k2(), c.k3()))?;
    if data.len() < 2 {
        return Err(Error::input("LAD needs at least two observations"));
    }
    let stage = |e: Error| match e {
        Error::Input(_) | Error::Config(_) => e,
        other => Error::estimation("lad first stage", alloc::format!("{other}")),
    };
    let model = NwModel::fit(&data, &config.nw).map_err(stage)?;
    let rows: Vec<Vec<f64>> = (0..data.len()).map(|i| c.row(i).features()).collect();
    let features = crate::data::Block::from_rows(model.dim(), &rows)?;
    let fitted = fitted_probabilities(&model, &features).map_err(stage)?;
    let terms = LadTerms::cross(&data, &fitted.probs, &config.alternatives)?;
    debug_assert_eq!(terms.dims(), (c.k1(), c.k2(), c.k3()));
    let fit = minimize(&terms, layout, &config.de)?;
    let mut tuning: Vec<Named> = model.bandwidths().iter().enumerate().map(|(j, h)| Named::new(alloc::format!("nw.h_{}", j + 1), *h)).collect();
    tuning.push(Named::new("nw.lambda", model.lambda()));
    let first = FirstStageDiagnostics { kind: "nadaraya-watson".into(), clamp_rate: fitted.clamp_rate(), training_loss: Vec::new(), fallbacks: fitted.fallbacks };
    Ok(result(Method::Lad, layout, fit, terms.len(), tuning, config.de.seed, first))
}

/// Panel LAD: one network per alternative on both periods' covariates,
/// then differential evolution over the free coordinates of `layout`.
pub fn estimate_lad_panel(data: &PanelDataset, layout: &ParamLayout, config: &LadConfig) -> Result<EstimationResult> {
    config.validate()?;
    let data = data.canonicalized();
    let c0 = &data.periods[0].covariates;
    check_layout(layout, (c0.k1(), c0.k2(), c0.k3()))?;
    let first = PanelFirstStage::fit(&data, &config.mlp).map_err(|e| match e {
        Error::Input(_) | Error::Config(_) => e,
        other => Error::estimation("panel lad first stage", alloc::format!("{other}")),
    })?;
    let deltas = panel_deltas(&data, &first)?;
    let terms = LadTerms::panel(&data, &deltas, &config.alternatives)?;
    let fit = minimize(&terms, layout, &config.de)?;
    let tuning = alloc::vec![
        Named::new("mlp.learning_rate", config.mlp.learning_rate),
        Named::new("mlp.epochs", config.mlp.epochs as f64),
    ];
    let diag = FirstStageDiagnostics { kind: "mlp".into(), clamp_rate: 0.0, training_loss: first.training_losses(), fallbacks: 0 };
    Ok(result(Method::PanelLad, layout, fit, terms.len(), tuning, config.de.seed, diag))
}

fn bootstrap<F>(n: usize, config: &LadConfig, b: usize, seed: u64, mut estimate: F) -> Result<BootstrapResult>
where
    F: FnMut(&[usize], &LadConfig) -> Result<EstimationResult>,
{
    if b < 2 {
        return Err(Error::input("the bootstrap needs B >= 2"));
    }
    let mut draws = Vec::with_capacity(b);
    let mut failed = 0;
    for k in 0..b {
        let rows = resample_indices(n, derive_seed(seed, k as u64, Stream::Bootstrap));
        match estimate(&rows, &config.with_seed(derive_seed(seed, k as u64, Stream::Optimizer))) {
            Ok(r) => draws.push(r.estimates),
            Err(e) if !e.is_input_error() || matches!(e, Error::Degenerate(_)) => {
                log::debug!("bootstrap draw discarded: {e}");
                failed += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if draws.is_empty() {
        return Err(Error::estimation("lad bootstrap", "every bootstrap draw failed"));
    }
    let intervals = (0..draws[0].len())
        .map(|j| percentile_interval(&draws.iter().map(|d| d[j]).collect::<Vec<_>>(), config.level))
        .collect::<Result<Vec<_>>>()?;
    Ok(BootstrapResult { draws, intervals, level: config.level, requested: b, failed, seed, epsilon: None })
}

/// Nonparametric bootstrap of the cross-sectional LAD estimator: first
/// stage and criterion are rebuilt on every resample of observations.
pub fn bootstrap_lad_cross(data: &CrossSectionDataset, layout: &ParamLayout, config: &LadConfig, b: usize, seed: u64) -> Result<BootstrapResult> {
    config.validate()?;
    let data = data.canonicalized();
    bootstrap(data.len(), config, b, seed, |rows, cfg| estimate_lad_cross(&data.resample(rows), layout, cfg))
}

/// Nonparametric bootstrap of the panel LAD estimator over agents.
pub fn bootstrap_lad_panel(data: &PanelDataset, layout: &ParamLayout, config: &LadConfig, b: usize, seed: u64) -> Result<BootstrapResult> {
    config.validate()?;
    let data = data.canonicalized();
    bootstrap(data.n(), config, b, seed, |rows, cfg| estimate_lad_panel(&data.resample(rows), layout, cfg))
}
