//! Two-step localized maximum rank correlation for cross sections.
//!
//! Stage 1 estimates `beta` from pairs of observations whose second-good
//! index, bundle regressors and common regressors nearly coincide (and
//! symmetrically for the first good):
//!
//! ```text
//! sum_{i<m} sum_d  K_h(X2_im, W_im, S_im) (Y_md - Y_id) sgn(X1_im' b) (-1)^{d1}
//!                + K_h(X1_im, W_im, S_im) (Y_md - Y_id) sgn(X2_im' b) (-1)^{d2}
//! ```
//!
//! Summing over `d` collapses the outcome factor to
//! `(-1)^{d1(m)} - (-1)^{d1(i)}`, so each pair contributes two sign terms
//! with fixed weights. Stage 2 estimates `gamma` from pairs whose fitted
//! stand-alone indexes `X_j' beta_hat` nearly coincide:
//!
//! ```text
//! sum_{i<m} K_s(V1_im / s1) K_s(V2_im / s2) / (s1 s2) (Y_i11 - Y_m11) sgn(W_im' r)
//! ```
//!
//! Common regressors `S` shift both stand-alone utilities, so they are
//! matched in both stages. Discrete variables are matched exactly. All
//! criteria are sums of weighted signs and are evaluated by
//! [`SignSum`](crate::signsum::SignSum).

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{dot, ChoiceOutcome, CrossSectionDataset};
use crate::error::{Error, Result};
use crate::kernels::{bandwidth, BandwidthRule, BandwidthSpec, GaussianKernel, MatchKernel};
use crate::math::sample_std;
use crate::optimizer::DeSettings;
use crate::result::{percentile_interval, BootstrapResult, Diagnostics, EstimationResult, EtaTestResult, Method, Named};
use crate::seed::{derive_seed, rng, Stream};
use crate::signsum::{Maximum, SignSum, SignSumBuilder};

/// Tuning of the two MRC stages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MrcConfig {
    /// Kernel order in stage 1.
    pub stage1_kernel_order: u32,
    /// Bandwidth rule in stage 1.
    pub stage1_bandwidth: BandwidthSpec,
    /// Kernel order in stage 2 and in the interaction test.
    pub stage2_kernel_order: u32,
    /// Bandwidth rule in stage 2 and in the interaction test.
    pub stage2_bandwidth: BandwidthSpec,
    /// Optimizer settings for stage 1.
    pub stage1_de: DeSettings,
    /// Optimizer settings for stage 2.
    pub stage2_de: DeSettings,
    /// Confidence level of bootstrap intervals.
    pub level: f64,
}

impl Default for MrcConfig {
    fn default() -> Self {
        Self {
            stage1_kernel_order: 6,
            stage1_bandwidth: BandwidthSpec { constant: 1.0, rule: BandwidthRule::CrossStage1 },
            stage2_kernel_order: 4,
            stage2_bandwidth: BandwidthSpec { constant: 2.0, rule: BandwidthRule::CrossStage2 },
            stage1_de: DeSettings::default(),
            stage2_de: DeSettings::default(),
            level: 0.95,
        }
    }
}

impl MrcConfig {
    /// Same configuration with both optimizer seeds replaced.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.stage1_de.seed = derive_seed(seed, 1, Stream::Optimizer);
        c.stage2_de.seed = derive_seed(seed, 2, Stream::Optimizer);
        c
    }

    fn validate(&self, k1: usize, k2: usize) -> Result<()> {
        GaussianKernel::new(self.stage1_kernel_order)?;
        GaussianKernel::new(self.stage2_kernel_order)?;
        if (self.stage1_kernel_order as usize) <= k1 + k2 {
            log::debug!("stage-1 kernel order {} does not exceed k1 + k2 = {}", self.stage1_kernel_order, k1 + k2);
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::config("confidence level must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Stage-1 bandwidths per column; entries of discrete columns are unused.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageOneBandwidths {
    /// Columns of `X1`.
    pub x1: Vec<f64>,
    /// Columns of `X2`.
    pub x2: Vec<f64>,
    /// Columns of `W`.
    pub w: Vec<f64>,
    /// Columns of `S`.
    pub s: Vec<f64>,
}

impl StageOneBandwidths {
    /// The same bandwidth for every column.
    pub fn uniform(data: &CrossSectionDataset, h: f64) -> Self {
        let c = &data.covariates;
        Self { x1: alloc::vec![h; c.k1()], x2: alloc::vec![h; c.k1()], w: alloc::vec![h; c.k2()], s: alloc::vec![h; c.k3()] }
    }

    /// `constant * sd(column) * rate(N)` for every continuous column.
    pub fn from_rule(data: &CrossSectionDataset, spec: BandwidthSpec) -> Result<Self> {
        let c = &data.covariates;
        let n = data.len();
        let col = |b: &crate::data::Block, disc: &[bool]| -> Result<Vec<f64>> {
            (0..b.cols())
                .map(|j| if disc[j] { Ok(0.0) } else { column_bandwidth(&b.column(j), n, spec) })
                .collect()
        };
        Ok(Self {
            x1: col(&c.x1, &data.kinds.x)?,
            x2: col(&c.x2, &data.kinds.x)?,
            w: col(&c.w, &data.kinds.w)?,
            s: col(&c.s, &data.kinds.s)?,
        })
    }

    fn named(&self) -> Vec<Named> {
        let mut v = Vec::new();
        for (p, xs) in [("x1", &self.x1), ("x2", &self.x2), ("w", &self.w), ("s", &self.s)] {
            for (j, h) in xs.iter().enumerate() {
                v.push(Named::new(alloc::format!("stage1.{p}_{}", j + 1), *h));
            }
        }
        v
    }
}

/// Stage-2 bandwidths for the two fitted indexes and the common regressors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTwoBandwidths {
    /// Bandwidth for `X1' beta_hat`.
    pub v1: f64,
    /// Bandwidth for `X2' beta_hat`.
    pub v2: f64,
    /// Bandwidths for the columns of `S` (discrete entries unused).
    pub s: Vec<f64>,
}

impl StageTwoBandwidths {
    /// The same bandwidth everywhere.
    pub fn uniform(data: &CrossSectionDataset, sigma: f64) -> Self {
        Self { v1: sigma, v2: sigma, s: alloc::vec![sigma; data.covariates.k3()] }
    }

    fn named(&self) -> Vec<Named> {
        let mut v = alloc::vec![Named::new("stage2.v1", self.v1), Named::new("stage2.v2", self.v2)];
        for (j, h) in self.s.iter().enumerate() {
            v.push(Named::new(alloc::format!("stage2.s_{}", j + 1), *h));
        }
        v
    }
}

pub(crate) fn column_bandwidth(values: &[f64], n: usize, spec: BandwidthSpec) -> Result<f64> {
    let sd = sample_std(values);
    if !(sd > 0.0) {
        return Err(Error::degenerate("a continuous matching variable has zero variance"));
    }
    bandwidth(n, sd, spec)
}

/// Stage-2 bandwidths from the rule, with the scale of each fitted index.
pub fn stage2_bandwidths(data: &CrossSectionDataset, beta_hat: &[f64], spec: BandwidthSpec) -> Result<StageTwoBandwidths> {
    stage2_bandwidths_rows(data, &identity(data.len()), beta_hat, spec)
}

fn stage2_bandwidths_rows(data: &CrossSectionDataset, rows: &[usize], beta_hat: &[f64], spec: BandwidthSpec) -> Result<StageTwoBandwidths> {
    let c = &data.covariates;
    let n = rows.len();
    let v1: Vec<f64> = rows.iter().map(|&i| dot(c.x1.row(i), beta_hat)).collect();
    let v2: Vec<f64> = rows.iter().map(|&i| dot(c.x2.row(i), beta_hat)).collect();
    let s = (0..c.k3())
        .map(|j| {
            if data.kinds.s[j] {
                Ok(0.0)
            } else {
                column_bandwidth(&rows.iter().map(|&i| c.s.get(i, j)).collect::<Vec<_>>(), n, spec)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StageTwoBandwidths { v1: column_bandwidth(&v1, n, spec)?, v2: column_bandwidth(&v2, n, spec)?, s })
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn opt(h: f64, discrete: bool) -> Option<f64> {
    if discrete {
        None
    } else {
        Some(h)
    }
}

/// Stage-1 matching kernels: `(first, second)` where `first` matches
/// `(X2, W, S)` and weights the `sgn(X1'b)` term, `second` matches
/// `(X1, W, S)`.
fn stage1_kernels(data: &CrossSectionDataset, bw: &StageOneBandwidths, order: u32) -> Result<(MatchKernel, MatchKernel)> {
    let k = &data.kinds;
    let tail: Vec<Option<f64>> = bw
        .w
        .iter()
        .zip(&k.w)
        .map(|(&h, &d)| opt(h, d))
        .chain(bw.s.iter().zip(&k.s).map(|(&h, &d)| opt(h, d)))
        .collect();
    let build = |xs: &[f64]| {
        let mut v: Vec<Option<f64>> = xs.iter().zip(&k.x).map(|(&h, &d)| opt(h, d)).collect();
        v.extend_from_slice(&tail);
        MatchKernel::new(order, v)
    };
    Ok((build(&bw.x2)?, build(&bw.x1)?))
}

/// Stage-1 kernel weights of all pairs `i < m`, packed row by row.
#[derive(Clone, Debug)]
pub struct PairWeights {
    n: usize,
    first: Vec<f64>,
    second: Vec<f64>,
}

impl PairWeights {
    fn compute(data: &CrossSectionDataset, bw: &StageOneBandwidths, order: u32) -> Result<Self> {
        let (ka, kb) = stage1_kernels(data, bw, order)?;
        let c = &data.covariates;
        let n = data.len();
        let mut first = Vec::with_capacity(n * (n - 1) / 2);
        let mut second = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            let ri = c.row(i);
            for m in (i + 1)..n {
                let rm = c.row(m);
                let tail = ri.w.iter().zip(rm.w).map(|(a, b)| a - b).chain(ri.s.iter().zip(rm.s).map(|(a, b)| a - b));
                first.push(ka.weight(ri.x2.iter().zip(rm.x2).map(|(a, b)| a - b).chain(tail.clone())));
                second.push(kb.weight(ri.x1.iter().zip(rm.x1).map(|(a, b)| a - b).chain(tail)));
            }
        }
        Ok(Self { n, first, second })
    }

    #[inline]
    fn index(&self, a: usize, b: usize) -> usize {
        let (i, m) = if a < b { (a, b) } else { (b, a) };
        i * self.n - i * (i + 1) / 2 + (m - i - 1)
    }
}

/// Stage-1 criterion on the observations `rows` of `data` (a bootstrap
/// resample when rows repeat).
fn beta_criterion(data: &CrossSectionDataset, weights: &PairWeights, rows: &[usize]) -> SignSum {
    let c = &data.covariates;
    let k1 = c.k1();
    let mut builder = SignSumBuilder::new(k1 - 1);
    let mut dx = alloc::vec![0.0; k1];
    for (p, &a) in rows.iter().enumerate() {
        let ya = data.choices[a];
        for &b in &rows[p + 1..] {
            if a == b {
                continue;
            }
            let yb = data.choices[b];
            let c1 = yb.sign1() - ya.sign1();
            let c2 = yb.sign2() - ya.sign2();
            if c1 == 0.0 && c2 == 0.0 {
                continue;
            }
            let k = weights.index(a, b);
            if c1 != 0.0 {
                let w = weights.first[k];
                for (j, d) in dx.iter_mut().enumerate() {
                    *d = c.x1.get(a, j) - c.x1.get(b, j);
                }
                builder.push(w * c1, dx[0], &dx[1..]);
            }
            if c2 != 0.0 {
                let w = weights.second[k];
                for (j, d) in dx.iter_mut().enumerate() {
                    *d = c.x2.get(a, j) - c.x2.get(b, j);
                }
                builder.push(w * c2, dx[0], &dx[1..]);
            }
        }
    }
    builder.build()
}

fn stage2_kernel(data: &CrossSectionDataset, bw: &StageTwoBandwidths, order: u32) -> Result<MatchKernel> {
    let mut hs = alloc::vec![Some(bw.v1), Some(bw.v2)];
    hs.extend(bw.s.iter().zip(&data.kinds.s).map(|(&h, &d)| opt(h, d)));
    MatchKernel::new(order, hs)
}

/// Stage-2 pair weight `K(V1_im/s1) K(V2_im/s2) / (s1 s2)` times the
/// matching kernel of `S`.
#[inline]
fn stage2_weight(kernel: &MatchKernel, data: &CrossSectionDataset, v1: &[f64], v2: &[f64], a: usize, b: usize, pa: usize, pb: usize) -> f64 {
    let s = &data.covariates.s;
    let diffs = [v1[pa] - v1[pb], v2[pa] - v2[pb]].into_iter().chain(s.row(a).iter().zip(s.row(b)).map(|(x, y)| x - y));
    kernel.weight(diffs)
}

fn bundle(y: ChoiceOutcome) -> f64 {
    y.indicator(ChoiceOutcome::BUNDLE)
}

fn gamma_criterion(data: &CrossSectionDataset, rows: &[usize], beta_hat: &[f64], kernel: &MatchKernel) -> SignSum {
    let c = &data.covariates;
    let k2 = c.k2();
    let v1: Vec<f64> = rows.iter().map(|&i| dot(c.x1.row(i), beta_hat)).collect();
    let v2: Vec<f64> = rows.iter().map(|&i| dot(c.x2.row(i), beta_hat)).collect();
    let mut builder = SignSumBuilder::new(k2 - 1);
    let mut dw = alloc::vec![0.0; k2];
    for (p, &a) in rows.iter().enumerate() {
        let ya = bundle(data.choices[a]);
        for (q, &b) in rows.iter().enumerate().skip(p + 1) {
            let coef = ya - bundle(data.choices[b]);
            if coef == 0.0 {
                continue;
            }
            let w = stage2_weight(kernel, data, &v1, &v2, a, b, p, q);
            for (j, d) in dw.iter_mut().enumerate() {
                *d = c.w.get(a, j) - c.w.get(b, j);
            }
            builder.push(w * coef, dw[0], &dw[1..]);
        }
    }
    builder.build()
}

fn check_normalized(v: &[f64], len: usize, what: &str) -> Result<()> {
    if v.len() != len || v.first() != Some(&1.0) {
        return Err(Error::input(alloc::format!("{what} must have {len} entries with the first equal to 1")));
    }
    Ok(())
}

/// Stage-1 criterion at `b` (with `b[0] = 1`), using bandwidth `h` for
/// every continuous matching variable.
pub fn mrc_beta_objective(data: &CrossSectionDataset, b: &[f64], h: f64, kernel_order: u32) -> Result<f64> {
    check_normalized(b, data.covariates.k1(), "b")?;
    if data.len() < 2 {
        return Err(Error::input("the MRC criterion needs at least two observations"));
    }
    let weights = PairWeights::compute(data, &StageOneBandwidths::uniform(data, h), kernel_order)?;
    Ok(beta_criterion(data, &weights, &identity(data.len())).eval(&b[1..]))
}

/// Stage-2 criterion at `r` (with `r[0] = 1`) given `beta_hat`, using
/// bandwidth `sigma` for both fitted indexes and every continuous common
/// regressor.
pub fn mrc_gamma_objective(data: &CrossSectionDataset, r: &[f64], beta_hat: &[f64], sigma: f64, kernel_order: u32) -> Result<f64> {
    check_normalized(r, data.covariates.k2(), "r")?;
    check_normalized(beta_hat, data.covariates.k1(), "beta_hat")?;
    let kernel = stage2_kernel(data, &StageTwoBandwidths::uniform(data, sigma), kernel_order)?;
    Ok(gamma_criterion(data, &identity(data.len()), beta_hat, &kernel).eval(&r[1..]))
}

struct Fit {
    beta: Vec<f64>,
    gamma: Vec<f64>,
    values: [f64; 2],
    stage2_bw: StageTwoBandwidths,
    generations: [usize; 2],
    evaluations: [usize; 2],
    terms: [usize; 2],
}

/// Maximizes a sign sum over `[-bound, bound]^dim`; returns the full
/// normalized vector.
fn fit(data: &CrossSectionDataset, weights: &PairWeights, rows: &[usize], config: &MrcConfig) -> Result<Fit> {
    let s1 = beta_criterion(data, weights, rows);
    if s1.is_empty() {
        return Err(Error::estimation("mrc stage 1", "no pair with differing choices has positive matching weight"));
    }
    let Maximum { full: beta, value: v1, generations: g1, evaluations: e1 } = s1.maximize(&config.stage1_de)?;
    let bw2 = stage2_bandwidths_rows(data, rows, &beta, config.stage2_bandwidth)?;
    let kernel = stage2_kernel(data, &bw2, config.stage2_kernel_order)?;
    let s2 = gamma_criterion(data, rows, &beta, &kernel);
    if s2.is_empty() {
        return Err(Error::estimation("mrc stage 2", "no pair with differing bundle choice has positive matching weight"));
    }
    let Maximum { full: gamma, value: v2, generations: g2, evaluations: e2 } = s2.maximize(&config.stage2_de)?;
    Ok(Fit {
        beta,
        gamma,
        values: [v1, v2],
        stage2_bw: bw2,
        generations: [g1, g2],
        evaluations: [e1, e2],
        terms: [s1.len(), s2.len()],
    })
}

fn prepare(data: &CrossSectionDataset, config: &MrcConfig) -> Result<(CrossSectionDataset, StageOneBandwidths, PairWeights)> {
    if data.len() < 2 {
        return Err(Error::input("MRC estimation needs at least two observations"));
    }
    config.validate(data.covariates.k1(), data.covariates.k2())?;
    let data = data.canonicalized();
    let bw1 = StageOneBandwidths::from_rule(&data, config.stage1_bandwidth)?;
    let weights = PairWeights::compute(&data, &bw1, config.stage1_kernel_order)?;
    Ok((data, bw1, weights))
}

fn free_names(k1: usize, k2: usize) -> Vec<alloc::string::String> {
    let mut v: Vec<_> = (2..=k1).map(|j| alloc::format!("beta_{j}")).collect();
    v.extend((2..=k2).map(|j| alloc::format!("gamma_{j}")));
    v
}

fn free_of(f: &Fit) -> Vec<f64> {
    let mut v = f.beta[1..].to_vec();
    v.extend_from_slice(&f.gamma[1..]);
    v
}

/// Two-step MRC estimate of `(beta, gamma)`.
pub fn estimate_mrc(data: &CrossSectionDataset, config: &MrcConfig) -> Result<EstimationResult> {
    let (data, bw1, weights) = prepare(data, config)?;
    let f = fit(&data, &weights, &identity(data.len()), config)?;
    let c = &data.covariates;
    let mut tuning = bw1.named();
    tuning.extend(f.stage2_bw.named());
    let k3 = c.k3();
    Ok(EstimationResult {
        method: Method::Mrc,
        params: crate::data::ParamVector {
            beta: f.beta.clone(),
            gamma: f.gamma.clone(),
            rho1: alloc::vec![0.0; k3],
            rho2: alloc::vec![0.0; k3],
            rho_b: alloc::vec![0.0; k3],
        },
        names: free_names(c.k1(), c.k2()),
        estimates: free_of(&f),
        criterion_values: f.values.to_vec(),
        tuning,
        seed: config.stage1_de.seed,
        diagnostics: Diagnostics {
            generations: f.generations.to_vec(),
            evaluations: f.evaluations.to_vec(),
            criterion_terms: f.terms.to_vec(),
            ..Diagnostics::default()
        },
        bootstrap: None,
    })
}

/// Draws `n` indices uniformly with replacement.
pub fn resample_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random_range(0..n)).collect()
}

/// Nonparametric bootstrap: both stages are re-estimated on each resample
/// (stage 2 at the resample's own stage-1 estimate) and percentile
/// intervals are formed for every free coordinate.
pub fn bootstrap_mrc(data: &CrossSectionDataset, config: &MrcConfig, b: usize, seed: u64) -> Result<BootstrapResult> {
    if b < 2 {
        return Err(Error::input("the bootstrap needs B >= 2"));
    }
    let n = data.len();
    let resamples: Vec<Vec<usize>> = (0..b).map(|k| resample_indices(n, derive_seed(seed, k as u64, Stream::Bootstrap))).collect();
    let mut out = bootstrap_mrc_indices(data, config, &resamples)?;
    out.seed = seed;
    Ok(out)
}

/// Bootstrap over explicit resamples; each entry lists row indices of the
/// canonically ordered data (see
/// [`CrossSectionDataset::canonicalized`]).
pub fn bootstrap_mrc_indices(data: &CrossSectionDataset, config: &MrcConfig, resamples: &[Vec<usize>]) -> Result<BootstrapResult> {
    let (data, _, weights) = prepare(data, config)?;
    let mut draws = Vec::with_capacity(resamples.len());
    let mut failed = 0;
    for rows in resamples {
        if rows.iter().any(|&i| i >= data.len()) {
            return Err(Error::input("resample index out of range"));
        }
        match fit(&data, &weights, rows, config) {
            Ok(f) => draws.push(free_of(&f)),
            Err(e @ (Error::Estimation { .. } | Error::Degenerate(_))) => {
                log::debug!("bootstrap draw discarded: {e}");
                failed += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if draws.is_empty() {
        return Err(Error::estimation("mrc bootstrap", "every bootstrap draw was degenerate"));
    }
    let p = draws[0].len();
    let intervals = (0..p)
        .map(|j| percentile_interval(&draws.iter().map(|d| d[j]).collect::<Vec<_>>(), config.level))
        .collect::<Result<Vec<_>>>()?;
    Ok(BootstrapResult { draws, intervals, level: config.level, requested: resamples.len(), failed, seed: 0, epsilon: None })
}

/// Point estimate plus bootstrap intervals.
pub fn estimate_mrc_with_bootstrap(data: &CrossSectionDataset, config: &MrcConfig, b: usize, seed: u64) -> Result<EstimationResult> {
    let mut est = estimate_mrc(data, config)?;
    est.bootstrap = Some(bootstrap_mrc(data, config, b, seed)?);
    Ok(est)
}

/// Per-pair contributions `g(a, b)` (for `a < b`) to the interaction
/// statistic, packed like [`PairWeights`].
fn eta_contributions(data: &CrossSectionDataset, beta_hat: &[f64], gamma_hat: &[f64], kernel: &MatchKernel) -> Vec<f64> {
    let c = &data.covariates;
    let n = data.len();
    let v1 = c.x1.dot_rows(beta_hat);
    let v2 = c.x2.dot_rows(beta_hat);
    let mut g = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            let dy = bundle(data.choices[a]) - bundle(data.choices[b]);
            if dy == 0.0 {
                g.push(0.0);
                continue;
            }
            let w = stage2_weight(kernel, data, &v1, &v2, a, b, a, b);
            let dw: f64 = c.w.row(a).iter().zip(c.w.row(b)).zip(gamma_hat).map(|((x, y), g)| (x - y) * g).sum();
            g.push(w * dy * crate::math::sgn(dw));
        }
    }
    g
}

/// Interaction statistic
/// `[N(N-1)]^{-1} sum_{i != m} K_s(V_im) (Y_i11 - Y_m11) sgn(W_im' gamma_hat)`
/// over ordered pairs, where `K_s` is the stage-2 weight.
pub fn eta_statistic_cross(data: &CrossSectionDataset, beta_hat: &[f64], gamma_hat: &[f64], bw: &StageTwoBandwidths, kernel_order: u32) -> Result<f64> {
    let n = data.len();
    if n < 2 {
        return Err(Error::input("the interaction statistic needs at least two observations"));
    }
    let kernel = stage2_kernel(data, bw, kernel_order)?;
    let g = eta_contributions(data, beta_hat, gamma_hat, &kernel);
    Ok(2.0 * g.iter().sum::<f64>() / (n as f64 * (n - 1) as f64))
}

/// One-sided bootstrap test of a positive interaction effect. The
/// statistic is recomputed on `b` resamples with `beta_hat` and
/// `gamma_hat` held fixed; the effect is deemed positive when the 5%
/// quantile of the bootstrap statistics exceeds zero.
pub fn eta_test_cross(
    data: &CrossSectionDataset,
    beta_hat: &[f64],
    gamma_hat: &[f64],
    bw: &StageTwoBandwidths,
    kernel_order: u32,
    b: usize,
    seed: u64,
) -> Result<EtaTestResult> {
    check_normalized(beta_hat, data.covariates.k1(), "beta_hat")?;
    check_normalized(gamma_hat, data.covariates.k2(), "gamma_hat")?;
    let n = data.len();
    if n < 2 {
        return Err(Error::input("the interaction test needs at least two observations"));
    }
    if b < 1 {
        return Err(Error::input("the interaction test needs B >= 1"));
    }
    let data = data.canonicalized();
    let kernel = stage2_kernel(&data, bw, kernel_order)?;
    let g = eta_contributions(&data, beta_hat, gamma_hat, &kernel);
    let norm = n as f64 * (n - 1) as f64;
    let statistic = 2.0 * g.iter().sum::<f64>() / norm;
    let mut counts = alloc::vec![0.0f64; n];
    let draws = (0..b)
        .map(|k| {
            counts.iter_mut().for_each(|c| *c = 0.0);
            for i in resample_indices(n, derive_seed(seed, k as u64, Stream::EtaTest)) {
                counts[i] += 1.0;
            }
            let mut total = 0.0;
            let mut p = 0;
            for a in 0..n {
                let ca = counts[a];
                let row = &g[p..p + (n - a - 1)];
                p += n - a - 1;
                if ca == 0.0 {
                    continue;
                }
                let mut acc = 0.0;
                for (gv, cb) in row.iter().zip(&counts[a + 1..]) {
                    acc += gv * cb;
                }
                total += ca * acc;
            }
            2.0 * total / norm
        })
        .collect();
    EtaTestResult::from_draws(statistic, draws, seed)
}
