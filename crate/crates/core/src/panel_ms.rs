//! Localized maximum score for panels, with the numerical bootstrap and a
//! test for a positive interaction effect.
//!
//! Fixed effects cancel in within-agent comparisons of two periods
//! `t > s`. Stage 1 maximizes
//!
//! ```text
//! sum_i sum_{t>s} sum_d  K_h(X2_ts, W_ts, S_ts) (Y_ds - Y_dt) sgn(X1_ts' b) (-1)^{d1}
//!                      + K_h(X1_ts, W_ts, S_ts) (Y_ds - Y_dt) sgn(X2_ts' b) (-1)^{d2}
//! ```
//!
//! and stage 2 maximizes
//! `sum_i sum_{t>s} K_s(X1_ts, X2_ts, S_ts) (Y11_t - Y11_s) sgn(W_ts' r)`,
//! where `Z_ts = Z_t - Z_s`. Only agents whose choice changes contribute.
//!
//! The numerical bootstrap maximizes
//! `N^-1 sum phi_i(b) + sqrt(N eps) [N^-1 sum phi*_i(b) - N^-1 sum phi_i(b)]`
//! where `phi_i` is agent `i`'s summand in indicator form, recentred at the
//! point estimate, and `phi*_i` is the same summand for the `i`-th
//! resampled agent. With `eps = 1/N` this is the classic bootstrap.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::{ChoiceOutcome, Covariates, PanelDataset, ParamVector};
use crate::error::{Error, Result};
use crate::kernels::{BandwidthRule, BandwidthSpec, GaussianKernel, MatchKernel};
use crate::math::{rate, sgn};
use crate::mrc::{column_bandwidth, resample_indices};
use crate::optimizer::DeSettings;
use crate::result::{percentile_interval, BootstrapResult, Diagnostics, EstimationResult, EtaTestResult, Method, Named};
use crate::seed::{derive_seed, Stream};
use crate::signsum::{Maximum, SignSum, SignSumBuilder};

/// Rule for the numerical-bootstrap perturbation sizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum EpsilonRule {
    /// `eps1 = eps2 = c4 N^{-5/7} (ln N)^{-5/14}`.
    Simulation {
        /// Constant `c4`.
        c4: f64,
    },
    /// Rates balancing bias and variance:
    /// `eps1 = c N^{-(k+2)/(k+3)} (ln N)^{-k/(2k+6)}` with `k = k1 + k2`
    /// and `eps2 = c N^{-(2k1+2)/(2k1+3)} (ln N)^{-k1/(2k1+3)}`.
    Rate {
        /// Constant.
        c: f64,
    },
    /// Explicit values.
    Fixed {
        /// Stage-1 perturbation.
        eps1: f64,
        /// Stage-2 perturbation.
        eps2: f64,
    },
}

impl EpsilonRule {
    /// `(eps1, eps2)` for `n` agents; both must lie in `[1/n, 1]`.
    pub fn epsilons(&self, n: usize, k1: usize, k2: usize) -> Result<[f64; 2]> {
        if n < 2 {
            return Err(Error::input("the numerical bootstrap needs N >= 2"));
        }
        let nf = n as f64;
        let eps = match *self {
            EpsilonRule::Simulation { c4 } => {
                let e = c4 * rate(nf, -5.0 / 7.0, -5.0 / 14.0);
                [e, e]
            }
            EpsilonRule::Rate { c } => {
                let k = (k1 + k2) as f64;
                let k1 = k1 as f64;
                [
                    c * rate(nf, -(k + 2.0) / (k + 3.0), -k / (2.0 * k + 6.0)),
                    c * rate(nf, -(2.0 * k1 + 2.0) / (2.0 * k1 + 3.0), -k1 / (2.0 * k1 + 3.0)),
                ]
            }
            EpsilonRule::Fixed { eps1, eps2 } => [eps1, eps2],
        };
        // Small tolerance so that eps = 1/N passes despite rounding.
        let lo = (1.0 - 1e-12) / nf;
        if eps.iter().any(|&e| !(e >= lo && e <= 1.0)) {
            return Err(Error::config(alloc::format!("perturbation sizes {eps:?} must lie in [1/N, 1] for N = {n}")));
        }
        Ok(eps)
    }
}

/// Tuning of the panel maximum-score estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PanelMsConfig {
    /// Kernel order for both stages.
    pub kernel_order: u32,
    /// Bandwidth rule, shared by both stages.
    pub bandwidth: BandwidthSpec,
    /// Optimizer settings for stage 1.
    pub stage1_de: DeSettings,
    /// Optimizer settings for stage 2.
    pub stage2_de: DeSettings,
    /// Perturbation sizes of the numerical bootstrap.
    pub epsilon: EpsilonRule,
    /// Confidence level of bootstrap intervals.
    pub level: f64,
}

impl Default for PanelMsConfig {
    fn default() -> Self {
        Self {
            kernel_order: 2,
            bandwidth: BandwidthSpec { constant: 2.0, rule: BandwidthRule::Panel },
            stage1_de: DeSettings::default(),
            stage2_de: DeSettings::default(),
            epsilon: EpsilonRule::Simulation { c4: 2.0 },
            level: 0.95,
        }
    }
}

impl PanelMsConfig {
    /// Same configuration with both optimizer seeds replaced.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.stage1_de.seed = derive_seed(seed, 1, Stream::Optimizer);
        c.stage2_de.seed = derive_seed(seed, 2, Stream::Optimizer);
        c
    }
}

/// Bandwidths per differenced column; discrete entries are unused.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelBandwidths {
    /// Columns of `X1_ts`.
    pub x1: Vec<f64>,
    /// Columns of `X2_ts`.
    pub x2: Vec<f64>,
    /// Columns of `W_ts`.
    pub w: Vec<f64>,
    /// Columns of `S_ts`.
    pub s: Vec<f64>,
}

impl PanelBandwidths {
    /// The same bandwidth for every column.
    pub fn uniform(data: &PanelDataset, h: f64) -> Self {
        let c = &data.periods[0].covariates;
        Self { x1: alloc::vec![h; c.k1()], x2: alloc::vec![h; c.k1()], w: alloc::vec![h; c.k2()], s: alloc::vec![h; c.k3()] }
    }

    /// `constant * sd * rate(N)` where `sd` is the standard deviation of
    /// the within-agent difference of each continuous column.
    pub fn from_rule(data: &PanelDataset, spec: BandwidthSpec) -> Result<Self> {
        let diffs = differences(data)?;
        let n = data.n();
        let k = &data.kinds;
        let col = |pick: &dyn Fn(&Covariates) -> &crate::data::Block, disc: &[bool]| -> Result<Vec<f64>> {
            let cols = pick(&diffs[0].cov).cols();
            (0..cols)
                .map(|j| {
                    if disc[j] {
                        return Ok(0.0);
                    }
                    let pooled: Vec<f64> = diffs.iter().flat_map(|p| pick(&p.cov).column(j)).collect();
                    column_bandwidth(&pooled, n, spec)
                })
                .collect()
        };
        Ok(Self {
            x1: col(&|c| &c.x1, &k.x)?,
            x2: col(&|c| &c.x2, &k.x)?,
            w: col(&|c| &c.w, &k.w)?,
            s: col(&|c| &c.s, &k.s)?,
        })
    }

    fn named(&self) -> Vec<Named> {
        let mut v = Vec::new();
        for (p, xs) in [("x1", &self.x1), ("x2", &self.x2), ("w", &self.w), ("s", &self.s)] {
            for (j, h) in xs.iter().enumerate() {
                v.push(Named::new(alloc::format!("h.{p}_{}", j + 1), *h));
            }
        }
        v
    }
}

/// Differences `Z_t - Z_s` of one period pair for all agents.
struct PairDiff {
    cov: Covariates,
    yt: Vec<ChoiceOutcome>,
    ys: Vec<ChoiceOutcome>,
}

fn differences(data: &PanelDataset) -> Result<Vec<PairDiff>> {
    let mut out = Vec::new();
    for t in 1..data.t_periods() {
        for s in 0..t {
            let (pt, ps) = (&data.periods[t], &data.periods[s]);
            out.push(PairDiff { cov: pt.covariates.sub(&ps.covariates)?, yt: pt.choices.clone(), ys: ps.choices.clone() });
        }
    }
    Ok(out)
}

fn opt(h: f64, discrete: bool) -> Option<f64> {
    if discrete {
        None
    } else {
        Some(h)
    }
}

fn kernel_over(order: u32, blocks: &[(&[f64], &[bool])]) -> Result<MatchKernel> {
    let hs = blocks.iter().flat_map(|(h, d)| h.iter().zip(d.iter()).map(|(&h, &d)| opt(h, d))).collect();
    MatchKernel::new(order, hs)
}

/// Sign terms grouped by agent: agent `i` owns terms
/// `start[i]..start[i + 1]`.
#[derive(Clone, Debug)]
struct AgentTerms {
    dim: usize,
    start: Vec<usize>,
    coef: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl AgentTerms {
    fn new(dim: usize) -> Self {
        Self { dim, start: alloc::vec![0], coef: Vec::new(), u: Vec::new(), v: Vec::new() }
    }

    fn push(&mut self, c: f64, u: f64, v: &[f64]) {
        if c != 0.0 {
            self.coef.push(c);
            self.u.push(u);
            self.v.extend_from_slice(v);
        }
    }

    fn end_agent(&mut self) {
        self.start.push(self.coef.len());
    }

    fn n(&self) -> usize {
        self.start.len() - 1
    }

    #[inline]
    fn z(&self, p: usize, theta: &[f64]) -> f64 {
        let mut z = self.u[p];
        for (vj, tj) in self.v[p * self.dim..(p + 1) * self.dim].iter().zip(theta) {
            z += vj * tj;
        }
        z
    }

    /// Sign-form criterion with every agent weighted by `count[i]`.
    fn sign_sum(&self, count: Option<&[f64]>) -> SignSum {
        let mut b = SignSumBuilder::new(self.dim);
        for i in 0..self.n() {
            let w = count.map_or(1.0, |c| c[i]);
            if w == 0.0 {
                continue;
            }
            for p in self.start[i]..self.start[i + 1] {
                b.push(w * self.coef[p], self.u[p], &self.v[p * self.dim..(p + 1) * self.dim]);
            }
        }
        b.build()
    }

    /// Agent `i`'s summand in indicator form recentred at `center`.
    fn phi(&self, i: usize, theta: &[f64], center: &[f64]) -> f64 {
        let mut total = 0.0;
        for p in self.start[i]..self.start[i + 1] {
            let a = if self.z(p, theta) > 0.0 { 1.0 } else { 0.0 };
            let b = if self.z(p, center) > 0.0 { 1.0 } else { 0.0 };
            total += self.coef[p] * (a - b);
        }
        total
    }

    /// `sum_i weight_i * phi_i(theta)` as a sign sum plus a constant:
    /// `1[z > 0] - 1[z0 > 0] = (sgn z - sgn z0) / 2`.
    fn weighted_phi_sum(&self, weight: &[f64], center: &[f64]) -> SignSum {
        let mut b = SignSumBuilder::new(self.dim);
        let zeros = alloc::vec![0.0; self.dim];
        let mut constant = 0.0;
        for (i, &w) in weight.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for p in self.start[i]..self.start[i + 1] {
                let c = 0.5 * w * self.coef[p];
                b.push(c, self.u[p], &self.v[p * self.dim..(p + 1) * self.dim]);
                constant -= c * sgn(self.z(p, center));
            }
        }
        b.push(constant, 1.0, &zeros);
        b.build()
    }
}

fn bundle(y: ChoiceOutcome) -> f64 {
    y.indicator(ChoiceOutcome::BUNDLE)
}

fn beta_terms(data: &PanelDataset, bw: &PanelBandwidths, order: u32) -> Result<AgentTerms> {
    let diffs = differences(data)?;
    let k = &data.kinds;
    let ka = kernel_over(order, &[(&bw.x2, &k.x), (&bw.w, &k.w), (&bw.s, &k.s)])?;
    let kb = kernel_over(order, &[(&bw.x1, &k.x), (&bw.w, &k.w), (&bw.s, &k.s)])?;
    let k1 = k.x.len();
    let mut terms = AgentTerms::new(k1 - 1);
    for i in 0..data.n() {
        for p in &diffs {
            let (ys, yt) = (p.ys[i], p.yt[i]);
            let r = p.cov.row(i);
            let tail = r.w.iter().chain(r.s).copied();
            let c1 = ys.sign1() - yt.sign1();
            if c1 != 0.0 {
                let w = ka.weight(r.x2.iter().copied().chain(tail.clone()));
                terms.push(w * c1, r.x1[0], &r.x1[1..]);
            }
            let c2 = ys.sign2() - yt.sign2();
            if c2 != 0.0 {
                let w = kb.weight(r.x1.iter().copied().chain(tail));
                terms.push(w * c2, r.x2[0], &r.x2[1..]);
            }
        }
        terms.end_agent();
    }
    Ok(terms)
}

fn gamma_terms(data: &PanelDataset, bw: &PanelBandwidths, order: u32) -> Result<AgentTerms> {
    let diffs = differences(data)?;
    let k = &data.kinds;
    let kernel = kernel_over(order, &[(&bw.x1, &k.x), (&bw.x2, &k.x), (&bw.s, &k.s)])?;
    let mut terms = AgentTerms::new(k.w.len() - 1);
    for i in 0..data.n() {
        for p in &diffs {
            let c = bundle(p.yt[i]) - bundle(p.ys[i]);
            if c != 0.0 {
                let r = p.cov.row(i);
                let w = kernel.weight(r.x1.iter().chain(r.x2).chain(r.s).copied());
                terms.push(w * c, r.w[0], &r.w[1..]);
            }
        }
        terms.end_agent();
    }
    Ok(terms)
}

fn check_normalized(v: &[f64], len: usize, what: &str) -> Result<()> {
    if v.len() != len || v.first() != Some(&1.0) {
        return Err(Error::input(alloc::format!("{what} must have {len} entries with the first equal to 1")));
    }
    Ok(())
}

/// Stage-1 criterion at `b` (with `b[0] = 1`), bandwidth `h` for every
/// continuous matching variable.
pub fn ms_beta_objective(data: &PanelDataset, b: &[f64], h: f64, kernel_order: u32) -> Result<f64> {
    check_normalized(b, data.kinds.x.len(), "b")?;
    let terms = beta_terms(data, &PanelBandwidths::uniform(data, h), kernel_order)?;
    Ok(terms.sign_sum(None).eval(&b[1..]))
}

/// Stage-2 criterion at `r` (with `r[0] = 1`), bandwidth `sigma` for every
/// continuous matching variable.
pub fn ms_gamma_objective(data: &PanelDataset, r: &[f64], sigma: f64, kernel_order: u32) -> Result<f64> {
    check_normalized(r, data.kinds.w.len(), "r")?;
    let terms = gamma_terms(data, &PanelBandwidths::uniform(data, sigma), kernel_order)?;
    Ok(terms.sign_sum(None).eval(&r[1..]))
}

struct Prepared {
    data: PanelDataset,
    bw: PanelBandwidths,
    beta: AgentTerms,
    gamma: AgentTerms,
}

fn prepare(data: &PanelDataset, config: &PanelMsConfig) -> Result<Prepared> {
    GaussianKernel::new(config.kernel_order)?;
    if data.switchers() == 0 {
        return Err(Error::estimation("panel ms", "no agent changes its choice between periods"));
    }
    let data = data.canonicalized();
    let bw = PanelBandwidths::from_rule(&data, config.bandwidth)?;
    let beta = beta_terms(&data, &bw, config.kernel_order)?;
    let gamma = gamma_terms(&data, &bw, config.kernel_order)?;
    Ok(Prepared { data, bw, beta, gamma })
}

/// Two-stage panel maximum-score estimate of `(beta, gamma)`.
pub fn estimate_panel_ms(data: &PanelDataset, config: &PanelMsConfig) -> Result<EstimationResult> {
    let p = prepare(data, config)?;
    let s1 = p.beta.sign_sum(None);
    if s1.is_empty() {
        return Err(Error::estimation("panel ms stage 1", "no switching agent has positive matching weight"));
    }
    let s2 = p.gamma.sign_sum(None);
    if s2.is_empty() {
        return Err(Error::estimation("panel ms stage 2", "no agent switches into or out of the bundle with positive matching weight"));
    }
    let Maximum { full: beta, value: v1, generations: g1, evaluations: e1 } = s1.maximize(&config.stage1_de)?;
    let Maximum { full: gamma, value: v2, generations: g2, evaluations: e2 } = s2.maximize(&config.stage2_de)?;
    let (k1, k2, k3) = (beta.len(), gamma.len(), p.data.kinds.s.len());
    let mut names: Vec<_> = (2..=k1).map(|j| alloc::format!("beta_{j}")).collect();
    names.extend((2..=k2).map(|j| alloc::format!("gamma_{j}")));
    let mut estimates = beta[1..].to_vec();
    estimates.extend_from_slice(&gamma[1..]);
    Ok(EstimationResult {
        method: Method::PanelMs,
        params: ParamVector { beta, gamma, rho1: alloc::vec![0.0; k3], rho2: alloc::vec![0.0; k3], rho_b: alloc::vec![0.0; k3] },
        names,
        estimates,
        criterion_values: alloc::vec![v1, v2],
        tuning: p.bw.named(),
        seed: config.stage1_de.seed,
        diagnostics: Diagnostics {
            generations: alloc::vec![g1, g2],
            evaluations: alloc::vec![e1, e2],
            criterion_terms: alloc::vec![s1.len(), s2.len()],
            switchers: Some(p.data.switchers()),
            first_stage: None,
        },
        bootstrap: None,
    })
}

/// The perturbed objective of one numerical-bootstrap draw, evaluated
/// literally from its definition. Used to check the fast weighted form.
pub struct NumericalObjective {
    terms: AgentTerms,
    center: Vec<f64>,
    resample: Vec<usize>,
    epsilon: f64,
}

/// Which stage a [`NumericalObjective`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// The `beta` criterion.
    Beta,
    /// The `gamma` criterion.
    Gamma,
}

impl NumericalObjective {
    /// Perturbed objective of `stage` for the resample `resample` (agent
    /// indices into the canonically ordered data), recentred at `center`
    /// (free coordinates of the point estimate).
    pub fn new(data: &PanelDataset, config: &PanelMsConfig, stage: Stage, center: &[f64], resample: Vec<usize>, epsilon: f64) -> Result<Self> {
        let p = prepare(data, config)?;
        let terms = match stage {
            Stage::Beta => p.beta,
            Stage::Gamma => p.gamma,
        };
        if center.len() != terms.dim || resample.len() != terms.n() || resample.iter().any(|&i| i >= terms.n()) {
            return Err(Error::input("center or resample does not fit the data"));
        }
        Ok(Self { terms, center: center.to_vec(), resample, epsilon })
    }

    /// `N^-1 sum phi_i + sqrt(N eps) (N^-1 sum phi*_i - N^-1 sum phi_i)`.
    pub fn eval(&self, theta: &[f64]) -> f64 {
        let n = self.terms.n() as f64;
        let orig: f64 = (0..self.terms.n()).map(|i| self.terms.phi(i, theta, &self.center)).sum::<f64>() / n;
        let boot = self.classic(theta);
        orig + libm::sqrt(n * self.epsilon) * (boot - orig)
    }

    /// Classic bootstrap objective `N^-1 sum phi*_i`.
    pub fn classic(&self, theta: &[f64]) -> f64 {
        let n = self.terms.n() as f64;
        self.resample.iter().map(|&i| self.terms.phi(i, theta, &self.center)).sum::<f64>() / n
    }

    /// The same objective through the weighted sign-sum representation
    /// used by [`numerical_bootstrap`].
    pub fn eval_fast(&self, theta: &[f64]) -> f64 {
        perturbed_sum(&self.terms, &self.resample, self.epsilon, &self.center).eval(theta)
    }
}

/// Agent weights `(1 - sqrt(N eps)) / N + sqrt(N eps) * mult_i / N`.
fn perturbed_sum(terms: &AgentTerms, resample: &[usize], epsilon: f64, center: &[f64]) -> SignSum {
    let n = terms.n();
    let nf = n as f64;
    let a = libm::sqrt(nf * epsilon);
    let mut mult = alloc::vec![0.0; n];
    for &i in resample {
        mult[i] += 1.0;
    }
    let weight: Vec<f64> = mult.iter().map(|m| (1.0 - a) / nf + a * m / nf).collect();
    terms.weighted_phi_sum(&weight, center)
}

/// Numerical bootstrap around the point estimates `beta_hat`, `gamma_hat`
/// (full normalized vectors). Each draw maximizes the perturbed objectives
/// of both stages; a draw `b*` is mapped to
/// `beta_hat + (N eps)^{-1/3} (b* - beta_hat)`, which carries the
/// sampling distribution of the estimator, and the stored draws and
/// percentile intervals refer to these rescaled values.
pub fn numerical_bootstrap(data: &PanelDataset, config: &PanelMsConfig, beta_hat: &[f64], gamma_hat: &[f64], b: usize, seed: u64) -> Result<BootstrapResult> {
    if b < 2 {
        return Err(Error::input("the bootstrap needs B >= 2"));
    }
    check_normalized(beta_hat, data.kinds.x.len(), "beta_hat")?;
    check_normalized(gamma_hat, data.kinds.w.len(), "gamma_hat")?;
    let p = prepare(data, config)?;
    let n = p.data.n();
    let eps = config.epsilon.epsilons(n, data.kinds.x.len(), data.kinds.w.len())?;
    let scale = [libm::cbrt(n as f64 * eps[0]), libm::cbrt(n as f64 * eps[1])];
    let centers = [&beta_hat[1..], &gamma_hat[1..]];
    let mut draws = Vec::with_capacity(b);
    let mut failed = 0;
    for k in 0..b {
        let rows = resample_indices(n, derive_seed(seed, k as u64, Stream::Bootstrap));
        let mut draw = Vec::new();
        let mut ok = true;
        for (stage, (terms, de)) in [(&p.beta, &config.stage1_de), (&p.gamma, &config.stage2_de)].into_iter().enumerate() {
            let sum = perturbed_sum(terms, &rows, eps[stage], centers[stage]);
            if sum.len() <= 1 {
                ok = false;
                break;
            }
            let full = sum.maximize(de)?.full;
            for (j, &x) in full[1..].iter().enumerate() {
                let c = centers[stage][j];
                draw.push(c + (x - c) / scale[stage]);
            }
        }
        if ok {
            draws.push(draw);
        } else {
            failed += 1;
        }
    }
    if draws.is_empty() {
        return Err(Error::estimation("panel ms bootstrap", "every bootstrap draw was degenerate"));
    }
    let dim = draws[0].len();
    let intervals = (0..dim)
        .map(|j| percentile_interval(&draws.iter().map(|d| d[j]).collect::<Vec<_>>(), config.level))
        .collect::<Result<Vec<_>>>()?;
    Ok(BootstrapResult { draws, intervals, level: config.level, requested: b, failed, seed, epsilon: Some(eps) })
}

/// Point estimate plus numerical-bootstrap intervals.
pub fn estimate_panel_ms_with_bootstrap(data: &PanelDataset, config: &PanelMsConfig, b: usize, seed: u64) -> Result<EstimationResult> {
    let mut est = estimate_panel_ms(data, config)?;
    est.bootstrap = Some(numerical_bootstrap(data, config, &est.params.beta, &est.params.gamma, b, seed)?);
    Ok(est)
}

fn eta_contributions(data: &PanelDataset, gamma_hat: &[f64], bw: &PanelBandwidths, order: u32) -> Result<Vec<f64>> {
    let terms = gamma_terms(data, bw, order)?;
    Ok((0..terms.n())
        .map(|i| (terms.start[i]..terms.start[i + 1]).map(|p| terms.coef[p] * sgn(terms.z(p, &gamma_hat[1..]))).sum())
        .collect())
}

/// Interaction statistic: the stage-2 criterion at `gamma_hat` divided by
/// the number of agents.
pub fn eta_statistic_panel(data: &PanelDataset, gamma_hat: &[f64], bw: &PanelBandwidths, kernel_order: u32) -> Result<f64> {
    check_normalized(gamma_hat, data.kinds.w.len(), "gamma_hat")?;
    let g = eta_contributions(data, gamma_hat, bw, kernel_order)?;
    Ok(g.iter().sum::<f64>() / data.n() as f64)
}

/// One-sided bootstrap test of a positive interaction effect with
/// `gamma_hat` held fixed across resamples of agents.
pub fn eta_test_panel(data: &PanelDataset, gamma_hat: &[f64], bw: &PanelBandwidths, kernel_order: u32, b: usize, seed: u64) -> Result<EtaTestResult> {
    check_normalized(gamma_hat, data.kinds.w.len(), "gamma_hat")?;
    if b < 1 {
        return Err(Error::input("the interaction test needs B >= 1"));
    }
    let data = data.canonicalized();
    let g = eta_contributions(&data, gamma_hat, bw, kernel_order)?;
    let n = data.n();
    let statistic = g.iter().sum::<f64>() / n as f64;
    let draws = (0..b)
        .map(|k| resample_indices(n, derive_seed(seed, k as u64, Stream::EtaTest)).iter().map(|&i| g[i]).sum::<f64>() / n as f64)
        .collect();
    EtaTestResult::from_draws(statistic, draws, seed)
}

/// Bandwidths the estimator would use on `data`.
pub fn panel_bandwidths(data: &PanelDataset, config: &PanelMsConfig) -> Result<PanelBandwidths> {
    PanelBandwidths::from_rule(&data.canonicalized(), config.bandwidth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Block, ColumnKinds, PanelPeriod};
    use alloc::vec;

    fn one_agent(x1t: [f64; 2], yt: ChoiceOutcome, ys: ChoiceOutcome, wt: [f64; 2]) -> PanelDataset {
        let per = |x1: [f64; 2], w: [f64; 2], y| PanelPeriod {
            covariates: Covariates::new(
                Block::from_rows(2, &[x1]).unwrap(),
                Block::zeros(1, 2),
                Block::from_rows(2, &[w]).unwrap(),
                Block::zeros(1, 0),
            )
            .unwrap(),
            choices: vec![y],
        };
        PanelDataset::new(vec![per([0.0, 0.0], [0.0, 0.0], ys), per(x1t, wt, yt)], ColumnKinds::continuous(2, 2, 0)).unwrap()
    }

    #[test]
    fn beta_objective_hand_example() {
        let d = one_agent([2.0, 0.0], ChoiceOutcome::FIRST, ChoiceOutcome::NONE, [0.0, 0.0]);
        let v = ms_beta_objective(&d, &[1.0, 0.0], 1.0, 2).unwrap();
        assert!((v - 0.050660).abs() < 1e-6, "{v}");
        let stay = one_agent([2.0, 0.0], ChoiceOutcome::FIRST, ChoiceOutcome::FIRST, [0.0, 0.0]);
        assert_eq!(ms_beta_objective(&stay, &[1.0, 0.0], 1.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn gamma_objective_hand_example() {
        let d = one_agent([0.0, 0.0], ChoiceOutcome::BUNDLE, ChoiceOutcome::NONE, [1.0, 0.0]);
        let v = ms_gamma_objective(&d, &[1.0, 0.0], 1.0, 2).unwrap();
        assert!((v - 0.025330).abs() < 1e-6, "{v}");
        assert_eq!(v, ms_gamma_objective(&d, &[1.0, 5.0], 1.0, 2).unwrap());
        let l = eta_statistic_panel(&d, &[1.0, 0.0], &PanelBandwidths::uniform(&d, 1.0), 2).unwrap();
        assert!((l - 0.025330).abs() < 1e-6);
    }

    fn design3(n: usize, seed: u64) -> PanelDataset {
        crate::designs::simulate_panel(&crate::designs::DesignSpec::builtin(3).unwrap(), n, seed).unwrap()
    }

    #[test]
    fn classic_bootstrap_identity_at_inverse_n() {
        let d = design3(200, 7);
        let n = d.n();
        let cfg = PanelMsConfig::default();
        let rows = resample_indices(n, 99);
        let mut rng = crate::seed::rng(5);
        for stage in [Stage::Beta, Stage::Gamma] {
            let obj = NumericalObjective::new(&d, &cfg, stage, &[0.8], rows.clone(), 1.0 / n as f64).unwrap();
            for _ in 0..100 {
                let t = [rand::Rng::random_range(&mut rng, -4.0..4.0)];
                let (lit, classic, fast) = (obj.eval(&t), obj.classic(&t), obj.eval_fast(&t));
                assert!((lit - classic).abs() < 1e-12, "{lit} {classic}");
                assert!((fast - lit).abs() < 1e-12, "{fast} {lit}");
            }
        }
    }

    #[test]
    fn perturbed_objective_fast_form_matches_definition() {
        let d = design3(150, 3);
        let rows = resample_indices(d.n(), 4);
        let obj = NumericalObjective::new(&d, &PanelMsConfig::default(), Stage::Beta, &[1.3], rows, 0.05).unwrap();
        let mut rng = crate::seed::rng(6);
        for _ in 0..100 {
            let t = [rand::Rng::random_range(&mut rng, -4.0..4.0)];
            assert!((obj.eval(&t) - obj.eval_fast(&t)).abs() < 1e-12);
        }
    }

    #[test]
    fn estimates_ignore_agent_order_and_non_switchers() {
        let d = design3(300, 11);
        let cfg = PanelMsConfig::default();
        let a = estimate_panel_ms(&d, &cfg).unwrap();
        let rev: Vec<usize> = (0..d.n()).rev().collect();
        let b = estimate_panel_ms(&d.resample(&rev), &cfg).unwrap();
        assert_eq!(a.estimates, b.estimates);
        assert!(a.diagnostics.switchers.unwrap() > 0);
    }

    #[test]
    fn no_switchers_is_an_estimation_error() {
        let d = one_agent([2.0, 0.0], ChoiceOutcome::FIRST, ChoiceOutcome::FIRST, [0.0, 0.0]);
        let e = estimate_panel_ms(&d, &PanelMsConfig::default()).unwrap_err();
        assert!(matches!(e, Error::Estimation { .. }));
    }

    #[test]
    fn bootstrap_reports_epsilon_and_rescaled_draws() {
        let d = design3(400, 2);
        let cfg = PanelMsConfig::default();
        let est = estimate_panel_ms(&d, &cfg).unwrap();
        let bs = numerical_bootstrap(&d, &cfg, &est.params.beta, &est.params.gamma, 20, 1).unwrap();
        assert_eq!(bs.draws.len() + bs.failed, 20);
        assert_eq!(bs.intervals.len(), 2);
        let eps = bs.epsilon.unwrap();
        assert_eq!(eps, cfg.epsilon.epsilons(400, 2, 2).unwrap());
        for ci in &bs.intervals {
            assert!(ci.lower <= ci.upper);
        }
        let again = numerical_bootstrap(&d, &cfg, &est.params.beta, &est.params.gamma, 20, 1).unwrap();
        assert_eq!(bs.draws, again.draws);
    }

    #[test]
    fn epsilon_rules() {
        let e = EpsilonRule::Simulation { c4: 2.0 }.epsilons(1000, 2, 2).unwrap();
        assert!((e[0] - 0.007217880020874406).abs() < 1e-15);
        assert!((e[0] - 0.007221).abs() < 1e-5);
        let r = EpsilonRule::Rate { c: 1.0 }.epsilons(1000, 2, 2).unwrap();
        let expected = libm::pow(1000.0, -6.0 / 7.0) * libm::pow(libm::log(1000.0), -2.0 / 7.0);
        assert!((r[0] - expected).abs() < 1e-15 && (r[1] - expected).abs() < 1e-15);
        assert!(EpsilonRule::Fixed { eps1: 1e-4, eps2: 0.5 }.epsilons(1000, 2, 2).is_err());
        assert!(EpsilonRule::Fixed { eps1: 1e-3, eps2: 1e-3 }.epsilons(1000, 2, 2).is_ok());
    }
}
