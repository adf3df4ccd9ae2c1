//! Random-utility data-generating processes and a Monte Carlo oracle for
//! the implied choice probabilities.
//!
//! Utilities are
//!
//! ```text
//! U(0,0) = 0
//! U(1,0) = X1'beta + S'rho1 + a1 + e1
//! U(0,1) = X2'beta + S'rho2 + a2 + e2
//! U(1,1) = U(1,0) + U(0,1) + eta * F_b(W'gamma + S'rho_b + ab)
//! ```
//!
//! where `(a1, a2, ab)` are fixed effects (zero in cross sections) and
//! `F_b` is the identity or `x^3`. The built-in designs share the covariate
//! laws: the first columns of `X` and `W` are Logistic(0,1), the second
//! column of `X` is Bernoulli(1/3), and `W_2`, `S` and the errors are
//! standard normal, with `eta ~ Beta(2,2)`. Dependence between continuous
//! variables comes from a Gaussian copula; correlated Bernoulli variables
//! come from an exact mixture construction.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Block, ChoiceOutcome, ColumnKinds, CovariateRow, Covariates, CrossSectionDataset, PanelDataset, PanelPeriod, ParamLayout, ParamVector};
use crate::error::{Error, Result};
use crate::math::{beta22_quantile, logistic_from_normal, normal_cdf};
use crate::seed::{rng, SimRng};

/// Returns the outcome with the largest utility, `U(0,0) = 0`.
///
/// ```
/// use bundlechoice_core::designs::choose;
/// use bundlechoice_core::ChoiceOutcome;
/// assert_eq!(choose(1.0, 0.5, 2.0).unwrap(), ChoiceOutcome::BUNDLE);
/// assert!(choose(0.0, -1.0, -1.0).is_err());
/// ```
pub fn choose(u10: f64, u01: f64, u11: f64) -> Result<ChoiceOutcome> {
    let u = [0.0, u10, u01, u11];
    if u.iter().any(|x| x.is_nan()) {
        return Err(Error::input("utility is NaN"));
    }
    let mut best = 0;
    for k in 1..4 {
        if u[k] > u[best] {
            best = k;
        }
    }
    if (0..4).any(|k| k != best && u[k] == u[best]) {
        return Err(Error::Tie);
    }
    Ok(ChoiceOutcome::from_index(best))
}

/// Identifier of a built-in design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignId {
    /// Cross section with independent regressors and errors.
    One,
    /// Design 1 with correlation 0.5 between the alternatives.
    Two,
    /// Two-period panel with fixed effects correlated with the regressors.
    Three,
    /// Design 3 with equicorrelation 0.25 and serial correlation 0.25.
    Four,
    /// User-specified coefficients, link and correlation.
    Custom,
}

/// Link `F_b` applied to the bundle index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleLink {
    /// `F_b(x) = x`.
    Identity,
    /// `F_b(x) = x^3`.
    Cubic,
}

impl BundleLink {
    /// Evaluates the link.
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            BundleLink::Identity => x,
            BundleLink::Cubic => x * x * x,
        }
    }
}

/// Law of the interaction heterogeneity `eta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaLaw {
    /// Beta(2,2).
    Beta22,
    /// `eta = 0`: no interaction effect.
    Zero,
}

/// A data-generating process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    /// Which design this is.
    pub id: DesignId,
    /// True coefficients; `X` and `W` have two columns and `S` one.
    pub true_params: ParamVector,
    /// Link applied to the bundle index.
    pub bundle_link: BundleLink,
    /// Latent correlation between alternatives (and across periods).
    pub correlation: f64,
    /// Law of `eta`.
    pub eta: EtaLaw,
    /// Two-period panel with fixed effects instead of a cross section.
    pub panel: bool,
}

/// Latent draws of one agent-period.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Latents {
    /// Error of the first alternative.
    pub eps1: f64,
    /// Error of the second alternative.
    pub eps2: f64,
    /// Interaction heterogeneity.
    pub eta: f64,
}

/// A simulated sample.
#[derive(Clone, Debug, PartialEq)]
pub enum SimulatedData {
    /// Cross-sectional designs.
    Cross(CrossSectionDataset),
    /// Panel designs.
    Panel(PanelDataset),
}

fn unit_truth() -> ParamVector {
    ParamVector { beta: vec![1.0, 1.0], gamma: vec![1.0, 1.0], rho1: vec![1.0], rho2: vec![1.0], rho_b: vec![0.0] }
}

impl DesignSpec {
    /// Built-in design 1 to 4.
    pub fn builtin(id: u8) -> Result<Self> {
        let (id, correlation, panel) = match id {
            1 => (DesignId::One, 0.0, false),
            2 => (DesignId::Two, 0.5, false),
            3 => (DesignId::Three, 0.0, true),
            4 => (DesignId::Four, 0.25, true),
            _ => return Err(Error::input(alloc::format!("unknown design {id}; expected 1 to 4"))),
        };
        Ok(Self { id, true_params: unit_truth(), bundle_link: BundleLink::Identity, correlation, eta: EtaLaw::Beta22, panel })
    }

    /// A design with user-chosen coefficients, link and correlation on the
    /// built-in covariate laws.
    pub fn custom(true_params: ParamVector, bundle_link: BundleLink, correlation: f64, panel: bool) -> Result<Self> {
        let spec = Self { id: DesignId::Custom, true_params, bundle_link, correlation, eta: EtaLaw::Beta22, panel };
        spec.validate()?;
        Ok(spec)
    }

    /// Same design with `eta = 0`.
    pub fn with_null_eta(mut self) -> Self {
        self.eta = EtaLaw::Zero;
        self
    }

    /// Number of periods (1 for cross sections).
    pub fn periods(&self) -> usize {
        if self.panel {
            2
        } else {
            1
        }
    }

    /// Discreteness of the columns: the second column of `X` is binary.
    pub fn kinds(&self) -> ColumnKinds {
        ColumnKinds { x: vec![false, true], w: vec![false, false], s: vec![false] }
    }

    /// Parameter layout estimated by the LAD estimators on this design.
    pub fn lad_layout(&self) -> ParamLayout {
        let estimate_rho_b = self.true_params.rho_b.iter().any(|&r| r != 0.0);
        ParamLayout { k1: 2, k2: 2, k3: 1, estimate_rho: true, estimate_rho_b }
    }

    /// Checks shapes, normalization and the correlation range.
    pub fn validate(&self) -> Result<()> {
        self.true_params.validate(2, 2, 1)?;
        if !(0.0..1.0).contains(&self.correlation) {
            return Err(Error::config("design correlation must lie in [0, 1)"));
        }
        Ok(())
    }
}

fn normal(r: &mut SimRng) -> f64 {
    r.sample(StandardNormal)
}

/// Exchangeable normals with common correlation `rho >= 0`.
fn equicorrelated<const K: usize>(r: &mut SimRng, rho: f64) -> [f64; K] {
    let common = normal(r);
    let (a, b) = (libm::sqrt(rho), libm::sqrt(1.0 - rho));
    core::array::from_fn(|_| a * common + b * normal(r))
}

/// Exchangeable Bernoulli(p) variables with pairwise correlation `rho`:
/// each copies a shared Bernoulli(p) draw with probability `sqrt(rho)` and
/// otherwise draws its own.
fn correlated_bernoulli<const K: usize>(r: &mut SimRng, p: f64, rho: f64) -> [f64; K] {
    let lambda = libm::sqrt(rho);
    let common = r.random::<f64>() < p;
    core::array::from_fn(|_| {
        let shared = r.random::<f64>() < lambda;
        let own = r.random::<f64>() < p;
        let v = if shared { common } else { own };
        if v {
            1.0
        } else {
            0.0
        }
    })
}

fn eta_from_normal(law: EtaLaw, z: f64) -> f64 {
    match law {
        EtaLaw::Beta22 => beta22_quantile(normal_cdf(z)),
        EtaLaw::Zero => 0.0,
    }
}

struct AgentPeriod {
    x1: [f64; 2],
    x2: [f64; 2],
    w: [f64; 2],
    s: f64,
}

fn utilities(spec: &DesignSpec, z: &CovariateRow<'_>, effects: [f64; 3], lat: &Latents) -> (f64, f64, f64) {
    let p = &spec.true_params;
    let u10 = p.index1(z) + effects[0] + lat.eps1;
    let u01 = p.index2(z) + effects[1] + lat.eps2;
    let u11 = u10 + u01 + lat.eta * spec.bundle_link.apply(p.index_b(z) + effects[2]);
    (u10, u01, u11)
}

fn row_of(a: &AgentPeriod) -> CovariateRow<'_> {
    CovariateRow { x1: &a.x1, x2: &a.x2, w: &a.w, s: core::slice::from_ref(&a.s) }
}

fn draw_cross_latents(spec: &DesignSpec, r: &mut SimRng) -> Latents {
    let [e1, e2] = equicorrelated::<2>(r, spec.correlation);
    let eta = eta_from_normal(spec.eta, normal(r));
    Latents { eps1: e1, eps2: e2, eta }
}

fn draw_panel_latents(spec: &DesignSpec, r: &mut SimRng) -> [Latents; 2] {
    // Order: (j=1,t=1), (j=2,t=1), (j=1,t=2), (j=2,t=2).
    let e = equicorrelated::<4>(r, spec.correlation);
    let h = equicorrelated::<2>(r, spec.correlation);
    [
        Latents { eps1: e[0], eps2: e[1], eta: eta_from_normal(spec.eta, h[0]) },
        Latents { eps1: e[2], eps2: e[3], eta: eta_from_normal(spec.eta, h[1]) },
    ]
}

fn choose_redrawing<F>(r: &mut SimRng, mut draw: F) -> Result<Vec<(ChoiceOutcome, Latents)>>
where
    F: FnMut(&mut SimRng) -> Result<Vec<(ChoiceOutcome, Latents)>>,
{
    for _ in 0..1000 {
        match draw(r) {
            Ok(v) => return Ok(v),
            Err(Error::Tie) => log::warn!("utility tie during simulation; redrawing latents"),
            Err(e) => return Err(e),
        }
    }
    Err(Error::input("persistent utility ties; check the design"))
}

/// Simulates `n` agents and returns the latent draws alongside the data
/// (one entry per agent and period, period-major).
pub fn simulate_with_latents(spec: &DesignSpec, n: usize, seed: u64) -> Result<(SimulatedData, Vec<Latents>)> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::input("simulation needs n >= 2"));
    }
    let mut r = rng(seed);
    let rho = spec.correlation;
    if !spec.panel {
        let mut rows = Vec::with_capacity(n);
        let mut choices = Vec::with_capacity(n);
        let mut latents = Vec::with_capacity(n);
        for _ in 0..n {
            let zx = equicorrelated::<2>(&mut r, rho);
            let bx = correlated_bernoulli::<2>(&mut r, 1.0 / 3.0, rho);
            let a = AgentPeriod {
                x1: [logistic_from_normal(zx[0]), bx[0]],
                x2: [logistic_from_normal(zx[1]), bx[1]],
                w: [logistic_from_normal(normal(&mut r)), normal(&mut r)],
                s: normal(&mut r),
            };
            let out = choose_redrawing(&mut r, |r| {
                let lat = draw_cross_latents(spec, r);
                let (u10, u01, u11) = utilities(spec, &row_of(&a), [0.0; 3], &lat);
                Ok(vec![(choose(u10, u01, u11)?, lat)])
            })?;
            choices.push(out[0].0);
            latents.push(out[0].1);
            rows.push(a);
        }
        let covariates = assemble(&rows)?;
        let data = CrossSectionDataset::new(covariates, spec.kinds(), choices)?;
        return Ok((SimulatedData::Cross(data), latents));
    }

    let mut rows: [Vec<AgentPeriod>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut choices: [Vec<ChoiceOutcome>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut lats: [Vec<Latents>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for _ in 0..n {
        // Index order as in the latents: (j,t) = (1,1), (2,1), (1,2), (2,2).
        let zx = equicorrelated::<4>(&mut r, rho);
        let bx = correlated_bernoulli::<4>(&mut r, 1.0 / 3.0, rho);
        let zw1 = equicorrelated::<2>(&mut r, rho);
        let w2 = equicorrelated::<2>(&mut r, rho);
        let s = equicorrelated::<2>(&mut r, rho);
        let x: [f64; 4] = core::array::from_fn(|k| logistic_from_normal(zx[k]));
        let w1 = [logistic_from_normal(zw1[0]), logistic_from_normal(zw1[1])];
        let periods = [0usize, 1].map(|t| AgentPeriod {
            x1: [x[2 * t], bx[2 * t]],
            x2: [x[2 * t + 1], bx[2 * t + 1]],
            w: [w1[t], w2[t]],
            s: s[t],
        });
        let effects = [(x[0] + x[2]) / 4.0, (x[1] + x[3]) / 4.0, (w1[0] + w1[1]) / 4.0];
        let out = choose_redrawing(&mut r, |r| {
            let lat = draw_panel_latents(spec, r);
            let mut v = Vec::with_capacity(2);
            for t in 0..2 {
                let (u10, u01, u11) = utilities(spec, &row_of(&periods[t]), effects, &lat[t]);
                v.push((choose(u10, u01, u11)?, lat[t]));
            }
            Ok(v)
        })?;
        let [p0, p1] = periods;
        for (t, p) in [p0, p1].into_iter().enumerate() {
            choices[t].push(out[t].0);
            lats[t].push(out[t].1);
            rows[t].push(p);
        }
    }
    let [r0, r1] = rows;
    let [c0, c1] = choices;
    let periods = vec![
        PanelPeriod { covariates: assemble(&r0)?, choices: c0 },
        PanelPeriod { covariates: assemble(&r1)?, choices: c1 },
    ];
    let data = PanelDataset::new(periods, spec.kinds())?;
    let [l0, l1] = lats;
    let mut latents = l0;
    latents.extend(l1);
    Ok((SimulatedData::Panel(data), latents))
}

/// Simulates `n` agents from `spec`. Identical seeds give identical data.
pub fn simulate_design(spec: &DesignSpec, n: usize, seed: u64) -> Result<SimulatedData> {
    Ok(simulate_with_latents(spec, n, seed)?.0)
}

/// Simulates a cross-sectional design.
pub fn simulate_cross(spec: &DesignSpec, n: usize, seed: u64) -> Result<CrossSectionDataset> {
    match simulate_design(spec, n, seed)? {
        SimulatedData::Cross(d) => Ok(d),
        SimulatedData::Panel(_) => Err(Error::input("design is a panel design")),
    }
}

/// Simulates a panel design.
pub fn simulate_panel(spec: &DesignSpec, n: usize, seed: u64) -> Result<PanelDataset> {
    match simulate_design(spec, n, seed)? {
        SimulatedData::Panel(d) => Ok(d),
        SimulatedData::Cross(_) => Err(Error::input("design is a cross-sectional design")),
    }
}

fn assemble(rows: &[AgentPeriod]) -> Result<Covariates> {
    let x1: Vec<[f64; 2]> = rows.iter().map(|a| a.x1).collect();
    let x2: Vec<[f64; 2]> = rows.iter().map(|a| a.x2).collect();
    let w: Vec<[f64; 2]> = rows.iter().map(|a| a.w).collect();
    let s: Vec<[f64; 1]> = rows.iter().map(|a| [a.s]).collect();
    Covariates::new(Block::from_rows(2, &x1)?, Block::from_rows(2, &x2)?, Block::from_rows(2, &w)?, Block::from_rows(1, &s)?)
}

/// Monte Carlo integrator of choice probabilities over the latent law of a
/// design. The same latent draws are reused for every query, so the
/// estimated probabilities inherit the model's monotonicity exactly.
#[derive(Clone, Debug)]
pub struct ChoiceOracle {
    link: BundleLink,
    draws: Vec<Latents>,
}

impl ChoiceOracle {
    /// Draws `n_mc >= 1000` latent vectors for one agent-period of `spec`.
    pub fn new(spec: &DesignSpec, n_mc: usize, seed: u64) -> Result<Self> {
        if n_mc < 1000 {
            return Err(Error::input("the choice-probability oracle needs n_mc >= 1000"));
        }
        let mut r = rng(seed);
        let draws = (0..n_mc)
            .map(|_| {
                if spec.panel {
                    draw_panel_latents(spec, &mut r)[0]
                } else {
                    draw_cross_latents(spec, &mut r)
                }
            })
            .collect();
        Ok(Self { link: spec.bundle_link, draws })
    }

    /// Number of latent draws.
    pub fn n_mc(&self) -> usize {
        self.draws.len()
    }

    /// Probabilities of `(0,0), (1,0), (0,1), (1,1)` given the three
    /// indexes (fixed effects already added).
    pub fn probabilities(&self, v1: f64, v2: f64, vb: f64) -> [f64; 4] {
        let fb = self.link.apply(vb);
        let mut counts = [0usize; 4];
        for lat in &self.draws {
            let u10 = v1 + lat.eps1;
            let u01 = v2 + lat.eps2;
            let u11 = u10 + u01 + lat.eta * fb;
            let u = [0.0, u10, u01, u11];
            let mut best = 0;
            for k in 1..4 {
                if u[k] > u[best] {
                    best = k;
                }
            }
            counts[best] += 1;
        }
        let n = self.draws.len() as f64;
        counts.map(|c| c as f64 / n)
    }

    /// Probabilities at covariate row `z` under coefficients `theta`, with
    /// additive fixed effects `(a1, a2, ab)`.
    pub fn probabilities_at(&self, theta: &ParamVector, z: &CovariateRow<'_>, effects: [f64; 3]) -> [f64; 4] {
        self.probabilities(theta.index1(z) + effects[0], theta.index2(z) + effects[1], theta.index_b(z) + effects[2])
    }
}

/// Choice probabilities at covariate row `z` by Monte Carlo integration
/// over the latent law of `spec` (no fixed effects).
pub fn true_choice_probability(spec: &DesignSpec, z: &CovariateRow<'_>, n_mc: usize, seed: u64) -> Result<[f64; 4]> {
    let oracle = ChoiceOracle::new(spec, n_mc, seed)?;
    Ok(oracle.probabilities_at(&spec.true_params, z, [0.0; 3]))
}
