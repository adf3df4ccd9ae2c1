//! Independent checks of kernel moments, network gradients, LAD
//! identification and the monotonicity of oracle choice probabilities.

use bundlechoice_core::data::PanelPeriod;
use bundlechoice_core::designs::{ChoiceOracle, DesignSpec};
use bundlechoice_core::firststage::Mlp;
use bundlechoice_core::kernels::gaussian_kernel;
use bundlechoice_core::lad::{lad_objective_cross_from_probabilities, lad_objective_panel_from_deltas};
use bundlechoice_core::seed::rng;
use bundlechoice_core::{Block, ChoiceOutcome, Covariates, CrossSectionDataset, PanelDataset, ParamVector};
use rand::Rng;

/// `int v^p K(v) dv` by composite Simpson on `[-14, 14]`.
pub fn kernel_moment(order: u32, power: i32) -> f64 {
    let (a, b, n) = (-14.0f64, 14.0f64, 40_000usize);
    let h = (b - a) / n as f64;
    let f = |v: f64| v.powi(power) * gaussian_kernel(order, v).unwrap();
    let mut s = f(a) + f(b);
    for k in 1..n {
        let v = a + k as f64 * h;
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(v);
    }
    s * h / 3.0
}

/// Every kernel-moment condition for orders 2, 4 and 6; returns the
/// violations as text.
pub fn kernel_moment_violations() -> Vec<String> {
    let mut bad = Vec::new();
    for order in [2u32, 4, 6] {
        let m0 = kernel_moment(order, 0);
        if (m0 - 1.0).abs() >= 1e-8 {
            bad.push(format!("order {order}: integral {m0}"));
        }
        for p in 1..order as i32 {
            let m = kernel_moment(order, p);
            if m.abs() >= 1e-8 {
                bad.push(format!("order {order}: moment {p} = {m}"));
            }
        }
        let top = kernel_moment(order, order as i32);
        if top.abs() <= 0.1 {
            bad.push(format!("order {order}: moment {order} = {top}"));
        }
    }
    bad
}

/// Largest relative error between back-propagated and central-difference
/// gradients over `configs` random networks and data sets. Relative error
/// is `|g - fd| / max(|g|, |fd|, 1e-6)`.
pub fn mlp_gradient_max_relative_error(configs: u64) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..configs {
        let mut r = rng(7000 + c);
        let input = r.random_range(1..=4);
        let hidden: Vec<usize> = (0..r.random_range(1..=3)).map(|_| r.random_range(1..=5)).collect();
        let rows = r.random_range(3..=20);
        let features = Block::new(rows, input, (0..rows * input).map(|_| r.random_range(-3.0..3.0)).collect()).unwrap();
        let targets: Vec<f64> = (0..rows).map(|_| if r.random::<bool>() { 1.0 } else { 0.0 }).collect();
        let net = Mlp::random(input, &hidden, r.random_range(0.2..2.0), 8000 + c);
        let (_, g) = net.loss_and_gradient(&features, &targets);
        let step = 1e-5;
        for p in 0..net.params.len() {
            let (mut up, mut down) = (net.clone(), net.clone());
            up.params[p] += step;
            down.params[p] -= step;
            let fd = (up.loss(&features, &targets) - down.loss(&features, &targets)) / (2.0 * step);
            let rel = (g[p] - fd).abs() / g[p].abs().max(fd.abs()).max(1e-6);
            worst = worst.max(rel);
        }
    }
    worst
}

fn truth() -> ParamVector {
    ParamVector { beta: vec![1.0, 1.0], gamma: vec![1.0, 1.0], rho1: vec![1.0], rho2: vec![1.0], rho_b: vec![0.0] }
}

fn support_points(seed: u64, m: usize) -> Covariates {
    let mut r = rng(seed);
    let mut block = |cols: usize, binary_second: bool| {
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..cols).map(|j| if binary_second && j == 1 { r.random_range(0..2) as f64 } else { r.random_range(-2.0..2.0) }).collect())
            .collect();
        Block::from_rows(cols, &rows).unwrap()
    };
    let (x1, x2, w, s) = (block(2, true), block(2, true), block(2, false), block(1, false));
    Covariates::new(x1, x2, w, s).unwrap()
}

/// Grid of parameter vectors with each free coordinate
/// (`beta_2, gamma_2, rho1, rho2`) on `{-1, 0, 1, 2, 3}`.
fn grid() -> Vec<ParamVector> {
    let pts = [-1.0, 0.0, 1.0, 2.0, 3.0];
    let mut out = Vec::new();
    for &b in &pts {
        for &g in &pts {
            for &r1 in &pts {
                for &r2 in &pts {
                    out.push(ParamVector { beta: vec![1.0, b], gamma: vec![1.0, g], rho1: vec![r1], rho2: vec![r2], rho_b: vec![0.0] });
                }
            }
        }
    }
    out
}

/// Outcome of a grid search: the value at the truth and the smallest value
/// elsewhere on the grid.
#[derive(Debug)]
pub struct GridMinimum {
    pub at_truth: f64,
    pub best_other: f64,
    pub best_other_at: ParamVector,
}

impl GridMinimum {
    pub fn strict(&self) -> bool {
        self.at_truth < self.best_other
    }
}

fn search(f: impl Fn(&ParamVector) -> f64) -> GridMinimum {
    let t = truth();
    let at_truth = f(&t);
    let (mut best_other, mut best_other_at) = (f64::INFINITY, t.clone());
    for p in grid() {
        if p == t {
            continue;
        }
        let v = f(&p);
        if v < best_other {
            best_other = v;
            best_other_at = p;
        }
    }
    GridMinimum { at_truth, best_other, best_other_at }
}

/// Cross-sectional toy: `m` support points of Design 1 with probabilities
/// from the Monte Carlo oracle.
pub fn lad_identification_cross(m: usize, seed: u64) -> GridMinimum {
    let spec = DesignSpec::builtin(1).unwrap();
    let cov = support_points(seed, m);
    let oracle = ChoiceOracle::new(&spec, 20_000, seed + 1).unwrap();
    let probs: Vec<[f64; 4]> = (0..m).map(|i| oracle.probabilities_at(&spec.true_params, &cov.row(i), [0.0; 3])).collect();
    let data = CrossSectionDataset::new(cov, spec.kinds(), vec![ChoiceOutcome::NONE; m]).unwrap();
    search(|p| lad_objective_cross_from_probabilities(&data, p, &probs, &ChoiceOutcome::ALL).unwrap())
}

/// Second-period covariates: odd agents redraw everything, even agents
/// keep `X` nearly fixed and move `W`, the variation that pins down the
/// bundle coefficients.
fn moved(c0: &Covariates, seed: u64) -> Covariates {
    let fresh = support_points(seed, c0.n());
    let mut r = rng(seed + 1);
    let mut blocks = [c0.x1.clone(), c0.x2.clone(), c0.w.clone(), c0.s.clone()];
    let new = [&fresh.x1, &fresh.x2, &fresh.w, &fresh.s];
    for i in 0..c0.n() {
        for (b, (block, f)) in blocks.iter_mut().zip(new).enumerate() {
            for j in 0..block.cols() {
                let v = if i % 2 == 1 || b == 2 {
                    f.get(i, j)
                } else if b < 2 && j == 1 {
                    block.get(i, j)
                } else {
                    block.get(i, j) + r.random_range(-0.3..0.3)
                };
                block.row_mut(i)[j] = v;
            }
        }
    }
    let [x1, x2, w, s] = blocks;
    Covariates::new(x1, x2, w, s).unwrap()
}

/// Panel toy: `m` agents of Design 3 observed at two support points each,
/// with agent-specific fixed effects and probability differences from the
/// Monte Carlo oracle.
pub fn lad_identification_panel(m: usize, seed: u64) -> GridMinimum {
    let spec = DesignSpec::builtin(3).unwrap();
    let c0 = support_points(seed, m);
    let c1 = moved(&c0, seed + 1);
    let oracle = ChoiceOracle::new(&spec, 20_000, seed + 2).unwrap();
    let mut r = rng(seed + 3);
    let deltas: Vec<[f64; 4]> = (0..m)
        .map(|i| {
            let fe = [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)];
            let (pt, ps) = (oracle.probabilities_at(&spec.true_params, &c1.row(i), fe), oracle.probabilities_at(&spec.true_params, &c0.row(i), fe));
            std::array::from_fn(|d| pt[d] - ps[d])
        })
        .collect();
    let periods = vec![PanelPeriod { covariates: c0, choices: vec![ChoiceOutcome::NONE; m] }, PanelPeriod { covariates: c1, choices: vec![ChoiceOutcome::NONE; m] }];
    let data = PanelDataset::new(periods, spec.kinds()).unwrap();
    search(|p| lad_objective_panel_from_deltas(&data, p, &deltas, &ChoiceOutcome::ALL).unwrap())
}

/// Checks the monotonicity of oracle probabilities along each index with
/// the others fixed: outcomes with `d1 = 1` rise in the first index and
/// those with `d1 = 0` fall (likewise for the second index), and the
/// bundle rises in the bundle index while every other outcome falls. Each
/// grid point uses an independent oracle, so a violation counts only when
/// it exceeds three Monte Carlo standard errors. Returns the violations.
pub fn monotonicity_violations(design: u8, effects: &[[f64; 3]]) -> Vec<String> {
    let spec = DesignSpec::builtin(design).unwrap();
    let n_mc = 20_000;
    let grid: Vec<f64> = (-6..=6).map(|k| k as f64 * 0.5).collect();
    let mut bad = Vec::new();
    let mut seed = 100;
    let mut prob = |v: [f64; 3]| {
        seed += 1;
        ChoiceOracle::new(&spec, n_mc, seed).unwrap().probabilities(v[0], v[1], v[2])
    };
    let se = |p: f64, q: f64| ((p * (1.0 - p) + q * (1.0 - q)) / n_mc as f64).sqrt();
    let rises = |axis: usize, d: usize| match axis {
        0 => [false, true, false, true][d],
        1 => [false, false, true, true][d],
        _ => d == 3,
    };
    for fe in effects {
        for base in [[-0.5, 0.3, 0.2], [0.4, -0.2, -0.6], [0.0, 0.0, 1.0]] {
            for axis in 0..3 {
                let mut prev: Option<[f64; 4]> = None;
                for &g in &grid {
                    let mut v = [base[0] + fe[0], base[1] + fe[1], base[2] + fe[2]];
                    v[axis] += g;
                    let p = prob(v);
                    if let Some(q) = prev {
                        for d in 0..4 {
                            let change = if rises(axis, d) { p[d] - q[d] } else { q[d] - p[d] };
                            if change < -3.0 * se(p[d], q[d]) {
                                bad.push(format!("design {design}, effects {fe:?}, axis {axis}, outcome {d}, at {g}: change {change}"));
                            }
                        }
                    }
                    prev = Some(p);
                }
            }
        }
    }
    bad
}
