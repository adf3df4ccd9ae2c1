//! Naive reference evaluations of the matching criteria, written straight
//! from their double-sum definitions with no precomputation.


use bundlechoice_core::seed::rng;
use bundlechoice_core::{Block, ChoiceOutcome, ColumnKinds, Covariates, CrossSectionDataset, PanelDataset};
use bundlechoice_core::data::PanelPeriod;
use rand::Rng;

pub fn kernel(order: u32, v: f64) -> f64 {
    let phi = (-0.5 * v * v).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let v2 = v * v;
    match order {
        2 => phi,
        4 => 0.5 * (3.0 - v2) * phi,
        6 => (15.0 - 10.0 * v2 + v2 * v2) / 8.0 * phi,
        _ => panic!("order"),
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Product over matched variables: `K(d/h)/h` for continuous ones, the
/// exact-match indicator for discrete ones.
fn match_weight(diffs: &[f64], discrete: &[bool], h: f64, order: u32) -> f64 {
    diffs.iter().zip(discrete).map(|(&d, &disc)| if disc { (d == 0.0) as u8 as f64 } else { kernel(order, d / h) / h }).product()
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cat(parts: &[&[f64]]) -> Vec<f64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

fn y(c: ChoiceOutcome, d: ChoiceOutcome) -> f64 {
    (c == d) as u8 as f64
}

fn minus_one_pow(bit: bool) -> f64 {
    if bit {
        -1.0
    } else {
        1.0
    }
}

fn bits(d: ChoiceOutcome) -> (bool, bool) {
    (d == ChoiceOutcome::FIRST || d == ChoiceOutcome::BUNDLE, d == ChoiceOutcome::SECOND || d == ChoiceOutcome::BUNDLE)
}

pub fn mrc_beta(data: &CrossSectionDataset, b: &[f64], h: f64, order: u32) -> f64 {
    let c = &data.covariates;
    let k = &data.kinds;
    let disc2 = cat_flags(&[&k.x, &k.w, &k.s]);
    let mut total = 0.0;
    for i in 0..data.len() {
        for m in i + 1..data.len() {
            let (ri, rm) = (c.row(i), c.row(m));
            let (x1, x2, w, s) = (diff(ri.x1, rm.x1), diff(ri.x2, rm.x2), diff(ri.w, rm.w), diff(ri.s, rm.s));
            let ka = match_weight(&cat(&[&x2, &w, &s]), &disc2, h, order);
            let kb = match_weight(&cat(&[&x1, &w, &s]), &disc2, h, order);
            for d in ChoiceOutcome::ALL {
                let dy = y(data.choices[m], d) - y(data.choices[i], d);
                let (d1, d2) = bits(d);
                total += ka * dy * sgn(dot(&x1, b)) * minus_one_pow(d1) + kb * dy * sgn(dot(&x2, b)) * minus_one_pow(d2);
            }
        }
    }
    total
}

pub fn mrc_gamma(data: &CrossSectionDataset, r: &[f64], beta_hat: &[f64], sigma: f64, order: u32) -> f64 {
    let c = &data.covariates;
    let mut disc = vec![false, false];
    disc.extend(&data.kinds.s);
    let mut total = 0.0;
    for i in 0..data.len() {
        for m in i + 1..data.len() {
            let (ri, rm) = (c.row(i), c.row(m));
            let v = [dot(&diff(ri.x1, rm.x1), beta_hat), dot(&diff(ri.x2, rm.x2), beta_hat)];
            let k = match_weight(&cat(&[&v, &diff(ri.s, rm.s)]), &disc, sigma, order);
            let dy = y(data.choices[i], ChoiceOutcome::BUNDLE) - y(data.choices[m], ChoiceOutcome::BUNDLE);
            total += k * dy * sgn(dot(&diff(ri.w, rm.w), r));
        }
    }
    total
}

fn cat_flags(parts: &[&[bool]]) -> Vec<bool> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

pub fn ms_beta(data: &PanelDataset, b: &[f64], h: f64, order: u32) -> f64 {
    let k = &data.kinds;
    let disc = cat_flags(&[&k.x, &k.w, &k.s]);
    let mut total = 0.0;
    for i in 0..data.n() {
        for t in 0..data.t_periods() {
            for s_ in 0..t {
                let (pt, ps) = (&data.periods[t], &data.periods[s_]);
                let (rt, rs) = (pt.covariates.row(i), ps.covariates.row(i));
                let (x1, x2, w, s) = (diff(rt.x1, rs.x1), diff(rt.x2, rs.x2), diff(rt.w, rs.w), diff(rt.s, rs.s));
                let ka = match_weight(&cat(&[&x2, &w, &s]), &disc, h, order);
                let kb = match_weight(&cat(&[&x1, &w, &s]), &disc, h, order);
                for d in ChoiceOutcome::ALL {
                    let dy = y(ps.choices[i], d) - y(pt.choices[i], d);
                    let (d1, d2) = bits(d);
                    total += ka * dy * sgn(dot(&x1, b)) * minus_one_pow(d1) + kb * dy * sgn(dot(&x2, b)) * minus_one_pow(d2);
                }
            }
        }
    }
    total
}

pub fn ms_gamma(data: &PanelDataset, r: &[f64], sigma: f64, order: u32) -> f64 {
    let k = &data.kinds;
    let disc = cat_flags(&[&k.x, &k.x, &k.s]);
    let mut total = 0.0;
    for i in 0..data.n() {
        for t in 0..data.t_periods() {
            for s_ in 0..t {
                let (pt, ps) = (&data.periods[t], &data.periods[s_]);
                let (rt, rs) = (pt.covariates.row(i), ps.covariates.row(i));
                let kw = match_weight(&cat(&[&diff(rt.x1, rs.x1), &diff(rt.x2, rs.x2), &diff(rt.s, rs.s)]), &disc, sigma, order);
                let dy = y(pt.choices[i], ChoiceOutcome::BUNDLE) - y(ps.choices[i], ChoiceOutcome::BUNDLE);
                total += kw * dy * sgn(dot(&diff(rt.w, rs.w), r));
            }
        }
    }
    total
}

/// Covariate value: half the draws come from a small integer grid so that
/// ties, exact matches and zero indexes occur.
fn value<R: Rng>(r: &mut R) -> f64 {
    if r.random::<bool>() {
        r.random_range(-2..=2) as f64
    } else {
        r.random_range(-2.0..2.0)
    }
}

fn covariates<R: Rng>(r: &mut R, n: usize) -> Covariates {
    let mut block = |cols: usize, binary_second: bool| {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..cols).map(|j| if binary_second && j == 1 { r.random_range(0..2) as f64 } else { value(r) }).collect())
            .collect();
        Block::from_rows(cols, &rows).unwrap()
    };
    let x1 = block(2, true);
    let x2 = block(2, true);
    let w = block(2, false);
    let s = block(1, false);
    Covariates::new(x1, x2, w, s).unwrap()
}

fn kinds() -> ColumnKinds {
    ColumnKinds { x: vec![false, true], w: vec![false, false], s: vec![false] }
}

fn choice<R: Rng>(r: &mut R) -> ChoiceOutcome {
    ChoiceOutcome::ALL[r.random_range(0..4)]
}

pub fn random_cross(seed: u64, n: usize) -> CrossSectionDataset {
    let mut r = rng(seed);
    let cov = covariates(&mut r, n);
    let choices = (0..n).map(|_| choice(&mut r)).collect();
    CrossSectionDataset::new(cov, kinds(), choices).unwrap()
}

pub fn random_panel(seed: u64, n: usize) -> PanelDataset {
    let mut r = rng(seed);
    let periods = (0..2)
        .map(|_| {
            let covariates = covariates(&mut r, n);
            PanelPeriod { covariates, choices: (0..n).map(|_| choice(&mut r)).collect() }
        })
        .collect();
    PanelDataset::new(periods, kinds()).unwrap()
}

/// A normalized coefficient vector `(1, v)` with `v` on the same mixed
/// integer/continuous law as the covariates.
pub fn normalized(seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    vec![1.0, value(&mut r)]
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Runs `cases` random checks of all four criteria; returns the first
/// mismatch as text.
pub fn brute_force_equivalence(cases: u64) -> Result<(), String> {
    use bundlechoice_core::mrc::{mrc_beta_objective, mrc_gamma_objective};
    use bundlechoice_core::panel_ms::{ms_beta_objective, ms_gamma_objective};
    for case in 0..cases {
        let n = 2 + (case % 5) as usize;
        let order = [2, 4, 6][(case % 3) as usize];
        let h = 0.5 + (case % 7) as f64 * 0.25;
        let cross = random_cross(1000 + case, n);
        let panel = random_panel(2000 + case, n);
        let (b, r, bh) = (normalized(3000 + case), normalized(4000 + case), normalized(5000 + case));
        let pairs = [
            ("mrc beta", mrc_beta_objective(&cross, &b, h, order).unwrap(), mrc_beta(&cross, &b, h, order)),
            ("mrc gamma", mrc_gamma_objective(&cross, &r, &bh, h, order).unwrap(), mrc_gamma(&cross, &r, &bh, h, order)),
            ("ms beta", ms_beta_objective(&panel, &b, h, order).unwrap(), ms_beta(&panel, &b, h, order)),
            ("ms gamma", ms_gamma_objective(&panel, &r, h, order).unwrap(), ms_gamma(&panel, &r, h, order)),
        ];
        for (what, fast, naive) in pairs {
            if !close(fast, naive) {
                return Err(format!("{what}, case {case}: optimized {fast} vs naive {naive}"));
            }
        }
    }
    Ok(())
}
