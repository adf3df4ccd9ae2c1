//! Fast evaluation of weighted sign sums
//! `f(theta) = sum_p c_p * sgn(u_p + v_p' theta)` with `sgn(0) = -1`.
//!
//! Every step criterion in this crate has this form once kernel weights and
//! outcome differences are folded into `c_p`. With one free coordinate the
//! terms are sorted by their breakpoint `-u_p / v_p` and a query costs a
//! binary search; terms whose breakpoint is within rounding distance of the
//! query are re-evaluated directly so the result agrees with the direct sum.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sgn;
use crate::optimizer::{de_minimize, DeSettings};

/// Maximizer of a sign sum with the normalized coordinate prepended.
#[derive(Clone, Debug, PartialEq)]
pub struct Maximum {
    /// `(1, theta)`.
    pub full: Vec<f64>,
    /// Criterion value at `theta`.
    pub value: f64,
    /// Generations run by the evolutionary search (0 for exact scans).
    pub generations: usize,
    /// Criterion evaluations.
    pub evaluations: usize,
}

/// Accumulates terms before they are frozen into a [`SignSum`].
#[derive(Clone, Debug, Default)]
pub struct SignSumBuilder {
    dim: usize,
    coefs: Vec<f64>,
    offsets: Vec<f64>,
    slopes: Vec<f64>,
}

impl SignSumBuilder {
    /// Builder for `theta` of dimension `dim`.
    pub fn new(dim: usize) -> Self {
        Self { dim, ..Self::default() }
    }

    /// Adds `c * sgn(u + v' theta)`. Terms with `c == 0` are dropped.
    #[inline]
    pub fn push(&mut self, c: f64, u: f64, v: &[f64]) {
        debug_assert_eq!(v.len(), self.dim);
        if c == 0.0 {
            return;
        }
        self.coefs.push(c);
        self.offsets.push(u);
        self.slopes.extend_from_slice(v);
    }

    /// Freezes the terms.
    pub fn build(self) -> SignSum {
        let fast = if self.dim == 1 { Some(Breakpoints::new(&self.coefs, &self.offsets, &self.slopes)) } else { None };
        SignSum { dim: self.dim, coefs: self.coefs, offsets: self.offsets, slopes: self.slopes, fast }
    }
}

/// A frozen weighted sign sum.
#[derive(Clone, Debug)]
pub struct SignSum {
    dim: usize,
    coefs: Vec<f64>,
    offsets: Vec<f64>,
    slopes: Vec<f64>,
    fast: Option<Breakpoints>,
}

impl SignSum {
    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.coefs.len()
    }

    /// True when no term has a nonzero coefficient.
    pub fn is_empty(&self) -> bool {
        self.coefs.is_empty()
    }

    /// Dimension of `theta`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sum of `|c_p|`, an upper bound on `|f|`.
    pub fn abs_mass(&self) -> f64 {
        self.coefs.iter().map(|c| c.abs()).sum()
    }

    /// Evaluates `f(theta)`.
    pub fn eval(&self, theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.dim);
        match &self.fast {
            Some(b) => b.eval(theta[0]),
            None => self.eval_direct(theta),
        }
    }

    /// Exact maximum of a one-dimensional sum over `[lo, hi]`, found by
    /// evaluating once between every pair of adjacent breakpoints.
    /// Returns the maximal value and the first open interval attaining it.
    /// `None` when `dim != 1` or `lo > hi`.
    pub fn max_1d(&self, lo: f64, hi: f64) -> Option<(f64, f64, f64)> {
        if self.dim != 1 || !(lo <= hi) {
            return None;
        }
        let mut cuts: Vec<f64> = (0..self.len())
            .filter(|&p| self.slopes[p] != 0.0)
            .map(|p| -self.offsets[p] / self.slopes[p])
            .filter(|k| *k > lo && *k < hi)
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut best: Option<(f64, f64, f64)> = None;
        for w in cuts.windows(2) {
            let val = self.eval(&[0.5 * (w[0] + w[1])]);
            match best {
                Some((b, _, _)) if val <= b => {}
                _ => best = Some((val, w[0], w[1])),
            }
        }
        best.or_else(|| Some((self.eval(&[lo]), lo, hi)))
    }

    /// Maximizes over the box `[-bound, bound]^dim`. A one-dimensional sum
    /// is maximized exactly when `de.exact_1d` is set, returning the
    /// midpoint of the first maximizing interval; otherwise differential
    /// evolution searches the box.
    pub fn maximize(&self, de: &DeSettings) -> Result<Maximum> {
        let mut full = alloc::vec![1.0];
        if self.dim == 0 {
            return Ok(Maximum { full, value: self.eval(&[]), generations: 0, evaluations: 1 });
        }
        if self.dim == 1 && de.exact_1d {
            if !(de.bound > 0.0 && de.bound.is_finite()) {
                return Err(Error::config("search bound must be positive and finite"));
            }
            let (value, lo, hi) = self.max_1d(-de.bound, de.bound).ok_or_else(|| Error::Optimization("empty search box".into()))?;
            full.push(0.5 * (lo + hi));
            return Ok(Maximum { full, value, generations: 0, evaluations: 2 * self.len() + 1 });
        }
        let r = de_minimize(|x| -self.eval(x), &de.config(self.dim))?;
        full.extend_from_slice(&r.argmin);
        Ok(Maximum { full, value: -r.min_value, generations: r.generations_used, evaluations: r.evaluations })
    }

    /// Evaluates term by term, in insertion order.
    pub fn eval_direct(&self, theta: &[f64]) -> f64 {
        let mut total = 0.0;
        for (p, &c) in self.coefs.iter().enumerate() {
            let v = &self.slopes[p * self.dim..(p + 1) * self.dim];
            let mut z = self.offsets[p];
            for (vj, tj) in v.iter().zip(theta) {
                z += vj * tj;
            }
            total += c * sgn(z);
        }
        total
    }
}

#[derive(Clone, Debug, Default)]
struct Side {
    keys: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    c: Vec<f64>,
    prefix: Vec<f64>,
}

impl Side {
    fn from_terms(mut terms: Vec<(f64, f64, f64, f64)>) -> Self {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.3.total_cmp(&b.3)));
        let mut s = Side::default();
        s.prefix.push(0.0);
        let mut acc = 0.0;
        for (k, u, v, c) in terms {
            s.keys.push(k);
            s.u.push(u);
            s.v.push(v);
            s.c.push(c);
            acc += c;
            s.prefix.push(acc);
        }
        s
    }

    fn total(&self) -> f64 {
        *self.prefix.last().unwrap_or(&0.0)
    }

    /// Corrects the signs assumed by the split at `k` for terms whose
    /// breakpoint lies within rounding distance of `theta`. `assumed(j)` is
    /// the sign the split assigned to term `j`.
    fn boundary_fix(&self, theta: f64, k: usize, assumed: impl Fn(usize) -> f64) -> f64 {
        let near = |j: usize| {
            let key = self.keys[j];
            (key - theta).abs() <= 1e-9 * (1.0 + key.abs().max(theta.abs()))
        };
        let mut fix = 0.0;
        let mut j = k;
        while j > 0 && near(j - 1) {
            j -= 1;
            let exact = sgn(self.u[j] + self.v[j] * theta);
            fix += (exact - assumed(j)) * self.c[j];
        }
        let mut j = k;
        while j < self.keys.len() && near(j) {
            let exact = sgn(self.u[j] + self.v[j] * theta);
            fix += (exact - assumed(j)) * self.c[j];
            j += 1;
        }
        fix
    }
}

#[derive(Clone, Debug)]
struct Breakpoints {
    constant: f64,
    rising: Side,
    falling: Side,
}

impl Breakpoints {
    fn new(coefs: &[f64], offsets: &[f64], slopes: &[f64]) -> Self {
        let mut constant = 0.0;
        let mut up = Vec::new();
        let mut down = Vec::new();
        for p in 0..coefs.len() {
            let (c, u, v) = (coefs[p], offsets[p], slopes[p]);
            if v == 0.0 {
                constant += c * sgn(u);
            } else if v > 0.0 {
                up.push((-u / v, u, v, c));
            } else {
                down.push((-u / v, u, v, c));
            }
        }
        Self { constant, rising: Side::from_terms(up), falling: Side::from_terms(down) }
    }

    fn eval(&self, theta: f64) -> f64 {
        // Rising terms are positive for theta > key.
        let r = &self.rising;
        let k = r.keys.partition_point(|&key| key < theta);
        let mut value = 2.0 * r.prefix[k] - r.total();
        value += r.boundary_fix(theta, k, |j| if j < k { 1.0 } else { -1.0 });
        // Falling terms are positive for theta < key.
        let f = &self.falling;
        let k = f.keys.partition_point(|&key| key <= theta);
        value += f.total() - 2.0 * f.prefix[k];
        value += f.boundary_fix(theta, k, |j| if j < k { -1.0 } else { 1.0 });
        self.constant + value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn exact_maximum_beats_dense_grid() {
        let mut r = crate::seed::rng(8);
        for _ in 0..20 {
            let mut b = SignSumBuilder::new(1);
            for _ in 0..60 {
                b.push(r.random_range(-1.0..1.0), r.random_range(-3.0..3.0), &[r.random_range(-2.0..2.0)]);
            }
            let s = b.build();
            let (best, lo, hi) = s.max_1d(-5.0, 5.0).unwrap();
            assert!(lo < hi);
            assert!((s.eval(&[0.5 * (lo + hi)]) - best).abs() < 1e-12);
            let grid = (0..=20000).map(|i| s.eval(&[-5.0 + i as f64 * 5e-4])).fold(f64::NEG_INFINITY, f64::max);
            assert!(best >= grid - 1e-12);
            let m = s.maximize(&DeSettings::default()).unwrap();
            assert_eq!(m.full[0], 1.0);
            assert_eq!(m.value, s.max_1d(-10.0, 10.0).unwrap().0);
            assert!(m.value >= best);
        }
        assert!(SignSumBuilder::new(2).build().max_1d(-1.0, 1.0).is_none());
    }

    #[test]
    fn fast_path_matches_direct_sum() {
        let mut r = crate::seed::rng(3);
        for _ in 0..50 {
            let mut b = SignSumBuilder::new(1);
            for _ in 0..200 {
                let v = match r.random_range(0..4) {
                    0 => 0.0,
                    1 => 1.0,
                    _ => r.random_range(-2.0..2.0),
                };
                let u = if r.random_bool(0.2) { 0.0 } else { r.random_range(-3.0..3.0) };
                b.push(r.random_range(-1.0..1.0), u, &[v]);
            }
            let s = b.build();
            for _ in 0..200 {
                let t = if r.random_bool(0.1) { 0.0 } else { r.random_range(-5.0..5.0) };
                assert!((s.eval(&[t]) - s.eval_direct(&[t])).abs() < 1e-12);
            }
            // Exactly at breakpoints.
            for p in 0..s.len() {
                if s.slopes[p] != 0.0 {
                    let t = -s.offsets[p] / s.slopes[p];
                    assert!((s.eval(&[t]) - s.eval_direct(&[t])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut b = SignSumBuilder::new(2);
        b.push(0.0, 1.0, &[1.0, 1.0]);
        b.push(2.0, 0.0, &[1.0, 0.0]);
        let s = b.build();
        assert_eq!(s.len(), 1);
        assert_eq!(s.eval(&[0.0, 5.0]), -2.0);
        assert_eq!(s.eval(&[0.1, 5.0]), 2.0);
    }
}
