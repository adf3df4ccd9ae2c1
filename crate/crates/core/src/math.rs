//! Scalar helpers and order statistics shared by the estimators.

use alloc::vec::Vec;

/// `1/sqrt(2*pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * libm::exp(-0.5 * x * x)
}

/// Standard normal distribution function, accurate in both tails.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Maps a standard normal draw to a Logistic(0,1) draw with the same rank.
///
/// Computes `ln Phi(z) - ln Phi(-z)`, the logistic quantile of `Phi(z)`,
/// without forming `Phi(z) / (1 - Phi(z))` so that neither tail loses
/// precision.
pub fn logistic_from_normal(z: f64) -> f64 {
    libm::log(normal_cdf(z)) - libm::log(normal_cdf(-z))
}

/// Inverse distribution function of Beta(2,2).
///
/// The CDF `3u^2 - 2u^3` is a cubic whose root in `[0,1]` has the closed
/// form `1/2 + sin(asin(2p - 1) / 3)`.
pub fn beta22_quantile(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    0.5 + libm::sin(libm::asin(2.0 * p - 1.0) / 3.0)
}

/// Sign with the convention `sgn(0) = -1`, i.e. `2 * 1[x > 0] - 1`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Arithmetic mean. Returns NaN for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with denominator `n - 1`.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    libm::sqrt(ss / (xs.len() - 1) as f64)
}

/// Returns a sorted copy using the IEEE total order.
pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Median of a slice (average of the two middle values for even length).
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let v = sorted(xs);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Empirical quantile of already sorted data: the order statistic
/// `sorted[ceil(p * n) - 1]` (inverse of the empirical CDF).
///
/// # Panics
///
/// Panics if `sorted` is empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let n = sorted.len();
    let k = libm::ceil(p.clamp(0.0, 1.0) * n as f64) as usize;
    sorted[k.clamp(1, n) - 1]
}

/// Natural-log power law helper `n^a * (ln n)^b`.
pub(crate) fn rate(n: f64, a: f64, b: f64) -> f64 {
    libm::pow(n, a) * libm::pow(libm::log(n), b)
}
