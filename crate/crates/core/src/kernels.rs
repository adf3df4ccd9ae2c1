//! Higher-order Gaussian kernels, the Aitchison-Aitken kernel for unordered
//! categories, product kernels and the rule-of-thumb bandwidths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{normal_pdf, rate};

/// Kernel families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// Gaussian density times an even Hermite-type polynomial.
    GaussianPoly,
    /// Aitchison-Aitken kernel for unordered discrete data.
    AitchisonAitken,
}

/// A kernel family together with its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpec {
    /// Order of the kernel: the first nonvanishing moment beyond the zeroth.
    pub order: u32,
    /// Kernel family.
    pub family: KernelFamily,
}

impl KernelSpec {
    /// A Gaussian-polynomial kernel of the given order.
    pub fn gaussian(order: u32) -> Result<Self> {
        GaussianKernel::new(order)?;
        Ok(Self { order, family: KernelFamily::GaussianPoly })
    }
}

/// A validated Gaussian-polynomial kernel of order 2, 4 or 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussianKernel {
    order: u32,
}

impl GaussianKernel {
    /// Validates the order.
    pub fn new(order: u32) -> Result<Self> {
        match order {
            2 | 4 | 6 => Ok(Self { order }),
            _ => Err(Error::config(alloc::format!("unsupported kernel order {order}; expected 2, 4 or 6"))),
        }
    }

    /// The kernel order.
    pub fn order(self) -> u32 {
        self.order
    }

    /// Evaluates `K(v)`.
    #[inline]
    pub fn eval(self, v: f64) -> f64 {
        let v2 = v * v;
        let poly = match self.order {
            2 => 1.0,
            4 => 0.5 * (3.0 - v2),
            _ => 0.125 * (15.0 - 10.0 * v2 + v2 * v2),
        };
        poly * normal_pdf(v)
    }

    /// Scaled kernel `K(v / h) / h`.
    #[inline]
    pub fn scaled(self, v: f64, h: f64) -> f64 {
        self.eval(v / h) / h
    }
}

/// Gaussian-polynomial kernel of order 2, 4 or 6 evaluated at `v`.
///
/// ```
/// use bundlechoice_core::kernels::gaussian_kernel;
/// assert!((gaussian_kernel(4, 0.0).unwrap() - 0.5984134).abs() < 1e-7);
/// assert!(gaussian_kernel(3, 0.0).is_err());
/// ```
pub fn gaussian_kernel(order: u32, v: f64) -> Result<f64> {
    Ok(GaussianKernel::new(order)?.eval(v))
}

/// Aitchison-Aitken weight: `1 - lambda` on a match and
/// `lambda / (c - 1)` otherwise.
pub fn aitchison_aitken<T: PartialEq>(lambda: f64, x: &T, x_ref: &T, num_categories: usize) -> Result<f64> {
    if num_categories < 2 {
        return Err(Error::config("Aitchison-Aitken kernel needs at least two categories"));
    }
    let c = num_categories as f64;
    if !(0.0..=(c - 1.0) / c).contains(&lambda) {
        return Err(Error::config(alloc::format!(
            "Aitchison-Aitken lambda {lambda} outside [0, {}]",
            (c - 1.0) / c
        )));
    }
    Ok(if x == x_ref { 1.0 - lambda } else { lambda / (c - 1.0) })
}

/// Product kernel `h^{-d} * prod_l K(diffs_l / h)`.
pub fn product_kernel(h: f64, diffs: &[f64], spec: KernelSpec) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::input("bandwidth must be positive"));
    }
    if spec.family != KernelFamily::GaussianPoly {
        return Err(Error::config("product kernel is defined for Gaussian-polynomial kernels"));
    }
    let k = GaussianKernel::new(spec.order)?;
    Ok(diffs.iter().map(|&d| k.scaled(d, h)).product())
}

/// Product matching kernel over a fixed list of variables: continuous
/// variables enter through `K(d / h) / h`, discrete ones through the exact
/// match indicator `1[d == 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchKernel {
    kernel: GaussianKernel,
    bandwidths: alloc::vec::Vec<Option<f64>>,
}

impl MatchKernel {
    /// `bandwidths[l]` is `Some(h)` for a continuous variable and `None`
    /// for an exactly matched discrete one.
    pub fn new(order: u32, bandwidths: alloc::vec::Vec<Option<f64>>) -> Result<Self> {
        let kernel = GaussianKernel::new(order)?;
        if bandwidths.iter().flatten().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(Error::input("matching bandwidths must be positive and finite"));
        }
        Ok(Self { kernel, bandwidths })
    }

    /// Number of matched variables.
    pub fn len(&self) -> usize {
        self.bandwidths.len()
    }

    /// True when nothing is matched (the weight is identically one).
    pub fn is_empty(&self) -> bool {
        self.bandwidths.is_empty()
    }

    /// Weight of a vector of differences, in the variable order given at
    /// construction.
    #[inline]
    pub fn weight<I: IntoIterator<Item = f64>>(&self, diffs: I) -> f64 {
        let mut w = 1.0;
        for (d, h) in diffs.into_iter().zip(&self.bandwidths) {
            match h {
                Some(h) => w *= self.kernel.scaled(d, *h),
                None => {
                    if d != 0.0 {
                        return 0.0;
                    }
                }
            }
        }
        w
    }
}

/// Rate rules for the bandwidths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthRule {
    /// `N^{-1/8} (ln N)^{1/6}`.
    CrossStage1,
    /// `N^{-1/4} (ln N)^{1/4}`.
    CrossStage2,
    /// `N^{-1/7} (ln N)^{-1/14}`.
    Panel,
}

/// Bandwidth constant and rate rule; the scale is supplied per variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSpec {
    /// Multiplicative constant.
    pub constant: f64,
    /// Rate rule.
    pub rule: BandwidthRule,
}

/// Rule-of-thumb bandwidth `c * sigma_hat * rate(N)` (natural logarithm).
///
/// ```
/// use bundlechoice_core::kernels::{bandwidth, BandwidthRule, BandwidthSpec};
/// let spec = BandwidthSpec { constant: 2.0, rule: BandwidthRule::Panel };
/// assert!((bandwidth(1000, 1.0, spec).unwrap() - 0.6494).abs() < 1e-4);
/// ```
pub fn bandwidth(n: usize, sigma_hat: f64, spec: BandwidthSpec) -> Result<f64> {
    if n < 2 {
        return Err(Error::input("bandwidth rules need N >= 2"));
    }
    if !(spec.constant > 0.0) || !(sigma_hat > 0.0) || !sigma_hat.is_finite() {
        return Err(Error::input(alloc::format!(
            "bandwidth constant {} and scale {sigma_hat} must be positive",
            spec.constant
        )));
    }
    let n = n as f64;
    let r = match spec.rule {
        BandwidthRule::CrossStage1 => rate(n, -1.0 / 8.0, 1.0 / 6.0),
        BandwidthRule::CrossStage2 => rate(n, -0.25, 0.25),
        BandwidthRule::Panel => rate(n, -1.0 / 7.0, -1.0 / 14.0),
    };
    Ok(spec.constant * sigma_hat * r)
}

/// Silverman's rule of thumb `1.06 * sd * N^{-1/5}`.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::input("Silverman bandwidth needs at least two samples"));
    }
    let sd = crate::math::sample_std(samples);
    if !(sd > 0.0) {
        return Err(Error::degenerate("zero variance in Silverman bandwidth"));
    }
    Ok(1.06 * sd * libm::pow(samples.len() as f64, -0.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values_at_zero() {
        assert!((gaussian_kernel(2, 0.0).unwrap() - 0.3989423).abs() < 1e-7);
        assert!((gaussian_kernel(4, 0.0).unwrap() - 0.5984134).abs() < 1e-7);
        assert!((gaussian_kernel(6, 0.0).unwrap() - 0.7480168).abs() < 1e-7);
        assert!(gaussian_kernel(4, 3f64.sqrt()).unwrap().abs() < 1e-15);
        assert!(matches!(gaussian_kernel(5, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn aitchison_aitken_values() {
        assert_eq!(aitchison_aitken(0.0, &1, &1, 2).unwrap(), 1.0);
        assert!((aitchison_aitken(0.01, &0, &1, 2).unwrap() - 0.01).abs() < 1e-15);
        assert!((aitchison_aitken(0.01, &1, &1, 2).unwrap() - 0.99).abs() < 1e-15);
        assert!(aitchison_aitken(0.6, &1, &1, 2).is_err());
        assert!(aitchison_aitken(0.1, &1, &1, 1).is_err());
        let total: f64 = (0..4).map(|x| aitchison_aitken(0.3, &x, &2, 4).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_kernel_values() {
        let s = KernelSpec::gaussian(2).unwrap();
        assert!((product_kernel(1.0, &[0.0, 0.0], s).unwrap() - 0.1591549).abs() < 1e-7);
        assert!((product_kernel(0.5, &[0.0, 0.0], s).unwrap() - 0.6366198).abs() < 1e-7);
        assert_eq!(product_kernel(1.0, &[], s).unwrap(), 1.0);
        assert!(product_kernel(0.0, &[], s).is_err());
    }

    #[test]
    fn bandwidth_rules() {
        let b = |n, c, rule| bandwidth(n, 1.0, BandwidthSpec { constant: c, rule }).unwrap();
        // Reference values from an independent double-precision evaluation.
        assert!((b(250, 1.0, BandwidthRule::CrossStage1) - 0.6667041615608383).abs() < 1e-12);
        assert!((b(250, 2.0, BandwidthRule::CrossStage2) - 0.7710073072562786).abs() < 1e-12);
        assert!((b(1000, 2.0, BandwidthRule::Panel) - 0.6493904959310716).abs() < 1e-12);
        // Four-digit hand values.
        assert!((b(250, 1.0, BandwidthRule::CrossStage1) - 0.6668).abs() < 1e-3);
        assert!((b(250, 2.0, BandwidthRule::CrossStage2) - 0.7712).abs() < 1e-3);
        assert!((b(1000, 2.0, BandwidthRule::Panel) - 0.6494).abs() < 1e-3);
        assert!(bandwidth(1, 1.0, BandwidthSpec { constant: 1.0, rule: BandwidthRule::Panel }).is_err());
    }

    #[test]
    fn silverman_values() {
        assert!((silverman_bandwidth(&[-1.0, 1.0]).unwrap() - 1.3050130781456115).abs() < 1e-12);
        assert!((silverman_bandwidth(&[0.0, 0.0, 1.0]).unwrap() - 0.491270840178288).abs() < 1e-12);
        assert!((silverman_bandwidth(&[-1.0, 1.0]).unwrap() - 1.3046).abs() < 1e-3);
        assert!((silverman_bandwidth(&[0.0, 0.0, 1.0]).unwrap() - 0.4918).abs() < 1e-3);
        assert!(matches!(silverman_bandwidth(&[2.0, 2.0]), Err(Error::Degenerate(_))));
    }
}
