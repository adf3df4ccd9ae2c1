//! Differential evolution (DE/rand/1/bin) for bounded, possibly
//! discontinuous objectives.
//!
//! Mutants that leave the box are clipped to the violated bound. A trial
//! replaces its parent when its value is less than or equal to the parent's,
//! which lets the population drift across the flat pieces of a
//! step-function criterion.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng;

/// Search settings without the box, as stored in estimator configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeSettings {
    /// Population size; `None` means ten per dimension (at least 4).
    pub population_size: Option<usize>,
    /// Differential weight `F`.
    pub differential_weight: f64,
    /// Crossover rate `CR`.
    pub crossover_rate: f64,
    /// Maximum number of generations.
    pub max_generations: usize,
    /// Half-width of the search box for every free coordinate.
    pub bound: f64,
    /// Stop after this many generations without an improvement larger than
    /// `tolerance`; 0 disables the rule.
    pub patience: usize,
    /// Improvement threshold for `patience`.
    pub tolerance: f64,
    /// Seed of the optimizer's random stream.
    pub seed: u64,
    /// Maximize one-dimensional step criteria exactly by scanning their
    /// breakpoints instead of running the evolutionary search.
    pub exact_1d: bool,
}

impl Default for DeSettings {
    fn default() -> Self {
        Self {
            population_size: None,
            differential_weight: 0.8,
            crossover_rate: 0.9,
            max_generations: 300,
            bound: 10.0,
            patience: 0,
            tolerance: 0.0,
            seed: 0,
            exact_1d: true,
        }
    }
}

impl DeSettings {
    /// Configuration for a `dim`-dimensional search on `[-bound, bound]^dim`.
    pub fn config(&self, dim: usize) -> DEConfig {
        DEConfig {
            population_size: self.population_size.unwrap_or((10 * dim).max(4)),
            differential_weight: self.differential_weight,
            crossover_rate: self.crossover_rate,
            max_generations: self.max_generations,
            bounds: alloc::vec![(-self.bound, self.bound); dim],
            seed: self.seed,
            tolerance: self.tolerance,
            patience: self.patience,
        }
    }

    /// Same settings with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Full configuration of one DE run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DEConfig {
    /// Number of population members (at least 4).
    pub population_size: usize,
    /// Differential weight `F` in `(0, 2)`.
    pub differential_weight: f64,
    /// Crossover rate `CR` in `[0, 1]`.
    pub crossover_rate: f64,
    /// Maximum number of generations after initialization.
    pub max_generations: usize,
    /// `[lo, hi]` per dimension.
    pub bounds: Vec<(f64, f64)>,
    /// Seed of the random stream.
    pub seed: u64,
    /// Improvement threshold for the stagnation rule.
    pub tolerance: f64,
    /// Generations without improvement before stopping; 0 disables.
    pub patience: usize,
}

impl DEConfig {
    /// Checks the invariants.
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::config("DE population must have at least 4 members"));
        }
        if !(self.differential_weight > 0.0 && self.differential_weight < 2.0) {
            return Err(Error::config("DE differential weight must lie in (0, 2)"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::config("DE crossover rate must lie in [0, 1]"));
        }
        if self.bounds.is_empty() {
            return Err(Error::config("DE needs at least one dimension"));
        }
        if self.bounds.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::config("DE bounds must be finite with lo < hi"));
        }
        if self.tolerance < 0.0 || self.tolerance.is_nan() {
            return Err(Error::config("DE tolerance must be nonnegative"));
        }
        Ok(())
    }
}

/// Outcome of [`de_minimize`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeResult {
    /// Best point found.
    pub argmin: Vec<f64>,
    /// Objective value at `argmin`.
    pub min_value: f64,
    /// Generations run after initialization.
    pub generations_used: usize,
    /// Objective evaluations, including initialization.
    pub evaluations: usize,
    /// Best value after initialization and after every generation.
    pub best_history: Vec<f64>,
}

/// Minimizes `objective` over the box in `config`.
///
/// Non-finite objective values count as `+inf`, so such candidates never
/// survive selection. The run fails only when no finite value was found.
///
/// ```
/// use bundlechoice_core::optimizer::{de_minimize, DeSettings};
/// let cfg = DeSettings { bound: 5.0, ..DeSettings::default() }.config(1);
/// let r = de_minimize(|x| (x[0] - 2.0).powi(2), &cfg).unwrap();
/// assert!((r.argmin[0] - 2.0).abs() < 1e-8);
/// ```
pub fn de_minimize<F>(mut objective: F, config: &DEConfig) -> Result<DeResult>
where
    F: FnMut(&[f64]) -> f64,
{
    de_minimize_batch(
        |xs, out| {
            for (x, o) in xs.iter().zip(out.iter_mut()) {
                *o = objective(x);
            }
        },
        config,
    )
}

/// [`de_minimize`] with an objective that scores a whole generation at
/// once: `objective(points, values)` fills `values[i]` for `points[i]`.
///
/// Trials of a generation are all built from the previous population and
/// selection runs afterwards in index order, so the result does not depend
/// on how the batch is evaluated.
pub fn de_minimize_batch<F>(mut objective: F, config: &DEConfig) -> Result<DeResult>
where
    F: FnMut(&[Vec<f64>], &mut [f64]),
{
    config.validate()?;
    let dim = config.bounds.len();
    let np = config.population_size;
    let mut r = rng(config.seed);
    let mut eval = |xs: &[Vec<f64>], out: &mut [f64]| {
        objective(xs, out);
        for v in out.iter_mut() {
            if !v.is_finite() {
                *v = f64::INFINITY;
            }
        }
    };

    let mut pop: Vec<Vec<f64>> = (0..np)
        .map(|_| config.bounds.iter().map(|&(lo, hi)| lo + (hi - lo) * r.random::<f64>()).collect())
        .collect();
    let mut values = alloc::vec![0.0; np];
    eval(&pop, &mut values);
    let mut evaluations = np;
    let best_of = |values: &[f64]| {
        let mut b = 0;
        for (i, &v) in values.iter().enumerate() {
            if v < values[b] {
                b = i;
            }
        }
        b
    };
    let mut best = best_of(&values);
    let mut history = alloc::vec![values[best]];
    let mut since_improvement = 0usize;
    let mut generations = 0usize;
    let mut trials = pop.clone();
    let mut trial_values = alloc::vec![0.0; np];

    while generations < config.max_generations {
        generations += 1;
        let before = values[best];
        for (i, trial) in trials.iter_mut().enumerate() {
            let (a, b, c) = distinct_three(&mut r, np, i);
            let forced = r.random_range(0..dim);
            for j in 0..dim {
                let (lo, hi) = config.bounds[j];
                trial[j] = if j == forced || r.random::<f64>() < config.crossover_rate {
                    let v = pop[a][j] + config.differential_weight * (pop[b][j] - pop[c][j]);
                    v.clamp(lo, hi)
                } else {
                    pop[i][j]
                };
            }
        }
        eval(&trials, &mut trial_values);
        evaluations += np;
        for i in 0..np {
            if trial_values[i] <= values[i] {
                pop[i].copy_from_slice(&trials[i]);
                values[i] = trial_values[i];
            }
        }
        best = best_of(&values);
        history.push(values[best]);
        if config.patience > 0 {
            if before - values[best] > config.tolerance {
                since_improvement = 0;
            } else {
                since_improvement += 1;
                if since_improvement >= config.patience {
                    break;
                }
            }
        }
    }

    if !values[best].is_finite() {
        return Err(Error::Optimization(alloc::string::String::from("no candidate produced a finite objective value")));
    }
    Ok(DeResult { argmin: pop[best].clone(), min_value: values[best], generations_used: generations, evaluations, best_history: history })
}

fn distinct_three<R: Rng>(r: &mut R, np: usize, exclude: usize) -> (usize, usize, usize) {
    let mut pick = |taken: &[usize]| loop {
        let k = r.random_range(0..np);
        if k != exclude && !taken.contains(&k) {
            return k;
        }
    };
    let a = pick(&[]);
    let b = pick(&[a]);
    let c = pick(&[a, b]);
    (a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, bound: f64, generations: usize) -> DEConfig {
        DeSettings { bound, max_generations: generations, seed: 11, ..DeSettings::default() }.config(dim)
    }

    #[test]
    fn sphere() {
        let r = de_minimize(|x| x.iter().map(|v| v * v).sum(), &cfg(3, 5.0, 2000)).unwrap();
        let norm: f64 = r.argmin.iter().map(|v| v * v).sum::<f64>();
        assert!(libm::sqrt(norm) < 1e-6, "{:?}", r.argmin);
    }

    #[test]
    fn shifted_parabola() {
        let r = de_minimize(|x| (x[0] - 2.0) * (x[0] - 2.0), &cfg(1, 5.0, 300)).unwrap();
        assert!((r.argmin[0] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = de_minimize(f, &cfg(2, 2.0, 1000)).unwrap();
        assert!((r.argmin[0] - 1.0).abs() < 1e-3 && (r.argmin[1] - 1.0).abs() < 1e-3, "{:?}", r.argmin);
    }

    #[test]
    fn elitism_determinism_feasibility() {
        let mut seen = Vec::new();
        let f = |x: &[f64]| libm::floor(x[0] * 3.0) + libm::fabs(x[1]);
        let c = cfg(2, 1.5, 50);
        let r1 = de_minimize(
            |x| {
                seen.push(x.to_vec());
                f(x)
            },
            &c,
        )
        .unwrap();
        let r2 = de_minimize(f, &c).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.best_history.windows(2).all(|w| w[1] <= w[0]));
        assert!(seen.iter().flatten().all(|v| (-1.5..=1.5).contains(v)));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let r = de_minimize(|x| if x[0] < 0.0 { f64::NAN } else { x[0] }, &cfg(1, 1.0, 100)).unwrap();
        assert!(r.argmin[0] >= 0.0 && r.min_value < 1e-3);
        assert!(matches!(de_minimize(|_| f64::NAN, &cfg(1, 1.0, 5)), Err(Error::Optimization(_))));
    }

    #[test]
    fn invalid_config() {
        let mut c = cfg(1, 1.0, 5);
        c.population_size = 3;
        assert!(de_minimize(|x| x[0], &c).is_err());
        let mut c = cfg(1, 1.0, 5);
        c.bounds[0] = (1.0, 1.0);
        assert!(de_minimize(|x| x[0], &c).is_err());
    }

    #[test]
    fn patience_stops_early() {
        let mut c = cfg(1, 1.0, 500);
        c.patience = 5;
        let r = de_minimize(|_| 1.0, &c).unwrap();
        assert_eq!(r.generations_used, 5);
    }
}
