//! Monte Carlo replications.
//!
//! Replication `r` of a plan with master seed `m` simulates its data from
//! `derive_seed(m, r, Data)`, seeds the estimator with
//! `derive_seed(m, r, Optimizer)` and the bootstrap with
//! `derive_seed(m, r, Bootstrap)`. Replications run on the current rayon
//! pool and results are gathered in replication order, so a batch is
//! bitwise reproducible for any number of threads.

use bundlechoice_core::designs::{simulate_design, DesignSpec};
use bundlechoice_core::result::{ConfidenceInterval, EtaTestResult, Method};
use bundlechoice_core::seed::{derive_seed, Stream};
use bundlechoice_core::summary::{coverage, summarize};
use bundlechoice_core::summary::SummaryTable;
use bundlechoice_core::ParamLayout;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::estimate::{estimate_with_bootstrap, test_eta};
use crate::io::Dataset;

/// Largest tolerated share of failed replications.
pub const MAX_FAILURE_SHARE: f64 = 0.2;

/// What to simulate and estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationPlan {
    /// Built-in design, 1 to 4.
    pub design: u8,
    /// Estimator.
    pub method: Method,
    /// Sample size (agents).
    pub n: usize,
    /// Number of replications.
    pub reps: usize,
    /// Bootstrap draws per replication; 0 skips the bootstrap.
    pub b: usize,
    /// Master seed.
    pub seed: u64,
    /// Simulate with `eta = 0`.
    #[serde(default)]
    pub null_eta: bool,
}

impl ReplicationPlan {
    /// Plan without bootstrap and with the design's interaction law.
    pub fn new(design: u8, method: Method, n: usize, reps: usize, seed: u64) -> Self {
        Self { design, method, n, reps, b: 0, seed, null_eta: false }
    }

    /// The design, with `eta = 0` when requested.
    pub fn spec(&self) -> Result<DesignSpec> {
        let spec = DesignSpec::builtin(self.design)?;
        Ok(if self.null_eta { spec.with_null_eta() } else { spec })
    }

    /// Checks the plan before any work starts.
    pub fn validate(&self) -> Result<()> {
        let spec = self.spec()?;
        if self.reps == 0 {
            return Err(Error::format("at least one replication is required"));
        }
        if self.n < 2 {
            return Err(Error::format("the sample size must be at least 2"));
        }
        if spec.panel != self.method.is_panel() {
            let kind = if spec.panel { "a panel" } else { "a cross-sectional" };
            return Err(Error::format(format!("design {} is {kind} design; method {} does not apply", self.design, self.method.as_str())));
        }
        Ok(())
    }

    /// Free coordinates estimated under this plan.
    pub fn layout(&self) -> Result<ParamLayout> {
        let spec = self.spec()?;
        Ok(match self.method {
            Method::Lad | Method::PanelLad => spec.lad_layout(),
            Method::Mrc | Method::PanelMs => ParamLayout { k1: 2, k2: 2, k3: 1, estimate_rho: false, estimate_rho_b: false },
        })
    }

    /// Names and true values of the free coordinates.
    pub fn truth(&self) -> Result<(Vec<String>, Vec<f64>)> {
        let layout = self.layout()?;
        Ok((layout.names(), layout.pack(&self.spec()?.true_params)))
    }

    /// Seeds `(data, estimator, bootstrap)` of replication `r`.
    pub fn seeds(&self, r: usize) -> (u64, u64, u64) {
        let r = r as u64;
        (derive_seed(self.seed, r, Stream::Data), derive_seed(self.seed, r, Stream::Optimizer), derive_seed(self.seed, r, Stream::Bootstrap))
    }

    /// Simulated sample of replication `r`.
    pub fn dataset(&self, r: usize) -> Result<Dataset> {
        Ok(simulate_design(&self.spec()?, self.n, self.seeds(r).0)?.into())
    }
}

/// Estimates of one successful replication.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    /// Replication index.
    pub index: usize,
    /// Free coordinates, in the order of the batch's `names`.
    pub estimates: Vec<f64>,
    /// Bootstrap intervals when requested.
    pub intervals: Option<Vec<ConfidenceInterval>>,
}

/// A replication that returned an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Replication index.
    pub index: usize,
    /// Error message.
    pub message: String,
}

/// Output of a batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    /// Names of the free coordinates.
    pub names: Vec<String>,
    /// True values of the free coordinates.
    pub truth: Vec<f64>,
    /// Successful replications in index order.
    pub replications: Vec<Replication>,
    /// Failed replications in index order.
    pub failures: Vec<Failure>,
}

impl Batch {
    /// Assembles a batch from per-replication outcomes given in index order
    /// and enforces [`MAX_FAILURE_SHARE`].
    pub fn from_outcomes(names: Vec<String>, truth: Vec<f64>, outcomes: Vec<Result<(Vec<f64>, Option<Vec<ConfidenceInterval>>)>>) -> Result<Self> {
        let total = outcomes.len();
        let mut replications = Vec::new();
        let mut failures = Vec::new();
        for (index, o) in outcomes.into_iter().enumerate() {
            match o {
                Ok((estimates, intervals)) => replications.push(Replication { index, estimates, intervals }),
                Err(e) => {
                    log::warn!("replication {index} failed: {e}");
                    failures.push(Failure { index, message: e.to_string() });
                }
            }
        }
        if failures.len() as f64 > MAX_FAILURE_SHARE * total as f64 || replications.is_empty() {
            return Err(Error::Batch {
                failed: failures.len(),
                total,
                limit: 100.0 * MAX_FAILURE_SHARE,
                log: failures.iter().map(|f| format!("replication {}: {}", f.index, f.message)).collect(),
            });
        }
        Ok(Self { names, truth, replications, failures })
    }

    /// Estimates, one row per successful replication.
    pub fn estimate_matrix(&self) -> Vec<Vec<f64>> {
        self.replications.iter().map(|r| r.estimates.clone()).collect()
    }

    /// Estimates of the named coordinate.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.names.iter().position(|n| n == name)?;
        Some(self.replications.iter().map(|r| r.estimates[j]).collect())
    }

    /// MBIAS, RMSE, MED and MAD per coordinate, plus COVERAGE and LENGTH
    /// when every successful replication carries intervals.
    pub fn summary(&self) -> Result<SummaryTable> {
        let mut table = summarize(&self.names, &self.estimate_matrix(), &self.truth)?;
        let intervals: Option<Vec<&Vec<ConfidenceInterval>>> = self.replications.iter().map(|r| r.intervals.as_ref()).collect();
        if let Some(cis) = intervals {
            for (j, p) in table.params.iter_mut().enumerate() {
                let col: Vec<ConfidenceInterval> = cis.iter().map(|c| c[j]).collect();
                let (cov, len) = coverage(&col, self.truth[j])?;
                p.coverage = Some(cov);
                p.length = Some(len);
            }
        }
        Ok(table)
    }
}

/// Runs `f(0..reps)` on the current rayon pool and returns the outcomes in
/// index order. A panic in one replication propagates; errors do not.
pub fn run_indexed<T, F>(reps: usize, f: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..reps).into_par_iter().map(f).collect()
}

/// Simulates and estimates every replication of `plan`.
pub fn run_replications(plan: &ReplicationPlan, config: &RunConfig) -> Result<Batch> {
    plan.validate()?;
    let (names, truth) = plan.truth()?;
    let layout = plan.layout()?;
    let outcomes = run_indexed(plan.reps, |r| {
        let (_, est_seed, boot_seed) = plan.seeds(r);
        let data = plan.dataset(r)?;
        let res = estimate_with_bootstrap(plan.method, &data, config, est_seed, Some(layout), plan.b, boot_seed)?;
        log::info!("replication {r}: {:?}", res.estimates);
        Ok((res.estimates, res.bootstrap.map(|b| b.intervals)))
    });
    Batch::from_outcomes(names, truth, outcomes)
}

/// Interaction tests over replications.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaBatch {
    /// Test outcomes of successful replications, in index order.
    pub results: Vec<EtaTestResult>,
    /// Failed replications.
    pub failures: Vec<Failure>,
}

impl EtaBatch {
    /// Share of successful replications whose 5% bootstrap quantile is
    /// positive.
    pub fn positive_share(&self) -> f64 {
        self.results.iter().filter(|r| r.positive_effect).count() as f64 / self.results.len() as f64
    }
}

/// Runs the interaction test (`plan.b` draws) on every replication.
pub fn run_eta_replications(plan: &ReplicationPlan, config: &RunConfig) -> Result<EtaBatch> {
    plan.validate()?;
    if plan.b == 0 {
        return Err(Error::format("the interaction test needs at least one bootstrap draw"));
    }
    let outcomes = run_indexed(plan.reps, |r| {
        let (_, est_seed, boot_seed) = plan.seeds(r);
        let data = plan.dataset(r)?;
        Ok(test_eta(plan.method, &data, config, est_seed, plan.b, boot_seed)?.1)
    });
    let total = outcomes.len();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (index, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(t) => results.push(t),
            Err(e) => failures.push(Failure { index, message: e.to_string() }),
        }
    }
    if failures.len() as f64 > MAX_FAILURE_SHARE * total as f64 || results.is_empty() {
        return Err(Error::Batch {
            failed: failures.len(),
            total,
            limit: 100.0 * MAX_FAILURE_SHARE,
            log: failures.iter().map(|f| format!("replication {}: {}", f.index, f.message)).collect(),
        });
    }
    Ok(EtaBatch { results, failures })
}
