//! Dispatch from a method name and a dataset to the estimators.

use bundlechoice_core::lad::{bootstrap_lad_cross, bootstrap_lad_panel, estimate_lad_cross, estimate_lad_panel};
use bundlechoice_core::mrc::{estimate_mrc, estimate_mrc_with_bootstrap, eta_test_cross, stage2_bandwidths};
use bundlechoice_core::panel_ms::{estimate_panel_ms, estimate_panel_ms_with_bootstrap, eta_test_panel, panel_bandwidths};
use bundlechoice_core::result::{EstimationResult, EtaTestResult, Method};
use bundlechoice_core::ParamLayout;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::io::Dataset;

fn mismatch(method: Method, data: &Dataset) -> Error {
    let kind = match data {
        Dataset::Cross(_) => "cross-sectional",
        Dataset::Panel(_) => "panel",
    };
    Error::format(format!("method {} cannot be applied to {kind} data", method.as_str()))
}

fn layout(config: &RunConfig, data: &Dataset, layout: Option<ParamLayout>) -> ParamLayout {
    let (k1, k2, k3) = data.widths();
    layout.unwrap_or_else(|| config.lad_layout(k1, k2, k3))
}

/// Point estimate of `method` on `data`. Optimizer and first-stage seeds
/// are derived from `seed`. `lad_layout` overrides the configured LAD
/// layout.
pub fn estimate(method: Method, data: &Dataset, config: &RunConfig, seed: u64, lad_layout: Option<ParamLayout>) -> Result<EstimationResult> {
    estimate_with_bootstrap(method, data, config, seed, lad_layout, 0, 0)
}

/// [`estimate`] followed by `b` bootstrap draws from the stream `boot_seed`
/// when `b > 0`: the nonparametric bootstrap for MRC and LAD, the numerical
/// bootstrap for panel maximum score.
pub fn estimate_with_bootstrap(
    method: Method,
    data: &Dataset,
    config: &RunConfig,
    seed: u64,
    lad_layout: Option<ParamLayout>,
    b: usize,
    boot_seed: u64,
) -> Result<EstimationResult> {
    let result = match (method, data) {
        (Method::Mrc, Dataset::Cross(d)) => {
            let c = config.mrc.with_seed(seed);
            if b > 0 {
                estimate_mrc_with_bootstrap(d, &c, b, boot_seed)?
            } else {
                estimate_mrc(d, &c)?
            }
        }
        (Method::PanelMs, Dataset::Panel(d)) => {
            let c = config.panel_ms.with_seed(seed);
            if b > 0 {
                estimate_panel_ms_with_bootstrap(d, &c, b, boot_seed)?
            } else {
                estimate_panel_ms(d, &c)?
            }
        }
        (Method::Lad, Dataset::Cross(d)) => {
            let l = layout(config, data, lad_layout);
            let c = config.lad.with_seed(seed);
            let mut r = estimate_lad_cross(d, &l, &c)?;
            if b > 0 {
                r.bootstrap = Some(bootstrap_lad_cross(d, &l, &c, b, boot_seed)?);
            }
            r
        }
        (Method::PanelLad, Dataset::Panel(d)) => {
            let l = layout(config, data, lad_layout);
            let c = config.lad.with_seed(seed);
            let mut r = estimate_lad_panel(d, &l, &c)?;
            if b > 0 {
                r.bootstrap = Some(bootstrap_lad_panel(d, &l, &c, b, boot_seed)?);
            }
            r
        }
        _ => return Err(mismatch(method, data)),
    };
    Ok(result)
}

/// Interaction-effect test: estimates `beta` and `gamma` with `method`
/// (`mrc` or `panel-ms`), then bootstraps the statistic `b` times with the
/// estimates held fixed.
pub fn test_eta(method: Method, data: &Dataset, config: &RunConfig, seed: u64, b: usize, boot_seed: u64) -> Result<(EstimationResult, EtaTestResult)> {
    match (method, data) {
        (Method::Mrc, Dataset::Cross(d)) => {
            let c = config.mrc.with_seed(seed);
            let est = estimate_mrc(d, &c)?;
            let bw = stage2_bandwidths(d, &est.params.beta, c.stage2_bandwidth)?;
            let t = eta_test_cross(d, &est.params.beta, &est.params.gamma, &bw, c.stage2_kernel_order, b, boot_seed)?;
            Ok((est, t))
        }
        (Method::PanelMs, Dataset::Panel(d)) => {
            let c = config.panel_ms.with_seed(seed);
            let est = estimate_panel_ms(d, &c)?;
            let bw = panel_bandwidths(d, &c)?;
            let t = eta_test_panel(d, &est.params.gamma, &bw, c.kernel_order, b, boot_seed)?;
            Ok((est, t))
        }
        (Method::Lad | Method::PanelLad, _) => Err(Error::format("the interaction test is available for mrc and panel-ms")),
        _ => Err(mismatch(method, data)),
    }
}
