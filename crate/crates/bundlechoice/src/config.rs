//! Run configuration loaded from JSON.
//!
//! Every key is optional; absent keys take the estimator defaults. A file
//! overriding the stage-2 bandwidth constant of the MRC estimator and the
//! search box of the LAD optimizer looks like
//!
//! ```json
//! {
//!   "mrc": { "stage2_bandwidth": { "constant": 1.5, "rule": "cross_stage2" } },
//!   "lad": { "de": { "bound": 5.0 } }
//! }
//! ```

use std::path::Path;

use bundlechoice_core::lad::LadConfig;
use bundlechoice_core::mrc::MrcConfig;
use bundlechoice_core::panel_ms::PanelMsConfig;
use bundlechoice_core::{ColumnKinds, ParamLayout};
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Settings of all estimators plus optional data overrides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Cross-sectional maximum rank correlation.
    pub mrc: MrcConfig,
    /// Panel maximum score.
    pub panel_ms: PanelMsConfig,
    /// Both LAD estimators.
    pub lad: LadConfig,
    /// Free coefficients of the LAD estimators. Defaults to `beta`,
    /// `gamma`, `rho1` and `rho2` with `rho_b` pinned at zero.
    pub layout: Option<ParamLayout>,
    /// Discreteness flags of the data columns; inferred when absent.
    pub kinds: Option<ColumnKinds>,
}

impl RunConfig {
    /// Loads a configuration file.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        crate::io::read_json(path)
    }

    /// Loads `path` when given, the defaults otherwise.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::from_file)
    }

    /// LAD layout for data with widths `(k1, k2, k3)`.
    pub fn lad_layout(&self, k1: usize, k2: usize, k3: usize) -> ParamLayout {
        self.layout.unwrap_or(ParamLayout { k1, k2, k3, estimate_rho: k3 > 0, estimate_rho_b: false })
    }
}
