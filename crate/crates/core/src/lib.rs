//! Semiparametric estimation of bundle discrete-choice models.
//!
//! An agent picks one of four outcomes `(0,0)`, `(1,0)`, `(0,1)`, `(1,1)`:
//! nothing, either stand-alone alternative, or the bundle of both. The
//! bundle carries an interaction term `eta * F_b(W'gamma)` on top of the two
//! stand-alone utilities. This crate estimates the index coefficients
//! without assuming a distribution for the errors:
//!
//! * [`mrc`]: two-step kernel-localized maximum rank correlation for cross
//!   sections, with the nonparametric bootstrap and a test for a positive
//!   interaction effect.
//! * [`panel_ms`]: the panel analogue built on within-agent differences, with
//!   the numerical bootstrap.
//! * [`lad`]: least-absolute-deviations estimators that also recover the
//!   coefficients of common regressors, fed by a first-stage estimate of
//!   choice-probability differences ([`firststage`]).
//!
//! Everything is `no_std` with `alloc`. File formats, the command line and
//! the Monte Carlo driver live in the companion `bundlechoice` crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod data;
pub mod designs;
mod error;
pub mod firststage;
pub mod kernels;
pub mod lad;
pub mod math;
pub mod mrc;
pub mod optimizer;
pub mod panel_ms;
pub mod result;
pub mod seed;
pub mod signsum;
pub mod summary;

pub use data::{Block, ChoiceOutcome, ColumnKinds, CovariateRow, Covariates, CrossSectionDataset, PanelDataset, ParamLayout, ParamVector};
pub use error::{Error, Result};
