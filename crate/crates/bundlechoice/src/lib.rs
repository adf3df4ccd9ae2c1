//! File formats, Monte Carlo harness and command line for the bundle-choice
//! estimators in [`bundlechoice_core`].
//!
//! ```no_run
//! use bundlechoice::harness::{run_replications, ReplicationPlan};
//! use bundlechoice::config::RunConfig;
//! use bundlechoice_core::result::Method;
//!
//! let plan = ReplicationPlan::new(1, Method::Mrc, 1000, 50, 7);
//! let batch = run_replications(&plan, &RunConfig::default()).unwrap();
//! println!("{:?}", batch.summary().unwrap().get("beta_2"));
//! ```

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod cli;
pub mod config;
mod error;
pub mod estimate;
pub mod harness;
pub mod io;
pub mod table;

pub use bundlechoice_core as core;
pub use error::{Error, Result};
