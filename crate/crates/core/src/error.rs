use alloc::string::String;

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value is out of its admissible range.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Input data or arguments violate a precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// The input is well formed but carries no usable variation.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Two or more alternatives attain the maximal utility.
    #[error("utility tie among maximal alternatives")]
    Tie,
    /// Differential evolution could not produce a finite optimum.
    #[error("optimization failed: {0}")]
    Optimization(String),
    /// An estimation stage failed.
    #[error("estimation failed in {stage}: {reason}")]
    Estimation {
        /// Which stage failed, e.g. `"mrc stage 1"`.
        stage: &'static str,
        /// Human-readable cause.
        reason: String,
    },
    /// Neural-network training diverged.
    #[error("training diverged at epoch {epoch} (loss {loss})")]
    Training {
        /// Epoch at which the loss became non-finite.
        epoch: usize,
        /// The offending loss value.
        loss: f64,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn estimation(stage: &'static str, reason: impl Into<String>) -> Self {
        Error::Estimation { stage, reason: reason.into() }
    }

    /// True for errors caused by the caller's data or configuration rather
    /// than by a failing estimation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Input(_) | Error::Degenerate(_))
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
