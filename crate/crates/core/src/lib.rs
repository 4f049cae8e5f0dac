//! Edge-fault tolerance analysis for regular graphs.
//!
//! The crate measures how likely a graph is to stay *connected* (EF
//! tolerance) and *strongly Menger edge-connected* (MEF tolerance) when
//! every edge fails independently with probability `p`. The pipeline is:
//!
//! 1. [`topology`] builds a graph family instance (hypercube, Möbius cube,
//!    k-ary n-cube, circulant, seeded random regular) from a one-line spec.
//! 2. [`sim`] measures, per fault count `f`, how many random (or, when the
//!    level is small enough, all) `f`-edge fault sets leave the graph
//!    connected / strongly Menger edge-connected.
//! 3. [`tolerance`] folds that fault profile with binomial weights into
//!    tolerance values over a probability grid, and evaluates the
//!    `(1 - p^d)^i` upper bound for d-regular graphs with independence
//!    number `i`.
//! 4. [`report`] orchestrates whole experiment batches, averages curves,
//!    and renders SVG charts.
//!
//! Everything is deterministic given the configured seeds: reruns and
//! different worker counts produce byte-identical output files.

mod combinat;
pub mod graph;
pub mod menger;
pub mod report;
pub mod sim;
pub mod tolerance;
pub mod topology;

pub use graph::{EdgeSet, Graph};
pub use sim::{FaultProfile, SimConfig};
pub use tolerance::ToleranceCurve;
pub use topology::GraphSpec;

use std::path::PathBuf;

/// Error type shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid arguments, malformed input text, or a violated precondition.
    #[error("{0}")]
    Validation(String),
    /// An exhaustive enumeration was refused because it would exceed the
    /// configured budget. Callers decide whether to fall back to sampling.
    #[error("{0}")]
    BudgetExceeded(String),
    /// I/O failure, tagged with the offending path.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// An internal consistency check failed. Indicates a bug, not bad input.
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Wraps an I/O error with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 validation, 3 I/O, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::BudgetExceeded(_) => 2,
            Error::Io { .. } => 3,
            Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
