//! Error type shared by all library modules.

use thiserror::Error;

/// Unified error for model evaluation, table construction, optimization and
/// configuration handling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical quantity that must be positive (speed, feed, depth,
    /// geometry, efficiency) was zero or negative, or otherwise out of its
    /// mathematical domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration key is unknown, unparsable, or violates a data
    /// invariant. The message names the offending key.
    #[error("configuration error for `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// No (d_s, d_r, n) allocation on the depth grids can reach the requested
    /// total depth of cut.
    #[error("no feasible depth allocation for d_t = {} mm", *dt_tenths as f64 / 10.0)]
    NoFeasibleAllocation { dt_tenths: u32 },

    /// The per-pass (V, f) feasible box is empty; `binding` names the
    /// constraint that closed it (force, power, or feed cap).
    #[error("pass optimization infeasible at d = {} mm: {binding} constraint leaves no feasible feed/speed", *d_tenths as f64 / 10.0)]
    Infeasible { d_tenths: u32, binding: &'static str },

    /// A 1-based lookup-table index was outside the table.
    #[error("pair index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },

    /// The estimation strategy found no allocation with its computed pass
    /// count (and fallback to n+1 was not allowed).
    #[error("estimation failed for d_t = {} mm: no allocation with n = {n}", *dt_tenths as f64 / 10.0)]
    EstimationFailure { dt_tenths: u32, n: u32 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
