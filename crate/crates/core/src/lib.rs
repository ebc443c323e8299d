//! Minimum-cost cutting conditions for multi-pass face milling.
//!
//! The stock left on a part is removed by one finish pass and `n` equal
//! rough passes. Depths of cut live on fixed 0.1 mm grids, so every way of
//! splitting the stock is enumerable; speeds and feeds are continuous and
//! bounded by machine-tool limits (cutting force, spindle power, surface
//! finish, and box bounds per pass). The unit production cost of a plan sums
//! machining time, tool idle time, and tool wear priced through an extended
//! Taylor tool-life model.
//!
//! The crate provides two independent solvers plus analysis tooling:
//!
//! - [`lookup`] enumerates the feasible depth allocations for a given total
//!   stock into an indexed table ([`lookup::PairTable`]).
//! - [`ga`] minimizes cost with an elitist binary-coded genetic algorithm
//!   whose genome encodes both speeds, both feeds, and a table index.
//! - [`oracle`] solves the same problem exactly, pass by pass, from the
//!   cost model's closed-form stationary points — an independent check on
//!   everything the GA reports.
//! - [`analysis`] answers follow-up questions: how the optimum moves when
//!   the force or power limit changes, how it evolves with total stock, and
//!   how close a no-optimizer estimation rule lands.
//! - [`sizing`] reproduces the schema-coverage argument used to pick the
//!   population size.
//!
//! [`model::Model`] owns the physics: cost, tool life, force, power, and
//! the normalized constraint report shared by both solvers. Model
//! coefficients are derived from machining handbook constants, or supplied
//! verbatim and cross-checked against the derivation ([`model::Derivation`]).
//!
//! Everything is deterministic: the GA takes an explicit seed and the
//! default dataset is embedded ([`problem::ProblemData::default`]).

pub mod analysis;
pub mod config;
pub mod error;
pub mod ga;
pub mod lookup;
pub mod model;
pub mod oracle;
pub mod problem;
pub mod sizing;

pub use error::{Error, Result};
