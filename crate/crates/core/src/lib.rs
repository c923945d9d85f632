//! Core library for the mobile small-cell cooperation simulator.
//!
//! The crate models uplink transmission in a tri-sector hexagonal cellular
//! deployment in which nearby user terminals may pool their uplinks through a
//! group head, either by plain decode-and-forward relaying or by network
//! coding the two source streams over a three-dimensional signal set.  The
//! modules build on each other bottom-up:
//!
//! * [`units`], [`rng`], [`numeric`] - conversion helpers, deterministic
//!   seed derivation, and the quadrature / optimisation primitives.
//! * [`deployment`] - site grid, sector antennas, UE placement and grouping.
//! * [`channel`] - path loss, shadowing, noise and interference bookkeeping.
//! * [`phy`] - closed-form bit-error analysis for all three schemes,
//!   including maximum-likelihood detection over the coded signal set.
//! * [`mc`] - Monte-Carlo counterparts used to cross-check the closed forms.
//! * [`power`] - per-group transmit-power minimisation under error-rate
//!   targets.
//! * [`metrics`] - throughput, battery-energy and efficiency accounting.
//! * [`config`], [`experiment`], [`report`] - scenario description, drop
//!   evaluation, sweeps and CSV/plot-script emission.

pub mod channel;
pub mod config;
pub mod deployment;
pub mod experiment;
pub mod metrics;
pub mod error;
pub mod mc;
pub mod numeric;
pub mod phy;
pub mod power;
pub mod report;
pub mod rng;
pub mod scheme;
pub mod units;

pub use error::{Result, SimError};
pub use scheme::{CrcMode, GhBattery, Scheme, Variant};
