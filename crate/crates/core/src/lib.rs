//! Statistical analysis of two-tier heterogeneous networks with
//! self-organizing small cells.
//!
//! The library characterizes the downlink of a macrocell underlaid with a
//! Poisson field of picocells, at a tagged receiver. Received powers and
//! aggregate co-channel interference are described through their cumulants,
//! matched to equivalent log-normal distributions, and turned into handover
//! probability, outage probability and average channel capacity. A seeded
//! Monte Carlo simulator provides the ground truth every closed form is
//! validated against.
//!
//! Internal conventions: powers are linear milliwatts, log-normal parameters
//! live on the natural log of the linear scale. Decibel quantities appear
//! only at API boundaries (see [`units`]).

pub mod association;
pub mod channel;
pub mod cumulants;
pub mod error;
pub mod lognormal;
pub mod metrics;
pub mod montecarlo;
pub mod scenarios;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
