//! Low-depth quantum amplitude and phase estimation, simulated classically.
//!
//! The crate turns black-box estimators whose bias is controllable
//! independently of their depth into estimators whose maximum circuit depth
//! can be tuned by a single knob `beta`:
//!
//! - [`aggregate`] averages `T` independent runs of a bias/variance
//!   (type I) or bias/precision (type II) black box.
//! - [`circphase`] does the same for phases living on the circle, through an
//!   arc-to-interval mapping.
//! - [`rallfuller`] is an interval-shrinking estimator driven by even
//!   bounded polynomials, with the parameter setting that keeps its
//!   polynomial-construction preconditions satisfied.
//!
//! Quantum devices are replaced by Bernoulli samplers ([`oracle`]) and
//! synthetic samplers that realize the black-box contracts exactly
//! ([`blackbox`]). Every sampler charges a [`ResourceLedger`] with the
//! circuit depth and query count a real device would have spent.

pub mod aggregate;
pub mod blackbox;
pub mod circphase;
pub mod error;
pub mod harness;
pub mod ledger;
pub mod oracle;
pub mod poly;
pub mod rallfuller;
pub mod seed;
pub mod stats;
pub mod types;

pub use error::{Error, Result};
pub use ledger::ResourceLedger;
pub use seed::{derive_stream, SeedSpec};
pub use types::{beta_from_hardware, Amplitude, TargetSpec};
