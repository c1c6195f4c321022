//! OTFS link-level simulation built around the delay-Doppler reversal (DDR)
//! receiver.
//!
//! The crate covers the full chain: bit mapping and the OTFS transform pair,
//! sparse delay-Doppler channels, time-domain propagation, the DDR matched
//! filter and its twisted-convolution cascade, the direct-processing (DP) and
//! classic time-reversal (TR) baselines, closed-form SINR analysis, and a
//! deterministic Monte-Carlo BER harness.

pub mod baseline;
pub mod channel;
pub mod ddr;
pub mod error;
pub mod harness;
pub mod modem;
pub mod propagation;
pub mod sinr;

pub use error::{Error, Result};
pub use num_complex::Complex64;
