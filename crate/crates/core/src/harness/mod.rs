//! Monte-Carlo BER experiments: configuration, deterministic trial streams,
//! SNR sweeps and CSV output.

pub mod analysis;
pub mod config;
pub mod output;
pub mod rng;
pub mod sweep;

pub use analysis::{run_analysis, AnalysisRow};
pub use config::{ConfigError, ProfileSpec, Receiver, SimConfig};
pub use output::{emit_analysis_csv, emit_csv, write_analysis_csv, write_csv};
pub use sweep::{run_sweep, run_trial, snr_to_sigma2, BerRecord, Simulation, TrialOutcome};
