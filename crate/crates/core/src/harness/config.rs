//! Experiment configuration.
//!
//! Configs are flat TOML documents whose keys mirror [`SimConfig`]; unknown
//! keys are rejected. Example:
//!
//! ```toml
//! m = 64
//! n = 16
//! speed_kmph = 300.0
//! modulation = "qpsk"
//! num_antennas = 2
//! profile = "EVA"
//! receivers = ["ddr", "dp", "tr"]
//! snr_db = [0.0, 5.0, 10.0, 15.0]
//! seed = 42
//! ```
//!
//! A custom tapped-delay-line profile replaces the name with an inline table:
//! `profile = { delays_ns = [0.0, 300.0], powers_db = [0.0, -3.0] }`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelProfile, CsiError};
use crate::modem::Modulation;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl From<crate::Error> for ConfigError {
    fn from(err: crate::Error) -> Self {
        ConfigError::Invalid(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Ddr,
    Dp,
    Tr,
}

impl Receiver {
    pub const ALL: [Receiver; 3] = [Receiver::Ddr, Receiver::Dp, Receiver::Tr];

    pub fn name(self) -> &'static str {
        match self {
            Receiver::Ddr => "ddr",
            Receiver::Dp => "dp",
            Receiver::Tr => "tr",
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Receiver {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ddr" => Ok(Receiver::Ddr),
            "dp" => Ok(Receiver::Dp),
            "tr" => Ok(Receiver::Tr),
            other => Err(ConfigError::Invalid(format!("unknown receiver '{other}'"))),
        }
    }
}

/// Either a built-in profile name or an explicit delay/power table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Named(String),
    Custom { delays_ns: Vec<f64>, powers_db: Vec<f64> },
}

impl Default for ProfileSpec {
    fn default() -> Self {
        ProfileSpec::Named("EVA".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    #[serde(alias = "M")]
    pub m: usize,
    #[serde(alias = "N")]
    pub n: usize,
    pub delta_f_hz: f64,
    pub carrier_hz: f64,
    pub speed_kmph: f64,
    pub modulation: Modulation,
    pub num_antennas: usize,
    pub profile: ProfileSpec,
    pub receivers: Vec<Receiver>,
    pub snr_db: Vec<f64>,
    pub max_frames: u64,
    pub target_bit_errors: u64,
    pub csi_epsilon: f64,
    pub common_doppler: bool,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            m: 64,
            n: 16,
            delta_f_hz: 15e3,
            carrier_hz: 4e9,
            speed_kmph: 300.0,
            modulation: Modulation::Qpsk,
            num_antennas: 1,
            profile: ProfileSpec::default(),
            receivers: Receiver::ALL.to_vec(),
            snr_db: vec![0.0, 5.0, 10.0, 15.0],
            max_frames: 1000,
            target_bit_errors: 500,
            csi_epsilon: 0.0,
            common_doppler: false,
            seed: 1,
        }
    }
}

impl SimConfig {
    /// Parameters of the large-grid setup: 512 subcarriers, 128 symbols.
    pub fn full_scale(mut self) -> Self {
        self.m = 512;
        self.n = 128;
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: SimConfig = toml::from_str(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn speed_mps(&self) -> f64 {
        self.speed_kmph / 3.6
    }

    pub fn csi_error(&self) -> Result<CsiError, ConfigError> {
        Ok(CsiError::new(self.csi_epsilon)?)
    }

    pub fn channel_profile(&self) -> Result<ChannelProfile, ConfigError> {
        let (delays_s, powers_db) = match &self.profile {
            ProfileSpec::Named(name) => match name.to_ascii_lowercase().as_str() {
                "eva" => {
                    return Ok(ChannelProfile::eva(
                        self.carrier_hz,
                        self.speed_mps(),
                        self.delta_f_hz,
                        self.m,
                        self.n,
                    )?)
                }
                "flat" | "identity" => (vec![0.0], vec![0.0]),
                other => return Err(ConfigError::Invalid(format!("unknown profile '{other}'"))),
            },
            ProfileSpec::Custom { delays_ns, powers_db } => {
                (delays_ns.iter().map(|d| d * 1e-9).collect(), powers_db.clone())
            }
        };
        Ok(ChannelProfile::new(
            delays_s,
            powers_db,
            self.carrier_hz,
            self.speed_mps(),
            self.delta_f_hz,
            self.m,
            self.n,
        )?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: &str| Err(ConfigError::Invalid(msg.into()));
        if self.m == 0 || self.n == 0 {
            return invalid("m and n must be >= 1");
        }
        if self.num_antennas == 0 {
            return invalid("num_antennas must be >= 1");
        }
        if self.snr_db.is_empty() {
            return invalid("snr_db must list at least one point");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return invalid("snr_db values must be finite");
        }
        if self.receivers.is_empty() {
            return invalid("at least one receiver is required");
        }
        if self.max_frames == 0 || self.target_bit_errors == 0 {
            return invalid("max_frames and target_bit_errors must be > 0");
        }
        if !(self.speed_kmph.is_finite() && self.speed_kmph >= 0.0) {
            return invalid("speed_kmph must be >= 0");
        }
        self.csi_error()?;
        self.channel_profile()?;
        Ok(())
    }

    /// Receivers in canonical order, duplicates removed.
    pub fn receiver_list(&self) -> Vec<Receiver> {
        let mut list = self.receivers.clone();
        list.sort();
        list.dedup();
        list
    }
}

/// Parses `start:stop:step` into an inclusive list of SNR points.
pub fn parse_snr_range(text: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || ConfigError::Invalid(format!("SNR range '{text}' must be start:stop:step"));
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad());
    };
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}
