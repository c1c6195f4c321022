//! Paired Monte-Carlo trials and SNR sweeps.
//!
//! Every receiver in a trial sees the same bits, channel realizations and
//! noise, so BER differences between receivers are paired comparisons.
//! SNR is the per-sample ratio of unit symbol energy to noise variance,
//! with channels normalized to unit average power.

use rand::Rng;
use rayon::prelude::*;

use crate::baseline::{build_tr_filter_bank, dp_detect, tr_detect};
use crate::channel::{gen_channel_with, perturb_csi, ChannelProfile, CsiError, DdChannel, DopplerMode};
use crate::ddr::{build_ddr_filter_bank, ddr_receive, OpCounter};
use crate::error::{Error, Result};
use crate::harness::config::{ConfigError, Receiver, SimConfig};
use crate::harness::rng::{stream, StreamRole};
use crate::modem::{add_cp, remove_cp, Constellation, OtfsModem};
use crate::propagation::{transmit_frame, AntennaBank, NoiseModel};
use crate::sinr::{sinr_gain_bank, to_db};

/// Noise variance for a per-sample SNR in dB.
pub fn snr_to_sigma2(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub receiver: Receiver,
    pub snr_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub mean_sinr_db: Option<f64>,
}

/// Result of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub bits: u64,
    /// Bit errors per receiver, in [`Simulation::receivers`] order.
    pub bit_errors: Vec<u64>,
    /// Closed-form SINR (dB) of DDR and DP on the true channels.
    pub sinr_db: (f64, f64),
}

/// A validated configuration with its modem and channel model prepared.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SimConfig,
    modem: OtfsModem,
    constellation: Constellation,
    profile: ChannelProfile,
    csi: CsiError,
    receivers: Vec<Receiver>,
    cp_len: usize,
}

impl Simulation {
    pub fn new(cfg: SimConfig) -> std::result::Result<Self, ConfigError> {
        cfg.validate()?;
        let profile = cfg.channel_profile()?;
        let modem = OtfsModem::new(cfg.m, cfg.n)?;
        let csi = cfg.csi_error()?;
        let (l_span, _) = profile.support();
        Ok(Self {
            constellation: Constellation::new(cfg.modulation),
            receivers: cfg.receiver_list(),
            cp_len: l_span - 1,
            cfg,
            modem,
            profile,
            csi,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    pub fn modem(&self) -> &OtfsModem {
        &self.modem
    }

    pub fn profile(&self) -> &ChannelProfile {
        &self.profile
    }

    pub fn bits_per_frame(&self) -> u64 {
        (self.modem.frame_len() * self.constellation.bits_per_symbol()) as u64
    }

    fn doppler_mode(&self) -> DopplerMode {
        if self.cfg.common_doppler {
            DopplerMode::Common
        } else {
            DopplerMode::PerPath
        }
    }

    /// Q independent channel realizations for one trial.
    pub fn draw_channels<R: Rng>(&self, rng: &mut R) -> Result<Vec<DdChannel>> {
        (0..self.cfg.num_antennas)
            .map(|_| gen_channel_with(&self.profile, self.doppler_mode(), rng))
            .collect()
    }
}

fn count_errors(sent: &[bool], got: &[bool]) -> u64 {
    sent.iter().zip(got).filter(|(a, b)| a != b).count() as u64
}

/// Runs frame `trial_index` of SNR point `snr_index`.
pub fn run_trial(sim: &Simulation, snr_index: usize, trial_index: u64) -> Result<TrialOutcome> {
    let cfg = &sim.cfg;
    let snr_db = *cfg
        .snr_db
        .get(snr_index)
        .ok_or_else(|| Error::InvalidParameter(format!("no SNR point {snr_index}")))?;
    let sigma2 = snr_to_sigma2(snr_db);
    let coords = |role| stream(cfg.seed, snr_index as u64, trial_index, role);

    let mut bit_rng = coords(StreamRole::Bits);
    let bits: Vec<bool> = (0..sim.bits_per_frame()).map(|_| bit_rng.random()).collect();
    let symbols = sim.constellation.modulate_bits(&bits)?;
    let x = sim.modem.modulate(&sim.modem.dd_grid(symbols)?)?;
    let x_cp = add_cp(&x, sim.cp_len)?;

    let truth = sim.draw_channels(&mut coords(StreamRole::Channel))?;
    let bank = AntennaBank::new(truth)?;
    let noise = NoiseModel::new(sigma2)?;
    let received: Vec<_> = transmit_frame(&x_cp, &bank, noise, &mut coords(StreamRole::Noise))?
        .iter()
        .map(remove_cp)
        .collect();

    let mut csi_rng = coords(StreamRole::Csi);
    let estimates: Vec<DdChannel> = bank.channels().iter().map(|h| perturb_csi(h, sim.csi, &mut csi_rng)).collect();

    let mut bit_errors = Vec::with_capacity(sim.receivers.len());
    for receiver in &sim.receivers {
        let decided = match receiver {
            Receiver::Ddr => {
                let filter = build_ddr_filter_bank(&estimates)?;
                ddr_receive(&received, &filter, &sim.modem, &sim.constellation, &mut OpCounter::new())?
            }
            Receiver::Dp => dp_detect(&received, &estimates, &sim.modem, &sim.constellation)?,
            Receiver::Tr => {
                let filter = build_tr_filter_bank(&estimates)?;
                tr_detect(&received, &filter, &sim.modem, &sim.constellation)?
            }
        };
        bit_errors.push(count_errors(&bits, &decided));
    }

    let report = sinr_gain_bank(bank.channels(), 1.0, sigma2)?;
    Ok(TrialOutcome {
        bits: bits.len() as u64,
        bit_errors,
        sinr_db: (to_db(report.sinr_ddr), to_db(report.sinr_dp)),
    })
}

struct PointTally {
    frames: u64,
    bits: u64,
    errors: Vec<u64>,
    sinr_sum: (f64, f64),
}

/// Sweeps every SNR point. Each point runs frames until every receiver has
/// accumulated `target_bit_errors` or `max_frames` frames have run. Frames
/// are evaluated in parallel batches but folded in index order, so the
/// result does not depend on `workers`.
pub fn run_sweep(sim: &Simulation, workers: usize) -> Result<Vec<BerRecord>> {
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let cfg = &sim.cfg;
    let mut records = Vec::new();
    for (snr_index, &snr_db) in cfg.snr_db.iter().enumerate() {
        let mut tally = PointTally {
            frames: 0,
            bits: 0,
            errors: vec![0; sim.receivers.len()],
            sinr_sum: (0.0, 0.0),
        };
        let done = |t: &PointTally| {
            t.frames >= cfg.max_frames || t.errors.iter().all(|&e| e >= cfg.target_bit_errors)
        };
        let batch = (4 * workers) as u64;
        'point: while !done(&tally) {
            let start = tally.frames;
            let end = (start + batch).min(cfg.max_frames);
            let outcomes: Vec<Result<TrialOutcome>> =
                pool.install(|| (start..end).into_par_iter().map(|t| run_trial(sim, snr_index, t)).collect());
            for outcome in outcomes {
                let outcome = outcome?;
                tally.frames += 1;
                tally.bits += outcome.bits;
                for (acc, e) in tally.errors.iter_mut().zip(&outcome.bit_errors) {
                    *acc += e;
                }
                tally.sinr_sum.0 += outcome.sinr_db.0;
                tally.sinr_sum.1 += outcome.sinr_db.1;
                if done(&tally) {
                    break 'point;
                }
            }
        }
        let frames = tally.frames as f64;
        for (receiver, &bit_errors) in sim.receivers.iter().zip(&tally.errors) {
            let mean_sinr_db = match receiver {
                Receiver::Ddr => Some(tally.sinr_sum.0 / frames),
                Receiver::Dp => Some(tally.sinr_sum.1 / frames),
                Receiver::Tr => None,
            };
            records.push(BerRecord {
                receiver: *receiver,
                snr_db,
                frames: tally.frames,
                bits: tally.bits,
                bit_errors,
                ber: bit_errors as f64 / tally.bits as f64,
                mean_sinr_db,
            });
        }
    }
    Ok(records)
}
