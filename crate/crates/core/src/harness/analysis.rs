//! Per-realization SINR statistics for the `analyze` command.

use crate::error::Result;
use crate::harness::rng::{stream, StreamRole};
use crate::harness::sweep::{snr_to_sigma2, Simulation};
use crate::sinr::{sinr_gain_bank, to_db, SinrReport};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRow {
    pub snr_db: f64,
    pub realizations: u64,
    pub mean_gp: f64,
    pub median_gp: f64,
    pub fraction_gp_above_one: f64,
    pub mean_sig_ratio: f64,
    pub mean_sinr_ddr_db: f64,
    pub mean_sinr_dp_db: f64,
}

/// SINR reports for `max_frames` channel realizations at one SNR point.
/// Realization `r` uses the same channel stream as sweep trial `r`.
pub fn realization_reports(sim: &Simulation, snr_index: usize) -> Result<Vec<SinrReport>> {
    let cfg = sim.config();
    let sigma2 = snr_to_sigma2(cfg.snr_db[snr_index]);
    (0..cfg.max_frames)
        .map(|r| {
            let channels = sim.draw_channels(&mut stream(cfg.seed, snr_index as u64, r, StreamRole::Channel))?;
            sinr_gain_bank(&channels, 1.0, sigma2)
        })
        .collect()
}

pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    sum / count as f64
}

pub fn run_analysis(sim: &Simulation) -> Result<Vec<AnalysisRow>> {
    let cfg = sim.config();
    let mut rows = Vec::with_capacity(cfg.snr_db.len());
    for (snr_index, &snr_db) in cfg.snr_db.iter().enumerate() {
        let reports = realization_reports(sim, snr_index)?;
        let gains: Vec<f64> = reports.iter().map(|r| r.gain_gp).collect();
        rows.push(AnalysisRow {
            snr_db,
            realizations: reports.len() as u64,
            mean_gp: mean(gains.iter().copied()),
            median_gp: median(&gains),
            fraction_gp_above_one: gains.iter().filter(|&&g| g > 1.0).count() as f64 / gains.len() as f64,
            mean_sig_ratio: mean(reports.iter().map(|r| r.sig_ratio)),
            mean_sinr_ddr_db: mean(reports.iter().map(|r| to_db(r.sinr_ddr))),
            mean_sinr_dp_db: mean(reports.iter().map(|r| to_db(r.sinr_dp))),
        });
    }
    Ok(rows)
}
