//! Comparison receivers: direct processing (DP) against the strongest tap,
//! and classic one-dimensional time reversal (TR) with ideal synchronization.

use num_complex::Complex64;

use crate::channel::{DdChannel, PathTap};
use crate::error::{Error, Result};
use crate::modem::{Constellation, Grid, OtfsModem, TimeSignal};
use crate::propagation::{accumulate_twisted, phase_table};

/// The strongest tap of a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantTap {
    pub delay: usize,
    pub doppler: i64,
    pub gain: Complex64,
}

/// Largest-magnitude tap; ties go to the smallest delay, then the smallest
/// Doppler.
pub fn find_dominant_tap(h: &DdChannel) -> Result<DominantTap> {
    // taps are sorted by (delay, doppler), so the first maximum wins ties
    let mut best: Option<&PathTap> = None;
    for t in h.taps() {
        if best.is_none_or(|b| t.gain.norm_sqr() > b.gain.norm_sqr()) {
            best = Some(t);
        }
    }
    match best {
        Some(t) if t.gain.norm_sqr() > 0.0 => Ok(DominantTap { delay: t.delay, doppler: t.doppler, gain: t.gain }),
        _ => Err(Error::DegenerateChannel),
    }
}

fn check_frames(y: &[TimeSignal], count: usize, len: usize) -> Result<()> {
    if y.len() != count {
        return Err(Error::Size { expected: count, actual: y.len() });
    }
    for yq in y {
        if yq.cp_len() != 0 || yq.len() != len {
            return Err(Error::Size { expected: len, actual: yq.frame_len() });
        }
    }
    Ok(())
}

/// DP soft output: each antenna is aligned on its dominant tap (delay
/// advanced, Doppler removed) and the antennas are maximal-ratio combined.
pub fn dp_equalize(y: &[TimeSignal], channels: &[DdChannel], modem: &OtfsModem) -> Result<Grid> {
    let len = modem.frame_len();
    check_frames(y, channels.len(), len)?;
    if channels.is_empty() {
        return Err(Error::InvalidParameter("no channel estimate given".into()));
    }
    let table = phase_table(len);
    let mut combined = vec![Complex64::new(0.0, 0.0); len];
    let mut weight_sum = 0.0;
    for (yq, h) in y.iter().zip(channels) {
        let dom = find_dominant_tap(h)?;
        let weight = dom.gain.conj();
        weight_sum += dom.gain.norm_sqr();
        let shift = dom.delay % len;
        let step = (-dom.doppler).rem_euclid(len as i64) as usize;
        let samples = yq.samples();
        let mut p = 0;
        for (c, z) in combined.iter_mut().enumerate() {
            // y[c + l] carries h x[c] exp(j 2 pi k c / MN)
            *z += weight * table[p] * samples[(c + shift) % len];
            p += step;
            if p >= len {
                p -= len;
            }
        }
    }
    let scale = 1.0 / weight_sum;
    for z in &mut combined {
        *z *= scale;
    }
    modem.demodulate(&TimeSignal::new(combined))
}

pub fn dp_detect(
    y: &[TimeSignal],
    channels: &[DdChannel],
    modem: &OtfsModem,
    constellation: &Constellation,
) -> Result<Vec<bool>> {
    let grid = dp_equalize(y, channels, modem)?;
    Ok(constellation.demap_symbols(grid.as_slice()))
}

/// One antenna's branch of a classic TR receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct TrBranch {
    /// Time-reversed, conjugated, Doppler-collapsed response (delays `0..L`).
    pub taps_1d: Vec<Complex64>,
    /// Doppler index removed before filtering.
    pub k_sync: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrFilter {
    branches: Vec<TrBranch>,
    norm: f64,
    m: usize,
    n: usize,
}

impl TrFilter {
    pub fn branches(&self) -> &[TrBranch] {
        &self.branches
    }

    /// Joint norm of the collapsed responses. Also the gain of the focused
    /// output sample, since the filters carry a 1/norm factor.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn max_delay(&self) -> usize {
        self.branches[0].taps_1d.len()
    }

    fn branch_channel(&self, branch: &TrBranch) -> DdChannel {
        let taps = branch.taps_1d.iter().enumerate().map(|(l, &g)| PathTap::new(l, 0, g));
        DdChannel::from_parts(self.m, self.n, branch.taps_1d.len(), 0, taps)
    }
}

pub fn build_tr_filter(h: &DdChannel) -> Result<TrFilter> {
    build_tr_filter_bank(std::slice::from_ref(h))
}

/// Collapses each channel over Doppler, `h1d[l] = sum_k h[l, k]`,
/// synchronizes to the dominant tap's Doppler and time-reverses, with one
/// joint normalization across antennas.
pub fn build_tr_filter_bank(channels: &[DdChannel]) -> Result<TrFilter> {
    let Some(first) = channels.first() else {
        return Err(Error::InvalidParameter("no channel estimate given".into()));
    };
    if channels.iter().any(|h| !h.same_layout(first)) {
        return Err(Error::InvalidParameter("all antenna channels must share M, N, L and K".into()));
    }
    let l_span = first.max_delay();
    let mut collapsed = Vec::with_capacity(channels.len());
    for h in channels {
        let mut h1d = vec![Complex64::new(0.0, 0.0); l_span];
        for t in h.taps() {
            h1d[t.delay] += t.gain;
        }
        let k_sync = find_dominant_tap(h)?.doppler;
        collapsed.push((h1d, k_sync));
    }
    let norm = collapsed.iter().flat_map(|(h1d, _)| h1d.iter()).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateChannel);
    }
    let branches = collapsed
        .into_iter()
        .map(|(h1d, k_sync)| TrBranch {
            taps_1d: h1d.iter().rev().map(|z| z.conj() / norm).collect(),
            k_sync,
        })
        .collect();
    Ok(TrFilter { branches, norm, m: first.m(), n: first.n() })
}

/// TR soft output: Doppler-synchronize, time-reverse filter, combine,
/// advance by L - 1 and rescale.
pub fn tr_equalize(y: &[TimeSignal], filter: &TrFilter, modem: &OtfsModem) -> Result<Grid> {
    let len = modem.frame_len();
    check_frames(y, filter.branches.len(), len)?;
    let table = phase_table(len);
    let mut filtered = vec![Complex64::new(0.0, 0.0); len];
    for (yq, branch) in y.iter().zip(&filter.branches) {
        let step = (-branch.k_sync).rem_euclid(len as i64) as usize;
        let synced: Vec<Complex64> =
            yq.samples().iter().enumerate().map(|(c, z)| z * table[(step * c) % len]).collect();
        accumulate_twisted(&synced, &filter.branch_channel(branch), &table, &mut filtered);
    }
    let shift = (filter.max_delay() - 1) % len;
    let scale = 1.0 / filter.norm;
    let aligned: Vec<Complex64> = (0..len).map(|c| filtered[(c + shift) % len] * scale).collect();
    modem.demodulate(&TimeSignal::new(aligned))
}

pub fn tr_detect(
    y: &[TimeSignal],
    filter: &TrFilter,
    modem: &OtfsModem,
    constellation: &Constellation,
) -> Result<Vec<bool>> {
    let grid = tr_equalize(y, filter, modem)?;
    Ok(constellation.demap_symbols(grid.as_slice()))
}
