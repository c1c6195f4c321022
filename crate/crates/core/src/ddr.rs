//! Delay-Doppler reversal (DDR) receiver.
//!
//! The DDR filter is the channel conjugated, reversed in delay, negated in
//! Doppler and phase corrected, so that channel followed by filter collapses
//! onto a real, positive central tap at `(L - 1, 0)` equal to the channel's
//! Frobenius norm. Detection then reduces to a fixed shift and a scalar
//! equalizer.

use num_complex::Complex64;

use crate::channel::{joint_norm, DdChannel, PathTap};
use crate::error::{Error, Result};
use crate::modem::{Constellation, Grid, OtfsModem, TimeSignal};
use crate::propagation::{accumulate_twisted, phase_table};

/// Complex multiplications spent in filtering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    complex_multiplications: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn complex_multiplications(&self) -> u64 {
        self.complex_multiplications
    }

    fn add(&mut self, count: u64) {
        self.complex_multiplications += count;
    }
}

/// Matched filters for one or more receive antennas under a joint energy
/// normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct DdrFilter {
    branches: Vec<DdChannel>,
    norm: f64,
}

impl DdrFilter {
    /// Per-antenna filter taps.
    pub fn branches(&self) -> &[DdChannel] {
        &self.branches
    }

    /// Joint channel norm used for normalization; also the central peak of
    /// the combined cascade.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn max_delay(&self) -> usize {
        self.branches[0].max_delay()
    }

    pub fn tap_count(&self) -> usize {
        self.branches.iter().map(DdChannel::tap_count).sum()
    }
}

fn reversed_branch(h: &DdChannel, norm: f64) -> DdChannel {
    let len = h.frame_len() as f64;
    let l_last = h.max_delay() - 1;
    let taps = h.taps().iter().map(|t| {
        // g[L-1-l, -k] = h*[l, k] exp(j 2 pi k l / MN) / norm
        let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (t.doppler * t.delay as i64) as f64 / len);
        PathTap::new(l_last - t.delay, -t.doppler, t.gain.conj() * phase / norm)
    });
    DdChannel::from_parts(h.m(), h.n(), h.max_delay(), h.doppler_span(), taps)
}

/// Single-antenna DDR filter.
pub fn build_ddr_filter(est: &DdChannel) -> Result<DdrFilter> {
    build_ddr_filter_bank(std::slice::from_ref(est))
}

/// DDR filters for a bank of antennas, normalized jointly so the summed
/// filter energy is one.
pub fn build_ddr_filter_bank(est: &[DdChannel]) -> Result<DdrFilter> {
    let Some(first) = est.first() else {
        return Err(Error::InvalidParameter("no channel estimate given".into()));
    };
    if est.iter().any(|h| !h.same_layout(first)) {
        return Err(Error::InvalidParameter("all antenna channels must share M, N, L and K".into()));
    }
    let norm = joint_norm(est);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateChannel);
    }
    let branches = est.iter().map(|h| reversed_branch(h, norm)).collect();
    Ok(DdrFilter { branches, norm })
}

/// Passes every antenna's frame through its filter branch and sums.
pub fn ddr_filter_signal(y: &[TimeSignal], filter: &DdrFilter, counter: &mut OpCounter) -> Result<TimeSignal> {
    if y.len() != filter.branches.len() {
        return Err(Error::Size { expected: filter.branches.len(), actual: y.len() });
    }
    let len = filter.branches[0].frame_len();
    let table = phase_table(len);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (yq, g) in y.iter().zip(&filter.branches) {
        if yq.cp_len() != 0 || yq.len() != len {
            return Err(Error::Size { expected: len, actual: yq.frame_len() });
        }
        counter.add(accumulate_twisted(yq.samples(), g, &table, &mut out));
    }
    Ok(TimeSignal::new(out))
}

/// The composite channel of a cascade, with delays in `0..L1+L2-1` and
/// Dopplers in `-(K1+K2)/2..=(K1+K2)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadedChannel(DdChannel);

impl CascadedChannel {
    pub fn channel(&self) -> &DdChannel {
        &self.0
    }

    pub fn into_channel(self) -> DdChannel {
        self.0
    }

    pub fn gain_at(&self, delay: usize, doppler: i64) -> Complex64 {
        self.0.gain_at(delay, doppler).unwrap_or_default()
    }

    /// Sums several cascades tap-wise (antenna combining).
    pub fn sum(parts: &[CascadedChannel]) -> Option<CascadedChannel> {
        let first = parts.first()?;
        let taps = parts.iter().flat_map(|p| p.0.taps().iter().copied());
        Some(CascadedChannel(DdChannel::from_parts(
            first.0.m(),
            first.0.n(),
            first.0.max_delay(),
            first.0.doppler_span(),
            taps,
        )))
    }
}

/// Twisted convolution: the channel equivalent to applying `first` and then
/// `second`.
///
/// `out[l1 + l2, k1 + k2] += first[l1, k1] * second[l2, k2] * exp(j 2 pi k2 l1 / MN)`
pub fn cascade(second: &DdChannel, first: &DdChannel) -> Result<CascadedChannel> {
    if second.m() != first.m() || second.n() != first.n() {
        return Err(Error::Size { expected: first.frame_len(), actual: second.frame_len() });
    }
    let len = first.frame_len();
    let table = phase_table(len);
    let mut taps = Vec::with_capacity(first.tap_count() * second.tap_count());
    for a in first.taps() {
        for b in second.taps() {
            let p = (b.doppler * a.delay as i64).rem_euclid(len as i64) as usize;
            taps.push(PathTap::new(a.delay + b.delay, a.doppler + b.doppler, a.gain * b.gain * table[p]));
        }
    }
    Ok(CascadedChannel(DdChannel::from_parts(
        first.m(),
        first.n(),
        first.max_delay() + second.max_delay() - 1,
        first.doppler_span() + second.doppler_span(),
        taps,
    )))
}

/// Combined cascade of a filter bank with the channels it sees.
pub fn bank_cascade(filter: &DdrFilter, channels: &[DdChannel]) -> Result<CascadedChannel> {
    if channels.len() != filter.branches.len() {
        return Err(Error::Size { expected: filter.branches.len(), actual: channels.len() });
    }
    let parts = filter
        .branches
        .iter()
        .zip(channels)
        .map(|(g, h)| cascade(g, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(CascadedChannel::sum(&parts).expect("bank is non-empty"))
}

/// Central peak of the DDR cascade, the channel's Frobenius norm.
pub fn peak_gain(h: &DdChannel) -> Result<f64> {
    peak_gain_bank(std::slice::from_ref(h))
}

pub fn peak_gain_bank(channels: &[DdChannel]) -> Result<f64> {
    let norm = joint_norm(channels);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateChannel);
    }
    Ok(norm)
}

/// Undoes the cascade's central delay and gain and demodulates: the soft
/// delay-Doppler symbols ahead of the slicer.
pub fn ddr_equalize(y_hat: &TimeSignal, peak: f64, max_delay: usize, modem: &OtfsModem) -> Result<Grid> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::DegenerateChannel);
    }
    let len = modem.frame_len();
    if y_hat.cp_len() != 0 || y_hat.len() != len {
        return Err(Error::Size { expected: len, actual: y_hat.frame_len() });
    }
    let shift = (max_delay.max(1) - 1) % len;
    let samples = y_hat.samples();
    let scale = 1.0 / peak;
    let aligned: Vec<Complex64> = (0..len).map(|c| samples[(c + shift) % len] * scale).collect();
    modem.demodulate(&TimeSignal::new(aligned))
}

pub fn ddr_detect(
    y_hat: &TimeSignal,
    peak: f64,
    max_delay: usize,
    modem: &OtfsModem,
    constellation: &Constellation,
) -> Result<Vec<bool>> {
    let grid = ddr_equalize(y_hat, peak, max_delay, modem)?;
    Ok(constellation.demap_symbols(grid.as_slice()))
}

/// Filter, equalize and slice in one call.
pub fn ddr_receive(
    y: &[TimeSignal],
    filter: &DdrFilter,
    modem: &OtfsModem,
    constellation: &Constellation,
    counter: &mut OpCounter,
) -> Result<Vec<bool>> {
    let y_hat = ddr_filter_signal(y, filter, counter)?;
    ddr_detect(&y_hat, filter.norm(), filter.max_delay(), modem, constellation)
}
