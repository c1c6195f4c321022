//! Time-domain propagation through delay-Doppler channels.
//!
//! A tap `(l, k, h)` acts on a frame of `MN` samples as
//! `y[c] += h * x[(c - l) mod MN] * exp(j 2 pi k (c - l) / MN)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_gaussian, DdChannel};
use crate::error::{Error, Result};
use crate::modem::TimeSignal;

/// `exp(j 2 pi p / len)` for `p in 0..len`.
pub(crate) fn phase_table(len: usize) -> Vec<Complex64> {
    (0..len).map(|p| Complex64::from_polar(1.0, 2.0 * PI * p as f64 / len as f64)).collect()
}

/// Accumulates the cyclic response of `h` to `x` into `out`. Returns the
/// number of complex multiplications spent (one per tap per output sample).
pub(crate) fn accumulate_twisted(
    x: &[Complex64],
    h: &DdChannel,
    table: &[Complex64],
    out: &mut [Complex64],
) -> u64 {
    let len = x.len();
    for tap in h.taps() {
        let shift = tap.delay % len;
        let step = tap.doppler.rem_euclid(len as i64) as usize;
        // phase index k * (c - l) mod MN, starting from c = 0
        let mut p = (step * ((len - shift) % len)) % len;
        for (c, y) in out.iter_mut().enumerate() {
            let src = if c >= shift { c - shift } else { c + len - shift };
            *y += tap.gain * table[p] * x[src];
            p += step;
            if p >= len {
                p -= len;
            }
        }
    }
    (h.tap_count() * len) as u64
}

fn check_frame(x: &TimeSignal, h: &DdChannel) -> Result<()> {
    if x.cp_len() != 0 || x.len() != h.frame_len() {
        return Err(Error::Size { expected: h.frame_len(), actual: x.frame_len() });
    }
    Ok(())
}

/// Cyclic delay-Doppler channel applied to a CP-free frame.
pub fn twisted_apply(x: &TimeSignal, h: &DdChannel) -> Result<TimeSignal> {
    check_frame(x, h)?;
    let table = phase_table(x.len());
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    accumulate_twisted(x.samples(), h, &table, &mut out);
    Ok(TimeSignal::new(out))
}

/// Linear (non-cyclic) propagation of a CP-prefixed frame. Sample `n` of the
/// prefixed signal sits at frame time `n - cp_len`; samples before the start
/// of the prefix are zero. With `cp_len >= L - 1` the frame part of the
/// output equals [`twisted_apply`] on the CP-free frame.
pub fn propagate_with_cp(x: &TimeSignal, h: &DdChannel) -> Result<TimeSignal> {
    if x.frame_len() != h.frame_len() {
        return Err(Error::Size { expected: h.frame_len(), actual: x.frame_len() });
    }
    let len = h.frame_len();
    let table = phase_table(len);
    let cp = x.cp_len();
    let samples = x.samples();
    let mut out = vec![Complex64::new(0.0, 0.0); samples.len()];
    for tap in h.taps() {
        let k = tap.doppler.rem_euclid(len as i64) as usize;
        for n in tap.delay..samples.len() {
            let t = (n as i64 - cp as i64 - tap.delay as i64).rem_euclid(len as i64) as usize;
            out[n] += tap.gain * table[(k * t) % len] * samples[n - tap.delay];
        }
    }
    TimeSignal::with_cp(out, cp)
}

/// Per-sample complex noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    sigma2: f64,
}

impl NoiseModel {
    pub fn new(sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidParameter(format!("noise variance {sigma2} must be > 0")));
        }
        Ok(Self { sigma2 })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// Adds circular complex Gaussian noise of total variance sigma^2.
pub fn add_awgn<R: Rng + ?Sized>(y: &TimeSignal, noise: NoiseModel, rng: &mut R) -> TimeSignal {
    let mut out = y.clone();
    for z in out.samples_mut() {
        *z += complex_gaussian(rng, noise.sigma2);
    }
    out
}

/// One independent channel per receive antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaBank {
    channels: Vec<DdChannel>,
}

impl AntennaBank {
    pub fn new(channels: Vec<DdChannel>) -> Result<Self> {
        let Some(first) = channels.first() else {
            return Err(Error::InvalidParameter("antenna bank needs at least one channel".into()));
        };
        if channels.iter().any(|h| !h.same_layout(first)) {
            return Err(Error::InvalidParameter("all antenna channels must share M, N, L and K".into()));
        }
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[DdChannel] {
        &self.channels
    }

    pub fn antennas(&self) -> usize {
        self.channels.len()
    }
}

/// Cyclic propagation to every antenna, with independent noise per antenna.
pub fn transmit<R: Rng + ?Sized>(
    x: &TimeSignal,
    bank: &AntennaBank,
    noise: NoiseModel,
    rng: &mut R,
) -> Result<Vec<TimeSignal>> {
    bank.channels
        .iter()
        .map(|h| Ok(add_awgn(&twisted_apply(x, h)?, noise, rng)))
        .collect()
}

/// Like [`transmit`] but for a CP-prefixed frame, propagated linearly; the
/// outputs keep their prefix.
pub fn transmit_frame<R: Rng + ?Sized>(
    x: &TimeSignal,
    bank: &AntennaBank,
    noise: NoiseModel,
    rng: &mut R,
) -> Result<Vec<TimeSignal>> {
    bank.channels
        .iter()
        .map(|h| Ok(add_awgn(&propagate_with_cp(x, h)?, noise, rng)))
        .collect()
}
