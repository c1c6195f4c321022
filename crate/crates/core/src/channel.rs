//! Sparse delay-Doppler channels.
//!
//! A [`DdChannel`] is a list of on-grid taps `(delay, doppler, gain)` over an
//! M x N frame. The same type describes physical channels, matched filters
//! and cascades of the two.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT_MPS: f64 = 299_792_458.0;

/// Extended Vehicular A path delays.
pub const EVA_DELAYS_NS: [f64; 9] = [0.0, 30.0, 150.0, 310.0, 370.0, 710.0, 1090.0, 1730.0, 2510.0];
/// Extended Vehicular A average path powers.
pub const EVA_POWERS_DB: [f64; 9] = [0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathTap {
    pub delay: usize,
    pub doppler: i64,
    pub gain: Complex64,
}

impl PathTap {
    pub fn new(delay: usize, doppler: i64, gain: Complex64) -> Self {
        Self { delay, doppler, gain }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DdChannel {
    m: usize,
    n: usize,
    max_delay: usize,
    doppler_span: usize,
    // sorted by (delay, doppler), no duplicates
    taps: Vec<PathTap>,
}

impl DdChannel {
    /// Builds a channel with delays in `0..max_delay` and Dopplers in
    /// `-doppler_span/2..=doppler_span/2`. Taps sharing an index pair are
    /// summed.
    pub fn new(
        m: usize,
        n: usize,
        max_delay: usize,
        doppler_span: usize,
        taps: impl IntoIterator<Item = PathTap>,
    ) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be >= 1".into()));
        }
        if max_delay == 0 {
            return Err(Error::InvalidParameter("delay span L must be >= 1".into()));
        }
        if max_delay > m * n {
            return Err(Error::UnsupportableDelay { index: max_delay - 1, frame_len: m * n });
        }
        if !doppler_span.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("Doppler span K = {doppler_span} must be even")));
        }
        if doppler_span > m * n {
            return Err(Error::InvalidParameter(format!(
                "Doppler span K = {doppler_span} exceeds the frame length {}",
                m * n
            )));
        }
        let half = (doppler_span / 2) as i64;
        let taps: Vec<PathTap> = taps.into_iter().collect();
        for t in &taps {
            if t.delay >= max_delay || t.doppler.abs() > half {
                return Err(Error::TapOutOfRange { delay: t.delay, doppler: t.doppler });
            }
        }
        Ok(Self::from_parts(m, n, max_delay, doppler_span, taps))
    }

    // Unchecked support; used for cascades whose span may exceed one frame.
    pub(crate) fn from_parts(
        m: usize,
        n: usize,
        max_delay: usize,
        doppler_span: usize,
        taps: impl IntoIterator<Item = PathTap>,
    ) -> Self {
        let mut merged: BTreeMap<(usize, i64), Complex64> = BTreeMap::new();
        for t in taps {
            *merged.entry((t.delay, t.doppler)).or_default() += t.gain;
        }
        let taps = merged.into_iter().map(|((delay, doppler), gain)| PathTap { delay, doppler, gain }).collect();
        Self { m, n, max_delay, doppler_span, taps }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame_len(&self) -> usize {
        self.m * self.n
    }

    /// L: taps occupy delays `0..L`.
    pub fn max_delay(&self) -> usize {
        self.max_delay
    }

    /// K: taps occupy Dopplers `-K/2..=K/2`.
    pub fn doppler_span(&self) -> usize {
        self.doppler_span
    }

    pub fn taps(&self) -> &[PathTap] {
        &self.taps
    }

    pub fn tap_count(&self) -> usize {
        self.taps.len()
    }

    pub fn gain_at(&self, delay: usize, doppler: i64) -> Option<Complex64> {
        self.taps
            .binary_search_by(|t| (t.delay, t.doppler).cmp(&(delay, doppler)))
            .ok()
            .map(|i| self.taps[i].gain)
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.gain.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// True when every tap sits on Doppler 0.
    pub fn is_zero_doppler(&self) -> bool {
        self.taps.iter().all(|t| t.doppler == 0)
    }

    pub(crate) fn same_layout(&self, other: &DdChannel) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.max_delay == other.max_delay
            && self.doppler_span == other.doppler_span
    }
}

/// Frobenius norm of the tap gains; 0 for an empty channel.
pub fn frobenius_norm(h: &DdChannel) -> f64 {
    h.frobenius_norm()
}

/// Joint norm of a bank of channels.
pub fn joint_norm(channels: &[DdChannel]) -> f64 {
    channels.iter().map(DdChannel::energy).sum::<f64>().sqrt()
}

/// A tapped-delay-line power profile plus the link parameters needed to put
/// it on a delay-Doppler grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    pub delays_s: Vec<f64>,
    pub powers_db: Vec<f64>,
    pub carrier_hz: f64,
    pub speed_mps: f64,
    pub delta_f_hz: f64,
    pub m: usize,
    pub n: usize,
}

impl ChannelProfile {
    pub fn new(
        delays_s: Vec<f64>,
        powers_db: Vec<f64>,
        carrier_hz: f64,
        speed_mps: f64,
        delta_f_hz: f64,
        m: usize,
        n: usize,
    ) -> Result<Self> {
        if delays_s.is_empty() || delays_s.len() != powers_db.len() {
            return Err(Error::InvalidParameter(format!(
                "profile needs matching non-empty delay and power lists (got {} and {})",
                delays_s.len(),
                powers_db.len()
            )));
        }
        if delays_s.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::InvalidParameter("path delays must be finite and >= 0".into()));
        }
        if powers_db.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("path powers must be finite".into()));
        }
        if !(speed_mps.is_finite() && speed_mps >= 0.0) {
            return Err(Error::InvalidParameter("speed must be >= 0".into()));
        }
        if !(carrier_hz > 0.0 && delta_f_hz > 0.0) {
            return Err(Error::InvalidParameter("carrier and subcarrier spacing must be > 0".into()));
        }
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be >= 1".into()));
        }
        let profile = Self { delays_s, powers_db, carrier_hz, speed_mps, delta_f_hz, m, n };
        profile.max_delay_index()?;
        Ok(profile)
    }

    /// The built-in Extended Vehicular A profile.
    pub fn eva(carrier_hz: f64, speed_mps: f64, delta_f_hz: f64, m: usize, n: usize) -> Result<Self> {
        Self::new(
            EVA_DELAYS_NS.iter().map(|d| d * 1e-9).collect(),
            EVA_POWERS_DB.to_vec(),
            carrier_hz,
            speed_mps,
            delta_f_hz,
            m,
            n,
        )
    }

    /// Path powers in linear scale, normalized to sum to one.
    pub fn path_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.into_iter().map(|p| p / total).collect()
    }

    pub fn max_doppler_hz(&self) -> f64 {
        self.speed_mps * self.carrier_hz / SPEED_OF_LIGHT_MPS
    }

    /// Largest Doppler index a Jakes draw can produce.
    pub fn max_doppler_index(&self) -> i64 {
        (self.max_doppler_hz() * self.n as f64 / self.delta_f_hz).round() as i64
    }

    fn max_delay_index(&self) -> Result<usize> {
        let mut max = 0;
        for &tau in &self.delays_s {
            max = max.max(quantize_delay(tau, self.m, self.n, self.delta_f_hz)?);
        }
        Ok(max)
    }

    /// L and K of channels drawn from this profile.
    pub fn support(&self) -> (usize, usize) {
        let l = self.max_delay_index().expect("validated on construction") + 1;
        let k = 2 * self.max_doppler_index() as usize;
        (l, k)
    }
}

/// `round(tau * M * delta_f)`, rejected if it does not fit in one frame.
pub fn quantize_delay(tau_s: f64, m: usize, n: usize, delta_f_hz: f64) -> Result<usize> {
    if !(tau_s.is_finite() && tau_s >= 0.0) {
        return Err(Error::InvalidParameter(format!("delay {tau_s} s must be finite and >= 0")));
    }
    let l = (tau_s * m as f64 * delta_f_hz).round();
    if l >= (m * n) as f64 {
        return Err(Error::UnsupportableDelay { index: l as usize, frame_len: m * n });
    }
    Ok(l as usize)
}

/// Doppler index for a path arriving at angle `theta`:
/// `round(nu_max cos(theta) * N / delta_f)`.
pub fn doppler_index_at(theta: f64, speed_mps: f64, carrier_hz: f64, n: usize, delta_f_hz: f64) -> i64 {
    let nu_max = speed_mps * carrier_hz / SPEED_OF_LIGHT_MPS;
    let nu = nu_max * theta.cos();
    (nu * n as f64 / delta_f_hz).round() as i64
}

/// Jakes' model: draws the arrival angle uniformly on [-pi, pi].
pub fn jakes_doppler<R: Rng + ?Sized>(
    speed_mps: f64,
    carrier_hz: f64,
    n: usize,
    delta_f_hz: f64,
    rng: &mut R,
) -> i64 {
    let theta = rng.random_range(-PI..=PI);
    doppler_index_at(theta, speed_mps, carrier_hz, n, delta_f_hz)
}

/// How Doppler indices are assigned to the paths of a generated channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DopplerMode {
    /// One independent Jakes draw per path.
    PerPath,
    /// A single Jakes draw shared by every path (small angular spread).
    Common,
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * (variance / 2.0).sqrt()
}

/// Draws a channel realization with independent Jakes Dopplers per path.
pub fn gen_channel<R: Rng + ?Sized>(profile: &ChannelProfile, rng: &mut R) -> Result<DdChannel> {
    gen_channel_with(profile, DopplerMode::PerPath, rng)
}

/// Draws a channel realization: Rayleigh gains with the profile's powers, one
/// tap per path, colliding taps summed.
pub fn gen_channel_with<R: Rng + ?Sized>(
    profile: &ChannelProfile,
    mode: DopplerMode,
    rng: &mut R,
) -> Result<DdChannel> {
    let (l_span, k_span) = profile.support();
    let doppler = |rng: &mut R| {
        jakes_doppler(profile.speed_mps, profile.carrier_hz, profile.n, profile.delta_f_hz, rng)
    };
    let common = match mode {
        DopplerMode::Common => Some(doppler(rng)),
        DopplerMode::PerPath => None,
    };
    let mut taps = Vec::with_capacity(profile.delays_s.len());
    for (&tau, power) in profile.delays_s.iter().zip(profile.path_powers()) {
        let delay = quantize_delay(tau, profile.m, profile.n, profile.delta_f_hz)?;
        let k = match common {
            Some(k) => k,
            None => doppler(rng),
        };
        taps.push(PathTap::new(delay, k, complex_gaussian(rng, power)));
    }
    DdChannel::new(profile.m, profile.n, l_span, k_span, taps)
}

/// Relative CSI error radius applied to gains, delays and Dopplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsiError {
    epsilon: f64,
}

impl CsiError {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!("CSI error radius {epsilon} must be >= 0")));
        }
        Ok(Self { epsilon })
    }

    pub fn perfect() -> Self {
        Self { epsilon: 0.0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

fn uniform_symmetric<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> f64 {
    radius * (2.0 * rng.random::<f64>() - 1.0)
}

/// The receiver's estimate of `truth` under bounded CSI error.
///
/// Each gain moves by a point drawn uniformly from the disk of radius
/// `eps |gain|`; delay and Doppler move by uniform offsets bounded by
/// `eps |index|` and are then re-rounded onto the grid and clamped to the
/// channel support.
pub fn perturb_csi<R: Rng + ?Sized>(truth: &DdChannel, err: CsiError, rng: &mut R) -> DdChannel {
    let eps = err.epsilon;
    if eps == 0.0 {
        return truth.clone();
    }
    let l_max = (truth.max_delay - 1) as f64;
    let k_half = (truth.doppler_span / 2) as f64;
    let taps: Vec<PathTap> = truth
        .taps
        .iter()
        .map(|t| {
            let radius = eps * t.gain.norm() * rng.random::<f64>().sqrt();
            let angle = 2.0 * PI * rng.random::<f64>();
            let gain = t.gain + Complex64::from_polar(radius, angle);
            let l = t.delay as f64 + uniform_symmetric(rng, eps * t.delay as f64);
            let k = t.doppler as f64 + uniform_symmetric(rng, eps * t.doppler.abs() as f64);
            PathTap {
                delay: l.round().clamp(0.0, l_max) as usize,
                doppler: k.round().clamp(-k_half, k_half) as i64,
                gain,
            }
        })
        .collect();
    DdChannel::from_parts(truth.m, truth.n, truth.max_delay, truth.doppler_span, taps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicate_taps_are_summed() {
        let h = DdChannel::new(
            8,
            4,
            3,
            2,
            [PathTap::new(1, 0, c(1.0, 0.0)), PathTap::new(1, 0, c(0.0, 2.0)), PathTap::new(0, 1, c(1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(h.tap_count(), 2);
        assert_eq!(h.gain_at(1, 0), Some(c(1.0, 2.0)));
        assert_eq!(h.taps()[0].delay, 0);
    }

    #[test]
    fn out_of_support_tap_is_rejected() {
        let err = DdChannel::new(8, 4, 3, 2, [PathTap::new(3, 0, c(1.0, 0.0))]).unwrap_err();
        assert_eq!(err, Error::TapOutOfRange { delay: 3, doppler: 0 });
        let err = DdChannel::new(8, 4, 3, 2, [PathTap::new(0, -2, c(1.0, 0.0))]).unwrap_err();
        assert_eq!(err, Error::TapOutOfRange { delay: 0, doppler: -2 });
        assert!(DdChannel::new(8, 4, 3, 3, []).is_err());
        assert!(DdChannel::new(2, 2, 5, 0, []).is_err());
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(quantize_delay(0.0, 512, 128, 15e3).unwrap(), 0);
        // 2510e-9 * 512 * 15e3 = 19.2768
        assert_eq!(quantize_delay(2510e-9, 512, 128, 15e3).unwrap(), 19);
        assert_eq!(quantize_delay(1.0 / (512.0 * 15e3), 512, 128, 15e3).unwrap(), 1);
        assert!(matches!(quantize_delay(1e-3, 4, 2, 15e3), Err(Error::UnsupportableDelay { .. })));
    }

    #[test]
    fn jakes_examples() {
        let speed = 300.0 / 3.6;
        // nu_max = 83.33 * 4e9 / c = 1111.88 Hz; N T = 128 / 15e3 -> 9.488
        assert_eq!(doppler_index_at(0.0, speed, 4e9, 128, 15e3), 9);
        assert_eq!(doppler_index_at(PI / 2.0, speed, 4e9, 128, 15e3), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(jakes_doppler(0.0, 4e9, 128, 15e3, &mut rng), 0);
            assert!(jakes_doppler(speed, 4e9, 128, 15e3, &mut rng).abs() <= 9);
        }
    }

    #[test]
    fn eva_delays_on_table_grid() {
        let profile = ChannelProfile::eva(4e9, 300.0 / 3.6, 15e3, 512, 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = gen_channel(&profile, &mut rng).unwrap();
        let allowed = [0, 1, 2, 3, 5, 8, 13, 19];
        assert!(h.tap_count() <= 9);
        assert!(h.taps().iter().all(|t| allowed.contains(&t.delay)));
        assert_eq!(profile.support(), (20, 18));
    }

    #[test]
    fn single_path_static_channel() {
        let profile = ChannelProfile::new(vec![0.0], vec![0.0], 4e9, 0.0, 15e3, 8, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = gen_channel(&profile, &mut rng).unwrap();
        assert_eq!(h.tap_count(), 1);
        assert_eq!((h.taps()[0].delay, h.taps()[0].doppler), (0, 0));
        assert_eq!((h.max_delay(), h.doppler_span()), (1, 0));
    }

    #[test]
    fn generated_power_is_unit_on_average() {
        let profile = ChannelProfile::eva(4e9, 300.0 / 3.6, 15e3, 64, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let draws = 10_000;
        let total: f64 = (0..draws).map(|_| gen_channel(&profile, &mut rng).unwrap().energy()).sum();
        let mean = total / draws as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean power {mean}");
    }

    #[test]
    fn static_profile_has_zero_doppler() {
        let profile = ChannelProfile::eva(4e9, 0.0, 15e3, 64, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            assert!(gen_channel(&profile, &mut rng).unwrap().is_zero_doppler());
        }
    }

    #[test]
    fn common_doppler_mode_shares_one_index() {
        let profile = ChannelProfile::eva(4e9, 300.0 / 3.6, 15e3, 512, 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let h = gen_channel_with(&profile, DopplerMode::Common, &mut rng).unwrap();
            let k0 = h.taps()[0].doppler;
            assert!(h.taps().iter().all(|t| t.doppler == k0));
        }
    }

    #[test]
    fn perturb_zero_radius_is_identity() {
        let h = DdChannel::new(8, 4, 3, 2, [PathTap::new(2, 1, c(0.3, 0.4)), PathTap::new(0, 0, c(1.0, 0.0))]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(perturb_csi(&h, CsiError::perfect(), &mut rng), h);
    }

    #[test]
    fn perturb_is_bounded() {
        let h = DdChannel::new(8, 4, 3, 2, [PathTap::new(0, 0, c(1.0, 0.0))]).unwrap();
        let err = CsiError::new(0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let est = perturb_csi(&h, err, &mut rng);
            assert_eq!(est.tap_count(), 1);
            let t = est.taps()[0];
            assert_eq!((t.delay, t.doppler), (0, 0));
            assert!((t.gain - c(1.0, 0.0)).norm() <= 0.1 + 1e-15);
        }
        assert!(CsiError::new(-0.1).is_err());
    }

    #[test]
    fn perturb_stays_in_support() {
        let profile = ChannelProfile::eva(4e9, 300.0 / 3.6, 15e3, 512, 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let err = CsiError::new(0.5).unwrap();
        for _ in 0..200 {
            let h = gen_channel(&profile, &mut rng).unwrap();
            let est = perturb_csi(&h, err, &mut rng);
            assert!(est.tap_count() <= h.tap_count());
            let half = (h.doppler_span() / 2) as i64;
            assert!(est.taps().iter().all(|t| t.delay < h.max_delay() && t.doppler.abs() <= half));
        }
    }

    #[test]
    fn frobenius_norm_examples() {
        let h = DdChannel::new(8, 4, 3, 2, [PathTap::new(0, 0, c(0.8, 0.0)), PathTap::new(2, 1, c(0.0, 0.6))]).unwrap();
        assert!((frobenius_norm(&h) - 1.0).abs() < 1e-15);
        let unit = DdChannel::new(8, 4, 1, 0, [PathTap::new(0, 0, c(1.0, 0.0))]).unwrap();
        assert_eq!(frobenius_norm(&unit), 1.0);
        let empty = DdChannel::new(8, 4, 1, 0, []).unwrap();
        assert_eq!(frobenius_norm(&empty), 0.0);
    }

    #[test]
    fn frobenius_norm_matches_dense_array() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (l, k) = (4usize, 4usize);
        let mut dense = vec![c(0.0, 0.0); l * (k + 1)];
        let mut taps = Vec::new();
        for _ in 0..10 {
            let d = rng.random_range(0..l);
            let dop = rng.random_range(-(k as i64 / 2)..=k as i64 / 2);
            let g = complex_gaussian(&mut rng, 1.0);
            dense[d * (k + 1) + (dop + k as i64 / 2) as usize] += g;
            taps.push(PathTap::new(d, dop, g));
        }
        let h = DdChannel::new(8, 4, l, k, taps).unwrap();
        let brute = dense.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((frobenius_norm(&h) - brute).abs() < 1e-12);
    }
}
