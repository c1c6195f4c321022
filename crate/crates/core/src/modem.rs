//! Bit mapping and the OTFS transform chain.
//!
//! Grids are M x N (M subcarriers/delay bins by N symbols/Doppler bins) and
//! stored column-major, so a time-domain grid vectorizes to a frame without
//! copying. All DFTs are unitary, which makes every transform here
//! norm-preserving and the ISFFT/SFFT and Heisenberg/Wigner pairs exact
//! inverses.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "bpsk")]
    Bpsk,
    #[serde(rename = "qpsk")]
    Qpsk,
    #[serde(rename = "8psk")]
    Psk8,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Psk8 => 3,
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Psk8 => "8psk",
        })
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            "8psk" | "psk8" => Ok(Modulation::Psk8),
            other => Err(Error::InvalidParameter(format!("unknown modulation '{other}'"))),
        }
    }
}

fn gray(p: usize) -> usize {
    p ^ (p >> 1)
}

/// A unit-energy, Gray-labelled PSK alphabet.
///
/// `points()[label]` is the symbol carrying `label`, where the label is the
/// group of `bits_per_symbol` bits read most-significant first.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let points = match modulation {
            // 0 -> +1, 1 -> -1
            Modulation::Bpsk => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            // label b0b1 -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)
            Modulation::Qpsk => (0..4)
                .map(|label| {
                    let re = if label & 0b10 == 0 { 1.0 } else { -1.0 };
                    let im = if label & 0b01 == 0 { 1.0 } else { -1.0 };
                    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
                })
                .collect(),
            // point at angular position p carries label gray(p)
            Modulation::Psk8 => {
                let mut points = vec![Complex64::new(0.0, 0.0); 8];
                for position in 0..8 {
                    points[gray(position)] =
                        Complex64::from_polar(1.0, PI * (2 * position + 1) as f64 / 8.0);
                }
                points
            }
        };
        Self { modulation, points }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    /// Maps bits to symbols, `bits_per_symbol` bits (MSB first) per symbol.
    pub fn modulate_bits(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        let bps = self.bits_per_symbol();
        if !bits.len().is_multiple_of(bps) {
            return Err(Error::Size {
                expected: bits.len().next_multiple_of(bps),
                actual: bits.len(),
            });
        }
        Ok(bits
            .chunks_exact(bps)
            .map(|group| {
                let label = group.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                self.points[label]
            })
            .collect())
    }

    /// Nearest point label; ties go to the lowest label.
    pub fn slice(&self, symbol: Complex64) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (label, point) in self.points.iter().enumerate() {
            let dist = (symbol - point).norm_sqr();
            if dist < best_dist {
                best = label;
                best_dist = dist;
            }
        }
        best
    }

    /// Hard-decision demapping.
    pub fn demap_symbols(&self, symbols: &[Complex64]) -> Vec<bool> {
        let bps = self.bits_per_symbol();
        let mut bits = Vec::with_capacity(symbols.len() * bps);
        for &s in symbols {
            let label = self.slice(s);
            bits.extend((0..bps).rev().map(|i| (label >> i) & 1 == 1));
        }
        bits
    }
}

/// Where a grid sits in the modulation chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    DelayDoppler,
    TimeFrequency,
    Time,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    m: usize,
    n: usize,
    domain: Domain,
    data: Vec<Complex64>,
}

impl Grid {
    /// `data` is column-major: entry (row, col) lives at `row + col * m`.
    pub fn new(m: usize, n: usize, domain: Domain, data: Vec<Complex64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be >= 1".into()));
        }
        if data.len() != m * n {
            return Err(Error::Size { expected: m * n, actual: data.len() });
        }
        Ok(Self { m, n, domain, data })
    }

    pub fn zeros(m: usize, n: usize, domain: Domain) -> Self {
        Self { m, n, domain, data: vec![Complex64::new(0.0, 0.0); m * n] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row + col * self.m]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row + col * self.m] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn expect(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::Domain { expected: domain, actual: self.domain })
        }
    }

    fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }
}

/// Complex baseband samples of one frame, optionally carrying a cyclic prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    samples: Vec<Complex64>,
    cp_len: usize,
}

impl TimeSignal {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples, cp_len: 0 }
    }

    pub fn with_cp(samples: Vec<Complex64>, cp_len: usize) -> Result<Self> {
        if cp_len > samples.len() {
            return Err(Error::CyclicPrefix { cp_len, frame_len: samples.len() });
        }
        Ok(Self { samples, cp_len })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Length without the prefix.
    pub fn frame_len(&self) -> usize {
        self.samples.len() - self.cp_len
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Column-major flattening of a time-domain grid.
pub fn vectorize(grid: &Grid) -> Result<TimeSignal> {
    grid.expect(Domain::Time)?;
    Ok(TimeSignal::new(grid.data.clone()))
}

pub fn devectorize(signal: &TimeSignal, m: usize, n: usize) -> Result<Grid> {
    if signal.cp_len != 0 {
        return Err(Error::InvalidParameter("remove the cyclic prefix before devectorizing".into()));
    }
    Grid::new(m, n, Domain::Time, signal.samples.clone())
}

/// Prepends the last `cp_len` samples.
pub fn add_cp(signal: &TimeSignal, cp_len: usize) -> Result<TimeSignal> {
    if signal.cp_len != 0 {
        return Err(Error::InvalidParameter("signal already carries a cyclic prefix".into()));
    }
    let len = signal.samples.len();
    if cp_len > len {
        return Err(Error::CyclicPrefix { cp_len, frame_len: len });
    }
    let mut samples = Vec::with_capacity(len + cp_len);
    samples.extend_from_slice(&signal.samples[len - cp_len..]);
    samples.extend_from_slice(&signal.samples);
    Ok(TimeSignal { samples, cp_len })
}

pub fn remove_cp(signal: &TimeSignal) -> TimeSignal {
    TimeSignal::new(signal.samples[signal.cp_len..].to_vec())
}

/// Unitary forward and inverse DFT of one length.
#[derive(Clone)]
struct UnitaryDft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl UnitaryDft {
    fn new(planner: &mut FftPlanner<f64>, len: usize) -> Self {
        Self {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            scale: 1.0 / (len as f64).sqrt(),
        }
    }

    fn apply(&self, buf: &mut [Complex64], inverse: bool) {
        if inverse {
            self.inverse.process(buf);
        } else {
            self.forward.process(buf);
        }
        for z in buf.iter_mut() {
            *z *= self.scale;
        }
    }
}

/// Precomputed FFT plans for one M x N frame layout.
#[derive(Clone)]
pub struct OtfsModem {
    m: usize,
    n: usize,
    dft_m: UnitaryDft,
    dft_n: UnitaryDft,
}

impl fmt::Debug for OtfsModem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OtfsModem").field("m", &self.m).field("n", &self.n).finish()
    }
}

impl OtfsModem {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be >= 1".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self { m, n, dft_m: UnitaryDft::new(&mut planner, m), dft_n: UnitaryDft::new(&mut planner, n) })
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

    fn check_dims(&self, grid: &Grid) -> Result<()> {
        if grid.m != self.m || grid.n != self.n {
            return Err(Error::Size { expected: self.m * self.n, actual: grid.m * grid.n });
        }
        Ok(())
    }

    // Left multiplication by F_M (or F_M^H): transform every column.
    fn columns(&self, data: &mut [Complex64], inverse: bool) {
        for col in data.chunks_exact_mut(self.m) {
            self.dft_m.apply(col, inverse);
        }
    }

    // Right multiplication by F_N^H (inverse) or F_N (forward): transform every row.
    fn rows(&self, data: &mut [Complex64], inverse: bool) {
        let mut row = vec![Complex64::new(0.0, 0.0); self.n];
        for r in 0..self.m {
            for (c, z) in row.iter_mut().enumerate() {
                *z = data[r + c * self.m];
            }
            self.dft_n.apply(&mut row, inverse);
            for (c, z) in row.iter().enumerate() {
                data[r + c * self.m] = *z;
            }
        }
    }

    /// X_TF = F_M X_DD F_N^H
    pub fn isfft(&self, x_dd: &Grid) -> Result<Grid> {
        x_dd.expect(Domain::DelayDoppler)?;
        self.check_dims(x_dd)?;
        let mut out = x_dd.clone().with_domain(Domain::TimeFrequency);
        self.columns(&mut out.data, false);
        self.rows(&mut out.data, true);
        Ok(out)
    }

    /// Y_DD = F_M^H Y_TF F_N
    pub fn sfft(&self, y_tf: &Grid) -> Result<Grid> {
        y_tf.expect(Domain::TimeFrequency)?;
        self.check_dims(y_tf)?;
        let mut out = y_tf.clone().with_domain(Domain::DelayDoppler);
        self.columns(&mut out.data, true);
        self.rows(&mut out.data, false);
        Ok(out)
    }

    /// Rectangular-pulse Heisenberg transform, X_T = F_M^H X_TF.
    pub fn heisenberg(&self, x_tf: &Grid) -> Result<Grid> {
        x_tf.expect(Domain::TimeFrequency)?;
        self.check_dims(x_tf)?;
        let mut out = x_tf.clone().with_domain(Domain::Time);
        self.columns(&mut out.data, true);
        Ok(out)
    }

    /// Rectangular-pulse Wigner transform, Y_TF = F_M Y_T.
    pub fn wigner(&self, y_t: &Grid) -> Result<Grid> {
        y_t.expect(Domain::Time)?;
        self.check_dims(y_t)?;
        let mut out = y_t.clone().with_domain(Domain::TimeFrequency);
        self.columns(&mut out.data, false);
        Ok(out)
    }

    /// Delay-Doppler grid to transmit frame. The F_M factors of the ISFFT and
    /// Heisenberg transform cancel, leaving a row-wise N-point IDFT.
    pub fn modulate(&self, x_dd: &Grid) -> Result<TimeSignal> {
        x_dd.expect(Domain::DelayDoppler)?;
        self.check_dims(x_dd)?;
        let mut data = x_dd.data.clone();
        self.rows(&mut data, true);
        Ok(TimeSignal::new(data))
    }

    /// Received frame (CP removed) to delay-Doppler grid; the fast path of
    /// devectorize, Wigner and SFFT.
    pub fn demodulate(&self, y: &TimeSignal) -> Result<Grid> {
        let grid = devectorize(y, self.m, self.n)?;
        let mut data = grid.data;
        self.rows(&mut data, false);
        Grid::new(self.m, self.n, Domain::DelayDoppler, data)
    }

    /// Symbols (column-major) to a delay-Doppler grid.
    pub fn dd_grid(&self, symbols: Vec<Complex64>) -> Result<Grid> {
        Grid::new(self.m, self.n, Domain::DelayDoppler, symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_grid(rng: &mut ChaCha8Rng, m: usize, n: usize, domain: Domain) -> Grid {
        let data = (0..m * n).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        Grid::new(m, n, domain, data).unwrap()
    }

    // Dense unitary DFT matrix, row-major.
    fn dft_matrix(len: usize) -> Vec<Complex64> {
        let mut f = vec![c(0.0, 0.0); len * len];
        for a in 0..len {
            for b in 0..len {
                f[a * len + b] =
                    Complex64::from_polar(1.0 / (len as f64).sqrt(), -2.0 * PI * (a * b) as f64 / len as f64);
            }
        }
        f
    }

    #[test]
    fn bpsk_is_antipodal() {
        let bpsk = Constellation::new(Modulation::Bpsk);
        assert_eq!(bpsk.modulate_bits(&[false, true]).unwrap(), vec![c(1.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn qpsk_zero_label() {
        let qpsk = Constellation::new(Modulation::Qpsk);
        let s = qpsk.modulate_bits(&[false, false]).unwrap()[0];
        assert!((s - c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn psk8_on_unit_circle() {
        let psk = Constellation::new(Modulation::Psk8);
        for label in 0..8usize {
            let bits: Vec<bool> = (0..3).rev().map(|i| (label >> i) & 1 == 1).collect();
            let s = psk.modulate_bits(&bits).unwrap()[0];
            assert!((s.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn constellations_are_unit_energy_and_gray() {
        for m in [Modulation::Bpsk, Modulation::Qpsk, Modulation::Psk8] {
            let con = Constellation::new(m);
            let pts = con.points();
            assert_eq!(pts.len(), 1 << con.bits_per_symbol());
            let energy = pts.iter().map(|p| p.norm_sqr()).sum::<f64>() / pts.len() as f64;
            assert!((energy - 1.0).abs() < 1e-14);
            // nearest neighbours differ in exactly one bit
            let min_d = (0..pts.len())
                .flat_map(|a| (0..pts.len()).filter(move |&b| b != a).map(move |b| (a, b)))
                .map(|(a, b)| (pts[a] - pts[b]).norm())
                .fold(f64::INFINITY, f64::min);
            for a in 0..pts.len() {
                for b in 0..pts.len() {
                    if a != b && (pts[a] - pts[b]).norm() < min_d + 1e-9 {
                        assert_eq!((a ^ b).count_ones(), 1, "{m:?} labels {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn modulate_rejects_partial_symbol() {
        let qpsk = Constellation::new(Modulation::Qpsk);
        assert!(matches!(qpsk.modulate_bits(&[true, false, true]), Err(Error::Size { .. })));
    }

    #[test]
    fn demap_nearest_quadrant() {
        let qpsk = Constellation::new(Modulation::Qpsk);
        assert_eq!(qpsk.demap_symbols(&[c(0.9, 0.1)]), vec![false, false]);
    }

    #[test]
    fn demap_tie_goes_to_lowest_label() {
        let bpsk = Constellation::new(Modulation::Bpsk);
        assert_eq!(bpsk.demap_symbols(&[c(0.0, 0.0)]), vec![false]);
    }

    #[test]
    fn isfft_single_point_is_identity() {
        let modem = OtfsModem::new(1, 1).unwrap();
        let x = Grid::new(1, 1, Domain::DelayDoppler, vec![c(0.3, -0.7)]).unwrap();
        let tf = modem.isfft(&x).unwrap();
        assert_eq!(tf.domain(), Domain::TimeFrequency);
        assert!((tf.get(0, 0) - c(0.3, -0.7)).norm() < 1e-15);
        let t = modem.heisenberg(&tf).unwrap();
        assert!((t.get(0, 0) - c(0.3, -0.7)).norm() < 1e-15);
    }

    #[test]
    fn isfft_of_impulse_is_flat() {
        let modem = OtfsModem::new(2, 2).unwrap();
        let mut x = Grid::zeros(2, 2, Domain::DelayDoppler);
        x.set(0, 0, c(1.0, 0.0));
        let tf = modem.isfft(&x).unwrap();
        for z in tf.as_slice() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn isfft_matches_dense_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (m, n) = (4, 3);
        let modem = OtfsModem::new(m, n).unwrap();
        let x = random_grid(&mut rng, m, n, Domain::DelayDoppler);
        let fm = dft_matrix(m);
        let fn_ = dft_matrix(n);
        // F_M X F_N^H
        let mut expected = vec![c(0.0, 0.0); m * n];
        for r in 0..m {
            for col in 0..n {
                let mut acc = c(0.0, 0.0);
                for a in 0..m {
                    for b in 0..n {
                        acc += fm[r * m + a] * x.get(a, b) * fn_[col * n + b].conj();
                    }
                }
                expected[r + col * m] = acc;
            }
        }
        let tf = modem.isfft(&x).unwrap();
        for (got, want) in tf.as_slice().iter().zip(&expected) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn transform_pairs_invert_and_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (m, n) in [(1, 1), (2, 2), (8, 4), (16, 5), (3, 16)] {
            let modem = OtfsModem::new(m, n).unwrap();
            let x = random_grid(&mut rng, m, n, Domain::DelayDoppler);
            let tf = modem.isfft(&x).unwrap();
            let t = modem.heisenberg(&tf).unwrap();
            let norm = x.frobenius_norm();
            for g in [&tf, &t] {
                assert!((g.frobenius_norm() - norm).abs() <= 1e-12 * norm);
            }
            let back_tf = modem.wigner(&t).unwrap();
            let back = modem.sfft(&back_tf).unwrap();
            for (a, b) in back.as_slice().iter().zip(x.as_slice()) {
                assert!((a - b).norm() <= 1e-12);
            }
            for (a, b) in back_tf.as_slice().iter().zip(tf.as_slice()) {
                assert!((a - b).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn fast_modulator_matches_literal_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let modem = OtfsModem::new(8, 4).unwrap();
        let x = random_grid(&mut rng, 8, 4, Domain::DelayDoppler);
        let literal = vectorize(&modem.heisenberg(&modem.isfft(&x).unwrap()).unwrap()).unwrap();
        let fast = modem.modulate(&x).unwrap();
        for (a, b) in literal.samples().iter().zip(fast.samples()) {
            assert!((a - b).norm() <= 1e-12);
        }
        let literal_rx = modem
            .sfft(&modem.wigner(&devectorize(&fast, 8, 4).unwrap()).unwrap())
            .unwrap();
        let fast_rx = modem.demodulate(&fast).unwrap();
        for (a, b) in literal_rx.as_slice().iter().zip(fast_rx.as_slice()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn wrong_domain_is_rejected() {
        let modem = OtfsModem::new(2, 2).unwrap();
        let g = Grid::zeros(2, 2, Domain::Time);
        assert!(matches!(modem.isfft(&g), Err(Error::Domain { .. })));
        assert!(matches!(modem.sfft(&g), Err(Error::Domain { .. })));
    }

    #[test]
    fn vectorize_is_column_major() {
        let (a, b, cc, d) = (c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0));
        let mut g = Grid::zeros(2, 2, Domain::Time);
        g.set(0, 0, a);
        g.set(0, 1, cc);
        g.set(1, 0, b);
        g.set(1, 1, d);
        let v = vectorize(&g).unwrap();
        assert_eq!(v.samples(), &[a, b, cc, d]);
        assert_eq!(devectorize(&v, 2, 2).unwrap(), g);
    }

    #[test]
    fn devectorize_enforces_length() {
        let s = TimeSignal::new(vec![c(0.0, 0.0); 3]);
        assert!(matches!(devectorize(&s, 2, 2), Err(Error::Size { expected: 4, actual: 3 })));
    }

    #[test]
    fn cyclic_prefix() {
        let s = TimeSignal::new((1..=4).map(|v| c(v as f64, 0.0)).collect());
        let p = add_cp(&s, 2).unwrap();
        let re: Vec<f64> = p.samples().iter().map(|z| z.re).collect();
        assert_eq!(re, vec![3.0, 4.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p.cp_len(), 2);
        assert_eq!(remove_cp(&p), s);
        assert_eq!(add_cp(&s, 0).unwrap(), s);
        assert!(matches!(add_cp(&s, 5), Err(Error::CyclicPrefix { .. })));
    }
}
