//! Closed-form per-realization SINR of the DDR and DP receivers.
//!
//! The single-antenna functions follow the desired/interference split of
//! each receiver directly. The `_bank` variants extend the same split to
//! several receive antennas combined the way the receivers combine them
//! (joint-normalized matched filters for DDR, maximal-ratio combining for
//! DP); with one antenna they reduce to the single-antenna values.

use crate::baseline::find_dominant_tap;
use crate::channel::{joint_norm, DdChannel, PathTap};
use crate::ddr::{bank_cascade, build_ddr_filter_bank};
use crate::error::{Error, Result};
use crate::propagation::phase_table;

/// Signal power, interference power and SINR of one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrTerms {
    pub p_sig: f64,
    pub p_int: f64,
    pub sinr: f64,
}

impl SinrTerms {
    fn new(p_sig: f64, p_int: f64, sigma2: f64) -> Self {
        Self { p_sig, p_int, sinr: p_sig / (p_int + sigma2) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrReport {
    pub p_sig_ddr: f64,
    pub p_int_ddr: f64,
    pub sinr_ddr: f64,
    pub p_sig_dp: f64,
    pub p_int_dp: f64,
    pub sinr_dp: f64,
    /// SINR_DDR / SINR_DP
    pub gain_gp: f64,
    /// p_sig_ddr / p_sig_dp
    pub sig_ratio: f64,
    pub p_symbol: f64,
    pub sigma2: f64,
}

fn check_powers(p_symbol: f64, sigma2: f64) -> Result<()> {
    if !(p_symbol > 0.0 && p_symbol.is_finite()) {
        return Err(Error::InvalidParameter(format!("symbol power {p_symbol} must be > 0")));
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise variance {sigma2} must be > 0")));
    }
    Ok(())
}

pub fn sinr_ddr(h: &DdChannel, p_symbol: f64, sigma2: f64) -> Result<SinrTerms> {
    sinr_ddr_bank(std::slice::from_ref(h), p_symbol, sigma2)
}

/// Desired term: the central cascade tap `(L - 1, 0)`. Interference: every
/// other tap of the combined cascade. The unit-energy filter leaves the
/// noise variance at sigma^2.
pub fn sinr_ddr_bank(channels: &[DdChannel], p_symbol: f64, sigma2: f64) -> Result<SinrTerms> {
    check_powers(p_symbol, sigma2)?;
    let filter = build_ddr_filter_bank(channels)?;
    let combined = bank_cascade(&filter, channels)?;
    let centre = (filter.max_delay() - 1, 0);
    let peak = filter.norm();
    let p_int: f64 = combined
        .channel()
        .taps()
        .iter()
        .filter(|t| (t.delay, t.doppler) != centre)
        .map(|t| t.gain.norm_sqr())
        .sum();
    Ok(SinrTerms::new(p_symbol * peak * peak, p_symbol * p_int, sigma2))
}

pub fn sinr_dp(h: &DdChannel, p_symbol: f64, sigma2: f64) -> Result<SinrTerms> {
    check_powers(p_symbol, sigma2)?;
    let dom = find_dominant_tap(h)?;
    let p_int: f64 = h
        .taps()
        .iter()
        .filter(|t| (t.delay, t.doppler) != (dom.delay, dom.doppler))
        .map(|t| t.gain.norm_sqr())
        .sum();
    Ok(SinrTerms::new(p_symbol * dom.gain.norm_sqr(), p_symbol * p_int, sigma2))
}

/// DP with maximal-ratio combining. After aligning antenna q on its
/// dominant tap `(l_q, k_q)`, a tap `(l, k, h)` becomes
/// `(l - l_q, k - k_q, h exp(-j 2 pi k_q (l - l_q) / MN))`; aligned taps are
/// weighted by `conj(h_q)` and summed coherently across antennas.
pub fn sinr_dp_bank(channels: &[DdChannel], p_symbol: f64, sigma2: f64) -> Result<SinrTerms> {
    check_powers(p_symbol, sigma2)?;
    let Some(first) = channels.first() else {
        return Err(Error::InvalidParameter("no channel given".into()));
    };
    let len = first.frame_len();
    let table = phase_table(len);
    let mut weight_sum = 0.0;
    let mut aligned = Vec::new();
    for h in channels {
        let dom = find_dominant_tap(h)?;
        weight_sum += dom.gain.norm_sqr();
        for t in h.taps() {
            if (t.delay, t.doppler) == (dom.delay, dom.doppler) {
                continue;
            }
            let dl = (t.delay as i64 - dom.delay as i64).rem_euclid(len as i64);
            let p = (-dom.doppler * dl).rem_euclid(len as i64) as usize;
            let dk = (t.doppler - dom.doppler).rem_euclid(len as i64);
            aligned.push(PathTap::new(dl as usize, dk, dom.gain.conj() * t.gain * table[p]));
        }
    }
    let merged = DdChannel::from_parts(first.m(), first.n(), len, 2 * len, aligned);
    let p_int: f64 = merged.taps().iter().map(|t| t.gain.norm_sqr()).sum::<f64>() / weight_sum;
    Ok(SinrTerms::new(p_symbol * weight_sum, p_symbol * p_int, sigma2))
}

pub fn sinr_gain(h: &DdChannel, p_symbol: f64, sigma2: f64) -> Result<SinrReport> {
    sinr_gain_bank(std::slice::from_ref(h), p_symbol, sigma2)
}

/// Both receivers' SINR terms and their ratio for one realization.
pub fn sinr_gain_bank(channels: &[DdChannel], p_symbol: f64, sigma2: f64) -> Result<SinrReport> {
    let ddr = sinr_ddr_bank(channels, p_symbol, sigma2)?;
    let dp = if channels.len() == 1 {
        sinr_dp(&channels[0], p_symbol, sigma2)?
    } else {
        sinr_dp_bank(channels, p_symbol, sigma2)?
    };
    // 1 + (energy outside the dominant taps) / (dominant energy)
    let dominant: f64 = channels
        .iter()
        .map(|h| find_dominant_tap(h).map(|d| d.gain.norm_sqr()))
        .sum::<Result<f64>>()?;
    let total = joint_norm(channels).powi(2);
    let others: f64 = channels
        .iter()
        .map(|h| {
            let dom = find_dominant_tap(h)?;
            Ok(h.taps()
                .iter()
                .filter(|t| (t.delay, t.doppler) != (dom.delay, dom.doppler))
                .map(|t| t.gain.norm_sqr())
                .sum::<f64>())
        })
        .sum::<Result<f64>>()?;
    debug_assert!((dominant + others - total).abs() <= 1e-9 * total.max(1.0));
    Ok(SinrReport {
        p_sig_ddr: ddr.p_sig,
        p_int_ddr: ddr.p_int,
        sinr_ddr: ddr.sinr,
        p_sig_dp: dp.p_sig,
        p_int_dp: dp.p_int,
        sinr_dp: dp.sinr,
        gain_gp: ddr.sinr / dp.sinr,
        sig_ratio: 1.0 + others / dominant,
        p_symbol,
        sigma2,
    })
}

/// Linear SINR to dB.
pub fn to_db(value: f64) -> f64 {
    10.0 * value.log10()
}
