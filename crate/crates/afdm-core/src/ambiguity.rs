//! Ambiguity-function evaluation (full surface and both cuts) and
//! sidelobe metrics.
//!
//! Two delay-cut flavors are provided. The aperiodic cut is the textbook
//! autocorrelation with zero-padding outside the record. The periodic cut
//! correlates modulo the symbol length, which is what the prefix-
//! circularized matched filter of the range estimator actually realizes;
//! the built-in parameter comparisons use it.

use crate::error::Error;
use crate::fft::{fft_in_place, ifft_in_place};
use crate::phase::unit_phase;
use crate::waveform::TimeSignal;
use crate::Result;
use num_complex::Complex64;

/// Zero-Doppler cut over signed lags, normalized so the origin is 1.
#[derive(Clone, Debug)]
pub struct DelayCut {
    /// Values for lags `-(N-1) ..= N-1`; index `N-1` is lag zero.
    pub values: Vec<Complex64>,
}

impl DelayCut {
    pub fn max_lag(&self) -> i64 {
        (self.values.len() as i64 - 1) / 2
    }

    /// Value at a signed lag.
    pub fn at(&self, lag: i64) -> Complex64 {
        self.values[(lag + self.max_lag()) as usize]
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }
}

/// Aperiodic zero-Doppler cut: `chi[l] = sum_n s*[n] s[n+l]`, out-of-range
/// samples treated as zero, normalized by the signal energy.
pub fn zero_doppler_cut(s: &TimeSignal) -> Result<DelayCut> {
    if s.is_empty() {
        return Err(Error::EmptySignal);
    }
    let n = s.len();
    let energy = s.energy();
    let mut values = Vec::with_capacity(2 * n - 1);
    for lag in -(n as i64 - 1)..=(n as i64 - 1) {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n as i64 {
            let j = i + lag;
            if j >= 0 && j < n as i64 {
                acc += s.samples[i as usize].conj() * s.samples[j as usize];
            }
        }
        values.push(acc / energy);
    }
    Ok(DelayCut { values })
}

/// Periodic (mod-N) zero-Doppler cut over lags `0..N`, normalized by the
/// signal energy.
pub fn zero_doppler_cut_periodic(s: &TimeSignal) -> Result<Vec<Complex64>> {
    if s.is_empty() {
        return Err(Error::EmptySignal);
    }
    let energy = s.energy();
    let mut spec = s.samples.clone();
    fft_in_place(&mut spec);
    for z in spec.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    ifft_in_place(&mut spec);
    let n = s.len() as f64;
    Ok(spec.into_iter().map(|z| z / (n * energy)).collect())
}

/// Zero-delay cut `chi(0, nu) = sum_n |s[n]|^2 exp(j*2*pi*nu*n/Bc)` on the
/// requested Doppler grid (Hz), normalized by the signal energy.
pub fn zero_delay_cut(s: &TimeSignal, doppler_grid_hz: &[f64]) -> Result<Vec<Complex64>> {
    if s.is_empty() {
        return Err(Error::EmptySignal);
    }
    if doppler_grid_hz.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let energy = s.energy();
    let fs = s.sample_rate_hz;
    Ok(doppler_grid_hz
        .iter()
        .map(|&nu| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, z) in s.samples.iter().enumerate() {
                acc += z.norm_sqr() * unit_phase(nu * i as f64 / fs);
            }
            acc / energy
        })
        .collect())
}

/// Default Doppler grid: 4x oversampling of the Doppler resolution over
/// `[-(k_max+1), k_max+1] / T`.
pub fn default_doppler_grid(k_max: u32, duration_s: f64) -> Vec<f64> {
    let span = (k_max + 1) as i64;
    let steps = 4 * span;
    (-steps..=steps)
        .map(|i| i as f64 / (4.0 * duration_s))
        .collect()
}

/// Ambiguity magnitude/phase over a (delay, Doppler) grid.
#[derive(Clone, Debug)]
pub struct AmbiguitySurface {
    /// Signed delay lags of the rows.
    pub delays: Vec<i64>,
    /// Doppler frequencies (Hz) of the columns.
    pub dopplers_hz: Vec<f64>,
    /// `values[row][col]`, normalized so the peak magnitude is 1.
    pub values: Vec<Vec<Complex64>>,
}

/// Evaluates `chi(l, nu) = sum_n s*[n] s[n+l] exp(j*2*pi*nu*n/Bc)` on the
/// grid (aperiodic in delay), normalized to unit peak magnitude.
pub fn ambiguity_surface(
    s: &TimeSignal,
    delays: &[i64],
    doppler_grid_hz: &[f64],
) -> Result<AmbiguitySurface> {
    if s.is_empty() {
        return Err(Error::EmptySignal);
    }
    if delays.is_empty() || doppler_grid_hz.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let n = s.len() as i64;
    let fs = s.sample_rate_hz;
    let mut values = Vec::with_capacity(delays.len());
    let mut peak = 0.0f64;
    for &lag in delays {
        let mut row = Vec::with_capacity(doppler_grid_hz.len());
        for &nu in doppler_grid_hz {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let j = i + lag;
                if j >= 0 && j < n {
                    acc += s.samples[i as usize].conj()
                        * s.samples[j as usize]
                        * unit_phase(nu * i as f64 / fs);
                }
            }
            peak = peak.max(acc.norm());
            row.push(acc);
        }
        values.push(row);
    }
    if peak > 0.0 {
        for row in values.iter_mut() {
            for z in row.iter_mut() {
                *z /= peak;
            }
        }
    }
    Ok(AmbiguitySurface {
        delays: delays.to_vec(),
        dopplers_hz: doppler_grid_hz.to_vec(),
        values,
    })
}

/// Mainlobe width and sidelobe ratios of a normalized cut.
#[derive(Clone, Copy, Debug)]
pub struct AbfMetrics {
    /// Number of contiguous bins around the peak above -3 dB.
    pub mainlobe_width_bins: usize,
    /// Peak-to-maximum-sidelobe ratio in dB; `INFINITY` when all sidelobes
    /// are below 1e-12.
    pub pslr_db: f64,
    /// Integrated sidelobe-to-mainlobe energy ratio in dB.
    pub islr_db: f64,
}

/// Computes mainlobe width (-3 dB), PSLR and ISLR from cut magnitudes.
///
/// The mainlobe spans from the peak outward to the first local minimum on
/// each side; everything beyond is sidelobe.
pub fn abf_metrics(magnitudes: &[f64]) -> Result<AbfMetrics> {
    if magnitudes.is_empty() {
        return Err(Error::EmptySignal);
    }
    let peak_idx = magnitudes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let peak = magnitudes[peak_idx];
    if peak <= 0.0 {
        return Err(Error::EmptySignal);
    }

    // walk outward to the first local minimum on each side
    let mut lo = peak_idx;
    while lo > 0 && magnitudes[lo - 1] < magnitudes[lo] {
        lo -= 1;
    }
    let mut hi = peak_idx;
    while hi + 1 < magnitudes.len() && magnitudes[hi + 1] < magnitudes[hi] {
        hi += 1;
    }

    let half_power = peak / std::f64::consts::SQRT_2;
    let mut width = 1usize;
    let mut i = peak_idx;
    while i > lo && magnitudes[i - 1] >= half_power {
        width += 1;
        i -= 1;
    }
    let mut i = peak_idx;
    while i < hi && magnitudes[i + 1] >= half_power {
        width += 1;
        i += 1;
    }

    let mut max_side = 0.0f64;
    let mut side_energy = 0.0f64;
    let mut main_energy = 0.0f64;
    for (i, &m) in magnitudes.iter().enumerate() {
        if i >= lo && i <= hi {
            main_energy += m * m;
        } else {
            max_side = max_side.max(m);
            side_energy += m * m;
        }
    }

    let pslr_db = if max_side / peak < 1e-12 {
        f64::INFINITY
    } else {
        20.0 * (peak / max_side).log10()
    };
    let islr_db = if side_energy / main_energy < 1e-24 {
        f64::NEG_INFINITY
    } else {
        10.0 * (side_energy / main_energy).log10()
    };
    Ok(AbfMetrics {
        mainlobe_width_bins: width,
        pslr_db,
        islr_db,
    })
}

/// Maximum magnitude over all nonzero lags of a periodic cut, in dB
/// relative to the lag-0 peak. `NEG_INFINITY` for a perfect impulse.
pub fn max_sidelobe_db_periodic(cut: &[Complex64]) -> f64 {
    let peak = cut[0].norm();
    let max_side = cut[1..].iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if max_side / peak < 1e-300 {
        f64::NEG_INFINITY
    } else {
        20.0 * (max_side / peak).log10()
    }
}
