//! OFDM and OTFS reference waveforms, bandwidth- and duration-matched to
//! the AFDM frame for side-by-side comparisons.
//!
//! OFDM is not a separate implementation: it is the chirp-free special case
//! `c1 = c2 = 0` routed through the same transform pair. OTFS places symbols
//! on a square delay-Doppler grid, moves them to time-frequency by the
//! inverse symplectic finite Fourier transform, and synthesizes time samples
//! with rectangular pulses (per-slot inverse DFT), one reduced cyclic prefix
//! covering the whole frame.

use crate::channel::{apply_channel_circular, ChannelSpec};
use crate::comm::EffectiveChannel;
use crate::error::Error;
use crate::phase::unit_phase;
use crate::waveform::{TimeSignal, WaveformParams, C2};
use crate::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// The chirp-free twin of a parameter set: both chirp rates zero, all other
/// constants untouched. The prefix phase is then identically 1, so the
/// chirp-periodic prefix machinery writes a plain cyclic prefix.
pub fn ofdm_params(params: &WaveformParams) -> WaveformParams {
    params.clone().with_c1(0.0).with_c2(C2::ZERO)
}

/// Square delay-Doppler symbol grid with `M·N` entries.
///
/// `data[k*M + l]` holds the symbol at Doppler index `k`, delay index `l`.
#[derive(Clone, Debug)]
pub struct OtfsGrid {
    /// Delay bins M.
    pub delay_bins: usize,
    /// Doppler bins N.
    pub doppler_bins: usize,
    pub data: Vec<Complex64>,
}

impl OtfsGrid {
    pub fn new(delay_bins: usize, doppler_bins: usize, data: Vec<Complex64>) -> Result<Self> {
        if delay_bins * doppler_bins != data.len() || delay_bins != doppler_bins {
            return Err(Error::BadGridShape {
                expected: data.len(),
                m: delay_bins,
                n: doppler_bins,
            });
        }
        Ok(Self {
            delay_bins,
            doppler_bins,
            data,
        })
    }

    /// Side length of the square grid matching `nc` subcarriers.
    pub fn side_for(nc: usize) -> Result<usize> {
        let side = (nc as f64).sqrt().round() as usize;
        if side * side != nc {
            return Err(Error::NotPerfectSquare(nc));
        }
        Ok(side)
    }

    /// All-ones sounding grid, scaled to unit frame energy. Mirrors the
    /// all-bins-lit pilot convention of the chirp-domain waveforms.
    pub fn pilot(nc: usize) -> Result<Self> {
        let side = Self::side_for(nc)?;
        let amp = Complex64::new(1.0 / (nc as f64).sqrt(), 0.0);
        Self::new(side, side, vec![amp; nc])
    }

    pub fn at(&self, doppler: usize, delay: usize) -> Complex64 {
        self.data[doppler * self.delay_bins + delay]
    }
}

fn check_grid(grid: &OtfsGrid, params: &WaveformParams) -> Result<()> {
    let nc = params.n_subcarriers();
    if grid.delay_bins * grid.doppler_bins != nc {
        return Err(Error::BadGridShape {
            expected: nc,
            m: grid.delay_bins,
            n: grid.doppler_bins,
        });
    }
    Ok(())
}

/// Delay-Doppler grid to time samples: ISFFT to the time-frequency grid,
/// then per-slot inverse DFT (rectangular transmit pulse). Unitary; the
/// output is the bare frame without its prefix.
pub fn otfs_modulate(grid: &OtfsGrid, params: &WaveformParams) -> Result<TimeSignal> {
    check_grid(grid, params)?;
    let (m, n) = (grid.delay_bins, grid.doppler_bins);
    let nc = m * n;
    // ISFFT: X_tf[slot, sub] = (1/sqrt(NM)) sum_{k,l} X[k,l] e^{j2pi(slot*k/N - sub*l/M)}
    let isfft_scale = 1.0 / (nc as f64).sqrt();
    let mut tf = vec![Complex64::new(0.0, 0.0); nc];
    for slot in 0..n {
        for sub in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                for l in 0..m {
                    acc += grid.at(k, l)
                        * unit_phase(
                            slot as f64 * k as f64 / n as f64 - sub as f64 * l as f64 / m as f64,
                        );
                }
            }
            tf[slot * m + sub] = acc * isfft_scale;
        }
    }
    // per-slot synthesis: s[slot*M + m'] = (1/sqrt(M)) sum_sub X_tf e^{j2pi sub m'/M}
    let syn_scale = 1.0 / (m as f64).sqrt();
    let mut samples = vec![Complex64::new(0.0, 0.0); nc];
    for slot in 0..n {
        for mp in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for sub in 0..m {
                acc += tf[slot * m + sub] * unit_phase(sub as f64 * mp as f64 / m as f64);
            }
            samples[slot * m + mp] = acc * syn_scale;
        }
    }
    Ok(TimeSignal::new(samples, 0, params.bandwidth_hz()))
}

/// Exact adjoint of `otfs_modulate`: per-slot DFT, then SFFT back to the
/// delay-Doppler grid. Round trip is the identity.
pub fn otfs_demodulate(r: &TimeSignal, params: &WaveformParams) -> Result<OtfsGrid> {
    let nc = params.n_subcarriers();
    if r.prefix_len != 0 || r.len() != nc {
        return Err(Error::LengthMismatch {
            expected: nc,
            got: r.len(),
        });
    }
    let m = OtfsGrid::side_for(nc)?;
    let n = m;
    let syn_scale = 1.0 / (m as f64).sqrt();
    let mut tf = vec![Complex64::new(0.0, 0.0); nc];
    for slot in 0..n {
        for sub in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for mp in 0..m {
                acc += r.samples[slot * m + mp] * unit_phase(-(sub as f64) * mp as f64 / m as f64);
            }
            tf[slot * m + sub] = acc * syn_scale;
        }
    }
    let isfft_scale = 1.0 / (nc as f64).sqrt();
    let mut data = vec![Complex64::new(0.0, 0.0); nc];
    for k in 0..n {
        for l in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for slot in 0..n {
                for sub in 0..m {
                    acc += tf[slot * m + sub]
                        * unit_phase(
                            -(slot as f64) * k as f64 / n as f64 + sub as f64 * l as f64 / m as f64,
                        );
                }
            }
            data[k * m + l] = acc * isfft_scale;
        }
    }
    OtfsGrid::new(m, n, data)
}

/// Delay-Doppler effective channel over the vectorized grid, built column
/// by column as `demodulate ∘ circular channel ∘ modulate`.
pub fn otfs_effective_channel(
    spec: &ChannelSpec,
    params: &WaveformParams,
) -> Result<EffectiveChannel> {
    let nc = params.n_subcarriers();
    let side = OtfsGrid::side_for(nc)?;
    let mut matrix = DMatrix::zeros(nc, nc);
    for j in 0..nc {
        let mut e = vec![Complex64::new(0.0, 0.0); nc];
        e[j] = Complex64::new(1.0, 0.0);
        let s = otfs_modulate(&OtfsGrid::new(side, side, e)?, params)?;
        let r = apply_channel_circular(&s, spec)?;
        let y = otfs_demodulate(&r, params)?;
        for (i, v) in y.data.iter().enumerate() {
            matrix[(i, j)] = *v;
        }
    }
    Ok(EffectiveChannel { matrix })
}
