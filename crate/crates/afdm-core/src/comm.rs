//! Communication receiver path: effective chirp-domain channel, LMMSE
//! equalization and the seeded BER Monte-Carlo harness.
//!
//! Two equalizer routes produce the same symbol estimates. The dense route
//! builds the Nc×Nc effective matrix and applies the textbook LMMSE formula;
//! the frame route solves `(G·Gᴴ + n0·I) z = r` directly in the time domain
//! and demodulates `Gᴴ·z`, which lets one factorization serve every waveform
//! riding the same channel realization in a comparison run.

use crate::baselines::{ofdm_params, otfs_demodulate, otfs_modulate, OtfsGrid};
use crate::channel::{
    add_awgn_with_variance, apply_channel_circular, rayleigh_channel, ChannelSpec, DiscreteTap,
};
use crate::error::Error;
use crate::phase::unit_phase;
use crate::waveform::{
    daft, idaft, qpsk_demap, qpsk_map, ChirpDomainVector, TimeSignal, WaveformParams, C2,
};
use crate::Result;
use nalgebra::{DMatrix, DVector, Dyn, LU};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Nc×Nc matrix mapping transmitted chirp-domain symbols to received ones.
#[derive(Clone, Debug)]
pub struct EffectiveChannel {
    pub matrix: DMatrix<Complex64>,
}

impl EffectiveChannel {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Builds the effective chirp-domain channel column by column:
/// column j is `daft(circular_channel(idaft(e_j)))`.
pub fn effective_channel_matrix(
    spec: &ChannelSpec,
    params: &WaveformParams,
) -> Result<EffectiveChannel> {
    let n = params.n_subcarriers();
    let fs = params.bandwidth_hz();
    let mut matrix = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let s = idaft(&ChirpDomainVector::new(e), params)?;
        let r = apply_channel_circular(&TimeSignal::new(s.samples, 0, fs), spec)?;
        let y = daft(&r, params)?;
        for (i, v) in y.symbols.iter().enumerate() {
            matrix[(i, j)] = *v;
        }
    }
    Ok(EffectiveChannel { matrix })
}

/// LMMSE symbol estimate `x̂ = Hᴴ (H·Hᴴ + n0·I)⁻¹ y` under the unit-energy
/// symbol convention. At `n0 = 0` this is the zero-forcing solution; a
/// singular system is reported rather than regularized.
pub fn lmmse_equalize(
    y: &ChirpDomainVector,
    h: &EffectiveChannel,
    n0: f64,
) -> Result<ChirpDomainVector> {
    if n0 < 0.0 {
        return Err(Error::NegativeNoise(n0));
    }
    let n = h.dim();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let mut a = &h.matrix * h.matrix.adjoint();
    for i in 0..n {
        a[(i, i)] += Complex64::new(n0, 0.0);
    }
    let yv = DVector::from_iterator(n, y.symbols.iter().cloned());
    let z = a.lu().solve(&yv).ok_or(Error::SingularSystem)?;
    let xhat = h.matrix.adjoint() * z;
    Ok(ChirpDomainVector::new(xhat.iter().cloned().collect()))
}

/// Per-frame time-domain equalizer front end.
///
/// Holds the LU factorization of `G·Gᴴ + n0·I` for one channel realization;
/// `apply` returns `Gᴴ (G·Gᴴ + n0·I)⁻¹ r`, which any unitary demodulator
/// turns into the LMMSE symbol estimate for its waveform.
pub struct FrameEqualizer {
    lu: LU<Complex64, Dyn, Dyn>,
    spec: ChannelSpec,
    n: usize,
}

impl FrameEqualizer {
    pub fn new(spec: &ChannelSpec, n: usize, n0: f64) -> Result<Self> {
        if n0 < 0.0 {
            return Err(Error::NegativeNoise(n0));
        }
        let mut gram = DMatrix::zeros(n, n);
        for p in &spec.taps {
            let fp = p.norm_doppler(n);
            for q in &spec.taps {
                let fq = q.norm_doppler(n);
                let gain = p.gain * q.gain.conj();
                for i in 0..n {
                    let i2 = (i + n - p.delay_bins % n + q.delay_bins) % n;
                    gram[(i, i2)] +=
                        gain * unit_phase(-fp * i as f64) * unit_phase(-fq * i2 as f64).conj();
                }
            }
        }
        for i in 0..n {
            gram[(i, i)] += Complex64::new(n0, 0.0);
        }
        Ok(Self {
            lu: gram.lu(),
            spec: spec.clone(),
            n,
        })
    }

    /// `Gᴴ (G·Gᴴ + n0·I)⁻¹ r` as a bare time signal.
    pub fn apply(&self, r: &TimeSignal) -> Result<TimeSignal> {
        if r.len() != self.n || r.prefix_len != 0 {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: r.len(),
            });
        }
        let rv = DVector::from_iterator(self.n, r.samples.iter().cloned());
        let z = self.lu.solve(&rv).ok_or(Error::SingularSystem)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for p in &self.spec.taps {
            let fp = p.norm_doppler(self.n);
            for i in 0..self.n {
                let j = (i + self.n - p.delay_bins % self.n) % self.n;
                out[j] += (p.gain * unit_phase(-fp * i as f64)).conj() * z[i];
            }
        }
        Ok(TimeSignal::new(out, 0, r.sample_rate_hz))
    }
}

/// Which modulation rides the shared channel in a comparison run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WaveformKind {
    Afdm(C2),
    Ofdm,
    Otfs,
}

impl WaveformKind {
    pub fn label(&self) -> String {
        match self {
            WaveformKind::Afdm(c2) => format!("afdm(c2={c2})"),
            WaveformKind::Ofdm => "ofdm".to_string(),
            WaveformKind::Otfs => "otfs".to_string(),
        }
    }
}

/// Physical channel drawn per trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    /// One unit-gain, zero-delay, zero-Doppler tap: pure AWGN.
    SingleTap,
    /// Multipath Rayleigh fading with this many paths.
    Rayleigh { paths: usize },
}

/// Monte-Carlo budget and sweep for one BER run.
#[derive(Clone, Debug)]
pub struct BerConfig {
    /// Eb/N0 grid in dB.
    pub snr_db_grid: Vec<f64>,
    pub channel: ChannelModel,
    /// Per-point cap on simulated bits.
    pub max_bits: u64,
    /// Per-point early stop once this many bit errors accumulate.
    pub max_errors: u64,
    pub seed: u64,
}

impl Default for BerConfig {
    fn default() -> Self {
        Self {
            snr_db_grid: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            channel: ChannelModel::Rayleigh { paths: 3 },
            max_bits: 1_000_000,
            max_errors: 200,
            seed: 0,
        }
    }
}

/// One SNR point of a BER curve.
#[derive(Clone, Copy, Debug)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bit_errors: u64,
    pub bits_simulated: u64,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits_simulated as f64
    }
}

/// Seeded BER sweep result for one waveform.
#[derive(Clone, Debug)]
pub struct BerCurve {
    pub waveform: WaveformKind,
    pub seed: u64,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    /// Linear interpolation of the Eb/N0 (dB) at which the curve crosses a
    /// BER level, on log10(ber) vs dB axes. `None` when never crossed.
    pub fn snr_at_ber(&self, level: f64) -> Option<f64> {
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a.ber() >= level && b.ber() <= level && b.ber() > 0.0 {
                let (la, lb, ll) = (a.ber().log10(), b.ber().log10(), level.log10());
                return Some(a.snr_db + (b.snr_db - a.snr_db) * (la - ll) / (la - lb));
            }
        }
        None
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn trial_seed(seed: u64, point: usize, trial: u64, lane: u64) -> u64 {
    splitmix(splitmix(splitmix(seed ^ point as u64) ^ trial) ^ lane)
}

/// Eb/N0 in dB to per-sample complex noise variance under unit symbol
/// energy and 2 bits per QPSK symbol.
fn noise_variance(snr_db: f64) -> f64 {
    if snr_db.is_infinite() && snr_db > 0.0 {
        0.0
    } else {
        0.5 * 10f64.powf(-snr_db / 10.0)
    }
}

fn modulate(
    kind: WaveformKind,
    x: &ChirpDomainVector,
    params: &WaveformParams,
) -> Result<TimeSignal> {
    match kind {
        WaveformKind::Afdm(c2) => idaft(x, &params.clone().with_c2(c2)),
        WaveformKind::Ofdm => idaft(x, &ofdm_params(params)),
        WaveformKind::Otfs => {
            let m = OtfsGrid::side_for(params.n_subcarriers())?;
            otfs_modulate(&OtfsGrid::new(m, m, x.symbols.clone())?, params)
        }
    }
}

fn demodulate(
    kind: WaveformKind,
    u: &TimeSignal,
    params: &WaveformParams,
) -> Result<ChirpDomainVector> {
    match kind {
        WaveformKind::Afdm(c2) => daft(u, &params.clone().with_c2(c2)),
        WaveformKind::Ofdm => daft(u, &ofdm_params(params)),
        WaveformKind::Otfs => Ok(ChirpDomainVector::new(otfs_demodulate(u, params)?.data)),
    }
}

fn random_bits(count: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0..2u8)).collect()
}

fn single_tap_spec() -> ChannelSpec {
    ChannelSpec::new(vec![DiscreteTap::new(0, 0, 0.0, Complex64::new(1.0, 0.0))]).unwrap()
}

/// One frame for one waveform over a given channel realization. Returns
/// (bit errors, bits simulated). Deterministic per seed.
pub fn ber_trial(
    kind: WaveformKind,
    snr_db: f64,
    params: &WaveformParams,
    spec: &ChannelSpec,
    seed: u64,
) -> Result<(u64, u64)> {
    let n0 = noise_variance(snr_db);
    let eq = FrameEqualizer::new(spec, params.n_subcarriers(), n0)?;
    run_frame(kind, params, spec, &eq, n0, seed, seed ^ 1)
}

fn run_frame(
    kind: WaveformKind,
    params: &WaveformParams,
    spec: &ChannelSpec,
    eq: &FrameEqualizer,
    n0: f64,
    bits_seed: u64,
    noise_seed: u64,
) -> Result<(u64, u64)> {
    let n = params.n_subcarriers();
    let bits = random_bits(2 * n, bits_seed);
    let x = qpsk_map(&bits)?;
    let s = modulate(kind, &x, params)?;
    let r = apply_channel_circular(&s, spec)?;
    let r = if n0 > 0.0 {
        add_awgn_with_variance(&r, n0, noise_seed)
    } else {
        r
    };
    let u = eq.apply(&r)?;
    let xhat = demodulate(kind, &u, params)?;
    let hat_bits = qpsk_demap(&xhat);
    let errors = bits.iter().zip(&hat_bits).filter(|(a, b)| a != b).count() as u64;
    Ok((errors, 2 * n as u64))
}

/// Sweeps the SNR grid for several waveforms at once, sharing the channel
/// realization, payload bits and noise draw across waveforms within each
/// trial so their curves differ only through the modulation.
pub fn ber_curves(
    kinds: &[WaveformKind],
    params: &WaveformParams,
    config: &BerConfig,
) -> Result<Vec<BerCurve>> {
    let n = params.n_subcarriers();
    let bits_per_trial = 2 * n as u64;
    let max_trials = config.max_bits.div_ceil(bits_per_trial).max(1);
    let mut curves: Vec<BerCurve> = kinds
        .iter()
        .map(|&waveform| BerCurve {
            waveform,
            seed: config.seed,
            points: Vec::new(),
        })
        .collect();
    for (pi, &snr_db) in config.snr_db_grid.iter().enumerate() {
        let n0 = noise_variance(snr_db);
        let mut points = vec![
            BerPoint {
                snr_db,
                bit_errors: 0,
                bits_simulated: 0,
            };
            kinds.len()
        ];
        let fixed_eq = match config.channel {
            ChannelModel::SingleTap => Some(FrameEqualizer::new(&single_tap_spec(), n, n0)?),
            ChannelModel::Rayleigh { .. } => None,
        };
        for t in 0..max_trials {
            if points.iter().all(|p| p.bit_errors >= config.max_errors) {
                break;
            }
            let spec = match config.channel {
                ChannelModel::SingleTap => single_tap_spec(),
                ChannelModel::Rayleigh { paths } => {
                    rayleigh_channel(paths, params, trial_seed(config.seed, pi, t, 0))?
                }
            };
            let per_trial_eq;
            let eq: &FrameEqualizer = match &fixed_eq {
                Some(e) => e,
                None => {
                    per_trial_eq = FrameEqualizer::new(&spec, n, n0)?;
                    &per_trial_eq
                }
            };
            let bits_seed = trial_seed(config.seed, pi, t, 1);
            let noise_seed = trial_seed(config.seed, pi, t, 2);
            for (k, &kind) in kinds.iter().enumerate() {
                let (errors, bits) = run_frame(kind, params, &spec, eq, n0, bits_seed, noise_seed)?;
                points[k].bit_errors += errors;
                points[k].bits_simulated += bits;
            }
        }
        for (k, p) in points.into_iter().enumerate() {
            curves[k].points.push(p);
        }
    }
    Ok(curves)
}

/// Single-waveform convenience wrapper around `ber_curves`.
pub fn ber_curve(
    kind: WaveformKind,
    params: &WaveformParams,
    config: &BerConfig,
) -> Result<BerCurve> {
    Ok(ber_curves(&[kind], params, config)?.remove(0))
}
