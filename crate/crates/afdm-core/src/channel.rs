//! Target geometry to discrete delay-Doppler taps, time-varying channel
//! application (linear and circular), and AWGN injection.

use crate::error::Error;
use crate::phase::unit_phase;
use crate::waveform::{GeometryMode, TimeSignal, WaveformParams};
use crate::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

/// Physical scatterer description.
#[derive(Clone, Copy, Debug)]
pub struct TargetGeometry {
    /// Range from transmitter to target in meters.
    pub r_tx_m: f64,
    /// Range from target to receiver in meters (equal to `r_tx_m` for a
    /// monostatic radar).
    pub r_rx_m: f64,
    /// Radial closing speed in m/s.
    pub velocity_mps: f64,
    /// Complex reflection gain.
    pub gain: Complex64,
}

impl TargetGeometry {
    /// Monostatic target: co-located transmitter and receiver.
    pub fn monostatic(range_m: f64, velocity_mps: f64, gain: Complex64) -> Self {
        Self {
            r_tx_m: range_m,
            r_rx_m: range_m,
            velocity_mps,
            gain,
        }
    }
}

/// One resolved path on the delay-Doppler sampling grid.
#[derive(Clone, Copy, Debug)]
pub struct DiscreteTap {
    /// Integer delay in sample bins.
    pub delay_bins: usize,
    /// Integer part of the Doppler index.
    pub doppler_int: i32,
    /// Fractional Doppler in (-0.5, 0.5).
    pub doppler_frac: f64,
    /// Complex path gain.
    pub gain: Complex64,
}

impl DiscreteTap {
    pub fn new(delay_bins: usize, doppler_int: i32, doppler_frac: f64, gain: Complex64) -> Self {
        Self {
            delay_bins,
            doppler_int,
            doppler_frac,
            gain,
        }
    }

    /// Digital frequency normalized by the symbol length:
    /// `(k + kappa) / N`.
    pub fn norm_doppler(&self, n_subcarriers: usize) -> f64 {
        (self.doppler_int as f64 + self.doppler_frac) / n_subcarriers as f64
    }
}

/// A set of discrete taps forming one channel realization.
#[derive(Clone, Debug)]
pub struct ChannelSpec {
    pub taps: Vec<DiscreteTap>,
}

impl ChannelSpec {
    pub fn new(taps: Vec<DiscreteTap>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::EmptyChannel);
        }
        Ok(Self { taps })
    }

    /// Largest tap delay in bins.
    pub fn max_delay(&self) -> usize {
        self.taps.iter().map(|t| t.delay_bins).max().unwrap_or(0)
    }
}

/// Maps a physical target onto the delay-Doppler grid.
///
/// Monostatic delay is round-trip `2R/c`; bistatic is `(R_tx + R_rx)/c`.
/// Monostatic Doppler carries the round-trip factor `2 v f_c / c`.
pub fn discretize_target(g: &TargetGeometry, params: &WaveformParams) -> Result<DiscreteTap> {
    if g.r_tx_m < 0.0 || g.r_rx_m < 0.0 {
        return Err(Error::NegativeRange(g.r_tx_m.min(g.r_rx_m)));
    }
    let vc = params.speed_of_light();
    let (tau, nu) = match params.geometry() {
        GeometryMode::Monostatic => (
            2.0 * g.r_tx_m / vc,
            2.0 * g.velocity_mps * params.carrier_hz() / vc,
        ),
        GeometryMode::Bistatic => (
            (g.r_tx_m + g.r_rx_m) / vc,
            g.velocity_mps * params.carrier_hz() / vc,
        ),
    };
    let bin = (params.bandwidth_hz() * tau).round() as i64;
    if bin < 0 || bin >= params.n_subcarriers() as i64 {
        return Err(Error::DelayOutOfRange {
            delay_s: tau,
            bin,
            n_subcarriers: params.n_subcarriers(),
        });
    }
    let doppler_index = params.duration_s() * nu;
    let k = doppler_index.round();
    let kappa = doppler_index - k;
    Ok(DiscreteTap::new(bin as usize, k as i32, kappa, g.gain))
}

fn check_delays(spec: &ChannelSpec, cp_len: usize) -> Result<()> {
    for t in &spec.taps {
        if t.delay_bins > cp_len {
            return Err(Error::DelayExceedsPrefix {
                delay_bins: t.delay_bins,
                cp_len,
            });
        }
    }
    Ok(())
}

/// Applies the channel to a prefixed frame by linear (transient) convolution:
/// `r[n] = sum_p h_p exp(-j*2*pi*f_p*n) s[n - l_p]` for `n = -L..N-1`, with
/// the transmit record zero before `-L`. Noise is not added here.
pub fn apply_channel(tx: &TimeSignal, spec: &ChannelSpec) -> Result<TimeSignal> {
    check_delays(spec, tx.prefix_len)?;
    let l_cp = tx.prefix_len as i64;
    let total = tx.len();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    for tap in &spec.taps {
        let f = tap.norm_doppler(tx.body_len());
        for (i, o) in out.iter_mut().enumerate() {
            let n = i as i64 - l_cp;
            let s = tx.at(n - tap.delay_bins as i64);
            *o += tap.gain * unit_phase(-f * n as f64) * s;
        }
    }
    Ok(TimeSignal::new(out, tx.prefix_len, tx.sample_rate_hz))
}

/// Circular-model channel for a prefix-free symbol:
/// `r[n] = sum_p h_p exp(-j*2*pi*f_p*n) s[(n - l_p) mod N]`.
pub fn apply_channel_circular(s: &TimeSignal, spec: &ChannelSpec) -> Result<TimeSignal> {
    if s.prefix_len != 0 {
        return Err(Error::PrefixPresent(s.prefix_len));
    }
    let n = s.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for tap in &spec.taps {
        let f = tap.norm_doppler(n);
        for (i, o) in out.iter_mut().enumerate() {
            let j = (i + n - tap.delay_bins % n) % n;
            *o += tap.gain * unit_phase(-f * i as f64) * s.samples[j];
        }
    }
    Ok(TimeSignal::new(out, 0, s.sample_rate_hz))
}

/// A noisy signal together with the per-sample noise variance that was used.
#[derive(Clone, Debug)]
pub struct NoisySignal {
    pub signal: TimeSignal,
    pub n0: f64,
}

/// Draws one complex Gaussian sample with total variance `var`.
fn complex_gaussian<R: Rng>(rng: &mut R, var: f64) -> Complex64 {
    let norm = Normal::new(0.0, (var / 2.0).sqrt()).expect("valid std");
    Complex64::new(norm.sample(rng), norm.sample(rng))
}

/// Adds white complex Gaussian noise at the requested SNR (dB) relative to
/// the measured signal power. `f64::INFINITY` leaves the signal untouched.
/// Deterministic for a given seed.
pub fn add_awgn(signal: &TimeSignal, snr_db: f64, seed: u64) -> NoisySignal {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return NoisySignal {
            signal: signal.clone(),
            n0: 0.0,
        };
    }
    let n0 = signal.power() / 10f64.powf(snr_db / 10.0);
    NoisySignal {
        signal: add_awgn_with_variance(signal, n0, seed),
        n0,
    }
}

/// Adds white complex Gaussian noise of per-sample variance `n0`.
pub fn add_awgn_with_variance(signal: &TimeSignal, n0: f64, seed: u64) -> TimeSignal {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let samples = signal
        .samples
        .iter()
        .map(|z| z + complex_gaussian(&mut rng, n0))
        .collect();
    TimeSignal::new(samples, signal.prefix_len, signal.sample_rate_hz)
}

/// Draws a multipath Rayleigh-fading channel: `P` paths with
/// `h_p ~ CN(0, 1/P)`, delays uniform on `{0..L_CP}` and normalized Doppler
/// uniform on `[-k_max, k_max] / N`. Deterministic for a given seed.
pub fn rayleigh_channel(paths: usize, params: &WaveformParams, seed: u64) -> Result<ChannelSpec> {
    if paths == 0 {
        return Err(Error::EmptyChannel);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut taps = Vec::with_capacity(paths);
    for _ in 0..paths {
        let gain = complex_gaussian(&mut rng, 1.0 / paths as f64);
        let delay = rng.gen_range(0..=params.cp_len());
        let k_max = params.k_max() as f64;
        let doppler = rng.gen_range(-k_max..=k_max);
        let k = doppler.round();
        taps.push(DiscreteTap::new(delay, k as i32, doppler - k, gain));
    }
    ChannelSpec::new(taps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{add_cpp, idaft, pilot, qpsk_map, remove_cpp, ChirpDomainVector, C2};
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;

    fn params(nc: usize, cp: usize) -> WaveformParams {
        WaveformParams::new(
            nc,
            1.0,
            1,
            C2::Value(0.07),
            cp,
            0.0,
            GeometryMode::Monostatic,
        )
        .unwrap()
    }

    fn paper_params() -> WaveformParams {
        WaveformParams::new(
            256,
            39.063e3,
            1,
            C2::ZERO,
            32,
            24e9,
            GeometryMode::Monostatic,
        )
        .unwrap()
    }

    fn random_signal(p: &WaveformParams, seed: u64) -> TimeSignal {
        let mut rng = StdRng::seed_from_u64(seed);
        let bits: Vec<u8> = (0..2 * p.n_subcarriers())
            .map(|_| rng.gen_range(0..2u8))
            .collect();
        idaft(&qpsk_map(&bits).unwrap(), p).unwrap()
    }

    fn random_spec(p: &WaveformParams, taps: usize, seed: u64) -> ChannelSpec {
        let mut rng = StdRng::seed_from_u64(seed);
        let taps = (0..taps)
            .map(|_| {
                DiscreteTap::new(
                    rng.gen_range(0..=p.cp_len()),
                    rng.gen_range(-1..=1),
                    rng.gen_range(-0.5..0.5),
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                )
            })
            .collect();
        ChannelSpec::new(taps).unwrap()
    }

    #[test]
    fn paper_targets_map_to_expected_bins() {
        let p = paper_params();
        let t1 = discretize_target(
            &TargetGeometry::monostatic(300.0, 24.4, Complex64::new(1.0, 0.0)),
            &p,
        )
        .unwrap();
        assert_eq!(t1.delay_bins, 20);
        assert_eq!(t1.doppler_int, 0);
        assert_abs_diff_eq!(t1.doppler_frac, 0.10001, epsilon = 2e-4);

        let t3 = discretize_target(
            &TargetGeometry::monostatic(375.0, 122.0, Complex64::new(1.0, 0.0)),
            &p,
        )
        .unwrap();
        assert_eq!(t3.delay_bins, 25);
        // T*nu = 0.50005 splits as k=1, kappa just below -0.5
        assert_eq!(t3.doppler_int, 1);
        assert!(t3.doppler_frac > -0.5 && t3.doppler_frac < -0.49);
    }

    #[test]
    fn stationary_zero_range_target() {
        let p = paper_params();
        let t = discretize_target(
            &TargetGeometry::monostatic(0.0, 0.0, Complex64::new(1.0, 0.0)),
            &p,
        )
        .unwrap();
        assert_eq!((t.delay_bins, t.doppler_int), (0, 0));
        assert_abs_diff_eq!(t.doppler_frac, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn unambiguous_delay_enforced() {
        let p = paper_params();
        let far = TargetGeometry::monostatic(5.0e6, 0.0, Complex64::new(1.0, 0.0));
        assert!(matches!(
            discretize_target(&far, &p),
            Err(Error::DelayOutOfRange { .. })
        ));
    }

    #[test]
    fn identity_tap_is_transparent() {
        let p = params(8, 4);
        let tx = add_cpp(&random_signal(&p, 1), &p).unwrap();
        let spec =
            ChannelSpec::new(vec![DiscreteTap::new(0, 0, 0.0, Complex64::new(1.0, 0.0))]).unwrap();
        let r = apply_channel(&tx, &spec).unwrap();
        for (a, b) in r.samples.iter().zip(&tx.samples) {
            assert!((a - b).norm() < 1e-14);
        }
        let s = random_signal(&p, 2);
        let rc = apply_channel_circular(&s, &spec).unwrap();
        assert_eq!(rc.samples, s.samples);
    }

    #[test]
    fn pure_delay_shifts_samples() {
        let p = params(8, 4);
        let tx = add_cpp(&random_signal(&p, 3), &p).unwrap();
        let spec =
            ChannelSpec::new(vec![DiscreteTap::new(3, 0, 0.0, Complex64::new(1.0, 0.0))]).unwrap();
        let r = apply_channel(&tx, &spec).unwrap();
        for i in 0..tx.len() {
            let expect = if i >= 3 {
                tx.samples[i - 3]
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((r.samples[i] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn matches_double_sum_oracle() {
        let p = params(8, 4);
        let tx = add_cpp(&random_signal(&p, 4), &p).unwrap();
        let spec = random_spec(&p, 2, 5);
        let r = apply_channel(&tx, &spec).unwrap();
        // direct evaluation over taps and samples
        for i in 0..tx.len() {
            let n = i as i64 - 4;
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &spec.taps {
                acc += t.gain
                    * unit_phase(-t.norm_doppler(8) * n as f64)
                    * tx.at(n - t.delay_bins as i64);
            }
            assert!((r.samples[i] - acc).norm() < 1e-12);
        }
    }

    #[test]
    fn delay_exceeding_prefix_rejected() {
        let p = params(8, 2);
        let tx = add_cpp(&random_signal(&p, 6), &p).unwrap();
        let spec =
            ChannelSpec::new(vec![DiscreteTap::new(3, 0, 0.0, Complex64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(
            apply_channel(&tx, &spec),
            Err(Error::DelayExceedsPrefix { .. })
        ));
    }

    #[test]
    fn prefix_circularizes_the_channel() {
        // remove_cpp . apply_channel . add_cpp == apply_channel_circular
        for nc in [8usize, 16] {
            let p = params(nc, nc / 2);
            for trial in 0..20u64 {
                let s = random_signal(&p, 100 + trial);
                let spec = random_spec(&p, 3, 200 + trial);
                let lin = remove_cpp(
                    &apply_channel(&add_cpp(&s, &p).unwrap(), &spec).unwrap(),
                    &p,
                )
                .unwrap();
                let circ = apply_channel_circular(&s, &spec).unwrap();
                for (a, b) in lin.samples.iter().zip(&circ.samples) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn full_wrap_tap() {
        let p = WaveformParams::new(8, 1.0, 1, C2::ZERO, 7, 0.0, GeometryMode::Monostatic).unwrap();
        let s = random_signal(&p, 7);
        let spec =
            ChannelSpec::new(vec![DiscreteTap::new(7, 0, 0.0, Complex64::new(1.0, 0.0))]).unwrap();
        let r = apply_channel_circular(&s, &spec).unwrap();
        for i in 0..8 {
            assert_eq!(r.samples[i], s.samples[(i + 1) % 8]);
        }
    }

    #[test]
    fn doppler_tap_preserves_energy() {
        let p = params(16, 4);
        let s = random_signal(&p, 8);
        let spec =
            ChannelSpec::new(vec![DiscreteTap::new(2, 1, 0.3, Complex64::new(1.0, 0.0))]).unwrap();
        let r = apply_channel_circular(&s, &spec).unwrap();
        assert_abs_diff_eq!(r.energy(), s.energy(), epsilon = 1e-10);
    }

    #[test]
    fn delay_only_taps_commute() {
        let p = params(16, 8);
        let s = random_signal(&p, 9);
        let t1 = DiscreteTap::new(2, 0, 0.0, Complex64::new(0.7, 0.1));
        let t2 = DiscreteTap::new(5, 0, 0.0, Complex64::new(-0.2, 0.9));
        let ab = apply_channel_circular(
            &apply_channel_circular(&s, &ChannelSpec::new(vec![t1]).unwrap()).unwrap(),
            &ChannelSpec::new(vec![t2]).unwrap(),
        )
        .unwrap();
        let ba = apply_channel_circular(
            &apply_channel_circular(&s, &ChannelSpec::new(vec![t2]).unwrap()).unwrap(),
            &ChannelSpec::new(vec![t1]).unwrap(),
        )
        .unwrap();
        for (a, b) in ab.samples.iter().zip(&ba.samples) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn awgn_infinite_snr_is_identity() {
        let p = params(16, 4);
        let s = random_signal(&p, 10);
        let out = add_awgn(&s, f64::INFINITY, 99);
        assert_eq!(out.signal.samples, s.samples);
        assert_eq!(out.n0, 0.0);
    }

    #[test]
    fn awgn_is_deterministic_per_seed() {
        let p = params(16, 4);
        let s = random_signal(&p, 11);
        let a = add_awgn(&s, 10.0, 1234);
        let b = add_awgn(&s, 10.0, 1234);
        assert_eq!(a.signal.samples, b.signal.samples);
        let c = add_awgn(&s, 10.0, 1235);
        assert_ne!(a.signal.samples, c.signal.samples);
    }

    #[test]
    fn awgn_variance_matches_request() {
        let zero = TimeSignal::new(vec![Complex64::new(0.0, 0.0); 1_000_000], 0, 1.0);
        let n0 = 0.37;
        let noisy = add_awgn_with_variance(&zero, n0, 42);
        let measured = noisy.power();
        assert!(
            (measured - n0).abs() / n0 < 0.01,
            "sample variance {measured} vs requested {n0}"
        );
    }

    #[test]
    fn rayleigh_channel_statistics() {
        let p = paper_params();
        let mut total = 0.0;
        let draws = 10_000;
        for seed in 0..draws {
            let spec = rayleigh_channel(3, &p, seed).unwrap();
            for t in &spec.taps {
                assert!(t.delay_bins <= p.cp_len());
                total += t.gain.norm_sqr();
            }
        }
        let mean = total / draws as f64;
        assert!(
            (mean - 1.0).abs() < 0.02,
            "mean channel power {mean} should be within 2% of unity"
        );
        // reproducibility
        let a = rayleigh_channel(1, &p, 7).unwrap();
        let b = rayleigh_channel(1, &p, 7).unwrap();
        assert_eq!(a.taps[0].delay_bins, b.taps[0].delay_bins);
        assert_eq!(a.taps[0].gain, b.taps[0].gain);
    }
}
