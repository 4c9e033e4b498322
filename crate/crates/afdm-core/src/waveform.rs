//! AFDM parameterization, the discrete affine Fourier transform pair,
//! chirp-periodic prefix handling and QPSK symbol mapping.
//!
//! The modulated time signal is
//! `s[n] = (1/sqrt(N)) * sum_m x[m] * exp(j*2*pi*(c1*n^2 + c2*m^2 + n*m/N))`,
//! realized as chirp multiplication, inverse DFT, chirp multiplication.
//! With `c1 = (2*k_max + 1)/(2*N)` and even `N` the chirp-periodic prefix
//! degenerates to a plain cyclic prefix.

use crate::error::Error;
use crate::fft::{fft_in_place, ifft_in_place};
use crate::phase::{unit_phase, unit_phase_rational};
use crate::{Result, SPEED_OF_LIGHT};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Second chirp rate. The rational form keeps `c2 * m^2` exact in modular
/// arithmetic, which matters once the product overflows f64 resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum C2 {
    Value(f64),
    Ratio { num: i64, den: i64 },
}

impl C2 {
    pub const ZERO: C2 = C2::Value(0.0);

    pub fn as_f64(&self) -> f64 {
        match *self {
            C2::Value(v) => v,
            C2::Ratio { num, den } => num as f64 / den as f64,
        }
    }

    /// `exp(j*2*pi*c2*m^2)`.
    pub fn chirp(&self, m: usize) -> Complex64 {
        let m_sq = (m as u64) * (m as u64);
        match *self {
            C2::Value(v) => unit_phase(v * m_sq as f64),
            C2::Ratio { num, den } => unit_phase_rational(num, den, m_sq),
        }
    }
}

impl std::fmt::Display for C2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            C2::Value(v) => write!(f, "{v}"),
            C2::Ratio { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

/// Radar geometry, deciding the delay-to-range conversion factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryMode {
    Monostatic,
    Bistatic,
}

/// All built-in AFDM constants and derived quantities.
#[derive(Clone, Debug)]
pub struct WaveformParams {
    n_subcarriers: usize,
    subcarrier_spacing_hz: f64,
    c1: f64,
    c2: C2,
    k_max: u32,
    cp_len: usize,
    carrier_hz: f64,
    geometry: GeometryMode,
    speed_of_light: f64,
}

impl WaveformParams {
    /// Builds parameters with `c1 = (2*k_max + 1)/(2*N)`.
    pub fn new(
        n_subcarriers: usize,
        subcarrier_spacing_hz: f64,
        k_max: u32,
        c2: C2,
        cp_len: usize,
        carrier_hz: f64,
        geometry: GeometryMode,
    ) -> Result<Self> {
        if n_subcarriers < 2 {
            return Err(Error::TooFewSubcarriers(n_subcarriers));
        }
        if n_subcarriers % 2 != 0 {
            return Err(Error::OddSubcarrierCount(n_subcarriers));
        }
        if !(subcarrier_spacing_hz > 0.0) {
            return Err(Error::NonPositiveSpacing(subcarrier_spacing_hz));
        }
        if cp_len >= n_subcarriers {
            return Err(Error::PrefixTooLong {
                cp_len,
                n_subcarriers,
            });
        }
        let c1 = (2.0 * k_max as f64 + 1.0) / (2.0 * n_subcarriers as f64);
        Ok(Self {
            n_subcarriers,
            subcarrier_spacing_hz,
            c1,
            c2,
            k_max,
            cp_len,
            carrier_hz,
            geometry,
            speed_of_light: SPEED_OF_LIGHT,
        })
    }

    /// Overrides the first chirp rate, abandoning the degeneracy rule.
    pub fn with_c1(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }

    pub fn with_c2(mut self, c2: C2) -> Self {
        self.c2 = c2;
        self
    }

    /// Overrides the propagation speed; intended for tests only.
    pub fn with_speed_of_light(mut self, v: f64) -> Self {
        self.speed_of_light = v;
        self
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.subcarrier_spacing_hz
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> C2 {
        self.c2
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn geometry(&self) -> GeometryMode {
        self.geometry
    }

    pub fn speed_of_light(&self) -> f64 {
        self.speed_of_light
    }

    /// Symbol duration T = 1/spacing.
    pub fn duration_s(&self) -> f64 {
        1.0 / self.subcarrier_spacing_hz
    }

    /// Occupied bandwidth, also the sample rate.
    pub fn bandwidth_hz(&self) -> f64 {
        self.n_subcarriers as f64 * self.subcarrier_spacing_hz
    }

    /// True when the chirp-periodic prefix reduces to a plain cyclic copy,
    /// i.e. `2*N*c1` is an integer and `N` is even.
    pub fn cp_degenerates(&self) -> bool {
        let t = 2.0 * self.n_subcarriers as f64 * self.c1;
        (t - t.round()).abs() < 1e-9 && self.n_subcarriers % 2 == 0
    }

    /// Phase factor `exp(-j*2*pi*c1*(N^2 + 2*N*n))` relating a prefix sample
    /// at position `n` (negative) to its cyclic image.
    pub fn cpp_phase(&self, n: i64) -> Complex64 {
        let nf = self.n_subcarriers as f64;
        unit_phase(-self.c1 * (nf * nf + 2.0 * nf * n as f64))
    }

    /// Meters per delay bin for the configured geometry.
    pub fn bin_to_meters(&self) -> f64 {
        let b = self.bandwidth_hz();
        match self.geometry {
            GeometryMode::Monostatic => self.speed_of_light / (2.0 * b),
            GeometryMode::Bistatic => self.speed_of_light / b,
        }
    }
}

/// Length-N vector of chirp-domain data symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct ChirpDomainVector {
    pub symbols: Vec<Complex64>,
}

impl ChirpDomainVector {
    pub fn new(symbols: Vec<Complex64>) -> Self {
        Self { symbols }
    }

    /// Radar pilot: every symbol set to one.
    pub fn pilot(n: usize) -> Self {
        Self {
            symbols: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Complex baseband samples, optionally carrying a prefix.
///
/// `samples[0]` is time index `-prefix_len`; the symbol body occupies the
/// last `len - prefix_len` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSignal {
    pub samples: Vec<Complex64>,
    pub prefix_len: usize,
    pub sample_rate_hz: f64,
}

impl TimeSignal {
    pub fn new(samples: Vec<Complex64>, prefix_len: usize, sample_rate_hz: f64) -> Self {
        Self {
            samples,
            prefix_len,
            sample_rate_hz,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Symbol length without the prefix.
    pub fn body_len(&self) -> usize {
        self.samples.len() - self.prefix_len
    }

    /// Samples of the symbol body (time indices 0..N-1).
    pub fn body(&self) -> &[Complex64] {
        &self.samples[self.prefix_len..]
    }

    /// Sample at signed time index `n` in `-prefix_len..body_len`, zero
    /// outside the record.
    pub fn at(&self, n: i64) -> Complex64 {
        let idx = n + self.prefix_len as i64;
        if idx < 0 || idx >= self.samples.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.samples[idx as usize]
        }
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn power(&self) -> f64 {
        self.energy() / self.samples.len() as f64
    }
}

fn check_no_prefix(s: &TimeSignal) -> Result<()> {
    if s.prefix_len != 0 {
        return Err(Error::PrefixPresent(s.prefix_len));
    }
    Ok(())
}

/// Modulation: chirp-domain symbols to time samples (no prefix).
pub fn idaft(x: &ChirpDomainVector, params: &WaveformParams) -> Result<TimeSignal> {
    let n = params.n_subcarriers();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let mut buf: Vec<Complex64> = (0..n)
        .map(|m| x.symbols[m] * params.c2().chirp(m))
        .collect();
    ifft_in_place(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for (i, z) in buf.iter_mut().enumerate() {
        let sq = (i as u64) * (i as u64);
        *z *= scale * unit_phase(params.c1() * sq as f64);
    }
    Ok(TimeSignal::new(buf, 0, params.bandwidth_hz()))
}

/// Demodulation: exact inverse of [`idaft`]. The prefix must be removed.
pub fn daft(s: &TimeSignal, params: &WaveformParams) -> Result<ChirpDomainVector> {
    check_no_prefix(s)?;
    let n = params.n_subcarriers();
    if s.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: s.len(),
        });
    }
    let mut buf: Vec<Complex64> = s
        .samples
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let sq = (i as u64) * (i as u64);
            z * unit_phase(params.c1() * sq as f64).conj()
        })
        .collect();
    fft_in_place(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for (m, z) in buf.iter_mut().enumerate() {
        *z *= scale * params.c2().chirp(m).conj();
    }
    Ok(ChirpDomainVector::new(buf))
}

/// Prepends the chirp-periodic prefix
/// `s[n] = exp(-j*2*pi*c1*(N^2 + 2*N*n)) * s[n+N]` for `n = -L..-1`.
pub fn add_cpp(s: &TimeSignal, params: &WaveformParams) -> Result<TimeSignal> {
    check_no_prefix(s)?;
    let n = params.n_subcarriers();
    if s.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: s.len(),
        });
    }
    let l = params.cp_len();
    let mut samples = Vec::with_capacity(n + l);
    for i in 0..l {
        let neg_n = i as i64 - l as i64; // -L..-1
        samples.push(params.cpp_phase(neg_n) * s.samples[(neg_n + n as i64) as usize]);
    }
    samples.extend_from_slice(&s.samples);
    Ok(TimeSignal::new(samples, l, s.sample_rate_hz))
}

/// Drops the prefix, keeping the last N samples.
pub fn remove_cpp(r: &TimeSignal, params: &WaveformParams) -> Result<TimeSignal> {
    let l = params.cp_len();
    if r.prefix_len != l {
        return Err(Error::PrefixMismatch {
            expected: l,
            got: r.prefix_len,
        });
    }
    let n = params.n_subcarriers();
    if r.body_len() != n {
        return Err(Error::LengthMismatch {
            expected: n + l,
            got: r.len(),
        });
    }
    Ok(TimeSignal::new(r.body().to_vec(), 0, r.sample_rate_hz))
}

/// Modulated all-ones pilot (no prefix).
pub fn pilot(params: &WaveformParams) -> TimeSignal {
    idaft(&ChirpDomainVector::pilot(params.n_subcarriers()), params)
        .expect("pilot length always matches")
}

const QPSK_AMP: f64 = FRAC_1_SQRT_2;

/// Gray-mapped unit-energy QPSK: 00 -> (1+j)/sqrt(2), 01 -> (-1+j)/sqrt(2),
/// 11 -> (-1-j)/sqrt(2), 10 -> (1-j)/sqrt(2).
pub fn qpsk_map(bits: &[u8]) -> Result<ChirpDomainVector> {
    if bits.len() % 2 != 0 {
        return Err(Error::OddBitCount(bits.len()));
    }
    let symbols = bits
        .chunks_exact(2)
        .map(|b| {
            let re = if b[1] == 0 { QPSK_AMP } else { -QPSK_AMP };
            let im = if b[0] == 0 { QPSK_AMP } else { -QPSK_AMP };
            Complex64::new(re, im)
        })
        .collect();
    Ok(ChirpDomainVector::new(symbols))
}

/// Nearest-neighbor QPSK demapping; inverse of [`qpsk_map`] in the
/// noiseless case.
pub fn qpsk_demap(symbols: &ChirpDomainVector) -> Vec<u8> {
    let mut bits = Vec::with_capacity(2 * symbols.len());
    for z in &symbols.symbols {
        bits.push(u8::from(z.im < 0.0));
        bits.push(u8::from(z.re < 0.0));
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params_256() -> WaveformParams {
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

    fn random_qpsk(n: usize, rng: &mut StdRng) -> ChirpDomainVector {
        let bits: Vec<u8> = (0..2 * n).map(|_| rng.gen_range(0..2u8)).collect();
        qpsk_map(&bits).unwrap()
    }

    /// Direct triple-loop modulation, the oracle for the FFT-based path.
    fn idaft_direct(x: &ChirpDomainVector, p: &WaveformParams) -> Vec<Complex64> {
        let n = p.n_subcarriers();
        (0..n)
            .map(|nn| {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..n {
                    let turns = p.c1() * (nn * nn) as f64 + (nn * m) as f64 / n as f64;
                    acc += x.symbols[m] * p.c2().chirp(m) * unit_phase(turns);
                }
                acc / (n as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn paper_scenario_constants() {
        let p = params_256();
        assert_abs_diff_eq!(p.c1(), 3.0 / 512.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.duration_s(), 25.6e-6, epsilon = 1e-9);
        assert_abs_diff_eq!(p.bandwidth_hz(), 10.000128e6, epsilon = 1.0);
        assert!(p.cp_degenerates());
    }

    #[test]
    fn smallest_even_symbol() {
        let p = WaveformParams::new(2, 1.0, 0, C2::ZERO, 0, 0.0, GeometryMode::Monostatic).unwrap();
        assert_abs_diff_eq!(p.c1(), 0.25, epsilon = 1e-15);
        assert!(p.cp_degenerates());
    }

    #[test]
    fn odd_subcarrier_count_rejected() {
        let e = WaveformParams::new(255, 1.0, 1, C2::ZERO, 16, 0.0, GeometryMode::Monostatic);
        assert!(matches!(e, Err(Error::OddSubcarrierCount(255))));
    }

    #[test]
    fn long_prefix_rejected() {
        let e = WaveformParams::new(8, 1.0, 1, C2::ZERO, 8, 0.0, GeometryMode::Monostatic);
        assert!(matches!(e, Err(Error::PrefixTooLong { .. })));
    }

    #[test]
    fn pilot_is_impulse_when_c2_zero() {
        let p = params_256();
        let s = pilot(&p);
        let n = p.n_subcarriers();
        assert_abs_diff_eq!(s.samples[0].norm(), (n as f64).sqrt(), epsilon = 1e-10);
        for z in &s.samples[1..] {
            assert!(z.norm() < 1e-10);
        }
    }

    #[test]
    fn all_ones_without_chirps_is_dft_impulse() {
        let p = WaveformParams::new(8, 1.0, 0, C2::ZERO, 0, 0.0, GeometryMode::Monostatic)
            .unwrap()
            .with_c1(0.0);
        let s = idaft(&ChirpDomainVector::pilot(8), &p).unwrap();
        assert_abs_diff_eq!(s.samples[0].re, 8f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.samples[0].im, 0.0, epsilon = 1e-12);
        for z in &s.samples[1..] {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn single_bin_inverse_dft_is_flat() {
        let p = WaveformParams::new(4, 1.0, 0, C2::ZERO, 0, 0.0, GeometryMode::Monostatic)
            .unwrap()
            .with_c1(0.0);
        let mut x = vec![Complex64::new(0.0, 0.0); 4];
        x[0] = Complex64::new(1.0, 0.0);
        let s = idaft(&ChirpDomainVector::new(x), &p).unwrap();
        for z in &s.samples {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn round_trip_recovers_symbols() {
        let mut rng = StdRng::seed_from_u64(1);
        let p = params_256().with_c2(C2::Ratio { num: 1, den: 65536 });
        let x = random_qpsk(256, &mut rng);
        let y = daft(&idaft(&x, &p).unwrap(), &p).unwrap();
        let err = x
            .symbols
            .iter()
            .zip(&y.symbols)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "round trip error {err}");
    }

    #[test]
    fn matches_direct_summation_oracle() {
        let mut rng = StdRng::seed_from_u64(2);
        for c2 in [C2::ZERO, C2::Value(0.3), C2::Ratio { num: 1, den: 64 }] {
            let p = WaveformParams::new(8, 1.0, 1, c2, 2, 0.0, GeometryMode::Monostatic).unwrap();
            let x = random_qpsk(8, &mut rng);
            let s = idaft(&x, &p).unwrap();
            let oracle = idaft_direct(&x, &p);
            for (a, b) in s.samples.iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn impulse_demodulates_to_all_ones() {
        let p = WaveformParams::new(8, 1.0, 0, C2::ZERO, 0, 0.0, GeometryMode::Monostatic)
            .unwrap()
            .with_c1(0.0);
        let mut samples = vec![Complex64::new(0.0, 0.0); 8];
        samples[0] = Complex64::new(8f64.sqrt(), 0.0);
        let x = daft(&TimeSignal::new(samples, 0, 8.0), &p).unwrap();
        for z in &x.symbols {
            assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn daft_rejects_attached_prefix() {
        let p = params_256();
        let framed = add_cpp(&pilot(&p), &p).unwrap();
        assert!(matches!(daft(&framed, &p), Err(Error::PrefixPresent(32))));
    }

    #[test]
    fn degenerate_prefix_is_plain_cyclic_copy() {
        let mut rng = StdRng::seed_from_u64(3);
        let p = params_256().with_c2(C2::Value(1.0 / 65536.0));
        let s = idaft(&random_qpsk(256, &mut rng), &p).unwrap();
        let framed = add_cpp(&s, &p).unwrap();
        for i in 0..p.cp_len() {
            let expect = s.samples[256 - p.cp_len() + i];
            assert_eq!(framed.samples[i], expect, "prefix must be bitwise cyclic");
        }
    }

    #[test]
    fn zero_length_prefix_is_identity() {
        let p = WaveformParams::new(8, 1.0, 1, C2::ZERO, 0, 0.0, GeometryMode::Monostatic).unwrap();
        let s = pilot(&p);
        let framed = add_cpp(&s, &p).unwrap();
        assert_eq!(framed.samples, s.samples);
    }

    #[test]
    fn non_degenerate_prefix_carries_phase() {
        // c1 = 1/40 violates the degeneracy rule at every prefix index
        let mut rng = StdRng::seed_from_u64(4);
        let p = WaveformParams::new(8, 1.0, 0, C2::ZERO, 2, 0.0, GeometryMode::Monostatic)
            .unwrap()
            .with_c1(1.0 / 40.0);
        assert!(!p.cp_degenerates());
        let s = idaft(&random_qpsk(8, &mut rng), &p).unwrap();
        let framed = add_cpp(&s, &p).unwrap();
        for i in 0..2 {
            let n = i as i64 - 2;
            // direct evaluation of the prefix phase rule
            let turns = -(1.0 / 40.0) * (64.0 + 16.0 * n as f64);
            let expect = unit_phase(turns) * s.samples[(n + 8) as usize];
            assert!((framed.samples[i] - expect).norm() < 1e-12);
            assert!(
                (framed.samples[i] - s.samples[(n + 8) as usize]).norm() > 1e-3,
                "prefix must differ from a plain cyclic copy here"
            );
        }
    }

    #[test]
    fn cpp_round_trip_and_lengths() {
        let mut rng = StdRng::seed_from_u64(5);
        let p = params_256();
        let s = idaft(&random_qpsk(256, &mut rng), &p).unwrap();
        let framed = add_cpp(&s, &p).unwrap();
        assert_eq!(framed.len(), 256 + 32);
        let back = remove_cpp(&framed, &p).unwrap();
        assert_eq!(back.len(), 256);
        assert_eq!(back.samples, s.samples);
    }

    #[test]
    fn qpsk_convention_and_round_trip() {
        let x = qpsk_map(&[0, 0]).unwrap();
        assert_abs_diff_eq!(x.symbols[0].re, QPSK_AMP, epsilon = 1e-15);
        assert_abs_diff_eq!(x.symbols[0].im, QPSK_AMP, epsilon = 1e-15);

        let mut rng = StdRng::seed_from_u64(6);
        let bits: Vec<u8> = (0..512).map(|_| rng.gen_range(0..2u8)).collect();
        assert_eq!(qpsk_demap(&qpsk_map(&bits).unwrap()), bits);
        assert!(matches!(qpsk_map(&[0, 1, 0]), Err(Error::OddBitCount(3))));
    }

    #[test]
    fn qpsk_survives_high_snr_noise() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut errors = 0usize;
        for _ in 0..10_000 {
            let bits = [rng.gen_range(0..2u8), rng.gen_range(0..2u8)];
            let sym = qpsk_map(&bits).unwrap().symbols[0]
                + Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * 1e-3;
            let out = qpsk_demap(&ChirpDomainVector::new(vec![sym]));
            if out != bits {
                errors += 1;
            }
        }
        assert_eq!(errors, 0);
    }

    #[test]
    fn quasi_periodic_extension() {
        // s[n+N] = exp(j*2*pi*c1*(N^2 + 2*N*n)) * s[n], checked through the
        // prefix construction at 1e-12.
        let mut rng = StdRng::seed_from_u64(8);
        let p = WaveformParams::new(
            16,
            1.0,
            0,
            C2::Value(0.17),
            4,
            0.0,
            GeometryMode::Monostatic,
        )
        .unwrap()
        .with_c1(0.031);
        let s = idaft(&random_qpsk(16, &mut rng), &p).unwrap();
        let framed = add_cpp(&s, &p).unwrap();
        for i in 0..4 {
            let n = i as i64 - 4;
            let lhs = s.samples[(n + 16) as usize];
            let rhs = framed.samples[i] / p.cpp_phase(n);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_phase_factor_is_unity() {
        let p = params_256();
        for n in -(p.cp_len() as i64)..0 {
            let ph = p.cpp_phase(n);
            assert!((ph - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn transform_preserves_energy() {
        let mut rng = StdRng::seed_from_u64(9);
        for c2 in [C2::ZERO, C2::Value(1.0 / 65536.0), C2::Value(3e100)] {
            let p = params_256().with_c2(c2);
            let x = random_qpsk(256, &mut rng);
            let s = idaft(&x, &p).unwrap();
            let ex: f64 = x.symbols.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(s.energy(), ex, epsilon = 1e-10);
        }
    }
}
