//! End-to-end ranging scenarios: pilot frame, target channel, matched
//! filter, CFAR, and the seeded detection-rate Monte Carlo.

use crate::channel::{add_awgn, apply_channel, discretize_target, ChannelSpec, TargetGeometry};
use crate::estimator::{ca_cfar, matched_filter_fft, CfarConfig, DetectionReport, RangeProfile};
use crate::waveform::{add_cpp, pilot, remove_cpp, WaveformParams};
use crate::Result;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

/// A ranging experiment: waveform, targets and detector settings.
#[derive(Clone, Debug)]
pub struct RadarScenario {
    pub params: WaveformParams,
    pub targets: Vec<TargetGeometry>,
    pub cfar: CfarConfig,
}

/// Profile and detections of one sounding.
#[derive(Clone, Debug)]
pub struct SoundingResult {
    pub profile: RangeProfile,
    pub report: DetectionReport,
}

impl RadarScenario {
    pub fn new(params: WaveformParams, targets: Vec<TargetGeometry>, cfar: CfarConfig) -> Self {
        Self {
            params,
            targets,
            cfar,
        }
    }

    /// Delay bins the targets land on after discretization.
    pub fn expected_bins(&self) -> Result<Vec<i64>> {
        self.targets
            .iter()
            .map(|t| Ok(discretize_target(t, &self.params)?.delay_bins as i64))
            .collect()
    }

    fn channel(&self, gain_override: Option<&[Complex64]>) -> Result<ChannelSpec> {
        let mut taps = Vec::with_capacity(self.targets.len());
        for (i, t) in self.targets.iter().enumerate() {
            let mut tap = discretize_target(t, &self.params)?;
            if let Some(gains) = gain_override {
                tap.gain = gains[i];
            }
            taps.push(tap);
        }
        ChannelSpec::new(taps)
    }

    /// Transmits the prefixed pilot through the target channel at the given
    /// SNR (dB, `INFINITY` for noiseless), runs the transform-domain matched
    /// filter and CFAR. Deterministic per seed.
    pub fn sound(&self, snr_db: f64, seed: u64) -> Result<SoundingResult> {
        self.sound_with_gains(snr_db, seed, None)
    }

    fn sound_with_gains(
        &self,
        snr_db: f64,
        seed: u64,
        gains: Option<&[Complex64]>,
    ) -> Result<SoundingResult> {
        let s = pilot(&self.params);
        let tx = add_cpp(&s, &self.params)?;
        let r = apply_channel(&tx, &self.channel(gains)?)?;
        let noisy = add_awgn(&r, snr_db, seed);
        let rx = remove_cpp(&noisy.signal, &self.params)?;
        let profile = matched_filter_fft(&rx, &s, &self.params)?;
        let report = ca_cfar(&profile, &self.cfar)?;
        Ok(SoundingResult { profile, report })
    }

    /// One fluctuating-target trial: every target gain is redrawn as a
    /// zero-mean unit-variance complex Gaussian (Swerling-1 fluctuation),
    /// then one noisy sounding runs. Returns whether every expected bin
    /// was detected.
    pub fn fluctuating_trial(&self, snr_db: f64, seed: u64) -> Result<bool> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let norm = Normal::new(0.0, (0.5f64).sqrt()).expect("valid std");
        let gains: Vec<Complex64> = (0..self.targets.len())
            .map(|_| Complex64::new(norm.sample(&mut rng), norm.sample(&mut rng)))
            .collect();
        let result = self.sound_with_gains(snr_db, seed ^ 0xA5A5_A5A5_A5A5_A5A5, Some(&gains))?;
        let detected = result.report.bins();
        Ok(self.expected_bins()?.iter().all(|b| detected.contains(b)))
    }

    /// Fraction of seeded fluctuating-target trials that detect every
    /// target at its expected bin.
    pub fn detection_rate(&self, snr_db: f64, trials: u64, seed: u64) -> Result<f64> {
        let mut hits = 0u64;
        for t in 0..trials {
            if self.fluctuating_trial(snr_db, seed.wrapping_add(t.wrapping_mul(0x9E37_79B9)))? {
                hits += 1;
            }
        }
        Ok(hits as f64 / trials as f64)
    }
}
