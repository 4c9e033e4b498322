//! Matched-filter range estimation, CA-CFAR detection and instrumented
//! complexity measurement.
//!
//! Three estimator variants produce the same delay profile by different
//! routes: a linear cross-correlation over the prefixed frame, a circular
//! correlation after prefix removal, and the transform-domain product
//! IFFT(FFT(r) · conj(FFT(s))). The counted variants tally complex
//! multiplications so the quadratic-versus-N·log N scaling can be verified
//! directly rather than by wall clock.

use crate::counting::{counted_fft, OpCount};
use crate::error::Error;
use crate::fft::{fft_in_place, ifft_in_place};
use crate::waveform::{TimeSignal, WaveformParams};
use crate::Result;
use num_complex::Complex64;

/// Complex delay profile `ĝ[l]` with its bin-to-range scale.
#[derive(Clone, Debug)]
pub struct RangeProfile {
    /// Correlator output per delay bin, starting at `first_bin`.
    pub values: Vec<Complex64>,
    /// Signed delay of `values[0]` (negative for the linear variant).
    pub first_bin: i64,
    /// Meters per delay bin.
    pub bin_to_meters: f64,
}

impl RangeProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    /// Signed delay bin of the strongest cell.
    pub fn peak_bin(&self) -> i64 {
        let idx = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.first_bin + idx as i64
    }

    /// Range in meters of a signed delay bin.
    pub fn bin_range_m(&self, bin: i64) -> f64 {
        bin as f64 * self.bin_to_meters
    }
}

fn check_prefixed(r: &TimeSignal, s: &TimeSignal) -> Result<()> {
    if r.prefix_len == 0 || s.prefix_len == 0 || r.prefix_len != s.prefix_len {
        return Err(Error::PrefixMismatch {
            expected: s.prefix_len.max(1),
            got: r.prefix_len,
        });
    }
    if r.len() != s.len() {
        return Err(Error::LengthMismatch {
            expected: s.len(),
            got: r.len(),
        });
    }
    Ok(())
}

fn check_bare(r: &TimeSignal, s: &TimeSignal) -> Result<()> {
    if r.prefix_len != 0 || s.prefix_len != 0 {
        return Err(Error::PrefixPresent(r.prefix_len.max(s.prefix_len)));
    }
    if r.len() != s.len() {
        return Err(Error::LengthMismatch {
            expected: s.len(),
            got: r.len(),
        });
    }
    if r.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok(())
}

/// Linear pulse compression over the prefixed frame:
/// `ĝ[l] = Σ_k r[k] s*[k−l]` for `l = −L .. N_body−1`.
pub fn matched_filter_linear(
    r: &TimeSignal,
    s: &TimeSignal,
    params: &WaveformParams,
) -> Result<RangeProfile> {
    Ok(matched_filter_linear_counted(r, s, params)?.0)
}

/// Linear variant with a tally of complex multiplications and additions.
pub fn matched_filter_linear_counted(
    r: &TimeSignal,
    s: &TimeSignal,
    params: &WaveformParams,
) -> Result<(RangeProfile, OpCount)> {
    check_prefixed(r, s)?;
    let prefix = s.prefix_len as i64;
    let body = s.body_len() as i64;
    let mut ops = OpCount::new();
    let mut values = Vec::with_capacity((prefix + body) as usize);
    for lag in -prefix..body {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -prefix..body {
            acc += r.at(k) * s.at(k - lag).conj();
        }
        // one product and one accumulate per frame sample, per lag
        ops.mult((prefix + body) as u64);
        ops.add((prefix + body) as u64);
        values.push(acc);
    }
    let profile = RangeProfile {
        values,
        first_bin: -prefix,
        bin_to_meters: params.bin_to_meters(),
    };
    Ok((profile, ops))
}

/// Circular correlation after prefix removal:
/// `ĝ[l] = Σ_n r[n] s*[(n−l) mod N]`, `l = 0..N−1`.
pub fn matched_filter_circular(
    r: &TimeSignal,
    s: &TimeSignal,
    params: &WaveformParams,
) -> Result<RangeProfile> {
    Ok(matched_filter_circular_counted(r, s, params)?.0)
}

/// Circular variant with an operation tally.
pub fn matched_filter_circular_counted(
    r: &TimeSignal,
    s: &TimeSignal,
    params: &WaveformParams,
) -> Result<(RangeProfile, OpCount)> {
    check_bare(r, s)?;
    let n = r.len();
    let mut ops = OpCount::new();
    let mut values = Vec::with_capacity(n);
    for lag in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += r.samples[i] * s.samples[(n + i - lag) % n].conj();
        }
        ops.mult(n as u64);
        ops.add(n as u64);
        values.push(acc);
    }
    let profile = RangeProfile {
        values,
        first_bin: 0,
        bin_to_meters: params.bin_to_meters(),
    };
    Ok((profile, ops))
}

/// Transform-domain correlation `IFFT(FFT(r) · conj(FFT(s))) / N`.
pub fn matched_filter_fft(
    r: &TimeSignal,
    s: &TimeSignal,
    params: &WaveformParams,
) -> Result<RangeProfile> {
    check_bare(r, s)?;
    let n = r.len();
    let mut rr = r.samples.clone();
    let mut ss = s.samples.clone();
    fft_in_place(&mut rr);
    fft_in_place(&mut ss);
    for (a, b) in rr.iter_mut().zip(&ss) {
        *a *= b.conj();
    }
    ifft_in_place(&mut rr);
    let scale = 1.0 / n as f64;
    for z in rr.iter_mut() {
        *z *= scale;
    }
    Ok(RangeProfile {
        values: rr,
        first_bin: 0,
        bin_to_meters: params.bin_to_meters(),
    })
}

/// Transform-domain variant routed through the counting FFT.
pub fn matched_filter_fft_counted(
    r: &TimeSignal,
    s: &TimeSignal,
    params: &WaveformParams,
) -> Result<(RangeProfile, OpCount)> {
    check_bare(r, s)?;
    let n = r.len();
    let mut ops = OpCount::new();
    let mut rr = r.samples.clone();
    let mut ss = s.samples.clone();
    counted_fft(&mut rr, false, &mut ops)?;
    counted_fft(&mut ss, false, &mut ops)?;
    for (a, b) in rr.iter_mut().zip(&ss) {
        *a *= b.conj();
    }
    ops.mult(n as u64);
    counted_fft(&mut rr, true, &mut ops)?;
    let scale = 1.0 / n as f64;
    for z in rr.iter_mut() {
        *z *= scale;
    }
    ops.mult(n as u64);
    let profile = RangeProfile {
        values: rr,
        first_bin: 0,
        bin_to_meters: params.bin_to_meters(),
    };
    Ok((profile, ops))
}

/// Cell-averaging CFAR settings.
#[derive(Clone, Copy, Debug)]
pub struct CfarConfig {
    /// Guard cells on each side of the cell under test.
    pub guard: usize,
    /// Training cells on each side, beyond the guard band.
    pub train: usize,
    /// Design false-alarm probability.
    pub pfa: f64,
}

impl Default for CfarConfig {
    fn default() -> Self {
        Self {
            guard: 2,
            train: 8,
            pfa: 1e-3,
        }
    }
}

/// One CFAR detection.
#[derive(Clone, Copy, Debug)]
pub struct Detection {
    /// Signed delay bin.
    pub bin: i64,
    /// Range estimate in meters.
    pub range_m: f64,
    /// Profile magnitude `|ĝ|` at the bin.
    pub magnitude: f64,
    /// Magnitude-domain threshold the cell exceeded.
    pub threshold: f64,
}

/// CFAR output: detections in bin order.
#[derive(Clone, Debug)]
pub struct DetectionReport {
    pub detections: Vec<Detection>,
    pub pfa: f64,
}

impl DetectionReport {
    pub fn bins(&self) -> Vec<i64> {
        self.detections.iter().map(|d| d.bin).collect()
    }

    pub fn ranges_m(&self) -> Vec<f64> {
        self.detections.iter().map(|d| d.range_m).collect()
    }
}

/// Fraction of the profile peak power below which a cell never detects.
/// Keeps a noiseless profile's numerical residue from firing the detector.
const DETECTION_FLOOR: f64 = 1e-12;

/// Cell-averaging CFAR with a circular window over the profile.
///
/// Thresholding happens in the power domain: a cell fires when its power
/// exceeds `α · mean(training powers)` with
/// `α = 2·train·(pfa^(−1/(2·train)) − 1)`. A detection is then pruned only
/// when a strictly stronger cell inside its guard distance is *not* itself
/// a detection — adjacent detections of comparable strength both survive,
/// while shoulders of a single peak do not.
pub fn ca_cfar(profile: &RangeProfile, config: &CfarConfig) -> Result<DetectionReport> {
    let n = profile.len();
    if config.train == 0 {
        return Err(Error::NoTrainingCells);
    }
    if !(config.pfa > 0.0 && config.pfa < 1.0) {
        return Err(Error::BadPfa(config.pfa));
    }
    if 2 * (config.guard + config.train) + 1 > n {
        return Err(Error::WindowTooLarge {
            window: 2 * (config.guard + config.train) + 1,
            len: n,
        });
    }

    let power: Vec<f64> = profile.values.iter().map(|z| z.norm_sqr()).collect();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Ok(DetectionReport {
            detections: Vec::new(),
            pfa: config.pfa,
        });
    }
    let floor = DETECTION_FLOOR * peak;
    let t = 2.0 * config.train as f64;
    let alpha = t * (config.pfa.powf(-1.0 / t) - 1.0);

    let mut detected = vec![false; n];
    let mut thresholds = vec![0.0f64; n];
    for i in 0..n {
        let mut sum = 0.0;
        for k in 1..=config.train {
            let off = config.guard + k;
            sum += power[(i + off) % n];
            sum += power[(i + n - off) % n];
        }
        let threshold = alpha * sum / t;
        thresholds[i] = threshold;
        detected[i] = power[i] > threshold && power[i] > floor;
    }

    let mut detections = Vec::new();
    'cells: for i in 0..n {
        if !detected[i] {
            continue;
        }
        for d in 1..=config.guard {
            for j in [(i + d) % n, (i + n - d) % n] {
                if power[j] > power[i] && !detected[j] {
                    continue 'cells;
                }
            }
        }
        detections.push(Detection {
            bin: profile.first_bin + i as i64,
            range_m: profile.bin_range_m(profile.first_bin + i as i64),
            magnitude: power[i].sqrt(),
            threshold: thresholds[i].sqrt(),
        });
    }
    Ok(DetectionReport {
        detections,
        pfa: config.pfa,
    })
}

/// Which estimator a complexity sweep measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchedFilterKind {
    Linear,
    Circular,
    Fft,
}

impl MatchedFilterKind {
    pub fn label(&self) -> &'static str {
        match self {
            MatchedFilterKind::Linear => "linear",
            MatchedFilterKind::Circular => "circular",
            MatchedFilterKind::Fft => "fft",
        }
    }
}

/// Measured multiplication counts of one estimator across frame sizes.
#[derive(Clone, Debug)]
pub struct ComplexityTable {
    pub kind: MatchedFilterKind,
    /// (N, complex multiplications) per sweep point.
    pub rows: Vec<(usize, u64)>,
}

impl ComplexityTable {
    /// Least-squares slope of log(mults) against log(N).
    pub fn loglog_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .map(|&(n, m)| ((n as f64).ln(), (m as f64).ln()))
            .collect();
        let k = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (k * sxy - sx * sy) / (k * sxx - sx * sx)
    }
}

/// Runs one estimator over the sweep with counting arithmetic. The probe
/// correlates a frame against itself; only the counts matter, so the
/// content is a fixed full-support ramp.
pub fn complexity_probe(
    kind: MatchedFilterKind,
    n_sweep: &[usize],
    prefix_len: usize,
) -> Result<ComplexityTable> {
    let mut rows = Vec::with_capacity(n_sweep.len());
    for &n in n_sweep {
        let body: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0, (i as f64 + 1.0) / n as f64))
            .collect();
        // placeholder params; only bin_to_meters flows into the profile
        let params = WaveformParams::new(
            n,
            1.0,
            1,
            crate::waveform::C2::ZERO,
            prefix_len.min(n.saturating_sub(1)),
            0.0,
            crate::waveform::GeometryMode::Monostatic,
        )?;
        let ops = match kind {
            MatchedFilterKind::Linear => {
                let l = params.cp_len();
                let mut samples = body[n - l..].to_vec();
                samples.extend_from_slice(&body);
                let s = TimeSignal::new(samples, l, n as f64);
                matched_filter_linear_counted(&s, &s, &params)?.1
            }
            MatchedFilterKind::Circular => {
                let s = TimeSignal::new(body, 0, n as f64);
                matched_filter_circular_counted(&s, &s, &params)?.1
            }
            MatchedFilterKind::Fft => {
                let s = TimeSignal::new(body, 0, n as f64);
                matched_filter_fft_counted(&s, &s, &params)?.1
            }
        };
        rows.push((n, ops.mults));
    }
    Ok(ComplexityTable { kind, rows })
}
