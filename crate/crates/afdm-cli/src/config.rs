//! Flat, line-oriented experiment configuration.
//!
//! Grammar: blank lines and `#` comments are ignored; `[section]` opens a
//! section; `key = value` assigns within it. Unknown sections or keys are
//! rejected. Repeatable keys (`target`, `snr_db`) accumulate in order.
//!
//! Sections and keys:
//!
//! ```text
//! [waveform]   subcarriers, spacing_hz, k_max, c2, cp_len, carrier_hz, geometry
//! [experiment] kind, seed
//! [targets]    target = <range_m> <velocity_mps> <gain_re> <gain_im>
//! [snr]        snr_db = <dB or inf>
//! [cfar]       guard, train, pfa
//! [ber]        waveforms, paths, max_bits, max_errors
//! [ambiguity]  c2_list, variant, surface_max_lag, surface_doppler_points
//! [complexity] sweep, variants
//! ```
//!
//! `c2` accepts a decimal (`0`, `3e100`), an integer rational (`1/65536`)
//! or the shorthand `1/Nc^2`, which resolves against `subcarriers` with
//! exact modular phase arithmetic downstream.

use afdm_core::channel::TargetGeometry;
use afdm_core::comm::WaveformKind;
use afdm_core::estimator::{CfarConfig, MatchedFilterKind};
use afdm_core::{GeometryMode, WaveformParams, C2};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A config problem: the file is structurally or semantically invalid.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConfigError(msg.into()))
}

/// Which experiment family a config drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    AmbiguityCut,
    AmbiguitySurface,
    RangeProfile,
    Ber,
    Complexity,
}

impl ExperimentKind {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "ambiguity-cut" => Ok(Self::AmbiguityCut),
            "ambiguity-surface" => Ok(Self::AmbiguitySurface),
            "range-profile" => Ok(Self::RangeProfile),
            "ber" => Ok(Self::Ber),
            "complexity" => Ok(Self::Complexity),
            other => err(format!("unknown experiment kind '{other}'")),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::AmbiguityCut => "ambiguity-cut",
            Self::AmbiguitySurface => "ambiguity-surface",
            Self::RangeProfile => "range-profile",
            Self::Ber => "ber",
            Self::Complexity => "complexity",
        }
    }
}

/// Delay-cut flavor for ambiguity outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutVariant {
    Periodic,
    Aperiodic,
}

/// Fully parsed and validated experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub params: WaveformParams,
    pub targets: Vec<TargetGeometry>,
    pub snr_db: Vec<f64>,
    pub cfar: CfarConfig,
    pub ber_waveforms: Vec<WaveformKind>,
    pub ber_paths: usize,
    pub ber_max_bits: u64,
    pub ber_max_errors: u64,
    pub ambiguity_c2: Vec<C2>,
    pub cut_variant: CutVariant,
    pub surface_max_lag: usize,
    pub surface_doppler_points: usize,
    pub complexity_sweep: Vec<usize>,
    pub complexity_variants: Vec<MatchedFilterKind>,
    /// Canonical echo of the accepted configuration.
    echo: String,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        RawConfig::parse(text)?.build()
    }

    /// Canonical config text reproducing this run (seed included), suitable
    /// for re-ingestion.
    pub fn echo(&self, seed: u64) -> String {
        let mut out = String::new();
        for line in self.echo.lines() {
            if line.starts_with("seed = ") {
                let _ = writeln!(out, "seed = {seed}");
            } else {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

/// Section -> ordered (key, value) pairs.
struct RawConfig {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<(String, Vec<(String, String)>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return err(format!("line {}: unterminated section header", lineno + 1));
                };
                sections.push((name.trim().to_string(), Vec::new()));
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected 'key = value'", lineno + 1));
            };
            let Some((_, entries)) = sections.last_mut() else {
                return err(format!("line {}: key before any [section]", lineno + 1));
            };
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(Self { sections })
    }

    fn build(self) -> Result<ExperimentConfig> {
        const KNOWN: &[&str] = &[
            "waveform",
            "experiment",
            "targets",
            "snr",
            "cfar",
            "ber",
            "ambiguity",
            "complexity",
        ];
        let mut maps: BTreeMap<&str, Vec<(String, String)>> = BTreeMap::new();
        for (name, entries) in &self.sections {
            let Some(&known) = KNOWN.iter().find(|k| **k == name.as_str()) else {
                return err(format!("unknown section [{name}]"));
            };
            maps.entry(known).or_default().extend(entries.clone());
        }

        let single = |section: &str, key: &str| -> Result<Option<String>> {
            let Some(entries) = maps.get(section) else {
                return Ok(None);
            };
            let hits: Vec<&String> = entries
                .iter()
                .filter(|(k, _)| k == key)
                .map(|(_, v)| v)
                .collect();
            match hits.len() {
                0 => Ok(None),
                1 => Ok(Some(hits[0].clone())),
                _ => err(format!("[{section}] {key} given more than once")),
            }
        };
        let require = |section: &str, key: &str| -> Result<String> {
            single(section, key)?
                .ok_or_else(|| ConfigError(format!("[{section}] is missing required key '{key}'")))
        };
        let repeated = |section: &str, key: &str| -> Vec<String> {
            maps.get(section)
                .map(|entries| {
                    entries
                        .iter()
                        .filter(|(k, _)| k == key)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .unwrap_or_default()
        };

        // reject unknown keys section by section
        let allowed: &[(&str, &[&str])] = &[
            (
                "waveform",
                &[
                    "subcarriers",
                    "spacing_hz",
                    "k_max",
                    "c2",
                    "cp_len",
                    "carrier_hz",
                    "geometry",
                ],
            ),
            ("experiment", &["kind", "seed"]),
            ("targets", &["target"]),
            ("snr", &["snr_db"]),
            ("cfar", &["guard", "train", "pfa"]),
            ("ber", &["waveforms", "paths", "max_bits", "max_errors"]),
            (
                "ambiguity",
                &[
                    "c2_list",
                    "variant",
                    "surface_max_lag",
                    "surface_doppler_points",
                ],
            ),
            ("complexity", &["sweep", "variants"]),
        ];
        for (section, keys) in allowed {
            if let Some(entries) = maps.get(section) {
                for (k, _) in entries {
                    if !keys.contains(&k.as_str()) {
                        return err(format!("unknown key '{k}' in section [{section}]"));
                    }
                }
            }
        }

        let subcarriers: usize = parse_num(&require("waveform", "subcarriers")?, "subcarriers")?;
        let spacing_hz: f64 = parse_num(&require("waveform", "spacing_hz")?, "spacing_hz")?;
        let k_max: u32 = parse_num(&require("waveform", "k_max")?, "k_max")?;
        let cp_len: usize = parse_num(&require("waveform", "cp_len")?, "cp_len")?;
        let carrier_hz: f64 = match single("waveform", "carrier_hz")? {
            Some(v) => parse_num(&v, "carrier_hz")?,
            None => 0.0,
        };
        let geometry = match single("waveform", "geometry")?.as_deref() {
            None | Some("monostatic") => GeometryMode::Monostatic,
            Some("bistatic") => GeometryMode::Bistatic,
            Some(other) => return err(format!("unknown geometry '{other}'")),
        };
        let c2 = parse_c2(
            &single("waveform", "c2")?.unwrap_or_else(|| "0".to_string()),
            subcarriers,
        )?;
        let params = WaveformParams::new(
            subcarriers,
            spacing_hz,
            k_max,
            c2,
            cp_len,
            carrier_hz,
            geometry,
        )
        .map_err(|e| ConfigError(format!("[waveform] {e}")))?;

        let kind = ExperimentKind::parse(&require("experiment", "kind")?)?;
        let seed: u64 = match single("experiment", "seed")? {
            Some(v) => parse_num(&v, "seed")?,
            None => 0,
        };

        let mut targets = Vec::new();
        for line in repeated("targets", "target") {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return err(format!(
                    "target '{line}': expected '<range_m> <velocity_mps> <gain_re> <gain_im>'"
                ));
            }
            let vals: Vec<f64> = parts
                .iter()
                .map(|p| parse_num(p, "target"))
                .collect::<Result<_>>()?;
            targets.push(TargetGeometry::monostatic(
                vals[0],
                vals[1],
                Complex64::new(vals[2], vals[3]),
            ));
        }

        let snr_db = repeated("snr", "snr_db")
            .iter()
            .map(|v| {
                if v == "inf" {
                    Ok(f64::INFINITY)
                } else {
                    parse_num(v, "snr_db")
                }
            })
            .collect::<Result<Vec<f64>>>()?;

        let cfar = CfarConfig {
            guard: match single("cfar", "guard")? {
                Some(v) => parse_num(&v, "guard")?,
                None => CfarConfig::default().guard,
            },
            train: match single("cfar", "train")? {
                Some(v) => parse_num(&v, "train")?,
                None => CfarConfig::default().train,
            },
            pfa: match single("cfar", "pfa")? {
                Some(v) => parse_num(&v, "pfa")?,
                None => CfarConfig::default().pfa,
            },
        };

        let ber_waveforms = match single("ber", "waveforms")? {
            Some(list) => list
                .split(',')
                .map(|tok| parse_waveform(tok.trim(), subcarriers))
                .collect::<Result<_>>()?,
            None => vec![WaveformKind::Afdm(c2)],
        };
        let ber_paths = match single("ber", "paths")? {
            Some(v) => parse_num(&v, "paths")?,
            None => 3,
        };
        let ber_max_bits = match single("ber", "max_bits")? {
            Some(v) => parse_num(&v, "max_bits")?,
            None => 1_000_000,
        };
        let ber_max_errors = match single("ber", "max_errors")? {
            Some(v) => parse_num(&v, "max_errors")?,
            None => 200,
        };

        let ambiguity_c2 = match single("ambiguity", "c2_list")? {
            Some(list) => list
                .split(',')
                .map(|tok| parse_c2(tok.trim(), subcarriers))
                .collect::<Result<_>>()?,
            None => vec![c2],
        };
        let cut_variant = match single("ambiguity", "variant")?.as_deref() {
            None | Some("periodic") => CutVariant::Periodic,
            Some("aperiodic") => CutVariant::Aperiodic,
            Some(other) => return err(format!("unknown cut variant '{other}'")),
        };
        let surface_max_lag = match single("ambiguity", "surface_max_lag")? {
            Some(v) => parse_num(&v, "surface_max_lag")?,
            None => 32,
        };
        let surface_doppler_points = match single("ambiguity", "surface_doppler_points")? {
            Some(v) => parse_num(&v, "surface_doppler_points")?,
            None => 33,
        };

        let complexity_sweep = match single("complexity", "sweep")? {
            Some(list) => list
                .split(',')
                .map(|tok| parse_num(tok.trim(), "sweep"))
                .collect::<Result<_>>()?,
            None => vec![64, 128, 256, 512, 1024, 2048, 4096],
        };
        let complexity_variants = match single("complexity", "variants")? {
            Some(list) => list
                .split(',')
                .map(|tok| match tok.trim() {
                    "linear" => Ok(MatchedFilterKind::Linear),
                    "circular" => Ok(MatchedFilterKind::Circular),
                    "fft" => Ok(MatchedFilterKind::Fft),
                    other => err(format!("unknown estimator variant '{other}'")),
                })
                .collect::<Result<_>>()?,
            None => vec![
                MatchedFilterKind::Linear,
                MatchedFilterKind::Circular,
                MatchedFilterKind::Fft,
            ],
        };

        // semantic checks tied to the experiment kind
        match kind {
            ExperimentKind::RangeProfile => {
                if targets.is_empty() {
                    return err("range-profile requires at least one target");
                }
                if snr_db.is_empty() {
                    return err("range-profile requires at least one snr_db entry");
                }
            }
            ExperimentKind::Ber => {
                if snr_db.is_empty() {
                    return err("ber requires at least one snr_db entry");
                }
                if ber_paths == 0 {
                    return err("ber requires paths >= 1");
                }
            }
            ExperimentKind::AmbiguityCut | ExperimentKind::AmbiguitySurface => {
                if ambiguity_c2.is_empty() {
                    return err("ambiguity requires a nonempty c2_list");
                }
            }
            ExperimentKind::Complexity => {
                if complexity_sweep.len() < 2 {
                    return err("complexity requires a sweep of at least two sizes");
                }
            }
        }

        let echo = build_echo(
            &params,
            kind,
            seed,
            &targets,
            &snr_db,
            &cfar,
            &ber_waveforms,
            ber_paths,
            ber_max_bits,
            ber_max_errors,
            &ambiguity_c2,
            cut_variant,
            surface_max_lag,
            surface_doppler_points,
            &complexity_sweep,
            &complexity_variants,
        );

        Ok(ExperimentConfig {
            kind,
            seed,
            params,
            targets,
            snr_db,
            cfar,
            ber_waveforms,
            ber_paths,
            ber_max_bits,
            ber_max_errors,
            ambiguity_c2,
            cut_variant,
            surface_max_lag,
            surface_doppler_points,
            complexity_sweep,
            complexity_variants,
            echo,
        })
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| ConfigError(format!("cannot parse {what} value '{s}'")))
}

/// `0`, a decimal like `3e100`, an integer rational `p/q`, or `K/Nc^2`.
pub fn parse_c2(s: &str, subcarriers: usize) -> Result<C2> {
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = parse_num(num.trim(), "c2 numerator")?;
        let den = den.trim();
        let den: i64 = if den.eq_ignore_ascii_case("nc^2") {
            (subcarriers * subcarriers) as i64
        } else {
            parse_num(den, "c2 denominator")?
        };
        if den <= 0 {
            return err(format!("c2 denominator must be positive in '{s}'"));
        }
        Ok(C2::Ratio { num, den })
    } else {
        let v: f64 = parse_num(s, "c2")?;
        Ok(C2::Value(v))
    }
}

fn parse_waveform(tok: &str, subcarriers: usize) -> Result<WaveformKind> {
    match tok {
        "ofdm" => Ok(WaveformKind::Ofdm),
        "otfs" => Ok(WaveformKind::Otfs),
        _ => match tok.strip_prefix("afdm:") {
            Some(c2) => Ok(WaveformKind::Afdm(parse_c2(c2, subcarriers)?)),
            None => err(format!(
                "unknown waveform '{tok}' (expected afdm:<c2>, ofdm or otfs)"
            )),
        },
    }
}

fn c2_text(c2: C2) -> String {
    match c2 {
        C2::Value(v) => format!("{v}"),
        C2::Ratio { num, den } => format!("{num}/{den}"),
    }
}

#[allow(clippy::too_many_arguments)]
fn build_echo(
    params: &WaveformParams,
    kind: ExperimentKind,
    seed: u64,
    targets: &[TargetGeometry],
    snr_db: &[f64],
    cfar: &CfarConfig,
    ber_waveforms: &[WaveformKind],
    ber_paths: usize,
    ber_max_bits: u64,
    ber_max_errors: u64,
    ambiguity_c2: &[C2],
    cut_variant: CutVariant,
    surface_max_lag: usize,
    surface_doppler_points: usize,
    complexity_sweep: &[usize],
    complexity_variants: &[MatchedFilterKind],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[waveform]");
    let _ = writeln!(out, "subcarriers = {}", params.n_subcarriers());
    let _ = writeln!(out, "spacing_hz = {}", params.subcarrier_spacing_hz());
    let _ = writeln!(out, "k_max = {}", params.k_max());
    let _ = writeln!(out, "c2 = {}", c2_text(params.c2()));
    let _ = writeln!(out, "cp_len = {}", params.cp_len());
    let _ = writeln!(out, "carrier_hz = {}", params.carrier_hz());
    let _ = writeln!(
        out,
        "geometry = {}",
        match params.geometry() {
            GeometryMode::Monostatic => "monostatic",
            GeometryMode::Bistatic => "bistatic",
        }
    );
    let _ = writeln!(out, "\n[experiment]");
    let _ = writeln!(out, "kind = {}", kind.as_str());
    let _ = writeln!(out, "seed = {seed}");
    if !targets.is_empty() {
        let _ = writeln!(out, "\n[targets]");
        for t in targets {
            let _ = writeln!(
                out,
                "target = {} {} {} {}",
                t.r_tx_m, t.velocity_mps, t.gain.re, t.gain.im
            );
        }
    }
    if !snr_db.is_empty() {
        let _ = writeln!(out, "\n[snr]");
        for s in snr_db {
            if s.is_infinite() {
                let _ = writeln!(out, "snr_db = inf");
            } else {
                let _ = writeln!(out, "snr_db = {s}");
            }
        }
    }
    let _ = writeln!(out, "\n[cfar]");
    let _ = writeln!(out, "guard = {}", cfar.guard);
    let _ = writeln!(out, "train = {}", cfar.train);
    let _ = writeln!(out, "pfa = {}", cfar.pfa);
    let _ = writeln!(out, "\n[ber]");
    let waveforms: Vec<String> = ber_waveforms
        .iter()
        .map(|w| match w {
            WaveformKind::Afdm(c2) => format!("afdm:{}", c2_text(*c2)),
            WaveformKind::Ofdm => "ofdm".to_string(),
            WaveformKind::Otfs => "otfs".to_string(),
        })
        .collect();
    let _ = writeln!(out, "waveforms = {}", waveforms.join(","));
    let _ = writeln!(out, "paths = {ber_paths}");
    let _ = writeln!(out, "max_bits = {ber_max_bits}");
    let _ = writeln!(out, "max_errors = {ber_max_errors}");
    let _ = writeln!(out, "\n[ambiguity]");
    let c2s: Vec<String> = ambiguity_c2.iter().map(|&c| c2_text(c)).collect();
    let _ = writeln!(out, "c2_list = {}", c2s.join(","));
    let _ = writeln!(
        out,
        "variant = {}",
        match cut_variant {
            CutVariant::Periodic => "periodic",
            CutVariant::Aperiodic => "aperiodic",
        }
    );
    let _ = writeln!(out, "surface_max_lag = {surface_max_lag}");
    let _ = writeln!(out, "surface_doppler_points = {surface_doppler_points}");
    let _ = writeln!(out, "\n[complexity]");
    let sweep: Vec<String> = complexity_sweep.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(out, "sweep = {}", sweep.join(","));
    let variants: Vec<String> = complexity_variants
        .iter()
        .map(|v| v.label().to_string())
        .collect();
    let _ = writeln!(out, "variants = {}", variants.join(","));
    out
}
