//! Experiment runners behind the subcommands, plus `summarize`.

use crate::config::{CutVariant, ExperimentConfig, ExperimentKind};
use crate::output::{fmt_f64, tag, write_csv, write_sidecar};
use afdm_core::ambiguity::{
    abf_metrics, ambiguity_surface, zero_doppler_cut, zero_doppler_cut_periodic,
};
use afdm_core::comm::{ber_curves, BerConfig, ChannelModel};
use afdm_core::estimator::{complexity_probe, ComplexityTable, MatchedFilterKind};
use afdm_core::radar::RadarScenario;
use afdm_core::waveform::pilot;
use std::path::Path;

/// Failure classes mapped to process exit codes: validation problems exit
/// 1, runtime problems (I/O, numerics) exit 2.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<afdm_core::Error> for Failure {
    fn from(e: afdm_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Loads and validates a config, enforcing that its experiment kind is one
/// the invoked subcommand knows how to run.
pub fn load_config(path: &Path, allowed: &[ExperimentKind]) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let cfg = ExperimentConfig::parse(&text).map_err(|e| Failure::Validation(e.to_string()))?;
    if !allowed.contains(&cfg.kind) {
        return Err(Failure::Validation(format!(
            "config declares kind '{}', which this subcommand does not run",
            cfg.kind.as_str()
        )));
    }
    Ok(cfg)
}

/// Short filename tag for a chirp-rate value (`0`, `1_65536`, `3e100`).
fn c2_tag(c2: afdm_core::C2) -> String {
    match c2 {
        afdm_core::C2::Value(v) if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) => {
            tag(&format!("{v:e}"))
        }
        other => tag(&format!("{other}")),
    }
}

fn snr_label(snr_db: f64) -> String {
    if snr_db.is_infinite() {
        "inf".to_string()
    } else {
        tag(&format!("{snr_db}"))
    }
}

pub fn run_ambiguity(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<String>> {
    let mut written = Vec::new();
    for (i, &c2) in cfg.ambiguity_c2.iter().enumerate() {
        let params = cfg.params.clone().with_c2(c2);
        let s = pilot(&params);
        let name_tag = format!("{i}_{}", c2_tag(c2));
        match cfg.kind {
            ExperimentKind::AmbiguityCut => {
                let rows: Vec<Vec<String>> = match cfg.cut_variant {
                    CutVariant::Periodic => zero_doppler_cut_periodic(&s)?
                        .iter()
                        .enumerate()
                        .map(|(lag, z)| {
                            vec![
                                lag.to_string(),
                                fmt_f64(z.re),
                                fmt_f64(z.im),
                                fmt_f64(z.norm()),
                            ]
                        })
                        .collect(),
                    CutVariant::Aperiodic => {
                        let cut = zero_doppler_cut(&s)?;
                        let max_lag = cut.max_lag();
                        (-max_lag..=max_lag)
                            .map(|lag| {
                                let z = cut.at(lag);
                                vec![
                                    lag.to_string(),
                                    fmt_f64(z.re),
                                    fmt_f64(z.im),
                                    fmt_f64(z.norm()),
                                ]
                            })
                            .collect()
                    }
                };
                let name = format!("cut_{name_tag}.csv");
                write_csv(out, &name, "lag,re,im,magnitude", rows)?;
                written.push(name);
            }
            ExperimentKind::AmbiguitySurface => {
                let lag = cfg.surface_max_lag as i64;
                let delays: Vec<i64> = (-lag..=lag).collect();
                let span = (params.k_max() + 1) as f64 / params.duration_s();
                let pts = cfg.surface_doppler_points.max(2);
                let dopplers: Vec<f64> = (0..pts)
                    .map(|i| -span + 2.0 * span * i as f64 / (pts - 1) as f64)
                    .collect();
                let surface = ambiguity_surface(&s, &delays, &dopplers)?;
                let mut rows = Vec::new();
                for (r, &delay) in surface.delays.iter().enumerate() {
                    for (c, &nu) in surface.dopplers_hz.iter().enumerate() {
                        let z = surface.values[r][c];
                        rows.push(vec![
                            delay.to_string(),
                            fmt_f64(nu),
                            fmt_f64(z.re),
                            fmt_f64(z.im),
                            fmt_f64(z.norm()),
                        ]);
                    }
                }
                let name = format!("surface_{name_tag}.csv");
                write_csv(out, &name, "delay,doppler_hz,re,im,magnitude", rows)?;
                written.push(name);
            }
            _ => unreachable!("kind checked by load_config"),
        }
    }
    write_sidecar(out, &cfg.echo(seed))?;
    Ok(written)
}

pub fn run_range_profile(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<String>> {
    let scenario = RadarScenario::new(cfg.params.clone(), cfg.targets.clone(), cfg.cfar);
    let mut written = Vec::new();
    for (i, &snr_db) in cfg.snr_db.iter().enumerate() {
        let sounding = scenario.sound(snr_db, seed.wrapping_add(i as u64))?;
        let label = snr_label(snr_db);
        let profile = &sounding.profile;
        let rows = profile.values.iter().enumerate().map(|(k, z)| {
            let bin = profile.first_bin + k as i64;
            vec![
                bin.to_string(),
                fmt_f64(profile.bin_range_m(bin)),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(z.norm()),
            ]
        });
        let name = format!("profile_{label}.csv");
        write_csv(out, &name, "bin,range_m,re,im,magnitude", rows)?;
        written.push(name);

        let rows = sounding.report.detections.iter().map(|d| {
            vec![
                d.bin.to_string(),
                fmt_f64(d.range_m),
                fmt_f64(d.magnitude),
                fmt_f64(d.threshold),
            ]
        });
        let name = format!("detections_{label}.csv");
        write_csv(out, &name, "bin,range_m,magnitude,threshold", rows)?;
        written.push(name);
    }
    write_sidecar(out, &cfg.echo(seed))?;
    Ok(written)
}

pub fn run_ber(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<String>> {
    let ber_cfg = BerConfig {
        snr_db_grid: cfg.snr_db.clone(),
        channel: ChannelModel::Rayleigh {
            paths: cfg.ber_paths,
        },
        max_bits: cfg.ber_max_bits,
        max_errors: cfg.ber_max_errors,
        seed,
    };
    let curves = ber_curves(&cfg.ber_waveforms, &cfg.params, &ber_cfg)?;
    let mut rows = Vec::new();
    for curve in &curves {
        for p in &curve.points {
            rows.push(vec![
                curve.waveform.label(),
                fmt_f64(p.snr_db),
                p.bits_simulated.to_string(),
                p.bit_errors.to_string(),
                fmt_f64(p.ber()),
            ]);
        }
    }
    write_csv(out, "ber.csv", "waveform,snr_db,bits,errors,ber", rows)?;
    write_sidecar(out, &cfg.echo(seed))?;
    Ok(vec!["ber.csv".to_string()])
}

pub fn run_complexity(cfg: &ExperimentConfig, seed: u64, out: &Path) -> Result<Vec<String>> {
    if cfg.complexity_variants.contains(&MatchedFilterKind::Fft)
        && cfg.complexity_sweep.iter().any(|n| !n.is_power_of_two())
    {
        return Err(Failure::Validation(
            "fft variant requires power-of-two sweep sizes".to_string(),
        ));
    }
    let mut rows = Vec::new();
    for &kind in &cfg.complexity_variants {
        let table = complexity_probe(kind, &cfg.complexity_sweep, cfg.params.cp_len())?;
        for &(n, mults) in &table.rows {
            rows.push(vec![
                kind.label().to_string(),
                n.to_string(),
                mults.to_string(),
            ]);
        }
    }
    write_csv(out, "complexity.csv", "variant,n,complex_mults", rows)?;
    write_sidecar(out, &cfg.echo(seed))?;
    Ok(vec!["complexity.csv".to_string()])
}

/// Prints a human-readable digest of a result CSV, dispatching on its
/// header row.
pub fn summarize(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return Err(Failure::Validation("empty file".to_string()));
    };
    let body: Vec<Vec<&str>> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').collect())
        .collect();
    let mut out = String::new();
    match header {
        "bin,range_m,magnitude,threshold" => {
            out.push_str(&format!("{} detection(s)\n", body.len()));
            for row in &body {
                let [bin, range, mag, thr] = row[..] else {
                    return Err(Failure::Validation("malformed detection row".to_string()));
                };
                out.push_str(&format!(
                    "bin {bin}: range {:.2} m, magnitude {:.3}, threshold {:.3}\n",
                    parse_field(range)?,
                    parse_field(mag)?,
                    parse_field(thr)?
                ));
            }
        }
        "bin,range_m,re,im,magnitude" | "lag,re,im,magnitude" => {
            let mags: Vec<f64> = body
                .iter()
                .map(|row| parse_field(row[row.len() - 1]))
                .collect::<Result<_>>()?;
            let metrics = abf_metrics(&mags)?;
            let peak = mags
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            out.push_str(&format!(
                "{} bins, peak at row {peak}\nmainlobe width: {} bins\npslr: {:.2} dB\nislr: {:.2} dB\n",
                mags.len(),
                metrics.mainlobe_width_bins,
                metrics.pslr_db,
                metrics.islr_db
            ));
        }
        "waveform,snr_db,bits,errors,ber" => {
            out.push_str("waveform            snr_db      ber\n");
            for row in &body {
                let [wf, snr, _bits, _errors, ber] = row[..] else {
                    return Err(Failure::Validation("malformed ber row".to_string()));
                };
                out.push_str(&format!(
                    "{wf:<18} {:>8.1} {:>10.3e}\n",
                    parse_field(snr)?,
                    parse_field(ber)?
                ));
            }
        }
        "variant,n,complex_mults" => {
            for variant in ["linear", "circular", "fft"] {
                let rows: Vec<(usize, u64)> = body
                    .iter()
                    .filter(|row| row[0] == variant)
                    .map(|row| Ok((parse_field(row[1])? as usize, parse_field(row[2])? as u64)))
                    .collect::<Result<_>>()?;
                if rows.len() >= 2 {
                    let table = ComplexityTable {
                        kind: MatchedFilterKind::Linear,
                        rows,
                    };
                    out.push_str(&format!(
                        "{variant}: log-log slope {:.3}\n",
                        table.loglog_slope()
                    ));
                }
            }
            if out.is_empty() {
                out.push_str("no rows\n");
            }
        }
        other => {
            return Err(Failure::Validation(format!(
                "unrecognized result header '{other}'"
            )));
        }
    }
    if body.is_empty() && out.is_empty() {
        out.push_str("no rows\n");
    }
    Ok(out)
}

fn parse_field(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s
            .parse()
            .map_err(|_| Failure::Validation(format!("bad numeric field '{s}'"))),
    }
}
