//! CSV and sidecar writers. Floats are printed with 17 significant digits
//! so round-tripping through text is lossless for f64.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Full-precision decimal form of a float; infinities keep the `inf`
/// spelling the config grammar accepts.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{v:.16e}")
    }
}

/// Filename-safe tag for a numeric label (`20`, `inf`, `m2p5`, `1_65536`).
pub fn tag(label: &str) -> String {
    label
        .chars()
        .map(|c| match c {
            '-' => 'm',
            '.' => 'p',
            '/' => '_',
            c => c,
        })
        .collect()
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: impl IntoIterator<Item = Vec<String>>,
) -> std::io::Result<PathBuf> {
    let path = dir.join(name);
    let mut f = fs::File::create(&path)?;
    writeln!(f, "{header}")?;
    for row in rows {
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(path)
}

/// Writes the reproduction sidecar: the canonical config (seed baked in)
/// prefixed with the tool version as a comment, so the file itself is a
/// valid config for rerunning the experiment.
pub fn write_sidecar(dir: &Path, echo: &str) -> std::io::Result<()> {
    let mut f = fs::File::create(dir.join("run.cfg"))?;
    writeln!(f, "# afdm {}", env!("CARGO_PKG_VERSION"))?;
    f.write_all(echo.as_bytes())?;
    Ok(())
}
