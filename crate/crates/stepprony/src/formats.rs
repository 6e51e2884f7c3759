//! On-disk formats.
//!
//! * Signals: JSON `{"jumps": [...], "values": [...]}` or
//!   `{"nodes": [...], "amplitudes": [...]}`.
//! * Spectra: CSV `k,re,im` for `k = 0..=K`.
//! * Moments: CSV `k,m_k` for `k = 0..=K`.
//!
//! Numbers use the shortest representation that parses back to the same
//! `f64`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use stepprony_core::signals::{DiracSpikeTrain, PiecewiseConstantSignal};
use stepprony_core::spectral::{FourierSpectrum, MomentSequence};
use stepprony_core::Complex64;

use crate::config::RunConfig;
use crate::error::CliError;

pub const CONFIG_PREFIX: &str = "# config ";
pub const SPECTRUM_COLUMNS: &str = "k,re,im";
pub const MOMENT_COLUMNS: &str = "k,m_k";

/// Shortest round-trip formatting; switches to exponent form for very small
/// or very large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalFile {
    Piecewise(PiecewiseConstantSignal),
    Spikes(DiracSpikeTrain),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measurements {
    Spectrum(FourierSpectrum),
    Moments(MomentSequence),
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    payload: &'a T,
}

pub fn json_document<T: Serialize>(config: &RunConfig, payload: &T) -> String {
    let mut text = serde_json::to_string_pretty(&Envelope { config, payload })
        .expect("outputs contain only finite numbers and string keys");
    text.push('\n');
    text
}

pub fn csv_document(config: &RunConfig, columns: &str, rows: &[String]) -> String {
    let header = serde_json::to_string(config).expect("config is always serializable");
    let mut text = format!("{CONFIG_PREFIX}{header}\n{columns}\n");
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    text
}

/// Writes `contents` to `path`, or to stdout when there is no path.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(contents.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn spectrum_rows(s: &FourierSpectrum) -> Vec<String> {
    s.nonnegative()
        .map(|(k, c)| format!("{k},{},{}", fmt_f64(c.re), fmt_f64(c.im)))
        .collect()
}

pub fn moment_rows(m: &MomentSequence) -> Vec<String> {
    m.as_slice()
        .iter()
        .enumerate()
        .map(|(k, v)| format!("{k},{}", fmt_f64(*v)))
        .collect()
}

/// Reads a signal file, with or without a `"config"` envelope.
pub fn parse_signal(text: &str, origin: &str) -> Result<SignalFile, CliError> {
    let json_err = |source| CliError::Json {
        path: origin.to_owned(),
        source,
    };
    let mut value: Value = serde_json::from_str(text).map_err(json_err)?;
    let Some(object) = value.as_object_mut() else {
        return Err(CliError::input(format!("{origin}: expected a JSON object")));
    };
    object.remove("config");
    let value = Value::Object(object.clone());
    if object.contains_key("jumps") {
        serde_json::from_value(value)
            .map(SignalFile::Piecewise)
            .map_err(json_err)
    } else if object.contains_key("nodes") {
        serde_json::from_value(value)
            .map(SignalFile::Spikes)
            .map_err(json_err)
    } else {
        Err(CliError::input(format!(
            "{origin}: expected \"jumps\"/\"values\" or \"nodes\"/\"amplitudes\""
        )))
    }
}

/// The config header of a CSV file, if it has one.
pub fn csv_config(text: &str) -> Option<RunConfig> {
    let line = text.lines().next()?;
    serde_json::from_str(line.strip_prefix(CONFIG_PREFIX)?).ok()
}

/// Reads a spectrum or moment CSV; the column line decides which.
pub fn parse_measurements(text: &str, origin: &str) -> Result<Measurements, CliError> {
    let bad = |line: usize, msg: &str| CliError::input(format!("{origin}:{line}: {msg}"));
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((_, columns)) = lines.next() else {
        return Err(CliError::input(format!("{origin}: no column header")));
    };
    let width = match columns {
        SPECTRUM_COLUMNS => 3,
        MOMENT_COLUMNS => 2,
        other => {
            return Err(CliError::input(format!(
                "{origin}: unknown columns {other:?}, expected {SPECTRUM_COLUMNS:?} or {MOMENT_COLUMNS:?}"
            )))
        }
    };

    let mut rows = Vec::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != width {
            return Err(bad(n, &format!("expected {width} fields")));
        }
        let k: i64 = fields[0]
            .parse()
            .map_err(|_| bad(n, "index is not an integer"))?;
        let mut nums = Vec::with_capacity(width - 1);
        for f in &fields[1..] {
            let x: f64 = f.parse().map_err(|_| bad(n, "value is not a number"))?;
            if !x.is_finite() {
                return Err(bad(n, "value is not finite"));
            }
            nums.push(x);
        }
        rows.push((n, k, nums));
    }

    if width == 2 {
        let mut moments = Vec::with_capacity(rows.len());
        for (n, k, nums) in rows {
            if k != moments.len() as i64 {
                return Err(bad(n, &format!("expected moment index {}", moments.len())));
            }
            moments.push(nums[0]);
        }
        return Ok(Measurements::Moments(MomentSequence::new(moments)));
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut entries = Vec::with_capacity(rows.len());
    for (n, k, nums) in rows {
        if !seen.insert(k) {
            return Err(bad(n, &format!("duplicate index {k}")));
        }
        entries.push((k, Complex64::new(nums[0], nums[1])));
    }
    Ok(Measurements::Spectrum(FourierSpectrum::from_entries(
        entries,
    )))
}
