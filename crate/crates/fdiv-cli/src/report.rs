//! Report plumbing shared by every subcommand: the error-to-exit-code
//! mapping, the JSON envelope printed on stdout, CSV serialization, and
//! input-distribution loading.
//!
//! Numbers in CSV cells are rendered with 17 significant digits and a '.'
//! decimal separator, so equal runs produce byte-identical files.

use fdiv_core::{DiscreteDist, Error};
use serde::Serialize;
use std::fs;
use std::path::Path;

/// Exit 1 is a validation problem (bad flags, bad inputs, infeasible
/// configuration); exit 2 is a failure while producing results (I/O,
/// degenerate intermediate states).
pub struct CliError {
    pub code: &'static str,
    pub msg: String,
    pub exit: i32,
}

impl CliError {
    pub fn validation(code: &'static str, msg: impl Into<String>) -> Self {
        CliError {
            code,
            msg: msg.into(),
            exit: 1,
        }
    }

    pub fn runtime(code: &'static str, msg: impl Into<String>) -> Self {
        CliError {
            code,
            msg: msg.into(),
            exit: 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Domain(_) => CliError::validation("domain", msg),
            Error::InvalidDist(_) => CliError::validation("invalid_dist", msg),
            Error::Unsupported(_) => CliError::validation("unsupported", msg),
            Error::ConstructionInvalid(_) => CliError::validation("construction_invalid", msg),
            Error::UnboundedTruncation(_) => CliError::validation("unbounded_truncation", msg),
            Error::DegenerateTruncation(_) => CliError::runtime("degenerate_truncation", msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::runtime("io_write", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::runtime("io_write", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::runtime("internal", e.to_string())
    }
}

pub fn single_line(msg: &str) -> String {
    msg.replace(['\n', '\r'], "; ")
}

/// Reads a distribution from a JSON atom array, distinguishing a missing
/// file, malformed JSON, and a structurally invalid distribution.
pub fn load_dist(path: &str) -> Result<DiscreteDist, CliError> {
    let p = Path::new(path);
    if !p.exists() {
        return Err(CliError::validation(
            "io_missing",
            format!("input file {path} does not exist"),
        ));
    }
    let text = fs::read_to_string(p)
        .map_err(|e| CliError::runtime("io_read", format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::validation("json_parse", format!("{path}: {e}")))?;
    serde_json::from_value(value)
        .map_err(|e| CliError::validation("invalid_dist", format!("{path}: {e}")))
}

/// Every stdout report carries the artifact version and the full
/// configuration it ran under, then the payload fields inline.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    version: &'static str,
    command: &'static str,
    config: serde_json::Value,
    #[serde(flatten)]
    payload: T,
}

pub fn print_report<T: Serialize>(
    command: &'static str,
    config: serde_json::Value,
    payload: T,
) -> Result<(), CliError> {
    let envelope = Envelope {
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        payload,
    };
    let text = serde_json::to_string_pretty(&envelope)?;
    // A downstream reader may close the pipe early (`fdiv … | head`); that is
    // a clean exit, not an io_write failure.
    use std::io::Write as _;
    match writeln!(std::io::stdout(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other?,
    }
    Ok(())
}

/// JSON value for an f64 that may be infinite (serde_json would silently
/// turn ±∞ into null).
pub fn json_float(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v > 0.0 {
        serde_json::json!("inf")
    } else if v < 0.0 {
        serde_json::json!("-inf")
    } else {
        serde_json::json!("nan")
    }
}

/// 17 significant digits, '.' decimal separator, stable spelling for the
/// non-finite values the bound evaluators can produce.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_csv(path: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        wtr.write_record(row)?;
    }
    wtr.flush()?;
    Ok(())
}
