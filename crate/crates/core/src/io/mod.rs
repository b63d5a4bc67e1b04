//! Files and commands: run manifests, envelope CSV files with provenance
//! headers, boundary and verification reports, plot data, and the command
//! implementations behind the `mfe` binary.
//!
//! External units throughout: knots, feet, degrees, deg/s.

mod commands;
mod envelope_file;
mod manifest;
mod plotdata;
mod reports;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::{Error, Result};

pub use commands::{
    cmd_boundary, cmd_envelope, cmd_plotdata, cmd_trim, cmd_verify_intersection, cmd_verify_laws,
    cmd_verify_symmetry, EnvelopeRun, TrimReport, VerifyReport,
};
pub use envelope_file::{EnvelopeFile, EnvelopeHeader, EnvelopeRecord, FORMAT};
pub use manifest::{RunFlags, RunManifest};
pub use plotdata::{
    boundary_rows, envelope_rows, state_trace_rows, thrust_curve_rows, BoundaryRow, PlotKind,
    ScatterRow, ThrustRow, TraceRow,
};
pub use reports::{linear_model_rows, read_boundary_report, write_boundary_report, LinearEntry};

/// Environment variable overriding the output directory.
pub const OUTPUT_DIR_ENV: &str = "MFE_OUTPUT_DIR";

/// Output directory: the explicit choice, then `MFE_OUTPUT_DIR`, then the
/// fallback.
pub fn resolve_output_dir(explicit: Option<&Path>, fallback: &Path) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => fallback.to_path_buf(),
    }
}

/// Writes `bytes` to a temporary sibling and renames it over `path`, so a
/// reader never sees a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Validation(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// CSV text with `# key: value` comment lines in front.
pub(crate) fn csv_with_header<T: serde::Serialize>(
    header: &[(String, String)],
    rows: &[T],
) -> Result<String> {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Numerical(format!("csv buffer: {e}")))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
    Ok(out)
}

/// Splits leading `# key: value` lines from the CSV body.
pub(crate) fn split_header(text: &str) -> (Vec<(String, String)>, &str) {
    let mut header = Vec::new();
    let mut rest = text;
    while let Some(line) = rest.strip_prefix('#') {
        let (line, tail) = match line.find('\n') {
            Some(i) => (&line[..i], &line[i + 1..]),
            None => (line, ""),
        };
        if let Some((k, v)) = line.split_once(':') {
            header.push((k.trim().to_string(), v.trim().to_string()));
        }
        rest = tail;
    }
    (header, rest)
}
