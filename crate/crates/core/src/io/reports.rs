use std::path::Path;

use serde::{Deserialize, Serialize};

use super::plotdata::{state_trace_rows, TraceRow};
use super::{csv_with_header, read_text, split_header, write_atomic};
use crate::boundary::BoundaryPoint;
use crate::envelope::EnvelopeSlice;
use crate::linear::LinearModel;
use crate::{Error, Result};

const STATE_NAMES: [&str; 8] = ["V", "alpha", "beta", "p", "q", "r", "phi", "theta"];

/// Writes the boundary walk with states and controls, headed by the source
/// slice's provenance.
pub fn write_boundary_report(path: &Path, slice: &EnvelopeSlice, points: &[BoundaryPoint]) -> Result<()> {
    let failure = match &slice.provenance.failure {
        Some(f) => f.to_string(),
        None => "none".into(),
    };
    let header = vec![
        ("format".to_string(), "mfe-boundary-1".to_string()),
        ("tool_version".into(), slice.provenance.tool_version.clone()),
        ("params_hash".into(), slice.provenance.params_hash.clone()),
        ("h_ft".into(), slice.h_ft.to_string()),
        ("gamma_deg".into(), slice.gamma_deg.to_string()),
        ("failure".into(), failure),
    ];
    let text = csv_with_header(&header, &state_trace_rows(slice, points))?;
    write_atomic(path, text.as_bytes())
}

pub fn read_boundary_report(path: &Path) -> Result<Vec<TraceRow>> {
    let text = read_text(path)?;
    let (header, body) = split_header(&text);
    if !header.iter().any(|(k, v)| k == "format" && v == "mfe-boundary-1") {
        return Err(Error::format(path, "missing boundary report header"));
    }
    csv::Reader::from_reader(body.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<TraceRow>, _>>()
        .map_err(|e| Error::format(path, e.to_string()))
}

/// One entry of a linear model in long form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearEntry {
    pub matrix: String,
    pub row: String,
    pub col: String,
    pub value: f64,
}

/// `A` and `B` as `(matrix, row, col, value)` rows, SI units.
pub fn linear_model_rows(model: &LinearModel) -> Vec<LinearEntry> {
    let mut out = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            out.push(LinearEntry {
                matrix: "A".into(),
                row: STATE_NAMES[i].into(),
                col: STATE_NAMES[j].into(),
                value: model.a[(i, j)],
            });
        }
        for (j, s) in model.inputs.iter().enumerate() {
            out.push(LinearEntry {
                matrix: "B".into(),
                row: STATE_NAMES[i].into(),
                col: s.to_string(),
                value: model.b[(i, j)],
            });
        }
    }
    out
}
