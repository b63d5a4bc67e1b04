use serde::{Deserialize, Serialize};

use crate::envelope::EnvelopeSlice;
use crate::Result;

/// Cell-wise intersection: in the envelope iff in both. Cells in both keep
/// the trim from `a`; other cells keep an infeasible trim, from `a` if it has
/// one, else from `b`.
pub fn intersect_envelopes(a: &EnvelopeSlice, b: &EnvelopeSlice) -> Result<EnvelopeSlice> {
    a.check_same_grid(b)?;
    let cells = a
        .cells
        .iter()
        .zip(&b.cells)
        .map(|(x, y)| {
            if x.in_envelope() && !y.in_envelope() {
                y.clone()
            } else {
                x.clone()
            }
        })
        .collect();
    Ok(EnvelopeSlice {
        cells,
        ..a.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Negative turn rates.
    Left,
    /// Positive turn rates.
    Right,
    /// High-speed end.
    Top,
    /// Low-speed end.
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideSeparation {
    pub side: Side,
    pub attached: bool,
    /// Largest gap between the two boundaries on this side, in grid cells.
    pub max_separation_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub h_ft: f64,
    pub gamma_deg: f64,
    /// Cells that may differ before a side counts as separated.
    pub tolerance_cells: usize,
    pub sides: Vec<SideSeparation>,
}

impl SeparationReport {
    pub fn side(&self, side: Side) -> &SideSeparation {
        self.sides.iter().find(|s| s.side == side).expect("all sides reported")
    }
}

/// Extent of the feasible cells along each grid line.
fn extents(mask: impl Fn(usize, usize) -> bool, n_lines: usize, n_along: usize) -> Vec<Option<(usize, usize)>> {
    (0..n_lines)
        .map(|i| {
            let hits: Vec<usize> = (0..n_along).filter(|j| mask(i, *j)).collect();
            Some((*hits.first()?, *hits.last()?))
        })
        .collect()
}

fn gap(
    imp: &[Option<(usize, usize)>],
    unimp: &[Option<(usize, usize)>],
    pick: impl Fn((usize, usize)) -> usize,
) -> usize {
    imp.iter()
        .zip(unimp)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => pick(*a).abs_diff(pick(*b)),
            (None, Some(b)) => b.1 - b.0 + 1,
            (Some(a), None) => a.1 - a.0 + 1,
            (None, None) => 0,
        })
        .max()
        .unwrap_or(0)
}

/// Compares an impaired slice with the unimpaired one side by side.
///
/// Left and right compare the extreme turn rates reached at each speed;
/// bottom and top compare the extreme speeds at each turn rate. A side is
/// attached when no gap exceeds one grid cell.
pub fn separation_report(
    impaired: &EnvelopeSlice,
    unimpaired: &EnvelopeSlice,
) -> Result<SeparationReport> {
    impaired.check_same_grid(unimpaired)?;
    let tolerance_cells = 1;
    let (nv, nw) = (impaired.n_v(), impaired.n_psidot());
    let rows_i = extents(|iv, iw| impaired.in_envelope(iv, iw), nv, nw);
    let rows_u = extents(|iv, iw| unimpaired.in_envelope(iv, iw), nv, nw);
    let cols_i = extents(|iw, iv| impaired.in_envelope(iv, iw), nw, nv);
    let cols_u = extents(|iw, iv| unimpaired.in_envelope(iv, iw), nw, nv);
    let sides = [
        (Side::Left, gap(&rows_i, &rows_u, |e| e.0)),
        (Side::Right, gap(&rows_i, &rows_u, |e| e.1)),
        (Side::Top, gap(&cols_i, &cols_u, |e| e.1)),
        (Side::Bottom, gap(&cols_i, &cols_u, |e| e.0)),
    ]
    .into_iter()
    .map(|(side, g)| SideSeparation {
        side,
        attached: g <= tolerance_cells,
        max_separation_cells: g,
    })
    .collect();
    Ok(SeparationReport {
        h_ft: impaired.h_ft,
        gamma_deg: impaired.gamma_deg,
        tolerance_cells,
        sides,
    })
}
