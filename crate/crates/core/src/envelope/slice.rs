use serde::{Deserialize, Serialize};

use super::FailureSpec;
use crate::trim::{SolverConfig, TrimResult};
use crate::{Error, Result};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Where a slice came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub params_hash: String,
    pub failure: Option<FailureSpec>,
    pub solver: SolverConfig,
}

/// Dense grid of trims over `(V, ψ̇)` at fixed altitude and flight path.
///
/// Cells are stored row-major with V as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSlice {
    pub h_ft: f64,
    pub gamma_deg: f64,
    pub v_kt: Vec<f64>,
    pub psidot_dps: Vec<f64>,
    pub cells: Vec<TrimResult>,
    pub provenance: Provenance,
}

/// Slices over γ at one altitude and failure case.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope3D {
    pub h_ft: f64,
    pub slices: Vec<EnvelopeSlice>,
}

impl EnvelopeSlice {
    pub fn n_v(&self) -> usize {
        self.v_kt.len()
    }

    pub fn n_psidot(&self) -> usize {
        self.psidot_dps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index(&self, iv: usize, iw: usize) -> usize {
        iv * self.n_psidot() + iw
    }

    pub fn cell(&self, iv: usize, iw: usize) -> &TrimResult {
        &self.cells[self.index(iv, iw)]
    }

    pub fn in_envelope(&self, iv: usize, iw: usize) -> bool {
        self.cell(iv, iw).in_envelope()
    }

    /// Envelope membership per cell, same layout as `cells`.
    pub fn mask(&self) -> Vec<bool> {
        self.cells.iter().map(TrimResult::in_envelope).collect()
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().filter(|c| c.in_envelope()).count()
    }

    /// Column index of the turn rate closest to zero.
    pub fn zero_turn_index(&self) -> Option<usize> {
        (0..self.n_psidot()).min_by(|a, b| {
            self.psidot_dps[*a]
                .abs()
                .total_cmp(&self.psidot_dps[*b].abs())
        })
    }

    pub fn same_grid(&self, other: &EnvelopeSlice) -> bool {
        self.h_ft == other.h_ft
            && self.gamma_deg == other.gamma_deg
            && self.v_kt == other.v_kt
            && self.psidot_dps == other.psidot_dps
    }

    pub fn check_same_grid(&self, other: &EnvelopeSlice) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "slices at h = {} ft, γ = {}° ({}×{}) and h = {} ft, γ = {}° ({}×{})",
                self.h_ft,
                self.gamma_deg,
                self.n_v(),
                self.n_psidot(),
                other.h_ft,
                other.gamma_deg,
                other.n_v(),
                other.n_psidot()
            )))
        }
    }

    /// 4-neighbors inside the grid.
    pub fn neighbors(&self, iv: usize, iw: usize) -> impl Iterator<Item = (usize, usize)> {
        let (nv, nw) = (self.n_v() as isize, self.n_psidot() as isize);
        [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)]
            .into_iter()
            .map(move |(dv, dw)| (iv as isize + dv, iw as isize + dw))
            .filter(move |(v, w)| (0..nv).contains(v) && (0..nw).contains(w))
            .map(|(v, w)| (v as usize, w as usize))
    }

    /// Feasible cells with an infeasible or out-of-grid 4-neighbor.
    pub fn is_boundary(&self, iv: usize, iw: usize) -> bool {
        self.in_envelope(iv, iw)
            && (iv == 0
                || iw == 0
                || iv + 1 == self.n_v()
                || iw + 1 == self.n_psidot()
                || self.neighbors(iv, iw).any(|(v, w)| !self.in_envelope(v, w)))
    }

    pub fn boundary_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for iv in 0..self.n_v() {
            for iw in 0..self.n_psidot() {
                if self.is_boundary(iv, iw) {
                    out.push((iv, iw));
                }
            }
        }
        out
    }

    /// Cells on either side of the boundary: boundary cells plus infeasible
    /// cells touching a feasible one.
    pub fn boundary_adjacent_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for iv in 0..self.n_v() {
            for iw in 0..self.n_psidot() {
                let touches = if self.in_envelope(iv, iw) {
                    self.is_boundary(iv, iw)
                } else {
                    self.neighbors(iv, iw).any(|(v, w)| self.in_envelope(v, w))
                };
                if touches {
                    out.push((iv, iw));
                }
            }
        }
        out
    }

    /// Feasible speed range in the ψ̇ ≈ 0 column, in knots.
    pub fn zero_turn_speed_range(&self) -> Option<(f64, f64)> {
        let iw = self.zero_turn_index()?;
        let feasible: Vec<f64> = (0..self.n_v())
            .filter(|iv| self.in_envelope(*iv, iw))
            .map(|iv| self.v_kt[iv])
            .collect();
        Some((*feasible.first()?, *feasible.last()?))
    }

    /// Largest feasible speed anywhere in the slice, in knots.
    pub fn max_feasible_v(&self) -> Option<f64> {
        (0..self.n_v())
            .rev()
            .find(|iv| (0..self.n_psidot()).any(|iw| self.in_envelope(*iv, iw)))
            .map(|iv| self.v_kt[iv])
    }

    pub fn min_feasible_v(&self) -> Option<f64> {
        (0..self.n_v())
            .find(|iv| (0..self.n_psidot()).any(|iw| self.in_envelope(*iv, iw)))
            .map(|iv| self.v_kt[iv])
    }

    /// Cells whose envelope membership differs between two slices on the same grid.
    pub fn mask_diff(&self, other: &EnvelopeSlice) -> Result<Vec<(usize, usize)>> {
        self.check_same_grid(other)?;
        let mut out = Vec::new();
        for iv in 0..self.n_v() {
            for iw in 0..self.n_psidot() {
                if self.in_envelope(iv, iw) != other.in_envelope(iv, iw) {
                    out.push((iv, iw));
                }
            }
        }
        Ok(out)
    }
}

/// Slice from rows of `#` (feasible) and `.` (infeasible), first row the
/// highest speed as drawn. Speeds from 60 kt in 10 kt steps; turn rates
/// centered on zero in 1 °/s steps.
#[cfg(test)]
pub(crate) fn ascii_slice(rows: &[&str]) -> EnvelopeSlice {
    use crate::model::{AircraftParams, AircraftState, ControlVector};
    use crate::trim::{InfeasibleReason, TrimStatus, TrimTarget};
    use crate::units::deg;

    let cell = |feasible: bool| TrimResult {
        target: TrimTarget::new(0.0, 50.0, 0.0, 0.0),
        state: AircraftState {
            v: 50.0,
            alpha: deg(4.0),
            theta: deg(4.0),
            ..Default::default()
        },
        controls: ControlVector {
            dth: 0.5,
            ..Default::default()
        },
        residual: 0.0,
        max_derivative: 0.0,
        status: if feasible {
            TrimStatus::FeasibleStable
        } else {
            TrimStatus::Infeasible(InfeasibleReason::Obstructed)
        },
        active: Default::default(),
        iterations: 0,
    };
    let nv = rows.len();
    let nw = rows[0].len();
    let mut cells = Vec::new();
    for r in rows.iter().rev() {
        cells.extend(r.chars().map(|c| cell(c == '#')));
    }
    EnvelopeSlice {
        h_ft: 0.0,
        gamma_deg: 0.0,
        v_kt: (0..nv).map(|i| 60.0 + 10.0 * i as f64).collect(),
        psidot_dps: (0..nw).map(|i| i as f64 - (nw / 2) as f64).collect(),
        cells,
        provenance: Provenance {
            tool_version: String::new(),
            params_hash: AircraftParams::default().hash(),
            failure: None,
            solver: SolverConfig::default(),
        },
    }
}
