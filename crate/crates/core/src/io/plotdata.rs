use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::{extract_boundary, thrust_required, BoundaryPoint, FactorTolerances};
use crate::envelope::EnvelopeSlice;
use crate::model::{thrust_available, AircraftParams};
use crate::units::{deg, ft_to_m, kt_to_mps, to_deg};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Feasibility scatter over `(V, ψ̇)`.
    Envelope,
    /// Boundary polyline with limiting-factor labels.
    Boundary,
    /// Thrust required at constant bank and sideslip, with thrust available.
    ThrustCurves,
    /// States and controls along the boundary walk.
    StateTraces,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [
        PlotKind::Envelope,
        PlotKind::Boundary,
        PlotKind::ThrustCurves,
        PlotKind::StateTraces,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::Envelope => "envelope",
            PlotKind::Boundary => "boundary",
            PlotKind::ThrustCurves => "thrust_curves",
            PlotKind::StateTraces => "state_traces",
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "unknown plot kind '{s}' (expected envelope, boundary, thrust_curves or state_traces)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    #[serde(rename = "V_kt")]
    pub v_kt: f64,
    pub psidot_degps: f64,
    pub status: String,
    pub in_envelope: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub seq: usize,
    #[serde(rename = "V_kt")]
    pub v_kt: f64,
    pub psidot_degps: f64,
    pub factor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub seq: usize,
    #[serde(rename = "V_kt")]
    pub v_kt: f64,
    pub psidot_degps: f64,
    pub factor: String,
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub phi_deg: f64,
    pub theta_deg: f64,
    pub dth: f64,
    pub de_deg: f64,
    pub da_deg: f64,
    pub dr_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThrustRow {
    #[serde(rename = "V_kt")]
    pub v_kt: f64,
    pub phi_deg: f64,
    pub beta_deg: f64,
    pub thrust_required: f64,
    pub thrust_available: f64,
}

pub fn envelope_rows(slice: &EnvelopeSlice) -> Vec<ScatterRow> {
    let mut out = Vec::with_capacity(slice.cells.len());
    for iv in 0..slice.n_v() {
        for iw in 0..slice.n_psidot() {
            let c = slice.cell(iv, iw);
            out.push(ScatterRow {
                v_kt: slice.v_kt[iv],
                psidot_degps: slice.psidot_dps[iw],
                status: c.status.label(),
                in_envelope: c.in_envelope(),
            });
        }
    }
    out
}

pub fn boundary_rows(points: &[BoundaryPoint]) -> Vec<BoundaryRow> {
    points
        .iter()
        .enumerate()
        .map(|(seq, p)| BoundaryRow {
            seq,
            v_kt: p.v_kt,
            psidot_degps: p.psidot_dps,
            factor: p.factor.label(),
        })
        .collect()
}

pub fn state_trace_rows(slice: &EnvelopeSlice, points: &[BoundaryPoint]) -> Vec<TraceRow> {
    points
        .iter()
        .enumerate()
        .map(|(seq, p)| {
            let c = slice.cell(p.iv, p.iw);
            TraceRow {
                seq,
                v_kt: p.v_kt,
                psidot_degps: p.psidot_dps,
                factor: p.factor.label(),
                alpha_deg: to_deg(c.state.alpha),
                beta_deg: to_deg(c.state.beta),
                phi_deg: to_deg(c.state.phi),
                theta_deg: to_deg(c.state.theta),
                dth: c.controls.dth,
                de_deg: to_deg(c.controls.de),
                da_deg: to_deg(c.controls.da),
                dr_deg: to_deg(c.controls.dr),
            }
        })
        .collect()
}

/// Thrust required over the slice's speed axis for each bank and sideslip
/// pair, next to full-throttle thrust available.
pub fn thrust_curve_rows(
    slice: &EnvelopeSlice,
    params: &AircraftParams,
    phis_deg: &[f64],
    betas_deg: &[f64],
) -> Result<Vec<ThrustRow>> {
    let h = ft_to_m(slice.h_ft);
    let gamma = deg(slice.gamma_deg);
    let mut out = Vec::new();
    for phi in phis_deg {
        for beta in betas_deg {
            for v_kt in &slice.v_kt {
                let v = kt_to_mps(*v_kt);
                out.push(ThrustRow {
                    v_kt: *v_kt,
                    phi_deg: *phi,
                    beta_deg: *beta,
                    thrust_required: thrust_required(v, deg(*phi), gamma, h, params, Some(deg(*beta)))?,
                    thrust_available: thrust_available(h, v, 1.0, params)?,
                });
            }
        }
    }
    Ok(out)
}

/// Boundary of a slice with the default tolerances.
pub(crate) fn default_boundary(slice: &EnvelopeSlice, params: &AircraftParams) -> Result<Vec<BoundaryPoint>> {
    extract_boundary(slice, params, &FactorTolerances::default())
}
