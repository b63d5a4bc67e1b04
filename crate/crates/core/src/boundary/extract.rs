use std::fmt;

use serde::{Deserialize, Serialize};

use crate::envelope::{apply_failure, EnvelopeSlice};
use crate::model::{AircraftParams, ConstraintConfig, Surface};
use crate::trim::{ActiveConstraint, InfeasibleReason, TrimResult, TrimStatus};
use crate::units::deg;
use crate::Result;

/// What stops the envelope at a boundary point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LimitingFactor {
    StallAlpha,
    AileronSaturation,
    RudderSaturation,
    ElevatorSaturation,
    ThrustSaturation,
    /// Only the bank limit is active: a satisfied constraint rather than a
    /// limiting one.
    BankOnly,
    Mixed(Vec<LimitingFactor>),
}

impl LimitingFactor {
    /// Component factors (itself unless mixed).
    pub fn components(&self) -> Vec<LimitingFactor> {
        match self {
            LimitingFactor::Mixed(v) => v.clone(),
            f => vec![f.clone()],
        }
    }

    pub fn label(&self) -> String {
        match self {
            LimitingFactor::StallAlpha => "stall_alpha".into(),
            LimitingFactor::AileronSaturation => "aileron_saturation".into(),
            LimitingFactor::RudderSaturation => "rudder_saturation".into(),
            LimitingFactor::ElevatorSaturation => "elevator_saturation".into(),
            LimitingFactor::ThrustSaturation => "thrust_saturation".into(),
            LimitingFactor::BankOnly => "bank_only".into(),
            LimitingFactor::Mixed(v) => v.iter().map(|f| f.label()).collect::<Vec<_>>().join("+"),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        let single = |s: &str| match s {
            "stall_alpha" => Some(LimitingFactor::StallAlpha),
            "aileron_saturation" => Some(LimitingFactor::AileronSaturation),
            "rudder_saturation" => Some(LimitingFactor::RudderSaturation),
            "elevator_saturation" => Some(LimitingFactor::ElevatorSaturation),
            "thrust_saturation" => Some(LimitingFactor::ThrustSaturation),
            "bank_only" => Some(LimitingFactor::BankOnly),
            _ => None,
        };
        let parts: Vec<&str> = s.split('+').collect();
        if parts.len() == 1 {
            single(s)
        } else {
            parts
                .into_iter()
                .map(single)
                .collect::<Option<Vec<_>>>()
                .map(LimitingFactor::Mixed)
        }
    }

    fn from_set(mut v: Vec<LimitingFactor>) -> Option<Self> {
        v.sort();
        v.dedup();
        match v.len() {
            0 => None,
            1 => v.pop(),
            _ => Some(LimitingFactor::Mixed(v)),
        }
    }
}

impl fmt::Display for LimitingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Distance from a limit within which the limit counts as active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorTolerances {
    /// Angle of attack and bank (rad).
    pub alpha: f64,
    /// Surface deflection (rad).
    pub deflection: f64,
    pub throttle: f64,
}

impl Default for FactorTolerances {
    fn default() -> Self {
        FactorTolerances {
            alpha: deg(0.05),
            deflection: deg(0.05),
            throttle: 0.005,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub iv: usize,
    pub iw: usize,
    pub v_kt: f64,
    pub psidot_dps: f64,
    pub factor: LimitingFactor,
}

/// Boundary cells of the feasibility mask, ordered counterclockwise in the
/// `(V, ψ̇)` plane starting from the lowest-speed cell of the ψ̇ ≈ 0 column.
/// With V to the right and ψ̇ up, the walk covers the negative turn rates
/// first, from the minimum to the maximum speed.
///
/// Cells are ordered by polar angle about the centroid of the feasible set,
/// measured in grid-index units; each point is classified.
pub fn extract_boundary(
    slice: &EnvelopeSlice,
    params: &AircraftParams,
    tol: &FactorTolerances,
) -> Result<Vec<BoundaryPoint>> {
    let cells = slice.boundary_cells();
    if cells.is_empty() {
        return Ok(Vec::new());
    }
    let feasible: Vec<(f64, f64)> = (0..slice.n_v())
        .flat_map(|iv| (0..slice.n_psidot()).map(move |iw| (iv, iw)))
        .filter(|(iv, iw)| slice.in_envelope(*iv, *iw))
        .map(|(iv, iw)| (iv as f64, iw as f64))
        .collect();
    let n = feasible.len() as f64;
    let cx = feasible.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = feasible.iter().map(|p| p.1).sum::<f64>() / n;

    let iw0 = slice.zero_turn_index().expect("non-empty slice");
    let start = cells
        .iter()
        .filter(|(_, iw)| *iw == iw0)
        .min_by_key(|(iv, _)| *iv)
        .or_else(|| cells.first())
        .copied()
        .expect("non-empty boundary");
    let angle = |(iv, iw): (usize, usize)| (iw as f64 - cy).atan2(iv as f64 - cx);
    let a0 = angle(start);
    let key = |c: (usize, usize)| {
        let mut a = angle(c) - a0;
        while a < 0.0 {
            a += std::f64::consts::TAU;
        }
        while a >= std::f64::consts::TAU {
            a -= std::f64::consts::TAU;
        }
        let r = (c.0 as f64 - cx).hypot(c.1 as f64 - cy);
        (a, r)
    };
    let mut ordered = cells;
    ordered.sort_by(|a, b| {
        if *a == start {
            return std::cmp::Ordering::Less;
        }
        if *b == start {
            return std::cmp::Ordering::Greater;
        }
        let (ka, kb) = (key(*a), key(*b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(a.cmp(b))
    });

    ordered
        .into_iter()
        .map(|(iv, iw)| {
            let factor = classify_limiting_factor(iv, iw, slice, params, tol)?;
            Ok(BoundaryPoint {
                iv,
                iw,
                v_kt: slice.v_kt[iv],
                psidot_dps: slice.psidot_dps[iw],
                factor,
            })
        })
        .collect()
}

fn constraint_factor(c: ActiveConstraint) -> Option<LimitingFactor> {
    use ActiveConstraint::*;
    match c {
        AlphaLimit => Some(LimitingFactor::StallAlpha),
        AileronUL | AileronLL => Some(LimitingFactor::AileronSaturation),
        RudderUL | RudderLL => Some(LimitingFactor::RudderSaturation),
        ElevatorUL | ElevatorLL => Some(LimitingFactor::ElevatorSaturation),
        ThrottleUpper => Some(LimitingFactor::ThrustSaturation),
        ThrottleLower | BankLimit | AlphaLower | BetaLimit => None,
    }
}

/// Saturations of a trim within the tolerances, and whether the bank limit
/// is reached.
fn saturations(
    t: &TrimResult,
    limits: &ConstraintConfig,
    tol: &FactorTolerances,
) -> (Vec<LimitingFactor>, bool) {
    let mut f = Vec::new();
    if t.state.alpha >= limits.alpha_max - tol.alpha {
        f.push(LimitingFactor::StallAlpha);
    }
    for (surface, factor) in [
        (Surface::Aileron, LimitingFactor::AileronSaturation),
        (Surface::Rudder, LimitingFactor::RudderSaturation),
        (Surface::Elevator, LimitingFactor::ElevatorSaturation),
    ] {
        let w = limits.window(surface);
        let x = t.controls.get(surface);
        // a jammed surface cannot be the one that saturates
        if !w.is_jam() && (x >= w.upper - tol.deflection || x <= w.lower + tol.deflection) {
            f.push(factor);
        }
    }
    let th = limits.throttle;
    if !th.is_jam() && t.controls.dth >= th.upper - tol.throttle {
        f.push(LimitingFactor::ThrustSaturation);
    }
    let bank = t.state.phi.abs() >= limits.phi_max - tol.alpha;
    (f, bank)
}

/// Distance of the trim from the limit behind `factor`, in units of the
/// matching tolerance. Jammed controls are never limiting.
fn limit_distance(
    t: &TrimResult,
    factor: &LimitingFactor,
    limits: &ConstraintConfig,
    tol: &FactorTolerances,
) -> f64 {
    let surface_distance = |s: Surface| {
        let w = limits.window(s);
        let x = t.controls.get(s);
        if w.is_jam() {
            f64::INFINITY
        } else {
            (w.upper - x).min(x - w.lower) / tol.deflection
        }
    };
    match factor {
        LimitingFactor::StallAlpha => (limits.alpha_max - t.state.alpha) / tol.alpha,
        LimitingFactor::AileronSaturation => surface_distance(Surface::Aileron),
        LimitingFactor::RudderSaturation => surface_distance(Surface::Rudder),
        LimitingFactor::ElevatorSaturation => surface_distance(Surface::Elevator),
        LimitingFactor::ThrustSaturation if !limits.throttle.is_jam() => {
            (limits.throttle.upper - t.controls.dth) / tol.throttle
        }
        _ => f64::INFINITY,
    }
}

fn nearest(
    t: &TrimResult,
    candidates: &[LimitingFactor],
    limits: &ConstraintConfig,
    tol: &FactorTolerances,
) -> Option<LimitingFactor> {
    candidates
        .iter()
        .map(|f| (limit_distance(t, f, limits, tol), f))
        .filter(|(d, _)| d.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)))
        .map(|(_, f)| f.clone())
}

/// Limiting factor of the boundary cell `(iv, iw)`.
///
/// Saturations of the cell's own trim come first. When the trim saturates
/// nothing, the factor comes from the obstructions recorded at the infeasible
/// neighbors (the active sets at their best points): of those, the limit this
/// trim is closest to. Failing that, `BankOnly` if the bank limit is reached,
/// else the nearest limit overall.
pub fn classify_limiting_factor(
    iv: usize,
    iw: usize,
    slice: &EnvelopeSlice,
    params: &AircraftParams,
    tol: &FactorTolerances,
) -> Result<LimitingFactor> {
    let limits = apply_failure(&params.limits, slice.provenance.failure.as_ref())?;
    let trim = slice.cell(iv, iw);
    let (own, bank) = saturations(trim, &limits, tol);
    if let Some(f) = LimitingFactor::from_set(own) {
        return Ok(f);
    }

    let mut neighbor = Vec::new();
    for (v, w) in slice.neighbors(iv, iw) {
        let c = slice.cell(v, w);
        if matches!(c.status, TrimStatus::Infeasible(r) if r != InfeasibleReason::Geometry) {
            neighbor.extend(c.active.iter().copied().filter_map(constraint_factor));
        }
    }
    neighbor.sort();
    neighbor.dedup();
    if let Some(f) = nearest(trim, &neighbor, &limits, tol) {
        return Ok(f);
    }
    if bank {
        return Ok(LimitingFactor::BankOnly);
    }
    let all = [
        LimitingFactor::StallAlpha,
        LimitingFactor::AileronSaturation,
        LimitingFactor::RudderSaturation,
        LimitingFactor::ElevatorSaturation,
        LimitingFactor::ThrustSaturation,
    ];
    Ok(nearest(trim, &all, &limits, tol).unwrap_or(LimitingFactor::StallAlpha))
}
