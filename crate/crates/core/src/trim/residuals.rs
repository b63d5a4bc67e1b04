use serde::{Deserialize, Serialize};

use super::geometry::flight_path_residual;
use super::solver::TrimTarget;
use crate::model::{AircraftState, ConstraintConfig, ControlVector, Surface};

/// Equality residuals and signed inequality margins of a candidate trim.
///
/// `equality` is `[h − h*, V − V*, flight path, p + ψ̇ sinθ, q − ψ̇ cosθ sinφ,
/// r − ψ̇ cosθ cosφ]`. Each margin is non-negative when its bound holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResiduals {
    pub equality: [f64; 6],
    pub margins: Vec<(String, f64)>,
}

impl ConstraintResiduals {
    pub fn max_equality(&self) -> f64 {
        self.equality.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_margin(&self) -> f64 {
        self.margins
            .iter()
            .fold(f64::INFINITY, |m, (_, x)| m.min(*x))
    }

    pub fn satisfied(&self, equality_tol: f64, margin_tol: f64) -> bool {
        self.max_equality() <= equality_tol && self.min_margin() >= -margin_tol
    }
}

pub fn constraint_residuals(
    state: &AircraftState,
    controls: &ControlVector,
    target: &TrimTarget,
    limits: &ConstraintConfig,
) -> ConstraintResiduals {
    let s = state;
    let w = target.psidot;
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    let equality = [
        s.h - target.h,
        s.v - target.v,
        flight_path_residual(s.alpha, s.beta, s.phi, s.theta, target.gamma),
        s.p + w * st,
        s.q - w * ct * sp,
        s.r - w * ct * cp,
    ];

    let mut margins = vec![
        ("alpha_upper".to_string(), limits.alpha_max - s.alpha),
        ("alpha_lower".to_string(), s.alpha - limits.alpha_min),
        ("beta".to_string(), limits.beta_max - s.beta.abs()),
        ("bank".to_string(), limits.phi_max - s.phi.abs()),
    ];
    for surface in Surface::ALL {
        let win = limits.window(surface);
        let x = controls.get(surface);
        margins.push((format!("{surface}_upper"), win.upper - x));
        margins.push((format!("{surface}_lower"), x - win.lower));
    }
    ConstraintResiduals { equality, margins }
}
