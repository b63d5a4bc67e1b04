//! Six-degree-of-freedom rigid-body equations: wind-axes translation, body-axes
//! rotation and Euler-angle kinematics, over a flat non-rotating earth.

use std::f64::consts::FRAC_PI_2;

use super::aero::coefficients_unchecked;
use super::propulsion::thrust_at_density;
use super::{isa_density, AircraftParams, AircraftState, ControlVector};
use crate::{Error, Result};

/// `ẋ = [V̇, α̇, β̇, ṗ, q̇, ṙ, φ̇, θ̇]`.
pub type StateDerivative = [f64; 8];

/// Evaluates `f(x, u)`. Thrust acts along the body x-axis through the center
/// of gravity.
pub fn state_derivative(
    state: &AircraftState,
    controls: &ControlVector,
    params: &AircraftParams,
) -> Result<StateDerivative> {
    if !(state.v > 0.0) {
        return Err(Error::Domain(format!("airspeed must be positive, got {}", state.v)));
    }
    if !(state.theta.abs() < FRAC_PI_2) {
        return Err(Error::Domain("pitch angle at ±90 deg: Euler kinematics singular".into()));
    }
    let rho = isa_density(state.h)?;
    Ok(derivative_at_density(rho, state, controls, params))
}

pub(crate) fn derivative_at_density(
    rho: f64,
    s: &AircraftState,
    u: &ControlVector,
    params: &AircraftParams,
) -> StateDerivative {
    let mg = &params.mass_geometry;
    let g = params.gravity();
    let c = coefficients_unchecked(s, u, params);
    let qbar_s = 0.5 * rho * s.v * s.v * mg.wing_area;

    let lift = qbar_s * c.cl;
    let drag = qbar_s * c.cd;
    let side = qbar_s * c.cy;
    let thrust = thrust_at_density(rho, s.v, u.dth, params);

    let (sa, ca) = s.alpha.sin_cos();
    let (sb, cb) = s.beta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    let (st, ct) = s.theta.sin_cos();

    // Aerodynamic force from wind to body axes, plus thrust.
    let fx = -drag * ca * cb - side * ca * sb + lift * sa + thrust;
    let fy = -drag * sb + side * cb;
    let fz = -drag * sa * cb - side * sa * sb - lift * ca;

    let m = mg.mass;
    let (uu, vv, ww) = (s.v * ca * cb, s.v * sb, s.v * sa * cb);
    let udot = s.r * vv - s.q * ww - g * st + fx / m;
    let vdot = s.p * ww - s.r * uu + g * ct * sp + fy / m;
    let wdot = s.q * uu - s.p * vv + g * ct * cp + fz / m;

    let vdot_total = (uu * udot + vv * vdot + ww * wdot) / s.v;
    let alpha_dot = (uu * wdot - ww * udot) / (uu * uu + ww * ww);
    let beta_dot = (s.v * vdot - vv * vdot_total) / (s.v * s.v * cb);

    let roll = qbar_s * mg.span * c.cll;
    let pitch = qbar_s * mg.chord * c.cm;
    let yaw = qbar_s * mg.span * c.cn;

    let (ixx, iyy, izz, ixz) = (mg.ixx, mg.iyy, mg.izz, mg.ixz);
    let gamma = ixx * izz - ixz * ixz;
    let c1 = ((iyy - izz) * izz - ixz * ixz) / gamma;
    let c2 = (ixx - iyy + izz) * ixz / gamma;
    let c3 = izz / gamma;
    let c4 = ixz / gamma;
    let c5 = (izz - ixx) / iyy;
    let c6 = ixz / iyy;
    let c7 = 1.0 / iyy;
    let c8 = (ixx * (ixx - iyy) + ixz * ixz) / gamma;
    let c9 = ixx / gamma;

    let pdot = (c1 * s.r + c2 * s.p) * s.q + c3 * roll + c4 * yaw;
    let qdot = c5 * s.p * s.r - c6 * (s.p * s.p - s.r * s.r) + c7 * pitch;
    let rdot = (c8 * s.p - c2 * s.r) * s.q + c4 * roll + c9 * yaw;

    let phi_dot = s.p + st / ct * (s.q * sp + s.r * cp);
    let theta_dot = s.q * cp - s.r * sp;

    [
        vdot_total, alpha_dot, beta_dot, pdot, qdot, rdot, phi_dot, theta_dot,
    ]
}
