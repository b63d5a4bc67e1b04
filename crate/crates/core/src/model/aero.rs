use super::{AeroDerivativeSet, AircraftParams, AircraftState, ControlVector};
use crate::{Error, Result};

/// Nondimensional force and moment coefficients.
///
/// `cl`, `cd` and `cy` are lift, drag and side force in wind axes; `cll`,
/// `cm` and `cn` are rolling, pitching and yawing moments in body axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeroCoefficients {
    pub cl: f64,
    pub cd: f64,
    pub cy: f64,
    pub cll: f64,
    pub cm: f64,
    pub cn: f64,
}

/// Piecewise-linear lift curve: linear up to `alpha_crit`, linear falloff after.
pub fn lift_coefficient(aero: &AeroDerivativeSet, alpha: f64) -> f64 {
    let linear = aero.cl0 + aero.cl_alpha * alpha.min(aero.alpha_crit);
    if alpha <= aero.alpha_crit {
        linear
    } else {
        linear - aero.cl_post_stall * (alpha - aero.alpha_crit)
    }
}

pub fn aero_coefficients(
    state: &AircraftState,
    controls: &ControlVector,
    params: &AircraftParams,
) -> Result<AeroCoefficients> {
    if !(state.v > 0.0) {
        return Err(Error::Domain(
            "airspeed must be positive to nondimensionalize rates".into(),
        ));
    }
    Ok(coefficients_unchecked(state, controls, params))
}

pub(crate) fn coefficients_unchecked(
    s: &AircraftState,
    u: &ControlVector,
    params: &AircraftParams,
) -> AeroCoefficients {
    let a = &params.aero;
    let mg = &params.mass_geometry;
    let half_span_over_v = mg.span / (2.0 * s.v);
    let p_hat = s.p * half_span_over_v;
    let r_hat = s.r * half_span_over_v;
    let q_hat = s.q * mg.chord / (2.0 * s.v);

    let cl = lift_coefficient(a, s.alpha);
    let cd = a.cd0 + a.k * cl * cl + a.cd_beta * s.beta * s.beta;
    let cy = a.cy0 + a.cy_beta * s.beta + a.cy_dr * u.dr;
    let cll = a.cll0
        + a.cll_beta * s.beta
        + a.cll_p * p_hat
        + a.cll_r * r_hat
        + a.cll_da * u.da
        + a.cll_dr * u.dr;
    let cm = a.cm0 + a.cm_alpha * s.alpha + a.cm_q * q_hat + a.cm_de * u.de;
    let cn = a.cn0
        + a.cn_beta * s.beta
        + a.cn_p * p_hat
        + a.cn_r * r_hat
        + a.cn_da * u.da
        + a.cn_dr * u.dr;
    AeroCoefficients {
        cl,
        cd,
        cy,
        cll,
        cm,
        cn,
    }
}
