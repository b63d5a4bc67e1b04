use serde::{Deserialize, Serialize};

use crate::model::{isa_density, AircraftParams, RHO_SEA_LEVEL};
use crate::{Error, Result};

/// Inputs of the point-performance formulas, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceQuery {
    pub weight: f64,
    pub rho: f64,
    pub wing_area: f64,
    pub cl_max: f64,
    pub phi: f64,
    pub gamma: f64,
    pub k: f64,
    pub cd0: f64,
    pub cd_beta: f64,
    pub tmax_sl: f64,
    pub m_lapse: f64,
}

impl PerformanceQuery {
    pub fn new(params: &AircraftParams, h: f64, phi: f64, gamma: f64) -> Result<Self> {
        let a = &params.aero;
        Ok(PerformanceQuery {
            weight: params.mass_geometry.weight,
            rho: isa_density(h)?,
            wing_area: params.mass_geometry.wing_area,
            cl_max: a.cl_max(),
            phi,
            gamma,
            k: a.k,
            cd0: a.cd0,
            cd_beta: a.cd_beta,
            tmax_sl: params.propulsion.tmax_sl,
            m_lapse: params.propulsion.m_lapse,
        })
    }
}

/// `n = 1/cos φ`.
pub fn load_factor(phi: f64) -> Result<f64> {
    if !(phi.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("bank angle {phi} rad out of range")));
    }
    Ok(1.0 / phi.cos())
}

/// Wings-level stall speed `√(2W/(ρ C_Lmax S))`.
pub fn stall_speed_level(q: &PerformanceQuery) -> Result<f64> {
    if !(q.cl_max > 0.0) {
        return Err(Error::Domain("maximum lift coefficient must be positive".into()));
    }
    Ok((2.0 * q.weight / (q.rho * q.cl_max * q.wing_area)).sqrt())
}

/// Stall speed in a level turn at bank `q.phi`: `√n · V_S0`.
pub fn stall_speed(q: &PerformanceQuery) -> Result<f64> {
    Ok(load_factor(q.phi)?.sqrt() * stall_speed_level(q)?)
}

/// Parabolic-polar thrust required with an optional sideslip drag term:
/// `Wγ + ½ρV²S(C_D0 + C_Dβ β²) + 2K W² n²/(ρV²S)`.
pub fn thrust_required(
    v: f64,
    phi: f64,
    gamma: f64,
    h: f64,
    params: &AircraftParams,
    beta: Option<f64>,
) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("airspeed {v} must be positive")));
    }
    let q = PerformanceQuery::new(params, h, phi, gamma)?;
    thrust_required_for(&q, v, beta.unwrap_or(0.0))
}

pub fn thrust_required_for(q: &PerformanceQuery, v: f64, beta: f64) -> Result<f64> {
    let n = load_factor(q.phi)?;
    let qs = 0.5 * q.rho * v * v * q.wing_area;
    Ok(q.weight * q.gamma
        + qs * (q.cd0 + q.cd_beta * beta * beta)
        + 2.0 * q.k * q.weight * q.weight * n * n / (q.rho * v * v * q.wing_area))
}

/// Climb-gradient ceiling `(T_max,S/W)(ρ/ρ_S)^m − 2 cos φ √(K C_D0)`, radians.
pub fn gamma_max(h: f64, phi: f64, params: &AircraftParams) -> Result<f64> {
    let q = PerformanceQuery::new(params, h, phi, 0.0)?;
    Ok(q.tmax_sl / q.weight * (q.rho / RHO_SEA_LEVEL).powf(q.m_lapse)
        - 2.0 * phi.cos() * (q.k * q.cd0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{deg, ft_to_m, kt_to_mps, mps_to_kt};

    #[test]
    fn load_factor_values() {
        assert_eq!(load_factor(0.0).unwrap(), 1.0);
        assert!((load_factor(deg(30.0)).unwrap() - 1.1547005).abs() < 1e-6);
        assert!((load_factor(deg(60.0)).unwrap() - 2.0).abs() < 1e-12);
        assert!(load_factor(deg(90.0)).is_err());
    }

    #[test]
    fn banked_stall_speed_ratio() {
        let p = AircraftParams::default();
        let level = PerformanceQuery::new(&p, 0.0, 0.0, 0.0).unwrap();
        let banked = PerformanceQuery::new(&p, 0.0, deg(30.0), 0.0).unwrap();
        assert_eq!(stall_speed(&level).unwrap(), stall_speed_level(&level).unwrap());
        let ratio = stall_speed(&banked).unwrap() / stall_speed_level(&banked).unwrap();
        assert!((ratio - 1.0746).abs() < 1e-4);
        let mut bad = level;
        bad.cl_max = 0.0;
        assert!(stall_speed(&bad).is_err());
    }

    #[test]
    fn calibrated_stall_speed_near_58_kt() {
        let p = AircraftParams::default();
        let q = PerformanceQuery::new(&p, 0.0, 0.0, 0.0).unwrap();
        let vs = mps_to_kt(stall_speed_level(&q).unwrap());
        assert!((vs - 58.0).abs() < 3.0, "{vs}");
    }

    /// Minimum of `aV² + b/V²` is `2√(ab)`, here `2W√(K C_D0)`.
    #[test]
    fn minimum_thrust_required() {
        let p = AircraftParams::default();
        let w = p.mass_geometry.weight;
        let expected = 2.0 * w * (p.aero.k * p.aero.cd0).sqrt();
        let min = (1..4000)
            .map(|i| thrust_required(10.0 + i as f64 * 0.02, 0.0, 0.0, 0.0, &p, None).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((min - expected).abs() < 1e-6 * expected, "{min} vs {expected}");
    }

    #[test]
    fn flight_path_term_is_linear() {
        let p = AircraftParams::default();
        let v = kt_to_mps(100.0);
        let a = thrust_required(v, deg(20.0), deg(-3.0), 500.0, &p, None).unwrap();
        let b = thrust_required(v, deg(20.0), deg(4.0), 500.0, &p, None).unwrap();
        assert!((b - a - p.mass_geometry.weight * deg(7.0)).abs() < 1e-9);
    }

    #[test]
    fn sideslip_raises_thrust_required() {
        let p = AircraftParams::default();
        let v = kt_to_mps(100.0);
        let a = thrust_required(v, 0.0, 0.0, 0.0, &p, Some(0.0)).unwrap();
        let b = thrust_required(v, 0.0, 0.0, 0.0, &p, Some(deg(5.0))).unwrap();
        assert!(b > a);
        assert_eq!(a, thrust_required(v, 0.0, 0.0, 0.0, &p, None).unwrap());
    }

    #[test]
    fn gamma_max_closed_form() {
        let mut p = AircraftParams::default();
        let sl = gamma_max(0.0, 0.0, &p).unwrap();
        let w = p.mass_geometry.weight;
        let expected = p.propulsion.tmax_sl / w - 2.0 * (p.aero.k * p.aero.cd0).sqrt();
        assert!((sl - expected).abs() < 1e-15);
        p.propulsion.tmax_sl = 0.5 * w;
        p.aero.cd0 = 0.01;
        p.aero.k = 0.25;
        assert!((gamma_max(0.0, 0.0, &p).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn gamma_max_falls_with_altitude_to_about_two_degrees() {
        let p = AircraftParams::default();
        let mut last = f64::INFINITY;
        for ft in [0.0, 10000.0, 20000.0, 30000.0] {
            let g = gamma_max(ft_to_m(ft), 0.0, &p).unwrap();
            assert!(g < last);
            last = g;
        }
        assert!((last.to_degrees() - 2.0).abs() < 1.0, "{}", last.to_degrees());
    }
}
