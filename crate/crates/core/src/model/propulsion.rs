use super::{isa_density, AircraftParams, RHO_SEA_LEVEL};
use crate::{Error, Result};

/// Installed thrust (N) at altitude `h` (m), airspeed `v` (m/s) and throttle
/// `dth`, along the body x-axis.
///
/// `T = dth · TmaxS · (ρ/ρS)^m · max(0, 1 + c1·V + c2·V²)`
pub fn thrust_available(h: f64, v: f64, dth: f64, params: &AircraftParams) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::Domain(format!("airspeed must be non-negative, got {v}")));
    }
    let rho = isa_density(h)?;
    Ok(thrust_at_density(rho, v, dth, params))
}

pub(crate) fn thrust_at_density(rho: f64, v: f64, dth: f64, params: &AircraftParams) -> f64 {
    let pr = &params.propulsion;
    let speed_factor = (1.0 + pr.c1 * v + pr.c2 * v * v).max(0.0);
    dth * pr.tmax_sl * (rho / RHO_SEA_LEVEL).powf(pr.m_lapse) * speed_factor
}
