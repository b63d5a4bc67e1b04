use crate::units::G0;
use crate::{Error, Result};

/// Sea-level standard density (kg/m³).
pub const RHO_SEA_LEVEL: f64 = 1.225;
/// Highest altitude covered by the troposphere and lower-stratosphere layers.
pub const MAX_ALTITUDE_M: f64 = 20_000.0;

const T0: f64 = 288.15;
const P0: f64 = 101_325.0;
const LAPSE: f64 = 0.0065;
const R_AIR: f64 = 287.052_87;
const TROPOPAUSE_M: f64 = 11_000.0;

/// International Standard Atmosphere density at geopotential altitude `h` (m).
pub fn isa_density(h: f64) -> Result<f64> {
    if !(0.0..=MAX_ALTITUDE_M).contains(&h) {
        return Err(Error::Domain(format!(
            "altitude {h} m outside modeled range [0, {MAX_ALTITUDE_M}] m"
        )));
    }
    let exponent = G0 / (LAPSE * R_AIR);
    let (t, p) = if h <= TROPOPAUSE_M {
        let t = T0 - LAPSE * h;
        (t, P0 * (t / T0).powf(exponent))
    } else {
        let t11 = T0 - LAPSE * TROPOPAUSE_M;
        let p11 = P0 * (t11 / T0).powf(exponent);
        (t11, p11 * (-G0 * (h - TROPOPAUSE_M) / (R_AIR * t11)).exp())
    };
    // Scaled so that the sea-level value is exactly the tabulated 1.225.
    Ok(p / (R_AIR * t) * (RHO_SEA_LEVEL / (P0 / (R_AIR * T0))))
}
