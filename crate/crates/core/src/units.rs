//! Unit conversions used at the external interfaces.
//!
//! Files and the CLI speak knots, feet, degrees and deg/s; everything inside
//! the crate is SI with angles in radians.

/// Meters per second in one knot.
pub const KT_TO_MPS: f64 = 0.514444;
/// Meters in one foot.
pub const FT_TO_M: f64 = 0.3048;
/// Standard gravitational acceleration (m/s²).
pub const G0: f64 = 9.80665;

#[inline]
pub fn kt_to_mps(kt: f64) -> f64 {
    kt * KT_TO_MPS
}

#[inline]
pub fn mps_to_kt(mps: f64) -> f64 {
    mps / KT_TO_MPS
}

#[inline]
pub fn ft_to_m(ft: f64) -> f64 {
    ft * FT_TO_M
}

#[inline]
pub fn m_to_ft(m: f64) -> f64 {
    m / FT_TO_M
}

#[inline]
pub fn deg(x: f64) -> f64 {
    x.to_radians()
}

#[inline]
pub fn to_deg(x: f64) -> f64 {
    x.to_degrees()
}
