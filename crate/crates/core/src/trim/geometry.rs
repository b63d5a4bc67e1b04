//! Kinematic relations that pin θ, p, q and r for a steady maneuver, so the
//! trim search only has to handle the remaining variables.

use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

/// Pitch angle that realizes flight path angle `gamma` for the given
/// aerodynamic angles and bank, from the closed form
///
/// `tan θ = (a·b + sin γ·√(a² − sin²γ + b²)) / (a² − sin²γ)`
///
/// with `a = cos α cos β` and `b = sin φ sin β + cos φ sin α cos β`.
pub fn pitch_theta(alpha: f64, beta: f64, phi: f64, gamma: f64) -> Result<f64> {
    let a = alpha.cos() * beta.cos();
    let b = phi.sin() * beta.sin() + phi.cos() * alpha.sin() * beta.cos();
    let sg = gamma.sin();
    let den = a * a - sg * sg;
    if !(den > 0.0) {
        return Err(Error::Geometry(format!(
            "a² − sin²γ = {den:e} is not positive"
        )));
    }
    let num = a * b + sg * (den + b * b).sqrt();
    let theta = num.atan2(den);
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::Geometry(format!("pitch angle {theta} rad reaches ±90 deg")));
    }
    Ok(theta)
}

/// Body rates `(p, q, r)` of a steady turn at heading rate `psidot`.
pub fn required_rates(theta: f64, phi: f64, psidot: f64) -> (f64, f64, f64) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (-psidot * st, psidot * ct * sp, psidot * ct * cp)
}

/// `sin γ − (a sin θ − b cos θ)`: zero when θ realizes γ.
pub fn flight_path_residual(alpha: f64, beta: f64, phi: f64, theta: f64, gamma: f64) -> f64 {
    let a = alpha.cos() * beta.cos();
    let b = phi.sin() * beta.sin() + phi.cos() * alpha.sin() * beta.cos();
    gamma.sin() - (a * theta.sin() - b * theta.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::deg;

    #[test]
    fn reduces_to_alpha_plus_gamma_without_bank_or_slip() {
        let theta = pitch_theta(deg(2.0), 0.0, 0.0, deg(3.0)).unwrap();
        assert!((theta - deg(5.0)).abs() <= 1e-12);
        for a in [-4.0, 0.0, 3.3, 10.5] {
            let t = pitch_theta(deg(a), 0.0, 0.0, 0.0).unwrap();
            assert!((t - deg(a)).abs() <= 1e-12);
        }
    }

    /// Bisection on sin γ = a sin θ − b cos θ over (−π/2, π/2), independent of
    /// the closed form.
    fn bisect_theta(alpha: f64, beta: f64, phi: f64, gamma: f64) -> f64 {
        let g = |t: f64| -flight_path_residual(alpha, beta, phi, t, gamma);
        let (mut lo, mut hi) = (-1.5, 1.5);
        assert!(g(lo) < 0.0 && g(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn satisfies_transcendental_relation() {
        let (alpha, beta, phi, gamma) = (deg(5.0), deg(3.0), deg(30.0), deg(-2.0));
        let theta = pitch_theta(alpha, beta, phi, gamma).unwrap();
        assert!(flight_path_residual(alpha, beta, phi, theta, gamma).abs() <= 1e-12);
        assert!((theta - bisect_theta(alpha, beta, phi, gamma)).abs() <= 1e-12);
    }

    #[test]
    fn geometry_errors() {
        // a = cos α cos β tiny, |sin γ| larger
        assert!(matches!(
            pitch_theta(deg(80.0), deg(80.0), 0.0, deg(5.0)),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn rates_vanish_without_turn() {
        assert_eq!(required_rates(0.3, -0.2, 0.0), (-0.0, 0.0, 0.0));
    }

    #[test]
    fn flat_turn_is_pure_yaw() {
        let (p, q, r) = required_rates(0.0, 0.0, deg(0.2));
        assert_eq!(p, -0.0);
        assert_eq!(q, 0.0);
        assert!((r - deg(0.2)).abs() < 1e-18);
    }

    /// Inertial yaw-rate vector (0, 0, ψ̇) rotated into body axes through the
    /// 3-2-1 direction cosine matrix.
    #[test]
    fn matches_dcm_rotation() {
        let (theta, phi, psidot) = (deg(5.0), deg(30.0), deg(3.0));
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        // third column of the inertial-to-body DCM with ψ = 0
        let dcm_col = [-st, sp * ct, cp * ct];
        let expected = dcm_col.map(|c| c * psidot);
        let (p, q, r) = required_rates(theta, phi, psidot);
        for (got, want) in [p, q, r].iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
    }
}
