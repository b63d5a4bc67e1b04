#![allow(dead_code)]

use flight_envelope::envelope::{sweep_slice, EnvelopeSlice, FailureSpec, GridSpec, StartMode, SweepOptions};
use flight_envelope::model::{state_derivative, AircraftParams, AircraftState, ControlVector, Surface};
use flight_envelope::trim::SolverConfig;

pub fn desk_axes() -> (Vec<f64>, Vec<f64>) {
    let g = GridSpec::desk();
    (g.v_kt.values(), g.psidot_dps.values())
}

pub fn rudder(ll: f64, ul: f64) -> FailureSpec {
    FailureSpec::from_degrees(Surface::Rudder, ll, ul).unwrap()
}

pub fn sweep(
    h_ft: f64,
    gamma_deg: f64,
    v: &[f64],
    w: &[f64],
    failure: Option<&FailureSpec>,
    params: &AircraftParams,
    start: StartMode,
) -> EnvelopeSlice {
    let options = SweepOptions {
        start,
        threads: None,
    };
    sweep_slice(h_ft, gamma_deg, v, w, failure, params, &SolverConfig::default(), options).unwrap()
}

pub fn desk(failure: Option<&FailureSpec>, params: &AircraftParams, start: StartMode) -> EnvelopeSlice {
    let (v, w) = desk_axes();
    sweep(0.0, 0.0, &v, &w, failure, params, start)
}

/// Scaled size of a state deviation: airspeed relative to the trim speed,
/// angles and rates as they are.
pub fn deviation_norm(x: &[f64; 8], x0: &[f64; 8]) -> f64 {
    let mut s = ((x[0] - x0[0]) / x0[0]).powi(2);
    for i in 1..8 {
        s += (x[i] - x0[i]).powi(2);
    }
    s.sqrt()
}

/// Fixed-step RK4 of the nonlinear model with controls and altitude frozen.
/// Returns the deviation norm from the trim at every step, or `None` if the
/// trajectory leaves the model's domain.
pub fn time_march(
    trim: &AircraftState,
    controls: &ControlVector,
    params: &AircraftParams,
    perturbation: [f64; 8],
    dt: f64,
    duration: f64,
) -> Option<Vec<f64>> {
    let x0 = trim.to_array();
    let h = trim.h;
    let mut x = x0;
    for i in 0..8 {
        x[i] += perturbation[i];
    }
    let f = |x: &[f64; 8]| -> Option<[f64; 8]> {
        state_derivative(&AircraftState::from_array(*x, h), controls, params).ok()
    };
    let add = |x: &[f64; 8], k: &[f64; 8], c: f64| {
        let mut out = *x;
        for i in 0..8 {
            out[i] += c * k[i];
        }
        out
    };
    let steps = (duration / dt).round() as usize;
    let mut norms = Vec::with_capacity(steps + 1);
    norms.push(deviation_norm(&x, &x0));
    for _ in 0..steps {
        let k1 = f(&x)?;
        let k2 = f(&add(&x, &k1, dt / 2.0))?;
        let k3 = f(&add(&x, &k2, dt / 2.0))?;
        let k4 = f(&add(&x, &k3, dt))?;
        for i in 0..8 {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        norms.push(deviation_norm(&x, &x0));
    }
    Some(norms)
}
