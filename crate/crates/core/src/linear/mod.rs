//! Small-perturbation analysis about a trim: finite-difference Jacobians,
//! eigenvalue stability and the controllability rank test.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::envelope::{apply_failure, FailureSpec};
use crate::model::{
    derivative_at_density, isa_density, AircraftParams, AircraftState, ControlVector, Surface,
};
use crate::trim::{SolverConfig, TrimResult, TrimStatus};
use crate::{Error, Result};

/// Largest ‖f(x*, u*)‖∞ accepted as an expansion point.
pub const EXPANSION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    /// 8×8, rows and columns ordered `[V, α, β, p, q, r, φ, θ]`.
    pub a: DMatrix<f64>,
    /// 8×m, one column per entry of `inputs`.
    pub b: DMatrix<f64>,
    pub inputs: Vec<Surface>,
    pub x_ref: AircraftState,
    pub u_ref: ControlVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub class: Stability,
    pub eigenvalues: Vec<Complex<f64>>,
    pub max_real: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub status: TrimStatus,
    pub stability: StabilityReport,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSteps {
    pub relative: f64,
    pub floor: f64,
}

impl Default for PerturbationSteps {
    fn default() -> Self {
        PerturbationSteps {
            relative: 1e-5,
            floor: 1e-7,
        }
    }
}

impl From<&SolverConfig> for PerturbationSteps {
    fn from(c: &SolverConfig) -> Self {
        PerturbationSteps {
            relative: c.linearization_step,
            floor: c.linearization_step_floor,
        }
    }
}

/// Linearizes `f` about a converged trim with the default steps.
pub fn linearize(
    state: &AircraftState,
    controls: &ControlVector,
    params: &AircraftParams,
    failure: Option<&FailureSpec>,
) -> Result<LinearModel> {
    linearize_with_steps(state, controls, params, failure, PerturbationSteps::default())
}

/// Central differences, one step per variable: `max(relative·|x|, floor)`.
/// Steps that leave the model domain are halved up to ten times. Jammed
/// surfaces get no `B` column.
pub fn linearize_with_steps(
    state: &AircraftState,
    controls: &ControlVector,
    params: &AircraftParams,
    failure: Option<&FailureSpec>,
    steps: PerturbationSteps,
) -> Result<LinearModel> {
    let limits = apply_failure(&params.limits, failure)?;
    let rho = isa_density(state.h)?;
    let f0 = crate::model::state_derivative(state, controls, params)?;
    let residual = f0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if residual > EXPANSION_TOLERANCE {
        return Err(Error::Numerical(format!(
            "expansion point is not a trim: |f| = {residual:.3e}"
        )));
    }

    let x0 = state.to_array();
    let eval_x = |x: &[f64; 8]| -> Option<[f64; 8]> {
        let s = AircraftState::from_array(*x, state.h);
        (s.v > 0.0 && s.theta.abs() < std::f64::consts::FRAC_PI_2)
            .then(|| derivative_at_density(rho, &s, controls, params))
    };
    let mut a = DMatrix::zeros(8, 8);
    for j in 0..8 {
        let col = central_difference(x0[j], steps, |xj| {
            let mut x = x0;
            x[j] = xj;
            eval_x(&x)
        })?;
        a.set_column(j, &nalgebra::DVector::from_row_slice(&col));
    }

    let inputs: Vec<Surface> = Surface::ALL
        .into_iter()
        .filter(|s| !limits.window(*s).is_jam())
        .collect();
    let mut b = DMatrix::zeros(8, inputs.len());
    for (j, surface) in inputs.iter().enumerate() {
        let col = central_difference(controls.get(*surface), steps, |uj| {
            let mut u = *controls;
            u.set(*surface, uj);
            Some(derivative_at_density(rho, state, &u, params))
        })?;
        b.set_column(j, &nalgebra::DVector::from_row_slice(&col));
    }

    Ok(LinearModel {
        a,
        b,
        inputs,
        x_ref: *state,
        u_ref: *controls,
    })
}

fn central_difference(
    x: f64,
    steps: PerturbationSteps,
    f: impl Fn(f64) -> Option<[f64; 8]>,
) -> Result<[f64; 8]> {
    let mut h = (steps.relative * x.abs()).max(steps.floor);
    for _ in 0..=10 {
        if let (Some(fp), Some(fm)) = (f(x + h), f(x - h)) {
            let mut d = [0.0; 8];
            for i in 0..8 {
                d[i] = (fp[i] - fm[i]) / (2.0 * h);
            }
            if d.iter().all(|v| v.is_finite()) {
                return Ok(d);
            }
        }
        h *= 0.5;
    }
    Err(Error::Numerical(
        "perturbation leaves the model domain at every step size".into(),
    ))
}

/// Eigenvalue test: stable iff the largest real part is below `−eps`,
/// marginal within `±eps`.
pub fn stability(model: &LinearModel, eps: f64) -> Result<StabilityReport> {
    stability_of(&model.a, eps)
}

pub fn stability_of(a: &DMatrix<f64>, eps: f64) -> Result<StabilityReport> {
    if !a.iter().all(|x| x.is_finite()) {
        return Err(Error::Numerical("state matrix is not finite".into()));
    }
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("eigenvalue iteration did not converge".into()))?;
    let eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    let max_real = eigenvalues
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let class = if max_real < -eps {
        Stability::Stable
    } else if max_real <= eps {
        Stability::Marginal
    } else {
        Stability::Unstable
    };
    Ok(StabilityReport {
        class,
        eigenvalues,
        max_real,
    })
}

/// `[B AB A²B … A⁷B]`.
pub fn controllability_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let m = b.ncols();
    let mut c = DMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        c.view_mut((0, k * m), (n, m)).copy_from(&block);
        block = a * block;
    }
    c
}

/// Numerical rank of the controllability matrix with threshold
/// `σ_max · 8 · ε_machine`.
pub fn controllability_rank(model: &LinearModel) -> usize {
    controllability_rank_with_tolerance(model, 8.0 * f64::EPSILON)
}

/// Same, with the relative singular-value threshold given explicitly.
pub fn controllability_rank_with_tolerance(model: &LinearModel, relative: f64) -> usize {
    if model.b.ncols() == 0 {
        return 0;
    }
    let c = controllability_matrix(&model.a, &model.b);
    let sv = c.singular_values();
    let smax = sv.max();
    if !(smax > 0.0) {
        return 0;
    }
    sv.iter().filter(|s| **s > smax * relative).count()
}

/// Status refinement of a converged trim: stable points are in; unstable or
/// marginal points are in only when fully controllable.
pub fn classify(
    trim: &TrimResult,
    params: &AircraftParams,
    failure: Option<&FailureSpec>,
    config: &SolverConfig,
) -> Result<Classification> {
    let model = linearize_with_steps(
        &trim.state,
        &trim.controls,
        params,
        failure,
        PerturbationSteps::from(config),
    )?;
    let stability = stability(&model, config.eigen_tolerance)?;
    let rank = controllability_rank(&model);
    let status = match stability.class {
        Stability::Stable => TrimStatus::FeasibleStable,
        _ if rank == 8 => TrimStatus::FeasibleUnstableControllable,
        _ => TrimStatus::FeasibleUnstableUncontrollable,
    };
    Ok(Classification {
        status,
        stability,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trim::{solve_trim, TrimTarget};
    use crate::units::{deg, kt_to_mps};

    fn level_trim(params: &AircraftParams) -> TrimResult {
        let t = TrimTarget::new(0.0, kt_to_mps(100.0), 0.0, 0.0);
        let r = solve_trim(&t, None, params, &SolverConfig::default(), None).unwrap();
        assert!(r.is_feasible(), "{:?}", r.status);
        r
    }

    fn model_from(a: DMatrix<f64>, b: DMatrix<f64>) -> LinearModel {
        LinearModel {
            a,
            inputs: Surface::ALL[..b.ncols()].to_vec(),
            b,
            x_ref: AircraftState::default(),
            u_ref: ControlVector::default(),
        }
    }

    #[test]
    fn negative_identity_is_stable() {
        let r = stability_of(&(-DMatrix::<f64>::identity(8, 8)), 1e-8).unwrap();
        assert_eq!(r.class, Stability::Stable);
        assert!(r.eigenvalues.iter().all(|l| (l.re + 1.0).abs() < 1e-12 && l.im == 0.0));
    }

    #[test]
    fn one_positive_eigenvalue_is_unstable() {
        let mut a = -DMatrix::<f64>::identity(8, 8);
        a[(7, 7)] = 0.1;
        assert_eq!(stability_of(&a, 1e-8).unwrap().class, Stability::Unstable);
        a[(7, 7)] = 0.0;
        assert_eq!(stability_of(&a, 1e-8).unwrap().class, Stability::Marginal);
    }

    #[test]
    fn rank_trivial_cases() {
        let zero_b = model_from(DMatrix::identity(8, 8), DMatrix::zeros(8, 4));
        assert_eq!(controllability_rank(&zero_b), 0);
        let mut b = DMatrix::zeros(8, 4);
        for j in 0..4 {
            b[(2 * j, j)] = 1.0 + j as f64;
        }
        let powers_vanish = model_from(DMatrix::zeros(8, 8), b);
        assert_eq!(controllability_rank(&powers_vanish), 4);
    }

    #[test]
    fn nominal_trim_is_controllable_at_any_reasonable_threshold() {
        let params = AircraftParams::default();
        let trim = level_trim(&params);
        let m = linearize(&trim.state, &trim.controls, &params, None).unwrap();
        assert_eq!(m.b.ncols(), 4);
        assert_eq!(controllability_rank(&m), 8);
        assert_eq!(controllability_rank_with_tolerance(&m, 1e-12), 8);
        assert_eq!(controllability_rank_with_tolerance(&m, 64.0 * f64::EPSILON), 8);
    }

    #[test]
    fn removing_inputs_never_raises_rank() {
        let params = AircraftParams::default();
        let trim = level_trim(&params);
        let full = linearize(&trim.state, &trim.controls, &params, None).unwrap();
        let full_rank = controllability_rank(&full);
        for drop in 0..4 {
            let keep: Vec<usize> = (0..4).filter(|j| *j != drop).collect();
            let reduced = model_from(full.a.clone(), full.b.select_columns(&keep));
            assert!(controllability_rank(&reduced) <= full_rank);
        }
    }

    #[test]
    fn jammed_surface_has_no_input_column() {
        let params = AircraftParams::default();
        let trim = level_trim(&params);
        let jam = FailureSpec::jam_degrees(Surface::Rudder, trim.controls.dr.to_degrees()).unwrap();
        let m = linearize(&trim.state, &trim.controls, &params, Some(&jam)).unwrap();
        assert_eq!(m.inputs, vec![Surface::Throttle, Surface::Elevator, Surface::Aileron]);
        let restricted = FailureSpec::from_degrees(Surface::Rudder, -10.0, 10.0).unwrap();
        let m = linearize(&trim.state, &trim.controls, &params, Some(&restricted)).unwrap();
        assert_eq!(m.b.ncols(), 4);
    }

    /// φ̇ = p + tanθ (q sinφ + r cosφ); at wings level with q = r = 0 the row is
    /// [0, 0, 0, 1, 0, tanθ, 0, 0].
    #[test]
    fn bank_rate_row_matches_euler_kinematics() {
        let params = AircraftParams::default();
        let trim = level_trim(&params);
        let m = linearize(&trim.state, &trim.controls, &params, None).unwrap();
        let s = trim.state;
        let (sp, cp) = s.phi.sin_cos();
        let tt = s.theta.tan();
        let sec2 = 1.0 / s.theta.cos().powi(2);
        let expected = [
            0.0,
            0.0,
            0.0,
            1.0,
            tt * sp,
            tt * cp,
            tt * (s.q * cp - s.r * sp),
            sec2 * (s.q * sp + s.r * cp),
        ];
        for j in 0..8 {
            assert!((m.a[(6, j)] - expected[j]).abs() < 1e-6, "column {j}");
        }
    }

    #[test]
    fn refuses_non_trim_expansion_point() {
        let params = AircraftParams::default();
        let mut trim = level_trim(&params);
        trim.controls.dth += 0.1;
        assert!(linearize(&trim.state, &trim.controls, &params, None).is_err());
    }

    #[test]
    fn mirrored_trim_has_mirrored_jacobian() {
        let params = AircraftParams::default();
        let cfg = SolverConfig::default();
        let t = TrimTarget::new(0.0, kt_to_mps(110.0), 0.0, deg(6.0));
        let r = solve_trim(&t, None, &params, &cfg, None).unwrap();
        assert!(r.is_feasible());
        let m = linearize(&r.state, &r.controls, &params, None).unwrap();
        let mm = linearize(&r.state.mirrored(), &r.controls.mirrored(), &params, None).unwrap();
        let sign = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0];
        let scale = m.a.amax();
        for i in 0..8 {
            for j in 0..8 {
                let d = m.a[(i, j)] - sign[i] * sign[j] * mm.a[(i, j)];
                assert!(d.abs() <= 1e-6 * scale, "({i},{j})");
            }
        }
        let e1 = stability(&m, 1e-8).unwrap();
        let e2 = stability(&mm, 1e-8).unwrap();
        assert!((e1.max_real - e2.max_real).abs() < 1e-6);
    }
}
