use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use super::geometry::{pitch_theta, required_rates};
use super::qp::solve_box_qp;
use crate::envelope::{apply_failure, FailureSpec};
use crate::linear;
use crate::model::derivative_at_density;
use crate::model::{
    isa_density, AircraftParams, AircraftState, ConstraintConfig, ControlVector, StateDerivative,
    MAX_ALTITUDE_M,
};
use crate::units::deg;
use crate::{Error, Result};

const NZ: usize = 7;
type Z = [f64; NZ];
type Jac = SMatrix<f64, 8, NZ>;

/// Target maneuver. SI units, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrimTarget {
    pub h: f64,
    pub v: f64,
    pub gamma: f64,
    pub psidot: f64,
}

impl TrimTarget {
    pub fn new(h: f64, v: f64, gamma: f64, psidot: f64) -> Self {
        TrimTarget {
            h,
            v,
            gamma,
            psidot,
        }
    }

    pub fn mirrored(&self) -> Self {
        TrimTarget {
            psidot: -self.psidot,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=MAX_ALTITUDE_M).contains(&self.h) {
            return Err(Error::Domain(format!("target altitude {} m out of range", self.h)));
        }
        if !(self.v > 0.0) || !self.v.is_finite() {
            return Err(Error::Domain(format!("target airspeed {} must be positive", self.v)));
        }
        if !(self.gamma.abs() < std::f64::consts::FRAC_PI_2) || !self.psidot.is_finite() {
            return Err(Error::Domain("target flight path or turn rate out of range".into()));
        }
        Ok(())
    }
}

/// Symmetric positive definite 8×8 state-derivative weighting.
///
/// In files either the 8 diagonal entries or a full nested 8×8 array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct WeightMatrix {
    m: [[f64; 8]; 8],
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Diagonal([f64; 8]),
    Full([[f64; 8]; 8]),
}

impl TryFrom<WeightRepr> for WeightMatrix {
    type Error = Error;

    fn try_from(r: WeightRepr) -> Result<Self> {
        let w = match r {
            WeightRepr::Diagonal(d) => WeightMatrix::diagonal(d),
            WeightRepr::Full(m) => WeightMatrix { m },
        };
        w.cholesky_factor()?;
        Ok(w)
    }
}

impl From<WeightMatrix> for WeightRepr {
    fn from(w: WeightMatrix) -> Self {
        let mut diag = [0.0; 8];
        let mut off_diagonal = false;
        for i in 0..8 {
            diag[i] = w.m[i][i];
            for j in 0..8 {
                off_diagonal |= i != j && w.m[i][j] != 0.0;
            }
        }
        if off_diagonal {
            WeightRepr::Full(w.m)
        } else {
            WeightRepr::Diagonal(diag)
        }
    }
}

impl Default for WeightMatrix {
    fn default() -> Self {
        WeightMatrix::diagonal([1.0; 8])
    }
}

impl WeightMatrix {
    pub fn diagonal(d: [f64; 8]) -> Self {
        let mut m = [[0.0; 8]; 8];
        for i in 0..8 {
            m[i][i] = d[i];
        }
        WeightMatrix { m }
    }

    pub fn matrix(&self) -> SMatrix<f64, 8, 8> {
        SMatrix::from_fn(|i, j| self.m[i][j])
    }

    /// Upper factor `Lᵀ` of `Q = L Lᵀ`, so that `J = ½‖Lᵀẋ‖²`.
    pub(crate) fn cholesky_factor(&self) -> Result<SMatrix<f64, 8, 8>> {
        let q = self.matrix();
        if (q - q.transpose()).amax() > 1e-12 * q.amax().max(1.0) {
            return Err(Error::Validation("weighting matrix Q is not symmetric".into()));
        }
        let chol = q
            .cholesky()
            .ok_or_else(|| Error::Validation("weighting matrix Q is not positive definite".into()))?;
        Ok(chol.l().transpose())
    }

    pub fn cost(&self, xdot: &StateDerivative) -> f64 {
        let x = SVector::<f64, 8>::from_column_slice(xdot);
        0.5 * x.dot(&(self.matrix() * x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(rename = "Q")]
    pub q: WeightMatrix,
    /// Convergence threshold on J.
    pub cost_tolerance: f64,
    /// Largest admissible |ẋᵢ| at a reported trim.
    pub derivative_tolerance: f64,
    /// Box-constraint slack, also the width used to report active bounds.
    pub constraint_tolerance: f64,
    pub max_iterations: usize,
    /// Central-difference step for the solver Jacobian.
    pub jacobian_step: f64,
    /// Relative linearization step, with an absolute floor.
    pub linearization_step: f64,
    pub linearization_step_floor: f64,
    /// Half-width of the marginal band on the largest eigenvalue real part (1/s).
    pub eigen_tolerance: f64,
    /// Retry failed solves from a few fixed extra starting points.
    pub fallback_seeds: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            q: WeightMatrix::default(),
            cost_tolerance: 1e-7,
            derivative_tolerance: 1e-7,
            constraint_tolerance: 1e-6,
            max_iterations: 300,
            jacobian_step: 1e-6,
            linearization_step: 1e-5,
            linearization_step_floor: 1e-7,
            eigen_tolerance: 1e-8,
            fallback_seeds: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.q.cholesky_factor()?;
        for (name, x) in [
            ("cost_tolerance", self.cost_tolerance),
            ("derivative_tolerance", self.derivative_tolerance),
            ("constraint_tolerance", self.constraint_tolerance),
            ("jacobian_step", self.jacobian_step),
            ("linearization_step", self.linearization_step),
            ("linearization_step_floor", self.linearization_step_floor),
            ("eigen_tolerance", self.eigen_tolerance),
        ] {
            if !(x > 0.0) {
                return Err(Error::Validation(format!("{name} must be positive")));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::Validation("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Bounds that can be active at a trim or at an infeasible best point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActiveConstraint {
    AlphaLimit,
    BankLimit,
    ThrottleUpper,
    ThrottleLower,
    AileronUL,
    AileronLL,
    RudderUL,
    RudderLL,
    ElevatorUL,
    ElevatorLL,
    /// Lower end of the modeled α range.
    AlphaLower,
    /// Edge of the modeled sideslip range.
    BetaLimit,
}

impl ActiveConstraint {
    pub fn name(&self) -> &'static str {
        match self {
            ActiveConstraint::AlphaLimit => "alpha_limit",
            ActiveConstraint::BankLimit => "bank_limit",
            ActiveConstraint::ThrottleUpper => "throttle_upper",
            ActiveConstraint::ThrottleLower => "throttle_lower",
            ActiveConstraint::AileronUL => "aileron_ul",
            ActiveConstraint::AileronLL => "aileron_ll",
            ActiveConstraint::RudderUL => "rudder_ul",
            ActiveConstraint::RudderLL => "rudder_ll",
            ActiveConstraint::ElevatorUL => "elevator_ul",
            ActiveConstraint::ElevatorLL => "elevator_ll",
            ActiveConstraint::AlphaLower => "alpha_lower",
            ActiveConstraint::BetaLimit => "beta_limit",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        use ActiveConstraint::*;
        [
            AlphaLimit, BankLimit, ThrottleUpper, ThrottleLower, AileronUL, AileronLL, RudderUL,
            RudderLL, ElevatorUL, ElevatorLL, AlphaLower, BetaLimit,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

impl fmt::Display for ActiveConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfeasibleReason {
    /// Flight-path relation has no solution.
    Geometry,
    /// Iteration budget exhausted.
    NoConvergence,
    /// Stationary on the constraint box with J above tolerance; the active
    /// set of the best point is the obstruction.
    Obstructed,
    /// J met the cost tolerance but some |ẋᵢ| did not.
    Residual,
    /// Converged point could not be linearized.
    Linearization,
}

impl InfeasibleReason {
    pub fn name(&self) -> &'static str {
        match self {
            InfeasibleReason::Geometry => "geometry",
            InfeasibleReason::NoConvergence => "no_convergence",
            InfeasibleReason::Obstructed => "obstructed",
            InfeasibleReason::Residual => "residual",
            InfeasibleReason::Linearization => "linearization",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        use InfeasibleReason::*;
        [Geometry, NoConvergence, Obstructed, Residual, Linearization]
            .into_iter()
            .find(|r| r.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrimStatus {
    Infeasible(InfeasibleReason),
    FeasibleStable,
    FeasibleUnstableControllable,
    FeasibleUnstableUncontrollable,
}

impl TrimStatus {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, TrimStatus::Infeasible(_))
    }

    /// Envelope membership: stable, or unstable but controllable.
    pub fn in_envelope(&self) -> bool {
        matches!(
            self,
            TrimStatus::FeasibleStable | TrimStatus::FeasibleUnstableControllable
        )
    }

    pub fn label(&self) -> String {
        match self {
            TrimStatus::Infeasible(r) => format!("infeasible:{}", r.name()),
            TrimStatus::FeasibleStable => "stable".into(),
            TrimStatus::FeasibleUnstableControllable => "unstable_controllable".into(),
            TrimStatus::FeasibleUnstableUncontrollable => "unstable_uncontrollable".into(),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "stable" => Some(TrimStatus::FeasibleStable),
            "unstable_controllable" => Some(TrimStatus::FeasibleUnstableControllable),
            "unstable_uncontrollable" => Some(TrimStatus::FeasibleUnstableUncontrollable),
            _ => s
                .strip_prefix("infeasible:")
                .and_then(InfeasibleReason::from_name)
                .map(TrimStatus::Infeasible),
        }
    }
}

impl fmt::Display for TrimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrimResult {
    pub target: TrimTarget,
    pub state: AircraftState,
    pub controls: ControlVector,
    /// Final J.
    pub residual: f64,
    /// max |ẋᵢ| at the returned point.
    pub max_derivative: f64,
    pub status: TrimStatus,
    pub active: BTreeSet<ActiveConstraint>,
    pub iterations: usize,
}

impl TrimResult {
    pub fn is_feasible(&self) -> bool {
        self.status.is_feasible()
    }

    pub fn in_envelope(&self) -> bool {
        self.status.in_envelope()
    }

    pub fn initial_guess(&self) -> (AircraftState, ControlVector) {
        (self.state, self.controls)
    }
}

/// `J = ½ ẋᵀQẋ` evaluated from scratch through the state derivative.
pub fn trim_cost(
    state: &AircraftState,
    controls: &ControlVector,
    params: &AircraftParams,
    q: &WeightMatrix,
) -> Result<f64> {
    let xdot = crate::model::state_derivative(state, controls, params)?;
    Ok(q.cost(&xdot))
}

/// Decision-variable layout: α, β, φ, δ_th, δ_e, δ_a, δ_r.
struct Problem<'a> {
    target: TrimTarget,
    rho: f64,
    params: &'a AircraftParams,
    lt: SMatrix<f64, 8, 8>,
    lo: Z,
    hi: Z,
}

impl<'a> Problem<'a> {
    fn assemble(&self, z: &Z) -> Result<(AircraftState, ControlVector)> {
        let (alpha, beta, phi) = (z[0], z[1], z[2]);
        let theta = pitch_theta(alpha, beta, phi, self.target.gamma)?;
        let (p, q, r) = required_rates(theta, phi, self.target.psidot);
        let state = AircraftState {
            v: self.target.v,
            alpha,
            beta,
            p,
            q,
            r,
            phi,
            theta,
            h: self.target.h,
        };
        let controls = ControlVector {
            dth: z[3],
            de: z[4],
            da: z[5],
            dr: z[6],
        };
        Ok((state, controls))
    }

    fn derivative(&self, z: &Z) -> Result<StateDerivative> {
        let (s, u) = self.assemble(z)?;
        Ok(derivative_at_density(self.rho, &s, &u, self.params))
    }

    fn weighted(&self, z: &Z) -> Result<SVector<f64, 8>> {
        let xdot = self.derivative(z)?;
        Ok(self.lt * SVector::<f64, 8>::from_column_slice(&xdot))
    }

    fn jacobian(&self, z: &Z, step: f64) -> Result<Jac> {
        let mut jac = Jac::zeros();
        for k in 0..NZ {
            if self.lo[k] == self.hi[k] {
                continue;
            }
            let mut zp = *z;
            let mut zm = *z;
            zp[k] += step;
            zm[k] -= step;
            let col = (self.weighted(&zp)? - self.weighted(&zm)?) / (2.0 * step);
            jac.set_column(k, &col);
        }
        Ok(jac)
    }

    fn clamp(&self, z: &mut Z) {
        for k in 0..NZ {
            z[k] = z[k].clamp(self.lo[k], self.hi[k]);
        }
    }

    fn active_set(&self, z: &Z, tol: f64) -> BTreeSet<ActiveConstraint> {
        use ActiveConstraint::*;
        let mut set = BTreeSet::new();
        let pairs: [(Option<ActiveConstraint>, Option<ActiveConstraint>); NZ] = [
            (Some(AlphaLower), Some(AlphaLimit)),
            (Some(BetaLimit), Some(BetaLimit)),
            (Some(BankLimit), Some(BankLimit)),
            (Some(ThrottleLower), Some(ThrottleUpper)),
            (Some(ElevatorLL), Some(ElevatorUL)),
            (Some(AileronLL), Some(AileronUL)),
            (Some(RudderLL), Some(RudderUL)),
        ];
        for k in 0..NZ {
            // a jammed surface sits on both bounds by definition
            if self.lo[k] == self.hi[k] {
                continue;
            }
            if z[k] <= self.lo[k] + tol {
                set.extend(pairs[k].0);
            }
            if z[k] >= self.hi[k] - tol {
                set.extend(pairs[k].1);
            }
        }
        set
    }
}

fn bounds(limits: &ConstraintConfig) -> (Z, Z) {
    let lo = [
        limits.alpha_min,
        -limits.beta_max,
        -limits.phi_max,
        limits.throttle.lower,
        limits.elevator.lower,
        limits.aileron.lower,
        limits.rudder.lower,
    ];
    let hi = [
        limits.alpha_max,
        limits.beta_max,
        limits.phi_max,
        limits.throttle.upper,
        limits.elevator.upper,
        limits.aileron.upper,
        limits.rudder.upper,
    ];
    (lo, hi)
}

/// Cold-start point: α = 3°, wings level, no sideslip, half throttle,
/// surfaces centered (then clipped into the active windows).
fn cold_start() -> Z {
    [deg(3.0), 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]
}

/// Solves for a trim at `target`, honoring `failure` if given.
///
/// `initial_guess` warm-starts the search; without it the fixed cold-start
/// point is used. A failed warm start is retried once from the cold start,
/// then from the fallback seeds when enabled. Converged points are classified
/// by stability and controllability; everything else comes back `Infeasible`
/// with the active set of the best point found.
pub fn solve_trim(
    target: &TrimTarget,
    failure: Option<&FailureSpec>,
    params: &AircraftParams,
    config: &SolverConfig,
    initial_guess: Option<(&AircraftState, &ControlVector)>,
) -> Result<TrimResult> {
    target.validate()?;
    let limits = apply_failure(&params.limits, failure)?;
    let rho = isa_density(target.h)?;
    let (lo, hi) = bounds(&limits);
    let problem = Problem {
        target: *target,
        rho,
        params,
        lt: config.q.cholesky_factor()?,
        lo,
        hi,
    };

    let first = match initial_guess {
        Some((s, u)) => [s.alpha, s.beta, s.phi, u.dth, u.de, u.da, u.dr],
        None => cold_start(),
    };
    let accepted = |o: &Outcome| {
        problem
            .derivative(&o.z)
            .map(|x| config.q.cost(&x) <= config.cost_tolerance && max_abs(&x) <= config.derivative_tolerance)
            .unwrap_or(false)
    };
    let cost_of = |o: &Outcome| {
        problem
            .derivative(&o.z)
            .map(|x| config.q.cost(&x))
            .unwrap_or(f64::INFINITY)
    };

    let mut starts = vec![first];
    if initial_guess.is_some() {
        starts.push(cold_start());
    }
    if config.fallback_seeds {
        starts.extend(fallback_seeds(target, params.gravity()));
    }
    let mut best: Option<Outcome> = None;
    let mut iterations = 0;
    for mut z0 in starts {
        problem.clamp(&mut z0);
        let o = minimize(&problem, z0, config);
        iterations += o.iterations;
        let done = accepted(&o);
        if best.as_ref().is_none_or(|b| done || cost_of(&o) < cost_of(b)) {
            best = Some(o);
        }
        if done {
            break;
        }
    }
    let outcome = best.expect("at least one start");
    let outcome = Outcome {
        iterations,
        ..outcome
    };
    let z = outcome.z;

    let infeasible = |reason: InfeasibleReason, z: &Z, iterations: usize| -> Result<TrimResult> {
        let (state, controls) = match problem.assemble(z) {
            Ok(sc) => sc,
            Err(_) => {
                let (mut s, u) = fallback_point(&problem, z);
                s.theta = 0.0;
                (s, u)
            }
        };
        let (residual, max_derivative) = match problem.derivative(z) {
            Ok(xdot) => (config.q.cost(&xdot), max_abs(&xdot)),
            Err(_) => (f64::INFINITY, f64::INFINITY),
        };
        Ok(TrimResult {
            target: *target,
            state,
            controls,
            residual,
            max_derivative,
            status: TrimStatus::Infeasible(reason),
            active: problem.active_set(z, config.constraint_tolerance),
            iterations,
        })
    };

    let xdot = match problem.derivative(&z) {
        Ok(x) => x,
        Err(_) => return infeasible(InfeasibleReason::Geometry, &z, outcome.iterations),
    };
    let cost = config.q.cost(&xdot);
    let max_derivative = max_abs(&xdot);
    if cost > config.cost_tolerance {
        let reason = if outcome.exhausted {
            InfeasibleReason::NoConvergence
        } else {
            InfeasibleReason::Obstructed
        };
        return infeasible(reason, &z, outcome.iterations);
    }
    if max_derivative > config.derivative_tolerance {
        return infeasible(InfeasibleReason::Residual, &z, outcome.iterations);
    }

    let (state, controls) = problem.assemble(&z)?;
    let mut result = TrimResult {
        target: *target,
        state,
        controls,
        residual: cost,
        max_derivative,
        status: TrimStatus::FeasibleStable,
        active: problem.active_set(&z, config.constraint_tolerance),
        iterations: outcome.iterations,
    };
    result.status = match linear::classify(&result, params, failure, config) {
        Ok(c) => c.status,
        Err(_) => TrimStatus::Infeasible(InfeasibleReason::Linearization),
    };
    Ok(result)
}

/// Extra starting points tried after a failed solve: the coordinated turn,
/// then the same bank with sideslip into the turn.
fn fallback_seeds(target: &TrimTarget, g: f64) -> Vec<Z> {
    let phi = (target.v * target.psidot / g).atan();
    let mut seeds = vec![[deg(3.0), 0.0, phi, 0.5, 0.0, 0.0, 0.0]];
    if target.psidot != 0.0 {
        let sign = target.psidot.signum();
        for beta in [10.0, 20.0] {
            seeds.push([
                deg(6.0),
                -sign * deg(beta),
                phi,
                0.8,
                0.0,
                sign * deg(beta),
                -sign * deg(beta),
            ]);
        }
    }
    seeds
}

fn fallback_point(problem: &Problem<'_>, z: &Z) -> (AircraftState, ControlVector) {
    (
        AircraftState {
            v: problem.target.v,
            alpha: z[0],
            beta: z[1],
            p: 0.0,
            q: 0.0,
            r: 0.0,
            phi: z[2],
            theta: 0.0,
            h: problem.target.h,
        },
        ControlVector {
            dth: z[3],
            de: z[4],
            da: z[5],
            dr: z[6],
        },
    )
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

struct Outcome {
    z: Z,
    iterations: usize,
    exhausted: bool,
}

/// Gauss-Newton SQP on the box: each step solves the bound-constrained
/// quadratic model `½‖r + Jd‖² + ½μ‖d‖²` and is accepted or rejected by the
/// ratio of actual to predicted decrease, adapting the damping μ.
fn minimize(problem: &Problem<'_>, z0: Z, config: &SolverConfig) -> Outcome {
    let mut z = z0;
    let Ok(mut r) = problem.weighted(&z) else {
        return Outcome {
            z,
            iterations: 0,
            exhausted: false,
        };
    };
    let mut cost = 0.5 * r.norm_squared();
    let mut mu = -1.0;
    let mut nu = 2.0;
    let mut stalled = 0;
    // Once J is below tolerance keep polishing until the derivative itself
    // is far inside its tolerance or no further progress is possible.
    let polish_target = 1e-3 * config.derivative_tolerance;

    for it in 0..config.max_iterations {
        let raw_max = problem.derivative(&z).map(|x| max_abs(&x)).unwrap_or(f64::INFINITY);
        if raw_max <= polish_target {
            return Outcome {
                z,
                iterations: it,
                exhausted: false,
            };
        }
        let Ok(jac) = problem.jacobian(&z, config.jacobian_step) else {
            break;
        };
        let jtj = jac.transpose() * jac;
        let grad = jac.transpose() * r;

        // projected gradient: stationary on the box?
        let mut pg = 0.0f64;
        for k in 0..NZ {
            let g = grad[k];
            let blocked = (z[k] <= problem.lo[k] && g > 0.0) || (z[k] >= problem.hi[k] && g < 0.0);
            if !blocked && problem.lo[k] < problem.hi[k] {
                pg = pg.max(g.abs());
            }
        }
        if pg <= 1e-15 * (1.0 + cost) {
            return Outcome {
                z,
                iterations: it,
                exhausted: false,
            };
        }

        if mu < 0.0 {
            mu = 1e-3 * (0..NZ).map(|k| jtj[(k, k)]).fold(0.0, f64::max).max(1e-12);
        }

        let h = DMatrix::from_fn(NZ, NZ, |i, j| jtj[(i, j)] + if i == j { mu } else { 0.0 });
        let g = DVector::from_fn(NZ, |i, _| grad[i]);
        let lo = DVector::from_fn(NZ, |i, _| problem.lo[i] - z[i]);
        let hi = DVector::from_fn(NZ, |i, _| problem.hi[i] - z[i]);
        let Some(d) = solve_box_qp(&h, &g, &lo, &hi) else {
            mu *= nu;
            nu *= 2.0;
            continue;
        };

        let mut trial = z;
        for k in 0..NZ {
            trial[k] += d[k];
        }
        problem.clamp(&mut trial);
        let step_norm = d.amax();

        let jd = jac * SVector::<f64, NZ>::from_fn(|i, _| d[i]);
        let predicted = -(grad.dot(&SVector::<f64, NZ>::from_fn(|i, _| d[i])) + 0.5 * jd.norm_squared());
        let trial_r = problem.weighted(&trial).ok();
        let trial_cost = trial_r.map(|tr| 0.5 * tr.norm_squared()).unwrap_or(f64::INFINITY);
        let gain = if predicted > 0.0 {
            (cost - trial_cost) / predicted
        } else {
            -1.0
        };

        if gain > 1e-4 && trial_cost < cost {
            let rel = (cost - trial_cost) / cost.max(1e-300);
            z = trial;
            r = trial_r.expect("finite trial residual");
            cost = trial_cost;
            mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * gain - 1.0).powi(3));
            nu = 2.0;
            stalled = if rel < 1e-10 { stalled + 1 } else { 0 };
        } else {
            mu *= nu;
            nu *= 2.0;
            stalled += 1;
        }

        if stalled >= 8 || mu > 1e20 || (step_norm < 1e-15 && gain <= 0.0) {
            return Outcome {
                z,
                iterations: it + 1,
                exhausted: false,
            };
        }
    }
    Outcome {
        z,
        iterations: config.max_iterations,
        exhausted: true,
    }
}
