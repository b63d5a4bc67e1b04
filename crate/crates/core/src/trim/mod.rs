//! Steady-state trim for a target maneuver `(h*, V*, γ*, ψ̇*)`.
//!
//! θ, p, q and r are eliminated through [`pitch_theta`] and
//! [`required_rates`], so the flight-path and turn-rate equalities hold by
//! construction. The remaining seven variables `(α, β, φ, δ_th, δ_e, δ_a,
//! δ_r)` are found by minimizing `J = ½ ẋᵀQẋ` inside the box of flight limits
//! and actuator windows.

mod geometry;
pub mod qp;
mod residuals;
mod solver;

pub use geometry::{flight_path_residual, pitch_theta, required_rates};
pub use residuals::{constraint_residuals, ConstraintResiduals};
pub use solver::{
    solve_trim, trim_cost, ActiveConstraint, InfeasibleReason, SolverConfig, TrimResult,
    TrimStatus, TrimTarget, WeightMatrix,
};
