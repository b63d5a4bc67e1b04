//! The aircraft model: atmosphere, propulsion, aerodynamics and the
//! nonlinear equations of motion.

mod aero;
mod atmosphere;
mod dynamics;
mod params;
mod propulsion;
mod state;

pub use aero::{aero_coefficients, lift_coefficient, AeroCoefficients};
pub use atmosphere::{isa_density, MAX_ALTITUDE_M, RHO_SEA_LEVEL};
pub use dynamics::{state_derivative, StateDerivative};
pub(crate) use dynamics::derivative_at_density;
pub use params::{
    AeroDerivativeSet, AircraftParams, ConstraintConfig, MassGeometry, ParamsFile,
    PropulsionParams, SurfaceWindow,
};
pub use propulsion::thrust_available;
pub use state::{AircraftState, ControlVector, Surface};
