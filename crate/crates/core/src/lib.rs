//! Maneuvering flight envelopes for a 6-DOF transport aircraft model.
//!
//! The crate computes sets of attainable steady-state trim points over
//! airspeed, flight path angle and turn rate, for the unimpaired aircraft and
//! for jammed or restricted control surfaces. It then analyzes the resulting
//! envelope boundaries.
//!
//! The pipeline, bottom to top:
//!
//! * [`model`]: atmosphere, propulsion, aerodynamic buildup and the nonlinear
//!   state derivative `f(x, u)`.
//! * [`trim`]: constrained trim optimization for a target maneuver.
//! * [`linear`]: Jacobian linearization, eigenvalue stability and
//!   controllability.
//! * [`envelope`]: failure windows, warm-started grid sweeps and mirroring.
//! * [`boundary`]: boundary extraction, limiting-factor classification,
//!   closed-form performance laws, intersection and separation analysis.
//! * [`io`]: manifests, envelope files, reports, plot data and the command
//!   implementations behind the `mfe` binary.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod envelope;
pub mod error;
pub mod io;
pub mod linear;
pub mod model;
pub mod trim;
pub mod units;

pub use error::{Error, Result};
