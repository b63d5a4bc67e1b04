//! Envelope sweeps over `(V, ψ̇)` grids, failure windows and the mirror
//! symmetry between failures `[LL, UL]` and `[−UL, −LL]`.

mod failure;
mod grid;
mod mirror;
mod slice;
mod sweep;

pub use failure::{apply_failure, FailureKind, FailureSpec};
pub use grid::{Axis, GridSpec};
pub use mirror::{mirror_envelope, mirror_trim, validate_mirror, MirrorCheck};
#[cfg(test)]
pub(crate) use slice::ascii_slice;
pub use slice::{Envelope3D, EnvelopeSlice, Provenance, TOOL_VERSION};
pub use sweep::{multiplicity_flags, sweep_3d, sweep_slice, StartMode, SweepOptions};
