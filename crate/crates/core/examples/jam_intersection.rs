//! A surface jammed at X flies exactly where both [LL, X] and [X, UL] can
//! fly. Compare the jam envelope with the intersection cell by cell.
//!
//! cargo run --release --example jam_intersection

use flight_envelope::boundary::{intersect_envelopes, intersection_law};
use flight_envelope::envelope::{sweep_slice, FailureSpec, GridSpec, StartMode, SweepOptions};
use flight_envelope::model::{AircraftParams, Surface};
use flight_envelope::trim::SolverConfig;

fn main() -> flight_envelope::Result<()> {
    let params = AircraftParams::default();
    let config = SolverConfig::default();
    let grid = GridSpec::desk();
    let (v, w) = (grid.v_kt.values(), grid.psidot_dps.values());
    let options = SweepOptions {
        start: StartMode::Warm,
        threads: None,
    };
    let sweep = |f: &FailureSpec| sweep_slice(0.0, 0.0, &v, &w, Some(f), &params, &config, options);

    for x in [-10.0, 0.0, 10.0] {
        let jam = sweep(&FailureSpec::jam_degrees(Surface::Rudder, x)?)?;
        let lower = sweep(&FailureSpec::from_degrees(Surface::Rudder, -30.0, x)?)?;
        let upper = sweep(&FailureSpec::from_degrees(Surface::Rudder, x, 30.0)?)?;
        let both = intersect_envelopes(&lower, &upper)?;
        let check = intersection_law(&jam, &lower, &upper)?;
        println!(
            "jam {x:+5.1}: {} cells, intersection {} cells, {}",
            jam.feasible_count(),
            both.feasible_count(),
            check.detail
        );
    }
    Ok(())
}
