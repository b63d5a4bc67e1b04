//! Build the envelope for a failure window by mirroring the envelope of the
//! opposite window, then spot-check the mirror with direct trims.
//!
//! cargo run --release --example mirror_envelope

use flight_envelope::boundary::symmetry_law;
use flight_envelope::envelope::{mirror_envelope, sweep_slice, validate_mirror, FailureSpec, GridSpec, StartMode, SweepOptions};
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

    let left = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0)?;
    let computed = sweep_slice(0.0, 0.0, &v, &w, Some(&left), &params, &config, options)?;
    let mirrored = mirror_envelope(&computed, &params)?;
    println!(
        "{} mirrored into {}: {} feasible cells",
        left,
        mirrored.provenance.failure.expect("failure case"),
        mirrored.feasible_count()
    );

    let checks = validate_mirror(&mirrored, &params, 12, 7)?;
    let agree = checks.iter().filter(|c| c.agrees()).count();
    println!("sampled boundary cells: {agree} of {} agree with direct trims", checks.len());

    let direct = sweep_slice(0.0, 0.0, &v, &w, Some(&left.mirrored()), &params, &config, options)?;
    let check = symmetry_law(&mirrored, &direct)?;
    println!("full comparison: {} ({})", if check.passed { "match" } else { "differ" }, check.detail);
    Ok(())
}
