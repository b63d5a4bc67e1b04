//! Sweep one (V, turn rate) slice for the unimpaired aircraft and for a
//! restricted rudder, and draw both masks.
//!
//! cargo run --release --example envelope_sweep

use flight_envelope::envelope::{sweep_slice, EnvelopeSlice, FailureSpec, GridSpec, StartMode, SweepOptions};
use flight_envelope::model::{AircraftParams, Surface};
use flight_envelope::trim::SolverConfig;

fn draw(title: &str, s: &EnvelopeSlice) {
    println!("{title}: {} of {} cells", s.feasible_count(), s.cells.len());
    println!("   V\\psidot {:>+4} .. {:+}", s.psidot_dps[0], s.psidot_dps[s.n_psidot() - 1]);
    for iv in (0..s.n_v()).rev() {
        let row: String = (0..s.n_psidot())
            .map(|iw| if s.in_envelope(iv, iw) { '#' } else { '.' })
            .collect();
        println!("  {:>6.0}  {row}", s.v_kt[iv]);
    }
    println!();
}

fn main() -> flight_envelope::Result<()> {
    let params = AircraftParams::default();
    let config = SolverConfig::default();
    let grid = GridSpec::desk();
    let (v, w) = (grid.v_kt.values(), grid.psidot_dps.values());
    let options = SweepOptions {
        start: StartMode::Warm,
        threads: None,
    };

    let nominal = sweep_slice(0.0, 0.0, &v, &w, None, &params, &config, options)?;
    draw("unimpaired, sea level, level flight", &nominal);

    let rudder = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0)?;
    let impaired = sweep_slice(0.0, 0.0, &v, &w, Some(&rudder), &params, &config, options)?;
    draw(&format!("{rudder}"), &impaired);
    Ok(())
}
