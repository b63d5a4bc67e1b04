//! Where does a failure envelope leave the unimpaired boundary? Reports each
//! side as attached or separated, and the high-drag sideslip cost of a rudder
//! window that excludes neutral.
//!
//! cargo run --release --example separation

use flight_envelope::boundary::{high_drag_law, separation_report, Side};
use flight_envelope::envelope::{sweep_slice, FailureSpec, GridSpec, StartMode, SweepOptions};
use flight_envelope::model::{AircraftParams, Surface};
use flight_envelope::trim::SolverConfig;
use flight_envelope::units::deg;

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

    for (ll, ul) in [(-30.0, 10.0), (-10.0, 10.0), (-30.0, -10.0)] {
        let f = FailureSpec::from_degrees(Surface::Rudder, ll, ul)?;
        let s = sweep_slice(0.0, 0.0, &v, &w, Some(&f), &params, &config, options)?;
        let r = separation_report(&s, &nominal)?;
        let side = |x| {
            let d = r.side(x);
            if d.attached {
                "attached".to_string()
            } else {
                format!("separated by {}", d.max_separation_cells)
            }
        };
        println!("{f}");
        for x in [Side::Left, Side::Right, Side::Bottom, Side::Top] {
            println!("  {:<7} {}", format!("{x:?}"), side(x));
        }
        if let Ok(check) = high_drag_law(&s, &nominal, deg(0.1)) {
            println!("  high drag: {}", check.detail);
        }
    }
    Ok(())
}
