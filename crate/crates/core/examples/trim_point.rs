//! Solve a few single trims: level flight, a coordinated turn, a climb, a
//! point below stall and a turn with the rudder jammed.
//!
//! cargo run --example trim_point

use flight_envelope::envelope::FailureSpec;
use flight_envelope::model::{AircraftParams, Surface};
use flight_envelope::trim::{solve_trim, SolverConfig, TrimTarget};
use flight_envelope::units::{deg, ft_to_m, kt_to_mps, to_deg};

fn main() -> flight_envelope::Result<()> {
    let params = AircraftParams::default();
    let config = SolverConfig::default();
    let jam = FailureSpec::jam_degrees(Surface::Rudder, 5.0)?;

    let cases: [(&str, f64, f64, f64, f64, Option<&FailureSpec>); 5] = [
        ("level", 0.0, 120.0, 0.0, 0.0, None),
        ("turn", 0.0, 120.0, 0.0, 6.0, None),
        ("climb", 10000.0, 130.0, 3.0, 0.0, None),
        ("below stall", 0.0, 45.0, 0.0, 0.0, None),
        ("rudder jam 5 deg", 0.0, 120.0, 0.0, -4.0, Some(&jam)),
    ];

    println!("{:<18} {:>24} {:>8} {:>8} {:>8} {:>8} {:>9}  active", "case", "status", "alpha", "beta", "phi", "de", "J");
    for (name, h, v, g, w, failure) in cases {
        let target = TrimTarget::new(ft_to_m(h), kt_to_mps(v), deg(g), deg(w));
        let r = solve_trim(&target, failure, &params, &config, None)?;
        let active: Vec<&str> = r.active.iter().map(|a| a.name()).collect();
        println!(
            "{:<18} {:>24} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>9.2e}  {}",
            name,
            r.status.label(),
            to_deg(r.state.alpha),
            to_deg(r.state.beta),
            to_deg(r.state.phi),
            to_deg(r.controls.de),
            r.residual,
            if active.is_empty() { "-".to_string() } else { active.join(",") }
        );
    }
    Ok(())
}
