//! Linearize about a turning trim, list the eigenvalues and check how the
//! controllability rank changes when surfaces are jammed.
//!
//! cargo run --example linear_analysis

use flight_envelope::envelope::FailureSpec;
use flight_envelope::linear::{controllability_rank, linearize, stability};
use flight_envelope::model::{AircraftParams, Surface};
use flight_envelope::trim::{solve_trim, SolverConfig, TrimTarget};
use flight_envelope::units::{deg, kt_to_mps};

fn main() -> flight_envelope::Result<()> {
    let params = AircraftParams::default();
    let config = SolverConfig::default();
    let target = TrimTarget::new(0.0, kt_to_mps(110.0), 0.0, deg(4.0));

    let r = solve_trim(&target, None, &params, &config, None)?;
    let model = linearize(&r.state, &r.controls, &params, None)?;
    let report = stability(&model, config.eigen_tolerance)?;
    println!("trim {}  max Re {:+.5}  ({:?})", r.status, report.max_real, report.class);
    let mut eig = report.eigenvalues.clone();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re));
    for l in eig {
        println!("  {:+.5} {:+.5}i", l.re, l.im);
    }

    println!("\ncontrollability rank by jammed surface:");
    println!("  none      {}", controllability_rank(&model));
    for surface in [Surface::Rudder, Surface::Aileron, Surface::Elevator] {
        let jam = FailureSpec::jam_degrees(surface, 0.0)?;
        let r = solve_trim(&target, Some(&jam), &params, &config, None)?;
        if !r.is_feasible() {
            println!("  {:<9} no trim ({})", surface.to_string(), r.status);
            continue;
        }
        let m = linearize(&r.state, &r.controls, &params, Some(&jam))?;
        println!("  {:<9} {} with {} inputs", surface.to_string(), controllability_rank(&m), m.inputs.len());
    }
    Ok(())
}
