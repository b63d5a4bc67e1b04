//! Closed-form point performance: stall speed, thrust required and the
//! climb-gradient ceiling, against what the trim sweep finds.
//!
//! cargo run --release --example performance_laws

use flight_envelope::boundary::{gamma_max, stall_speed, stall_speed_level, thrust_required, PerformanceQuery};
use flight_envelope::model::{thrust_available, AircraftParams};
use flight_envelope::units::{deg, ft_to_m, kt_to_mps, mps_to_kt, to_deg};

fn main() -> flight_envelope::Result<()> {
    let params = AircraftParams::default();

    println!("stall speed at sea level");
    for phi in [0.0, 15.0, 30.0, 45.0] {
        let q = PerformanceQuery::new(&params, 0.0, deg(phi), 0.0)?;
        println!("  bank {phi:>4.0} deg: {:6.2} kt", mps_to_kt(stall_speed(&q)?));
    }
    let q0 = PerformanceQuery::new(&params, 0.0, 0.0, 0.0)?;
    let q30 = PerformanceQuery::new(&params, 0.0, deg(30.0), 0.0)?;
    println!("  ratio at 30 deg: {:.7}", stall_speed(&q30)? / stall_speed_level(&q0)?);

    println!("\nthrust required and available, sea level, level flight (N)");
    for v in [70.0, 100.0, 130.0, 160.0, 190.0] {
        let tr = thrust_required(kt_to_mps(v), 0.0, 0.0, 0.0, &params, None)?;
        let ta = thrust_available(0.0, kt_to_mps(v), 1.0, &params)?;
        println!("  {v:>5.0} kt: {tr:10.1} {ta:10.1}");
    }

    println!("\nmaximum climb gradient, wings level");
    for h in [0.0, 10000.0, 20000.0, 30000.0] {
        println!("  {h:>6.0} ft: {:5.2} deg", to_deg(gamma_max(ft_to_m(h), 0.0, &params)?));
    }
    Ok(())
}
