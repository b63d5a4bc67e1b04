//! Walk the boundary of a slice and name what limits each boundary cell.
//!
//! cargo run --release --example boundary_factors

use std::collections::BTreeMap;

use flight_envelope::boundary::{collapsed_sequence, extract_boundary, left_half, FactorTolerances};
use flight_envelope::envelope::{sweep_slice, GridSpec, StartMode, SweepOptions};
use flight_envelope::model::AircraftParams;
use flight_envelope::trim::SolverConfig;

fn main() -> flight_envelope::Result<()> {
    let params = AircraftParams::default();
    let grid = GridSpec::desk();
    let (v, w) = (grid.v_kt.values(), grid.psidot_dps.values());
    let options = SweepOptions {
        start: StartMode::Warm,
        threads: None,
    };
    let slice = sweep_slice(0.0, 0.0, &v, &w, None, &params, &SolverConfig::default(), options)?;
    let points = extract_boundary(&slice, &params, &FactorTolerances::default())?;

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for p in &points {
        *counts.entry(p.factor.label()).or_default() += 1;
    }
    println!("{} boundary cells", points.len());
    for (label, n) in counts {
        println!("  {label:<40} {n}");
    }

    let seq: Vec<String> = collapsed_sequence(&left_half(&points)).iter().map(|f| f.label()).collect();
    println!("left half, low to high speed: {}", seq.join(" -> "));
    Ok(())
}
