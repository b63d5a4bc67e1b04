//! Run a manifest end to end, reload an envelope file and emit plot data.
//!
//! cargo run --release --example file_io [manifest.json] [output-dir]

use std::path::PathBuf;

use flight_envelope::envelope::{GridSpec, Axis};
use flight_envelope::io::{cmd_envelope, cmd_plotdata, EnvelopeFile, PlotKind, RunManifest};
use flight_envelope::model::AircraftParams;

fn main() -> flight_envelope::Result<()> {
    let mut args = std::env::args().skip(1);
    let manifest = match args.next() {
        Some(p) => RunManifest::load(&PathBuf::from(p))?,
        None => {
            let mut grid = GridSpec::desk();
            grid.v_kt = Axis::new(60.0, 180.0, 10.0);
            grid.psidot_dps = Axis::new(-12.0, 12.0, 2.0);
            RunManifest::new(grid)
        }
    };
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mfe-example"));

    let run = cmd_envelope(&manifest, &out)?;
    for f in &run.files {
        println!("wrote {}", f.display());
    }

    let first = run
        .files
        .iter()
        .find(|f| f.file_name().is_some_and(|n| n.to_string_lossy().starts_with("envelope_")))
        .expect("at least one envelope");
    let file = EnvelopeFile::load(first)?;
    let slice = file.to_slice()?;
    println!(
        "reloaded {}: {} records, {} feasible, params {}",
        first.display(),
        file.records.len(),
        slice.feasible_count(),
        &file.header.params_hash[..12]
    );

    let params = AircraftParams::default();
    for kind in PlotKind::ALL {
        let p = cmd_plotdata(first, kind, &params, &out)?;
        println!("plot data {kind}: {}", p.display());
    }
    Ok(())
}
