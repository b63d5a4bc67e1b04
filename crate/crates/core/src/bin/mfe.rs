use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use flight_envelope::envelope::FailureSpec;
use flight_envelope::io::{
    cmd_boundary, cmd_envelope, cmd_plotdata, cmd_trim, cmd_verify_intersection, cmd_verify_laws,
    cmd_verify_symmetry, resolve_output_dir, PlotKind, RunManifest, VerifyReport,
};
use flight_envelope::model::AircraftParams;
use flight_envelope::trim::{SolverConfig, TrimTarget};
use flight_envelope::units::{deg, ft_to_m, kt_to_mps};
use flight_envelope::{Error, Result};

/// Maneuvering flight envelopes under control-surface failures.
///
/// Exit status: 0 success, 1 property check failed, 2 invalid input,
/// 3 internal error.
#[derive(Parser)]
#[command(name = "mfe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and classify a single trim.
    Trim {
        /// Airspeed (kt).
        #[arg(long)]
        v_kt: f64,
        /// Turn rate (deg/s).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        psidot: f64,
        /// Flight path angle (deg).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
        /// Altitude (ft).
        #[arg(long, default_value_t = 0.0)]
        h_ft: f64,
        /// Failure as SURFACE:LL:UL in degrees (throttle as a fraction),
        /// e.g. rudder:-30:10 or aileron:0:0 for a jam.
        #[arg(long, allow_hyphen_values = true)]
        failure: Option<String>,
        /// Parameter file (JSON); shipped defaults otherwise.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Solver configuration file (JSON).
        #[arg(long)]
        solver: Option<PathBuf>,
        /// Write A and B of the linearization to this CSV file.
        #[arg(long)]
        dump_linear: Option<PathBuf>,
    },
    /// Sweep the envelopes described by a run manifest.
    Envelope {
        manifest: PathBuf,
        /// Output directory; overrides $MFE_OUTPUT_DIR and the manifest.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Worker thread bound; overrides the manifest.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Extract and classify the boundary of an envelope file.
    Boundary {
        envelope: PathBuf,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Boundary report path; printed to stdout otherwise.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a structural property over envelope files.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
        /// Also write the report as JSON.
        #[arg(long, global = true)]
        report: Option<PathBuf>,
    },
    /// Write plot-ready columnar data for an envelope file.
    Plotdata {
        envelope: PathBuf,
        /// envelope, boundary, thrust_curves or state_traces.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Output directory; overrides $MFE_OUTPUT_DIR (default: current
        /// directory).
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Jam at X equals the intersection of [LL, X] and [X, UL].
    Intersection {
        jam: PathBuf,
        lower: PathBuf,
        upper: PathBuf,
    },
    /// The mirror image of the first envelope equals the second.
    Symmetry {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Stall speed, speed trends, high drag and nesting.
    Laws {
        #[arg(required = true)]
        envelopes: Vec<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

fn load_params(path: Option<&PathBuf>) -> Result<AircraftParams> {
    match path {
        Some(p) => AircraftParams::load(p),
        None => Ok(AircraftParams::default()),
    }
}

fn finish(report: VerifyReport, json: Option<&PathBuf>) -> Result<u8> {
    println!("{report}");
    if let Some(p) = json {
        let text = serde_json::to_string_pretty(&report)?;
        flight_envelope::io::write_atomic(p, text.as_bytes())?;
    }
    Ok(if report.passed { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Trim {
            v_kt,
            psidot,
            gamma,
            h_ft,
            failure,
            params,
            solver,
            dump_linear,
        } => {
            let params = load_params(params.as_ref())?;
            let config = match solver {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| Error::Io { path: p.clone(), source: e })?;
                    let c: SolverConfig = serde_json::from_str(&text)?;
                    c.validate()?;
                    c
                }
                None => SolverConfig::default(),
            };
            let failure = failure.as_deref().map(str::parse::<FailureSpec>).transpose()?;
            let target = TrimTarget::new(ft_to_m(h_ft), kt_to_mps(v_kt), deg(gamma), deg(psidot));
            let report = cmd_trim(&target, failure.as_ref(), &params, &config)?;
            println!("{report}");
            if let Some(p) = dump_linear {
                report.write_linear(&p)?;
            }
            Ok(0)
        }
        Command::Envelope {
            manifest,
            output_dir,
            threads,
        } => {
            let mut m = RunManifest::load(&manifest)?;
            if threads.is_some() {
                m.flags.threads = threads;
            }
            let out = resolve_output_dir(output_dir.as_deref(), &m.output_dir);
            let run = cmd_envelope(&m, &out)?;
            for f in &run.files {
                println!("{}", f.display());
            }
            if !run.mirror_checks.is_empty() {
                println!(
                    "mirror validation: {} of {} sampled cells agree",
                    run.mirror_checks.len() - run.mirror_disagreements(),
                    run.mirror_checks.len()
                );
            }
            Ok(0)
        }
        Command::Boundary {
            envelope,
            params,
            output,
        } => {
            let params = load_params(params.as_ref())?;
            let points = cmd_boundary(&envelope, &params, output.as_deref())?;
            if output.is_none() {
                let mut text = String::from("seq,V_kt,psidot_degps,factor\n");
                for (i, p) in points.iter().enumerate() {
                    text.push_str(&format!("{i},{},{},{}\n", p.v_kt, p.psidot_dps, p.factor.label()));
                }
                // A closed pipe (e.g. `| head`) is not an error.
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
            Ok(0)
        }
        Command::Verify { kind, report } => {
            let r = match kind {
                VerifyKind::Intersection { jam, lower, upper } => {
                    cmd_verify_intersection(&jam, &lower, &upper)?
                }
                VerifyKind::Symmetry {
                    first,
                    second,
                    params,
                } => cmd_verify_symmetry(&first, &second, &load_params(params.as_ref())?)?,
                VerifyKind::Laws { envelopes, params } => {
                    cmd_verify_laws(&envelopes, &load_params(params.as_ref())?)?
                }
            };
            finish(r, report.as_ref())
        }
        Command::Plotdata {
            envelope,
            kind,
            params,
            output_dir,
        } => {
            let kind: PlotKind = kind.parse()?;
            let params = load_params(params.as_ref())?;
            let out = resolve_output_dir(output_dir.as_deref(), std::path::Path::new("."));
            let path = cmd_plotdata(&envelope, kind, &params, &out)?;
            println!("{}", path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("mfe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
