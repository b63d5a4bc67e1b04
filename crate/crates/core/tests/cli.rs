use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use flight_envelope::boundary::thrust_required;
use flight_envelope::model::AircraftParams;
use flight_envelope::units::{deg, kt_to_mps};

const MANIFEST: &str = r#"{
  "grid": {
    "v_kt": {"min": 60, "max": 180, "step": 20},
    "psidot_dps": {"min": -12, "max": 12, "step": 4},
    "gamma_deg": {"min": 0, "max": 0, "step": 1},
    "altitudes_ft": [0]
  },
  "failures": [
    {"surface": "rudder", "ll": -10, "ul": -10},
    {"surface": "rudder", "ll": -30, "ul": -10},
    {"surface": "rudder", "ll": -10, "ul": 30},
    {"surface": "rudder", "ll": -10, "ul": 10}
  ]
}"#;

fn mfe(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mfe"));
    c.args(args).env_remove("MFE_OUTPUT_DIR");
    if let Some(d) = env_out {
        c.env("MFE_OUTPUT_DIR", d);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Runs the sample manifest into `<dir>/out` through the environment variable.
fn run_envelopes(dir: &Path) -> PathBuf {
    let m = dir.join("run.json");
    fs::write(&m, MANIFEST).unwrap();
    let out = dir.join("out");
    let o = mfe(&["envelope", m.to_str().unwrap()], Some(&out));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn field<'a>(line: &'a str, header: &str, name: &str) -> &'a str {
    let i = header.split(',').position(|h| h == name).unwrap();
    line.split(',').nth(i).unwrap()
}

#[test]
fn level_trim_prints_a_wings_level_stable_point() {
    let o = mfe(&["trim", "--v-kt", "120"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("status     stable"), "{text}");
    let phi: f64 = text
        .split_whitespace()
        .skip_while(|w| *w != "phi")
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(phi.abs() <= 1e-6);
}

#[test]
fn below_stall_is_reported_infeasible_at_the_alpha_limit() {
    let o = mfe(&["trim", "--v-kt", "45"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("infeasible"), "{text}");
    assert!(text.contains("alpha_limit"), "{text}");
}

#[test]
fn invalid_inputs_exit_with_status_two() {
    let o = mfe(&["trim", "--v-kt", "120", "--failure", "rudder:10:-10"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("10"));
    assert_eq!(mfe(&["trim", "--v-kt", "-5"], None).status.code(), Some(2));
    assert_eq!(mfe(&["envelope", "/nonexistent/run.json"], None).status.code(), Some(2));
}

#[test]
fn linear_dump_has_a_and_b() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lin.csv");
    let o = mfe(&["trim", "--v-kt", "130", "--psidot", "-3", "--dump-linear", s(&path)], None);
    assert_eq!(o.status.code(), Some(0));
    let lines = data_lines(&path);
    assert_eq!(lines.len(), 1 + 64 + 32);
}

#[test]
fn envelope_run_then_verify_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_envelopes(dir.path());
    for name in [
        "envelope_unimpaired_h0_g0.csv",
        "boundary_unimpaired_h0_g0.csv",
        "envelope_rudder_jam_m10_h0_g0.csv",
        "separation_rudder_m30_m10_h0_g0.json",
    ] {
        assert!(out.join(name).is_file(), "{name} missing");
    }

    let jam = out.join("envelope_rudder_jam_m10_h0_g0.csv");
    let lower = out.join("envelope_rudder_m30_m10_h0_g0.csv");
    let upper = out.join("envelope_rudder_m10_30_h0_g0.csv");
    let o = mfe(&["verify", "intersection", s(&jam), s(&lower), s(&upper)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    // Mark the first in-envelope cell of the jam file infeasible.
    let text = fs::read_to_string(&jam).unwrap();
    let mut flipped = None;
    let lines: Vec<String> = text
        .lines()
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            if flipped.is_none() && cols.len() > 4 && (cols[4] == "stable" || cols[4] == "unstable") {
                flipped = Some((cols[1].to_string(), cols[3].to_string()));
                let mut c = cols.clone();
                c[4] = "infeasible:obstructed";
                c.join(",")
            } else {
                l.to_string()
            }
        })
        .collect();
    let (v, w) = flipped.expect("jam envelope has feasible cells");
    let tampered = dir.path().join("tampered.csv");
    fs::write(&tampered, lines.join("\n") + "\n").unwrap();
    let report = dir.path().join("report.json");
    let o = mfe(
        &["verify", "intersection", s(&tampered), s(&lower), s(&upper), "--report", s(&report)],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let v: f64 = v.parse().unwrap();
    let w: f64 = w.parse().unwrap();
    assert!(text.contains(&format!("cell V {v} kt, psidot {w} deg/s")), "{text}");
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], false);

    // Mismatched windows are an input error, not a failed check.
    let o = mfe(&["verify", "intersection", s(&jam), s(&upper), s(&lower)], None);
    assert_eq!(o.status.code(), Some(2));

    let sym = out.join("envelope_rudder_m10_10_h0_g0.csv");
    let o = mfe(&["verify", "symmetry", s(&sym), s(&sym)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let all: Vec<String> = ["unimpaired", "rudder_m30_m10", "rudder_m10_30", "rudder_m10_10"]
        .iter()
        .map(|c| out.join(format!("envelope_{c}_h0_g0.csv")).to_string_lossy().into_owned())
        .collect();
    let mut args = vec!["verify", "laws"];
    args.extend(all.iter().map(String::as_str));
    let o = mfe(&args, None);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stdout(&o));
    assert!(stdout(&o).contains("stall"), "{}", stdout(&o));
}

#[test]
fn boundary_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_envelopes(dir.path());
    let env = out.join("envelope_unimpaired_h0_g0.csv");

    let o = mfe(&["boundary", s(&env)], None);
    assert_eq!(o.status.code(), Some(0));
    let printed = stdout(&o);
    let saved = fs::read_to_string(out.join("boundary_unimpaired_h0_g0.csv")).unwrap();
    assert_eq!(printed.lines().filter(|l| !l.starts_with('#')).count(), saved.lines().filter(|l| !l.starts_with('#')).count());

    let plots = dir.path().join("plots");
    for kind in ["envelope", "boundary", "thrust_curves", "state_traces"] {
        let o = mfe(&["plotdata", s(&env), "--kind", kind, "--output-dir", s(&plots)], None);
        assert_eq!(o.status.code(), Some(0), "{kind}");
    }
    assert_eq!(mfe(&["plotdata", s(&env), "--kind", "contour"], None).status.code(), Some(2));

    let params = AircraftParams::default();
    let thrust = data_lines(&plots.join("envelope_unimpaired_h0_g0_thrust_curves.csv"));
    let header = &thrust[0];
    assert!(thrust.len() > 1);
    for line in &thrust[1..] {
        let get = |n: &str| field(line, header, n).parse::<f64>().unwrap();
        let expect = thrust_required(
            kt_to_mps(get("V_kt")),
            deg(get("phi_deg")),
            0.0,
            0.0,
            &params,
            Some(deg(get("beta_deg"))),
        )
        .unwrap();
        assert!((get("thrust_required") - expect).abs() <= 1e-9 * expect.abs().max(1.0));
    }

    let traces = data_lines(&plots.join("envelope_unimpaired_h0_g0_state_traces.csv"));
    let header = &traces[0];
    let alpha_max = params.limits.alpha_max.to_degrees();
    let stall: Vec<f64> = traces[1..]
        .iter()
        .filter(|l| field(l, header, "factor") == "stall_alpha")
        .map(|l| field(l, header, "alpha_deg").parse().unwrap())
        .collect();
    assert!(!stall.is_empty());
    assert!(stall.iter().all(|a| *a <= alpha_max + 1e-6));
}
