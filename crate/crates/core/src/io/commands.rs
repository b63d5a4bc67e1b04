use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::plotdata::default_boundary;
use super::{
    boundary_rows, csv_with_header, envelope_rows, linear_model_rows, state_trace_rows,
    thrust_curve_rows, write_atomic, write_boundary_report, EnvelopeFile, PlotKind, RunManifest,
};
use crate::boundary::{
    high_drag_law, intersection_law, nesting_violations, separation_report, speed_trend_law,
    stall_speed_law, symmetry_law, BoundaryPoint, LawCheck,
};
use crate::envelope::{
    mirror_envelope, sweep_3d, validate_mirror, EnvelopeSlice, FailureKind, FailureSpec,
    MirrorCheck, SweepOptions,
};
use crate::linear::{controllability_rank, linearize_with_steps, stability, LinearModel, PerturbationSteps, StabilityReport};
use crate::model::AircraftParams;
use crate::trim::{solve_trim, SolverConfig, TrimResult, TrimTarget};
use crate::units::{m_to_ft, mps_to_kt, to_deg};
use crate::{Error, Result};

/// Sideslip magnitude a high-drag trim must exceed.
const HIGH_DRAG_MIN_BETA_DEG: f64 = 0.1;

/// A single trim with its linear analysis when feasible.
#[derive(Debug, Clone)]
pub struct TrimReport {
    pub result: TrimResult,
    pub linear: Option<LinearModel>,
    pub stability: Option<StabilityReport>,
    pub rank: Option<usize>,
}

impl TrimReport {
    pub fn write_linear(&self, path: &Path) -> Result<()> {
        let model = self
            .linear
            .as_ref()
            .ok_or_else(|| Error::Validation("no linear model for an infeasible trim".into()))?;
        let text = csv_with_header(
            &[("format".into(), "mfe-linear-1".into())],
            &linear_model_rows(model),
        )?;
        write_atomic(path, text.as_bytes())
    }
}

impl fmt::Display for TrimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.result;
        let (s, u, t) = (&r.state, &r.controls, &r.target);
        writeln!(
            f,
            "target     h {} ft, V {} kt, gamma {} deg, psidot {} deg/s",
            m_to_ft(t.h),
            mps_to_kt(t.v),
            to_deg(t.gamma),
            to_deg(t.psidot)
        )?;
        writeln!(f, "status     {}", r.status.label())?;
        writeln!(
            f,
            "state      alpha {:.6} beta {:.6} phi {:.6} theta {:.6} deg",
            to_deg(s.alpha),
            to_deg(s.beta),
            to_deg(s.phi),
            to_deg(s.theta)
        )?;
        writeln!(
            f,
            "rates      p {:.6} q {:.6} r {:.6} deg/s",
            to_deg(s.p),
            to_deg(s.q),
            to_deg(s.r)
        )?;
        writeln!(
            f,
            "controls   dth {:.6} de {:.6} da {:.6} dr {:.6} deg",
            u.dth,
            to_deg(u.de),
            to_deg(u.da),
            to_deg(u.dr)
        )?;
        let active: Vec<&str> = r.active.iter().map(|a| a.name()).collect();
        writeln!(
            f,
            "active     {}",
            if active.is_empty() { "none".to_string() } else { active.join(", ") }
        )?;
        write!(f, "residual   J {:.3e}, max |xdot| {:.3e}", r.residual, r.max_derivative)?;
        if let (Some(st), Some(rank)) = (&self.stability, self.rank) {
            write!(
                f,
                "\nlinear     max Re(lambda) {:.6}, controllability rank {}",
                st.max_real, rank
            )?;
        }
        Ok(())
    }
}

/// Solves one trim and, when feasible, linearizes it.
pub fn cmd_trim(
    target: &TrimTarget,
    failure: Option<&FailureSpec>,
    params: &AircraftParams,
    config: &SolverConfig,
) -> Result<TrimReport> {
    let result = solve_trim(target, failure, params, config, None)?;
    if !result.is_feasible() {
        return Ok(TrimReport {
            result,
            linear: None,
            stability: None,
            rank: None,
        });
    }
    let model = linearize_with_steps(
        &result.state,
        &result.controls,
        params,
        failure,
        PerturbationSteps::from(config),
    )?;
    let st = stability(&model, config.eigen_tolerance)?;
    let rank = controllability_rank(&model);
    Ok(TrimReport {
        result,
        linear: Some(model),
        stability: Some(st),
        rank: Some(rank),
    })
}

/// What an envelope run produced.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EnvelopeRun {
    pub files: Vec<PathBuf>,
    pub mirror_checks: Vec<MirrorCheck>,
}

impl EnvelopeRun {
    pub fn mirror_disagreements(&self) -> usize {
        self.mirror_checks.iter().filter(|c| !c.agrees()).count()
    }
}

fn tag_number(x: f64) -> String {
    let s = format!("{}", (x * 1e6).round() / 1e6);
    s.replace('-', "m").replace('.', "p")
}

fn slice_tag(case: Option<&FailureSpec>, h_ft: f64, gamma_deg: f64) -> String {
    let case = case.map_or_else(|| "unimpaired".to_string(), |f| f.slug());
    format!("{case}_h{}_g{}", tag_number(h_ft), tag_number(gamma_deg))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Runs a manifest: sweeps every case, altitude and flight path angle, and
/// writes envelope, boundary and separation files into `out_dir`.
///
/// Separation reports compare each failure case with the unimpaired slice
/// and need `include_unimpaired`. With the mirror flag, lateral failures
/// whose mirror image is not itself a case get a mirrored envelope plus a
/// validation log of direct recomputations.
pub fn cmd_envelope(manifest: &RunManifest, out_dir: &Path) -> Result<EnvelopeRun> {
    manifest.validate()?;
    let params = manifest.load_params()?;
    let options = SweepOptions {
        threads: manifest.flags.threads,
        ..Default::default()
    };
    let cases = manifest.cases();
    let mut run = EnvelopeRun::default();
    let emit = |run: &mut EnvelopeRun, slice: &EnvelopeSlice, tag: &str| -> Result<()> {
        let env_path = out_dir.join(format!("envelope_{tag}.csv"));
        EnvelopeFile::from_slice(slice).save(&env_path)?;
        let bnd_path = out_dir.join(format!("boundary_{tag}.csv"));
        write_boundary_report(&bnd_path, slice, &default_boundary(slice, &params)?)?;
        run.files.push(env_path);
        run.files.push(bnd_path);
        Ok(())
    };

    for h_ft in &manifest.grid.altitudes_ft {
        let mut unimpaired: Option<Vec<EnvelopeSlice>> = None;
        for case in &cases {
            let env = sweep_3d(*h_ft, &manifest.grid, case.as_ref(), &params, &manifest.solver, options)?;
            for (i, slice) in env.slices.iter().enumerate() {
                let tag = slice_tag(case.as_ref(), *h_ft, slice.gamma_deg);
                emit(&mut run, slice, &tag)?;
                if let (Some(_), Some(reference)) = (case, &unimpaired) {
                    let report = separation_report(slice, &reference[i])?;
                    let path = out_dir.join(format!("separation_{tag}.json"));
                    write_json(&path, &report)?;
                    run.files.push(path);
                }
                let Some(f) = case.filter(|f| manifest.flags.mirror && f.surface.is_lateral()) else {
                    continue;
                };
                let image = f.mirrored();
                if cases.iter().flatten().any(|c| *c == image) {
                    continue;
                }
                let mirrored = mirror_envelope(slice, &params)?;
                let checks = validate_mirror(
                    &mirrored,
                    &params,
                    manifest.flags.validation_samples,
                    manifest.flags.seed,
                )?;
                let mtag = slice_tag(Some(&image), *h_ft, slice.gamma_deg);
                emit(&mut run, &mirrored, &mtag)?;
                let path = out_dir.join(format!("mirror_validation_{mtag}.json"));
                write_json(&path, &checks)?;
                run.files.push(path);
                run.mirror_checks.extend(checks);
            }
            if case.is_none() {
                unimpaired = Some(env.slices);
            }
        }
    }
    Ok(run)
}

fn check_params(slice: &EnvelopeSlice, params: &AircraftParams, origin: &Path) -> Result<()> {
    if slice.provenance.params_hash != params.hash() {
        return Err(Error::Validation(format!(
            "{} was computed with a different parameter set",
            origin.display()
        )));
    }
    Ok(())
}

/// Extracts and classifies the boundary of a stored envelope; writes the
/// report to `output` when given.
pub fn cmd_boundary(
    envelope: &Path,
    params: &AircraftParams,
    output: Option<&Path>,
) -> Result<Vec<BoundaryPoint>> {
    let slice = EnvelopeFile::load_slice(envelope)?;
    check_params(&slice, params, envelope)?;
    let points = default_boundary(&slice, params)?;
    if let Some(out) = output {
        write_boundary_report(out, &slice, &points)?;
    }
    Ok(points)
}

/// Result of a property check over envelope files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub passed: bool,
    pub checks: Vec<LawCheck>,
}

impl VerifyReport {
    fn new(kind: &str, checks: Vec<LawCheck>) -> Self {
        VerifyReport {
            kind: kind.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, if self.passed { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            write!(
                f,
                "\n  [{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            )?;
            for (v, w) in &c.cells {
                write!(f, "\n    cell V {v} kt, psidot {w} deg/s")?;
            }
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

/// `J[X]` against `R[LL, X] ∩ R[X, UL]`.
pub fn cmd_verify_intersection(jam: &Path, lower: &Path, upper: &Path) -> Result<VerifyReport> {
    let j = EnvelopeFile::load_slice(jam)?;
    let lo = EnvelopeFile::load_slice(lower)?;
    let hi = EnvelopeFile::load_slice(upper)?;
    let failure = |s: &EnvelopeSlice, p: &Path| {
        s.provenance
            .failure
            .ok_or_else(|| Error::Validation(format!("{} has no failure", p.display())))
    };
    let (fj, fl, fu) = (failure(&j, jam)?, failure(&lo, lower)?, failure(&hi, upper)?);
    let consistent = fj.kind() == FailureKind::Jam
        && fl.surface == fj.surface
        && fu.surface == fj.surface
        && close(fl.upper, fj.lower)
        && close(fu.lower, fj.lower);
    if !consistent {
        return Err(Error::Validation(format!(
            "expected a jam at X with windows [LL, X] and [X, UL]; got {fj}, {fl}, {fu}"
        )));
    }
    Ok(VerifyReport::new("intersection", vec![intersection_law(&j, &lo, &hi)?]))
}

/// Mirror of `a` against the directly computed `b`.
pub fn cmd_verify_symmetry(a: &Path, b: &Path, params: &AircraftParams) -> Result<VerifyReport> {
    let sa = EnvelopeFile::load_slice(a)?;
    let sb = EnvelopeFile::load_slice(b)?;
    check_params(&sa, params, a)?;
    sa.check_same_grid(&sb)?;
    let image = sa.provenance.failure.map(|f| f.mirrored());
    let matches = match (image, sb.provenance.failure) {
        (None, None) => true,
        (Some(x), Some(y)) => x.surface == y.surface && close(x.lower, y.lower) && close(x.upper, y.upper),
        _ => false,
    };
    if !matches {
        return Err(Error::Validation(
            "second envelope's failure is not the mirror image of the first".into(),
        ));
    }
    let mirrored = mirror_envelope(&sa, params)?;
    Ok(VerifyReport::new("symmetry", vec![symmetry_law(&mirrored, &sb)?]))
}

/// Structural laws over a set of envelope files: stall speed and speed
/// trends on the unimpaired slices, the high-drag law on failures that
/// exclude zero deflection, and nesting between windows of one surface.
pub fn cmd_verify_laws(paths: &[PathBuf], params: &AircraftParams) -> Result<VerifyReport> {
    let slices = paths
        .iter()
        .map(|p| {
            let s = EnvelopeFile::load_slice(p)?;
            check_params(&s, params, p)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    let same_point = |a: &EnvelopeSlice, b: &EnvelopeSlice| a.h_ft == b.h_ft && a.gamma_deg == b.gamma_deg;
    let unimpaired: Vec<&EnvelopeSlice> = slices.iter().filter(|s| s.provenance.failure.is_none()).collect();

    let mut checks = Vec::new();
    for s in &unimpaired {
        let mut c = stall_speed_law(s, params)?;
        c.name = format!("stall_speed h {} ft gamma {} deg", s.h_ft, s.gamma_deg);
        checks.push(c);
    }
    if unimpaired.len() > 1 {
        checks.push(speed_trend_law(&unimpaired));
    }
    for s in &slices {
        let Some(f) = s.provenance.failure else { continue };
        if f.surface.is_lateral() && (f.lower > 0.0 || f.upper < 0.0) {
            if let Some(u) = unimpaired.iter().find(|u| same_point(u, s)) {
                let mut c = high_drag_law(s, u, HIGH_DRAG_MIN_BETA_DEG.to_radians())?;
                c.name = format!("high_drag {f}");
                checks.push(c);
            }
        }
        for t in &slices {
            let Some(g) = t.provenance.failure else { continue };
            let strictly_inside = g.surface == f.surface
                && g.lower >= f.lower
                && g.upper <= f.upper
                && (g.lower, g.upper) != (f.lower, f.upper);
            if strictly_inside && same_point(s, t) && s.same_grid(t) {
                let bad = nesting_violations(t, s)?;
                let detail = format!("{} cells of {g} outside {f}", bad.len());
                let cells = bad.iter().map(|(iv, iw)| (t.v_kt[*iv], t.psidot_dps[*iw])).collect();
                checks.push(LawCheck {
                    name: format!("nesting {g} in {f}"),
                    passed: bad.is_empty(),
                    detail,
                    cells,
                });
            }
        }
    }
    if checks.is_empty() {
        return Err(Error::Validation("no law applies to the given envelopes".into()));
    }
    Ok(VerifyReport::new("laws", checks))
}

const THRUST_PHIS_DEG: [f64; 4] = [0.0, 15.0, 30.0, 45.0];
const THRUST_BETAS_DEG: [f64; 3] = [0.0, 5.0, 10.0];

/// Writes plot data of `kind` for a stored envelope into `out_dir`, named
/// after the envelope file. Returns the written path.
pub fn cmd_plotdata(
    envelope: &Path,
    kind: PlotKind,
    params: &AircraftParams,
    out_dir: &Path,
) -> Result<PathBuf> {
    let file = EnvelopeFile::load(envelope)?;
    let slice = file.to_slice()?;
    let stem = envelope
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "envelope".into());
    let header = vec![
        ("format".to_string(), format!("mfe-plot-{}-1", kind.name())),
        ("source".into(), envelope.display().to_string()),
        ("params_hash".into(), file.header.params_hash.clone()),
        ("h_ft".into(), slice.h_ft.to_string()),
        ("gamma_deg".into(), slice.gamma_deg.to_string()),
    ];
    let text = match kind {
        PlotKind::Envelope => csv_with_header(&header, &envelope_rows(&slice))?,
        PlotKind::Boundary | PlotKind::StateTraces => {
            check_params(&slice, params, envelope)?;
            let points = default_boundary(&slice, params)?;
            if kind == PlotKind::Boundary {
                csv_with_header(&header, &boundary_rows(&points))?
            } else {
                csv_with_header(&header, &state_trace_rows(&slice, &points))?
            }
        }
        PlotKind::ThrustCurves => csv_with_header(
            &header,
            &thrust_curve_rows(&slice, params, &THRUST_PHIS_DEG, &THRUST_BETAS_DEG)?,
        )?,
    };
    let path = out_dir.join(format!("{stem}_{}.csv", kind.name()));
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}
