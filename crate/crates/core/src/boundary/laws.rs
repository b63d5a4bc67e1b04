use serde::{Deserialize, Serialize};

use super::{extract_boundary, stall_speed_level, BoundaryPoint, FactorTolerances, LimitingFactor, PerformanceQuery};
use crate::envelope::{EnvelopeSlice, FailureSpec};
use crate::model::AircraftParams;
use crate::units::{ft_to_m, mps_to_kt};
use crate::{Error, Result};

/// Outcome of one structural check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Offending cells as `(V kt, ψ̇ °/s)`.
    pub cells: Vec<(f64, f64)>,
}

impl LawCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        LawCheck {
            name: name.into(),
            passed,
            detail,
            cells: Vec::new(),
        }
    }

    fn with_cells(mut self, slice: &EnvelopeSlice, cells: &[(usize, usize)]) -> Self {
        self.cells = cells
            .iter()
            .map(|(iv, iw)| (slice.v_kt[*iv], slice.psidot_dps[*iw]))
            .collect();
        self
    }
}

/// Jam-equals-intersection: `J[X] = R[LL, X] ∩ R[X, UL]` cell for cell.
/// Returns the cells where the jam mask and the intersection differ.
pub fn intersection_mismatches(
    jam: &EnvelopeSlice,
    lower: &EnvelopeSlice,
    upper: &EnvelopeSlice,
) -> Result<Vec<(usize, usize)>> {
    jam.check_same_grid(lower)?;
    jam.check_same_grid(upper)?;
    let mut out = Vec::new();
    for iv in 0..jam.n_v() {
        for iw in 0..jam.n_psidot() {
            let both = lower.in_envelope(iv, iw) && upper.in_envelope(iv, iw);
            if jam.in_envelope(iv, iw) != both {
                out.push((iv, iw));
            }
        }
    }
    Ok(out)
}

pub fn intersection_law(
    jam: &EnvelopeSlice,
    lower: &EnvelopeSlice,
    upper: &EnvelopeSlice,
) -> Result<LawCheck> {
    let bad = intersection_mismatches(jam, lower, upper)?;
    let detail = format!("{} of {} cells differ", bad.len(), jam.cells.len());
    Ok(LawCheck::new("intersection", bad.is_empty(), detail).with_cells(jam, &bad))
}

/// Mirrored slice against a directly computed one.
pub fn symmetry_law(mirrored: &EnvelopeSlice, direct: &EnvelopeSlice) -> Result<LawCheck> {
    let bad = mirrored.mask_diff(direct)?;
    let detail = format!("{} of {} cells differ", bad.len(), direct.cells.len());
    Ok(LawCheck::new("symmetry", bad.is_empty(), detail).with_cells(direct, &bad))
}

/// Cells feasible under the tighter window but not under the wider one.
pub fn nesting_violations(
    tighter: &EnvelopeSlice,
    wider: &EnvelopeSlice,
) -> Result<Vec<(usize, usize)>> {
    tighter.check_same_grid(wider)?;
    let mut out = Vec::new();
    for iv in 0..tighter.n_v() {
        for iw in 0..tighter.n_psidot() {
            if tighter.in_envelope(iv, iw) && !wider.in_envelope(iv, iw) {
                out.push((iv, iw));
            }
        }
    }
    Ok(out)
}

/// The minimum feasible speed of the ψ̇ ≈ 0 column lies within one speed
/// step of the closed-form wings-level stall speed.
pub fn stall_speed_law(slice: &EnvelopeSlice, params: &AircraftParams) -> Result<LawCheck> {
    let q = PerformanceQuery::new(params, ft_to_m(slice.h_ft), 0.0, slice.gamma_deg.to_radians())?;
    let vs = mps_to_kt(stall_speed_level(&q)?);
    let step = slice
        .v_kt
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    let Some((vmin, _)) = slice.zero_turn_speed_range() else {
        return Ok(LawCheck::new(
            "stall_speed",
            false,
            "no feasible cell at zero turn rate".into(),
        ));
    };
    let passed = (vmin - vs).abs() <= step + 1e-9;
    Ok(LawCheck::new(
        "stall_speed",
        passed,
        format!("minimum speed {vmin} kt, stall speed {vs:.2} kt, step {step} kt"),
    ))
}

/// Speed trends across slices: at each γ the maximum zero-turn speed does
/// not increase with altitude and the minimum does not decrease; at each
/// altitude the maximum does not increase with γ.
pub fn speed_trend_law(slices: &[&EnvelopeSlice]) -> LawCheck {
    let mut problems = Vec::new();
    let range = |s: &EnvelopeSlice| s.zero_turn_speed_range();
    let mut by = |key: fn(&EnvelopeSlice) -> f64, axis: fn(&EnvelopeSlice) -> f64, check_min: bool, what: &str| {
        let mut groups: Vec<(f64, Vec<&EnvelopeSlice>)> = Vec::new();
        for s in slices {
            match groups.iter_mut().find(|(k, _)| *k == key(s)) {
                Some((_, g)) => g.push(s),
                None => groups.push((key(s), vec![s])),
            }
        }
        for (k, mut g) in groups {
            g.sort_by(|a, b| axis(a).total_cmp(&axis(b)));
            for pair in g.windows(2) {
                let (a, b) = (range(pair[0]), range(pair[1]));
                let (Some(a), Some(b)) = (a, b) else { continue };
                if b.1 > a.1 {
                    problems.push(format!(
                        "{what} {k}: max speed rises from {} to {} kt",
                        a.1, b.1
                    ));
                }
                if check_min && b.0 < a.0 {
                    problems.push(format!(
                        "{what} {k}: min speed falls from {} to {} kt",
                        a.0, b.0
                    ));
                }
            }
        }
    };
    by(|s| s.gamma_deg, |s| s.h_ft, true, "gamma");
    by(|s| s.h_ft, |s| s.gamma_deg, false, "altitude");
    let passed = problems.is_empty();
    let detail = if passed {
        format!("{} slices consistent", slices.len())
    } else {
        problems.join("; ")
    };
    LawCheck::new("speed_trends", passed, detail)
}

/// A lateral-surface window that excludes zero forces sideslip everywhere and
/// costs top speed.
pub fn high_drag_law(
    impaired: &EnvelopeSlice,
    unimpaired: &EnvelopeSlice,
    min_sideslip: f64,
) -> Result<LawCheck> {
    impaired.check_same_grid(unimpaired)?;
    let failure: Option<&FailureSpec> = impaired.provenance.failure.as_ref();
    let Some(f) = failure.filter(|f| f.surface.is_lateral() && (f.lower > 0.0 || f.upper < 0.0)) else {
        return Err(Error::Validation(
            "high-drag check needs a lateral failure window excluding zero".into(),
        ));
    };
    let mut low_beta = Vec::new();
    for iv in 0..impaired.n_v() {
        for iw in 0..impaired.n_psidot() {
            if impaired.in_envelope(iv, iw) && impaired.cell(iv, iw).state.beta.abs() <= min_sideslip {
                low_beta.push((iv, iw));
            }
        }
    }
    let (vi, vu) = (impaired.max_feasible_v(), unimpaired.max_feasible_v());
    let slower = match (vi, vu) {
        (Some(a), Some(b)) => a < b,
        (None, Some(_)) => true,
        _ => false,
    };
    let passed = low_beta.is_empty() && slower;
    let kt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |v| v.to_string());
    let detail = format!(
        "{f}: {} feasible cells with |β| ≤ {:.3}°; max speed {} vs {} kt unimpaired",
        low_beta.len(),
        min_sideslip.to_degrees(),
        kt(vi),
        kt(vu)
    );
    Ok(LawCheck::new("high_drag", passed, detail).with_cells(impaired, &low_beta))
}

/// Boundary points of the negative-turn-rate half in walk order, from the
/// minimum to the maximum speed.
pub fn left_half(points: &[BoundaryPoint]) -> Vec<&BoundaryPoint> {
    points.iter().take_while(|p| p.psidot_dps <= 0.0).collect()
}

fn rank(f: &LimitingFactor) -> Option<usize> {
    match f {
        LimitingFactor::StallAlpha => Some(0),
        LimitingFactor::AileronSaturation => Some(1),
        LimitingFactor::ThrustSaturation => Some(2),
        _ => None,
    }
}

/// Factor sequence with repeats collapsed; mixed points contribute all their
/// components in order.
pub fn collapsed_sequence(points: &[&BoundaryPoint]) -> Vec<LimitingFactor> {
    let mut out: Vec<LimitingFactor> = Vec::new();
    for p in points {
        for f in p.factor.components() {
            if out.last() != Some(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// The left half of the boundary reads stall, then aileron saturation, then
/// thrust saturation. A mixed point may stand for any of its components, as
/// long as the order never goes back.
pub fn boundary_sequence_law(slice: &EnvelopeSlice, params: &AircraftParams) -> Result<LawCheck> {
    let points = extract_boundary(slice, params, &FactorTolerances::default())?;
    let half = left_half(&points);
    let mut current = 0usize;
    let mut seen = [false; 3];
    let mut offending = Vec::new();
    for p in &half {
        let choice = p
            .factor
            .components()
            .iter()
            .filter_map(rank)
            .filter(|r| *r >= current)
            .min();
        match choice {
            Some(r) => {
                current = r;
                seen[r] = true;
            }
            None => offending.push((p.iv, p.iw)),
        }
    }
    let seq: Vec<String> = collapsed_sequence(&half).iter().map(|f| f.label()).collect();
    let passed = offending.is_empty() && seen.iter().all(|s| *s);
    Ok(LawCheck::new("boundary_sequence", passed, seq.join(" -> ")).with_cells(slice, &offending))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::ascii_slice;
    use crate::model::Surface;

    #[test]
    fn intersection_reports_the_differing_cell() {
        let lower = ascii_slice(&["##.", "###"]);
        let upper = ascii_slice(&[".##", "###"]);
        let good = ascii_slice(&[".#.", "###"]);
        assert!(intersection_law(&good, &lower, &upper).unwrap().passed);
        let bad = ascii_slice(&["##.", "###"]);
        let c = intersection_law(&bad, &lower, &upper).unwrap();
        assert!(!c.passed);
        assert_eq!(c.cells, vec![(70.0, -1.0)]);
        let other = ascii_slice(&["##", "##"]);
        assert!(intersection_law(&other, &lower, &upper).is_err());
    }

    #[test]
    fn nesting_counts_only_additions() {
        let wide = ascii_slice(&[".#.", "###"]);
        let narrow = ascii_slice(&["...", ".#."]);
        assert!(nesting_violations(&narrow, &wide).unwrap().is_empty());
        assert_eq!(nesting_violations(&wide, &narrow).unwrap().len(), 3);
    }

    #[test]
    fn speed_trends_flag_rising_max_speed() {
        let low = ascii_slice(&[".#.", "###", "###"]);
        let mut high = ascii_slice(&["...", "###", "###"]);
        high.h_ft = 10000.0;
        assert!(speed_trend_law(&[&low, &high]).passed);
        let mut bad = ascii_slice(&["###", "###", "###"]);
        bad.h_ft = 10000.0;
        let mut bad2 = ascii_slice(&["...", "###", "###"]);
        bad2.h_ft = 0.0;
        assert!(!speed_trend_law(&[&bad2, &bad]).passed);
    }

    #[test]
    fn high_drag_needs_a_window_excluding_zero() {
        let s = ascii_slice(&["##", "##"]);
        assert!(high_drag_law(&s, &s, 1e-3).is_err());
        let mut impaired = ascii_slice(&["..", "##"]);
        impaired.provenance.failure =
            Some(FailureSpec::from_degrees(Surface::Rudder, -30.0, -10.0).unwrap());
        // the synthetic cells fly without sideslip
        let c = high_drag_law(&impaired, &s, 1e-3).unwrap();
        assert!(!c.passed);
        assert_eq!(c.cells.len(), 2);
        for cell in impaired.cells.iter_mut() {
            cell.state.beta = 0.05;
        }
        assert!(high_drag_law(&impaired, &s, 1e-3).unwrap().passed);
    }

    #[test]
    fn collapsed_sequence_merges_repeats() {
        use crate::boundary::LimitingFactor::*;
        let p = |f| BoundaryPoint {
            iv: 0,
            iw: 0,
            v_kt: 0.0,
            psidot_dps: -1.0,
            factor: f,
        };
        let pts = [
            p(StallAlpha),
            p(StallAlpha),
            p(Mixed(vec![StallAlpha, AileronSaturation])),
            p(AileronSaturation),
            p(ThrustSaturation),
        ];
        let refs: Vec<&BoundaryPoint> = pts.iter().collect();
        assert_eq!(
            collapsed_sequence(&refs),
            vec![StallAlpha, AileronSaturation, ThrustSaturation]
        );
    }
}
