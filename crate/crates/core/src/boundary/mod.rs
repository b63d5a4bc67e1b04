//! Envelope boundaries, their limiting factors, and the closed-form
//! performance laws they are checked against.

mod compare;
mod extract;
mod laws;
mod performance;

pub use compare::{intersect_envelopes, separation_report, SeparationReport, Side, SideSeparation};
pub use extract::{
    classify_limiting_factor, extract_boundary, BoundaryPoint, FactorTolerances, LimitingFactor,
};
pub use laws::{
    boundary_sequence_law, collapsed_sequence, high_drag_law, intersection_law,
    intersection_mismatches, left_half, nesting_violations, speed_trend_law, stall_speed_law,
    symmetry_law, LawCheck,
};
pub use performance::{
    gamma_max, load_factor, stall_speed, stall_speed_level, thrust_required, thrust_required_for,
    PerformanceQuery,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{ascii_slice, EnvelopeSlice};
    use crate::model::AircraftParams;
    use crate::units::deg;

    fn slice(rows: &[&str]) -> EnvelopeSlice {
        ascii_slice(rows)
    }

    fn tol() -> FactorTolerances {
        FactorTolerances::default()
    }

    #[test]
    fn single_cell_boundary() {
        let s = slice(&["...", ".#.", "..."]);
        let b = extract_boundary(&s, &AircraftParams::default(), &tol()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].iv, b[0].iw), (1, 1));
    }

    #[test]
    fn empty_slice_has_no_boundary() {
        let s = slice(&["...", "..."]);
        assert!(extract_boundary(&s, &AircraftParams::default(), &tol()).unwrap().is_empty());
    }

    #[test]
    fn full_rectangle_boundary_is_perimeter_in_ccw_order() {
        let s = slice(&["#####", "#####", "#####", "#####"]);
        let b = extract_boundary(&s, &AircraftParams::default(), &tol()).unwrap();
        assert_eq!(b.len(), 2 * 5 + 2 * 4 - 4);
        assert_eq!((b[0].iv, b[0].iw), (0, 2));
        // counterclockwise with V to the right and ψ̇ up: negative turn rates first
        assert!(b[1].psidot_dps < 0.0);
        let top = b.iter().position(|p| p.iv == 3 && p.iw == 2).unwrap();
        assert!(b[..top].iter().all(|p| p.psidot_dps <= 0.0));
        assert!(b[top + 1..].iter().all(|p| p.psidot_dps >= 0.0));
    }

    #[test]
    fn boundary_matches_neighbor_scan() {
        let rows = [".......", "..###..", ".#####.", "#######", ".#####.", "...#..."];
        let s = slice(&rows);
        let b = extract_boundary(&s, &AircraftParams::default(), &tol()).unwrap();
        let mut got: Vec<_> = b.iter().map(|p| (p.iv, p.iw)).collect();
        got.sort();
        let mut scan = Vec::new();
        for iv in 0..s.n_v() {
            for iw in 0..s.n_psidot() {
                if !s.in_envelope(iv, iw) {
                    continue;
                }
                let edge = [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)].iter().any(|(dv, dw)| {
                    let (v, w) = (iv as i64 + dv, iw as i64 + dw);
                    v < 0
                        || w < 0
                        || v >= s.n_v() as i64
                        || w >= s.n_psidot() as i64
                        || !s.in_envelope(v as usize, w as usize)
                });
                if edge {
                    scan.push((iv, iw));
                }
            }
        }
        assert_eq!(got, scan);
    }

    #[test]
    fn factor_from_own_trim() {
        let p = AircraftParams::default();
        let mut s = slice(&["...", ".#.", "..."]);
        let i = s.index(1, 1);
        s.cells[i].state.alpha = p.limits.alpha_max - 1e-4;
        assert_eq!(
            classify_limiting_factor(1, 1, &s, &p, &tol()).unwrap(),
            LimitingFactor::StallAlpha
        );
        s.cells[i].state.alpha = deg(4.0);
        s.cells[i].controls.dth = 1.0;
        assert_eq!(
            classify_limiting_factor(1, 1, &s, &p, &tol()).unwrap(),
            LimitingFactor::ThrustSaturation
        );
        s.cells[i].controls.da = p.limits.aileron.lower;
        assert_eq!(
            classify_limiting_factor(1, 1, &s, &p, &tol()).unwrap(),
            LimitingFactor::Mixed(vec![
                LimitingFactor::AileronSaturation,
                LimitingFactor::ThrustSaturation
            ])
        );
    }

    #[test]
    fn bank_alone_is_reported_distinctly() {
        let p = AircraftParams::default();
        let mut s = slice(&["...", ".#.", "..."]);
        let i = s.index(1, 1);
        s.cells[i].state.phi = p.limits.phi_max;
        assert_eq!(
            classify_limiting_factor(1, 1, &s, &p, &tol()).unwrap(),
            LimitingFactor::BankOnly
        );
    }

    #[test]
    fn neighbor_obstruction_names_the_factor() {
        let p = AircraftParams::default();
        let mut s = slice(&["...", ".#.", "..."]);
        let i = s.index(2, 1);
        s.cells[i].active.insert(crate::trim::ActiveConstraint::ThrottleUpper);
        s.cells[i].active.insert(crate::trim::ActiveConstraint::BankLimit);
        assert_eq!(
            classify_limiting_factor(1, 1, &s, &p, &tol()).unwrap(),
            LimitingFactor::ThrustSaturation
        );
    }

    #[test]
    fn intersection_rules() {
        let a = slice(&["###", "##.", "#.."]);
        let empty = slice(&["...", "...", "..."]);
        assert_eq!(intersect_envelopes(&a, &a).unwrap().mask(), a.mask());
        assert_eq!(intersect_envelopes(&a, &empty).unwrap().feasible_count(), 0);
        let other = slice(&["....", "....", "...."]);
        assert!(intersect_envelopes(&a, &other).is_err());
    }

    #[test]
    fn separation_of_identical_slices_is_zero() {
        let a = slice(&[".###.", "#####", ".###."]);
        let r = separation_report(&a, &a).unwrap();
        assert!(r.sides.iter().all(|s| s.attached && s.max_separation_cells == 0));
    }

    #[test]
    fn separation_detects_lost_side() {
        let u = slice(&[".#####.", "#######", ".#####."]);
        let i = slice(&["...###.", "...####", "...###."]);
        let r = separation_report(&i, &u).unwrap();
        assert!(!r.side(Side::Left).attached);
        assert!(r.side(Side::Right).attached);
        assert_eq!(r.side(Side::Left).max_separation_cells, 3);
    }
}
