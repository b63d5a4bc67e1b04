mod common;

use std::path::Path;

use flight_envelope::boundary::{extract_boundary, FactorTolerances, LimitingFactor};
use flight_envelope::envelope::{mirror_trim, FailureSpec, StartMode};
use flight_envelope::io::EnvelopeFile;
use flight_envelope::model::{state_derivative, AircraftParams, AircraftState, ControlVector, Surface};
use flight_envelope::trim::{solve_trim, SolverConfig, TrimResult, TrimTarget};
use flight_envelope::units::{deg, ft_to_m, kt_to_mps};
use proptest::prelude::*;

const LATERAL: [usize; 4] = [2, 3, 5, 6];

fn target(h_ft: f64, v_kt: f64, gamma_deg: f64, psidot_dps: f64) -> TrimTarget {
    TrimTarget::new(ft_to_m(h_ft), kt_to_mps(v_kt), deg(gamma_deg), deg(psidot_dps))
}

fn trim(t: &TrimTarget, failure: Option<&FailureSpec>) -> TrimResult {
    solve_trim(t, failure, &AircraftParams::default(), &SolverConfig::default(), None).unwrap()
}

fn flown_targets() -> impl Strategy<Value = TrimTarget> {
    (0.0..20000.0f64, 80.0..160.0f64, -3.0..3.0f64, -6.0..6.0f64)
        .prop_map(|(h, v, g, w)| target(h, v, g, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dynamics_are_laterally_symmetric(
        v in 40.0..140.0f64,
        a in -0.1..0.2f64,
        b in -0.2..0.2f64,
        rates in prop::array::uniform3(-0.2..0.2f64),
        phi in -0.8..0.8f64,
        theta in -0.3..0.3f64,
        u in (0.0..1.0f64, -0.4..0.4f64, -0.3..0.3f64, -0.5..0.5f64),
        h in 0.0..9000.0f64,
    ) {
        let p = AircraftParams::default();
        let x = AircraftState::from_array([v, a, b, rates[0], rates[1], rates[2], phi, theta], h);
        let c = ControlVector::from_array([u.0, u.1, u.2, u.3]);
        let f = state_derivative(&x, &c, &p).unwrap();
        let g = state_derivative(&x.mirrored(), &c.mirrored(), &p).unwrap();
        for i in 0..8 {
            let expect = if LATERAL.contains(&i) { -f[i] } else { f[i] };
            prop_assert!((g[i] - expect).abs() <= 1e-12 * (1.0 + f[i].abs()), "component {}", i);
        }
    }

    #[test]
    fn mirroring_a_trim_is_an_involution(t in flown_targets()) {
        let r = trim(&t, None);
        prop_assert_eq!(mirror_trim(&mirror_trim(&r)), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn trims_are_deterministic(t in flown_targets()) {
        prop_assert_eq!(trim(&t, None), trim(&t, None));
    }

    #[test]
    fn failed_surface_stays_in_its_window(
        t in flown_targets(),
        lo in -1.0..0.8f64,
        width in 0.0..0.7f64,
        aileron in any::<bool>(),
    ) {
        let (surface, limit) = if aileron { (Surface::Aileron, 20.0) } else { (Surface::Rudder, 30.0) };
        let f = FailureSpec::from_degrees(surface, lo * limit, ((lo + width) * limit).min(limit)).unwrap();
        let r = trim(&t, Some(&f));
        let x = r.controls.get(surface);
        prop_assert!(x >= f.lower - 1e-12 && x <= f.upper + 1e-12, "{} outside [{}, {}]", x, f.lower, f.upper);
    }

    #[test]
    fn mirrored_failure_gives_the_mirrored_trim(t in flown_targets(), jam in -12.0..12.0f64) {
        let f = FailureSpec::jam_degrees(Surface::Rudder, jam).unwrap();
        let direct = trim(&t, Some(&f));
        let mirrored = trim(&t.mirrored(), Some(&f.mirrored()));
        prop_assert_eq!(direct.is_feasible(), mirrored.is_feasible());
        if direct.is_feasible() {
            let a = direct.state.mirrored().to_array();
            let b = mirrored.state.to_array();
            for i in 0..8 {
                prop_assert!((a[i] - b[i]).abs() <= 1e-5, "state {}: {} vs {}", i, a[i], b[i]);
            }
            let ca = direct.controls.mirrored().to_array();
            let cb = mirrored.controls.to_array();
            for i in 0..4 {
                prop_assert!((ca[i] - cb[i]).abs() <= 1e-5, "control {}: {} vs {}", i, ca[i], cb[i]);
            }
        }
    }

    #[test]
    fn warm_start_at_a_trim_keeps_it(t in flown_targets(), jam in -8.0..8.0f64) {
        let f = FailureSpec::jam_degrees(Surface::Rudder, jam).unwrap();
        let cold = trim(&t, Some(&f));
        prop_assume!(cold.is_feasible());
        let p = AircraftParams::default();
        let warm = solve_trim(&t, Some(&f), &p, &SolverConfig::default(), Some((&cold.state, &cold.controls))).unwrap();
        prop_assert!(warm.is_feasible());
        let (a, b) = (cold.state.to_array(), warm.state.to_array());
        for i in 0..8 {
            prop_assert!((a[i] - b[i]).abs() <= 1e-6, "state {}: {} vs {}", i, a[i], b[i]);
        }
    }

    #[test]
    fn widening_a_window_keeps_a_trim_feasible(
        t in flown_targets(),
        lo in -20.0..10.0f64,
        width in 0.0..10.0f64,
        extra in (0.0..10.0f64, 0.0..10.0f64),
    ) {
        let narrow = FailureSpec::from_degrees(Surface::Rudder, lo, lo + width).unwrap();
        let wide = FailureSpec::from_degrees(Surface::Rudder, (lo - extra.0).max(-30.0), (lo + width + extra.1).min(30.0)).unwrap();
        let r = trim(&t, Some(&narrow));
        prop_assume!(r.is_feasible());
        let p = AircraftParams::default();
        let w = solve_trim(&t, Some(&wide), &p, &SolverConfig::default(), Some((&r.state, &r.controls))).unwrap();
        prop_assert!(w.is_feasible());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn small_slices_round_trip_and_classify_cleanly(
        h in 0.0..20000.0f64,
        g in -4.0..4.0f64,
        v0 in 50.0..150.0f64,
        jam in prop::option::of(-20.0..20.0f64),
    ) {
        let p = AircraftParams::default();
        let f = jam.map(|j| common::rudder(j - 5.0, j + 5.0));
        let v: Vec<f64> = (0..5).map(|i| v0 + 10.0 * i as f64).collect();
        let w: Vec<f64> = (-3..=3).map(|i| 2.0 * i as f64).collect();
        let s = common::sweep(h, g, &v, &w, f.as_ref(), &p, StartMode::Warm);

        let file = EnvelopeFile::from_slice(&s);
        let text = file.to_csv_string().unwrap();
        let back = EnvelopeFile::parse(&text, Path::new("mem.csv")).unwrap();
        prop_assert_eq!(back.to_csv_string().unwrap(), text);
        let restored = back.to_slice().unwrap();
        prop_assert_eq!(restored.mask(), s.mask());

        for b in extract_boundary(&s, &p, &FactorTolerances::default()).unwrap() {
            if let LimitingFactor::Mixed(parts) = &b.factor {
                prop_assert!(!parts.contains(&LimitingFactor::BankOnly), "{}", b.factor.label());
            }
            prop_assert_eq!(LimitingFactor::from_label(&b.factor.label()), Some(b.factor.clone()));
        }
    }
}
