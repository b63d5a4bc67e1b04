use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::slice::EnvelopeSlice;
use crate::model::AircraftParams;
use crate::trim::{solve_trim, ActiveConstraint, TrimResult};
use crate::units::{deg, ft_to_m, kt_to_mps};
use crate::{Error, Result};

fn mirror_constraint(c: ActiveConstraint) -> ActiveConstraint {
    use ActiveConstraint::*;
    match c {
        AileronUL => AileronLL,
        AileronLL => AileronUL,
        RudderUL => RudderLL,
        RudderLL => RudderUL,
        other => other,
    }
}

/// A trim reflected through the aircraft's plane of symmetry.
pub fn mirror_trim(t: &TrimResult) -> TrimResult {
    TrimResult {
        target: t.target.mirrored(),
        state: t.state.mirrored(),
        controls: t.controls.mirrored(),
        active: t.active.iter().copied().map(mirror_constraint).collect::<BTreeSet<_>>(),
        ..t.clone()
    }
}

/// Envelope for the mirrored failure `[−UL, −LL]`, obtained by reflecting
/// `ψ̇ → −ψ̇` and negating the lateral states and controls.
///
/// Needs a laterally symmetric parameter set (the one the slice was computed
/// with) and a turn-rate axis symmetric about zero.
pub fn mirror_envelope(slice: &EnvelopeSlice, params: &AircraftParams) -> Result<EnvelopeSlice> {
    if !params.aero.is_laterally_symmetric() {
        return Err(Error::Validation(
            "mirroring needs a laterally symmetric parameter set".into(),
        ));
    }
    if params.hash() != slice.provenance.params_hash {
        return Err(Error::Validation(
            "slice was computed with a different parameter set".into(),
        ));
    }
    let w = &slice.psidot_dps;
    let n = w.len();
    if (0..n).any(|i| w[i] != -w[n - 1 - i]) {
        return Err(Error::Validation(
            "turn-rate axis is not symmetric about zero".into(),
        ));
    }
    let mut cells = Vec::with_capacity(slice.cells.len());
    for iv in 0..slice.n_v() {
        for iw in 0..n {
            cells.push(mirror_trim(slice.cell(iv, n - 1 - iw)));
        }
    }
    let mut provenance = slice.provenance.clone();
    provenance.failure = slice.provenance.failure.map(|f| f.mirrored());
    Ok(EnvelopeSlice {
        cells,
        provenance,
        ..slice.clone()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorCheck {
    pub iv: usize,
    pub iw: usize,
    pub mirrored_in_envelope: bool,
    pub direct_in_envelope: bool,
}

impl MirrorCheck {
    pub fn agrees(&self) -> bool {
        self.mirrored_in_envelope == self.direct_in_envelope
    }
}

/// Recomputes `samples` randomly chosen boundary-adjacent cells of a mirrored
/// slice directly with its (mirrored) failure, cold-started.
pub fn validate_mirror(
    mirrored: &EnvelopeSlice,
    params: &AircraftParams,
    samples: usize,
    seed: u64,
) -> Result<Vec<MirrorCheck>> {
    let mut candidates = mirrored.boundary_adjacent_cells();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);
    candidates.truncate(samples);
    candidates.sort_unstable();
    let failure = mirrored.provenance.failure;
    let config = &mirrored.provenance.solver;
    candidates
        .into_iter()
        .map(|(iv, iw)| {
            let target = crate::trim::TrimTarget::new(
                ft_to_m(mirrored.h_ft),
                kt_to_mps(mirrored.v_kt[iv]),
                deg(mirrored.gamma_deg),
                deg(mirrored.psidot_dps[iw]),
            );
            let direct = solve_trim(&target, failure.as_ref(), params, config, None)?;
            Ok(MirrorCheck {
                iv,
                iw,
                mirrored_in_envelope: mirrored.in_envelope(iv, iw),
                direct_in_envelope: direct.in_envelope(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{sweep_slice, FailureSpec, SweepOptions};
    use crate::model::Surface;
    use crate::trim::SolverConfig;

    fn slice(failure: Option<&FailureSpec>, params: &AircraftParams) -> EnvelopeSlice {
        let v = [70.0, 100.0, 130.0];
        let w = [-8.0, -4.0, 0.0, 4.0, 8.0];
        sweep_slice(
            0.0,
            0.0,
            &v,
            &w,
            failure,
            params,
            &SolverConfig::default(),
            SweepOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn involution() {
        let p = AircraftParams::default();
        let f = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0).unwrap();
        let s = slice(Some(&f), &p);
        let m = mirror_envelope(&s, &p).unwrap();
        let mm = mirror_envelope(&m, &p).unwrap();
        assert_eq!(mm.mask(), s.mask());
        assert_eq!(mm.provenance.failure, s.provenance.failure);
        for (a, b) in mm.cells.iter().zip(&s.cells) {
            assert_eq!(a.state, b.state);
            assert_eq!(a.controls, b.controls);
            assert_eq!(a.active, b.active);
        }
    }

    #[test]
    fn unimpaired_mask_is_self_symmetric() {
        let p = AircraftParams::default();
        let s = slice(None, &p);
        let m = mirror_envelope(&s, &p).unwrap();
        assert_eq!(m.mask(), s.mask());
    }

    #[test]
    fn refuses_asymmetric_airframe() {
        let mut p = AircraftParams::default();
        let s = slice(None, &p);
        p.aero.cn0 = 0.001;
        assert!(mirror_envelope(&s, &p).is_err());
    }

    #[test]
    fn validation_samples_agree() {
        let p = AircraftParams::default();
        let f = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0).unwrap();
        let m = mirror_envelope(&slice(Some(&f), &p), &p).unwrap();
        let checks = validate_mirror(&m, &p, 3, 7).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(MirrorCheck::agrees), "{checks:?}");
    }
}
