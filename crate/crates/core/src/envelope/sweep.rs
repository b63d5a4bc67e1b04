use rayon::prelude::*;

use super::grid::GridSpec;
use super::slice::{Envelope3D, EnvelopeSlice, Provenance, TOOL_VERSION};
use super::FailureSpec;
use crate::model::AircraftParams;
use crate::trim::{solve_trim, SolverConfig, TrimResult, TrimTarget};
use crate::units::{deg, ft_to_m, kt_to_mps};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartMode {
    /// Chain each solve from its predecessor in the column.
    #[default]
    Warm,
    /// Solve every cell from the cold-start point; the reference for
    /// detecting path-dependent trims.
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    pub start: StartMode,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SweepOptions {
    pub fn cold() -> Self {
        SweepOptions {
            start: StartMode::Cold,
            ..Default::default()
        }
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Sweeps one `(V, ψ̇)` slice.
///
/// Each V column is an independent chain: the ψ̇ ≈ 0 cell is solved first
/// from the cold start, then the solve marches outward in both directions,
/// each cell seeded with the nearest feasible trim behind it. Columns run in
/// parallel; the result does not depend on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn sweep_slice(
    h_ft: f64,
    gamma_deg: f64,
    v_kt: &[f64],
    psidot_dps: &[f64],
    failure: Option<&FailureSpec>,
    params: &AircraftParams,
    config: &SolverConfig,
    options: SweepOptions,
) -> Result<EnvelopeSlice> {
    params.validate()?;
    config.validate()?;
    if let Some(f) = failure {
        super::apply_failure(&params.limits, Some(f))?;
    }
    let h = ft_to_m(h_ft);
    crate::model::isa_density(h)?;

    let mut slice = EnvelopeSlice {
        h_ft,
        gamma_deg,
        v_kt: v_kt.to_vec(),
        psidot_dps: psidot_dps.to_vec(),
        cells: Vec::new(),
        provenance: Provenance {
            tool_version: TOOL_VERSION.to_string(),
            params_hash: params.hash(),
            failure: failure.copied(),
            solver: config.clone(),
        },
    };
    let Some(iw0) = slice.zero_turn_index() else {
        return Ok(slice);
    };
    if v_kt.is_empty() {
        return Ok(slice);
    }

    let solve_column = |vk: f64| -> Result<Vec<TrimResult>> {
        let target = |iw: usize| {
            TrimTarget::new(h, kt_to_mps(vk), deg(gamma_deg), deg(psidot_dps[iw]))
        };
        let n = psidot_dps.len();
        let mut column: Vec<Option<TrimResult>> = vec![None; n];
        let center = solve_trim(&target(iw0), failure, params, config, None)?;
        let seed0 = center.in_envelope().then(|| center.initial_guess());
        column[iw0] = Some(center);
        let outward: [Box<dyn Iterator<Item = usize>>; 2] =
            [Box::new(iw0 + 1..n), Box::new((0..iw0).rev())];
        for order in outward {
            let mut seed = seed0;
            for iw in order {
                let guess = match options.start {
                    StartMode::Warm => seed.as_ref().map(|(s, u)| (s, u)),
                    StartMode::Cold => None,
                };
                let r = solve_trim(&target(iw), failure, params, config, guess)?;
                if r.in_envelope() {
                    seed = Some(r.initial_guess());
                }
                column[iw] = Some(r);
            }
        }
        Ok(column.into_iter().map(|c| c.expect("every cell solved")).collect())
    };

    let columns: Vec<Result<Vec<TrimResult>>> =
        options.run(|| v_kt.par_iter().map(|vk| solve_column(*vk)).collect())?;
    for column in columns {
        slice.cells.extend(column?);
    }
    Ok(slice)
}

/// Sweeps every γ of the grid at one altitude.
pub fn sweep_3d(
    h_ft: f64,
    grid: &GridSpec,
    failure: Option<&FailureSpec>,
    params: &AircraftParams,
    config: &SolverConfig,
    options: SweepOptions,
) -> Result<Envelope3D> {
    grid.validate()?;
    let v = grid.v_kt.values();
    let w = grid.psidot_dps.values();
    let slices = grid
        .gamma_deg
        .values()
        .into_iter()
        .map(|g| sweep_slice(h_ft, g, &v, &w, failure, params, config, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(Envelope3D { h_ft, slices })
}

/// Cells where the warm-started sweep and the cold-start reference disagree
/// on envelope membership: evidence of more than one trim branch.
pub fn multiplicity_flags(
    warm: &EnvelopeSlice,
    cold: &EnvelopeSlice,
) -> Result<Vec<(usize, usize)>> {
    warm.mask_diff(cold)
}
