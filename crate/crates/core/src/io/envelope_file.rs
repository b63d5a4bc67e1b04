use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{csv_with_header, read_text, split_header, write_atomic};
use crate::envelope::{EnvelopeSlice, FailureSpec, Provenance};
use crate::model::{AircraftState, ControlVector};
use crate::trim::{ActiveConstraint, SolverConfig, TrimResult, TrimStatus, TrimTarget};
use crate::units::{deg, ft_to_m, kt_to_mps, to_deg};
use crate::{Error, Result};

/// Value of the `format` header line.
pub const FORMAT: &str = "mfe-envelope-1";

/// Provenance header of an envelope file.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeHeader {
    pub tool_version: String,
    pub params_hash: String,
    pub h_ft: f64,
    pub gamma_deg: f64,
    pub v_kt: Vec<f64>,
    pub psidot_dps: Vec<f64>,
    pub failure: Option<FailureSpec>,
    pub solver: SolverConfig,
}

/// One grid cell in external units. Rates in deg/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRecord {
    pub h_ft: f64,
    #[serde(rename = "V_kt")]
    pub v_kt: f64,
    pub gamma_deg: f64,
    pub psidot_degps: f64,
    pub status: String,
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub phi_deg: f64,
    pub theta_deg: f64,
    pub p_degps: f64,
    pub q_degps: f64,
    pub r_degps: f64,
    pub dth: f64,
    pub de_deg: f64,
    pub da_deg: f64,
    pub dr_deg: f64,
    pub residual: f64,
    pub max_xdot: f64,
    pub active: String,
    pub iterations: usize,
}

/// Envelope slice as stored on disk.
///
/// Floats are written in shortest round-trip form, so
/// `read(write(file)) == file` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFile {
    pub header: EnvelopeHeader,
    pub records: Vec<EnvelopeRecord>,
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl EnvelopeRecord {
    fn from_trim(h_ft: f64, gamma_deg: f64, v_kt: f64, psidot_dps: f64, t: &TrimResult) -> Self {
        let s = &t.state;
        let u = &t.controls;
        EnvelopeRecord {
            h_ft,
            v_kt,
            gamma_deg,
            psidot_degps: psidot_dps,
            status: t.status.label(),
            alpha_deg: to_deg(s.alpha),
            beta_deg: to_deg(s.beta),
            phi_deg: to_deg(s.phi),
            theta_deg: to_deg(s.theta),
            p_degps: to_deg(s.p),
            q_degps: to_deg(s.q),
            r_degps: to_deg(s.r),
            dth: u.dth,
            de_deg: to_deg(u.de),
            da_deg: to_deg(u.da),
            dr_deg: to_deg(u.dr),
            residual: t.residual,
            max_xdot: t.max_derivative,
            active: t
                .active
                .iter()
                .map(|a| a.name())
                .collect::<Vec<_>>()
                .join(";"),
            iterations: t.iterations,
        }
    }

    /// The stored trim. Degree/radian conversion makes this exact to within
    /// an ulp or so, not bit for bit.
    pub fn to_trim(&self) -> Result<TrimResult> {
        let bad = |msg: String| Error::Validation(msg);
        let status = TrimStatus::from_label(&self.status)
            .ok_or_else(|| bad(format!("unknown status '{}'", self.status)))?;
        let active = self
            .active
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| ActiveConstraint::from_name(s).ok_or_else(|| bad(format!("unknown constraint '{s}'"))))
            .collect::<Result<BTreeSet<_>>>()?;
        let h = ft_to_m(self.h_ft);
        let v = kt_to_mps(self.v_kt);
        Ok(TrimResult {
            target: TrimTarget::new(h, v, deg(self.gamma_deg), deg(self.psidot_degps)),
            state: AircraftState {
                v,
                alpha: deg(self.alpha_deg),
                beta: deg(self.beta_deg),
                p: deg(self.p_degps),
                q: deg(self.q_degps),
                r: deg(self.r_degps),
                phi: deg(self.phi_deg),
                theta: deg(self.theta_deg),
                h,
            },
            controls: ControlVector {
                dth: self.dth,
                de: deg(self.de_deg),
                da: deg(self.da_deg),
                dr: deg(self.dr_deg),
            },
            residual: self.residual,
            max_derivative: self.max_xdot,
            status,
            active,
            iterations: self.iterations,
        })
    }
}

impl EnvelopeFile {
    pub fn from_slice(slice: &EnvelopeSlice) -> Self {
        let header = EnvelopeHeader {
            tool_version: slice.provenance.tool_version.clone(),
            params_hash: slice.provenance.params_hash.clone(),
            h_ft: slice.h_ft,
            gamma_deg: slice.gamma_deg,
            v_kt: slice.v_kt.clone(),
            psidot_dps: slice.psidot_dps.clone(),
            failure: slice.provenance.failure,
            solver: slice.provenance.solver.clone(),
        };
        let mut records = Vec::with_capacity(slice.cells.len());
        for (iv, v) in slice.v_kt.iter().enumerate() {
            for (iw, w) in slice.psidot_dps.iter().enumerate() {
                records.push(EnvelopeRecord::from_trim(
                    slice.h_ft,
                    slice.gamma_deg,
                    *v,
                    *w,
                    slice.cell(iv, iw),
                ));
            }
        }
        EnvelopeFile { header, records }
    }

    pub fn to_slice(&self) -> Result<EnvelopeSlice> {
        let h = &self.header;
        let cells = self
            .records
            .iter()
            .map(EnvelopeRecord::to_trim)
            .collect::<Result<Vec<_>>>()?;
        Ok(EnvelopeSlice {
            h_ft: h.h_ft,
            gamma_deg: h.gamma_deg,
            v_kt: h.v_kt.clone(),
            psidot_dps: h.psidot_dps.clone(),
            cells,
            provenance: Provenance {
                tool_version: h.tool_version.clone(),
                params_hash: h.params_hash.clone(),
                failure: h.failure,
                solver: h.solver.clone(),
            },
        })
    }

    fn header_lines(&self) -> Vec<(String, String)> {
        let h = &self.header;
        let failure = match &h.failure {
            Some(f) => serde_json::to_string(f).expect("failure serializes"),
            None => "none".to_string(),
        };
        vec![
            ("format".into(), FORMAT.into()),
            ("tool_version".into(), h.tool_version.clone()),
            ("params_hash".into(), h.params_hash.clone()),
            ("h_ft".into(), h.h_ft.to_string()),
            ("gamma_deg".into(), h.gamma_deg.to_string()),
            ("v_kt".into(), join(&h.v_kt)),
            ("psidot_degps".into(), join(&h.psidot_dps)),
            ("failure".into(), failure),
            (
                "solver".into(),
                serde_json::to_string(&h.solver).expect("solver serializes"),
            ),
        ]
    }

    pub fn to_csv_string(&self) -> Result<String> {
        csv_with_header(&self.header_lines(), &self.records)
    }

    /// Parses file text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let fail = |msg: String| Error::format(origin, msg);
        let (lines, body) = split_header(text);
        let get = |key: &str| {
            lines
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| fail(format!("provenance header lacks '{key}'")))
        };
        let format = get("format")?;
        if format != FORMAT {
            return Err(fail(format!("unsupported format '{format}'")));
        }
        let num = |key: &str| -> Result<f64> {
            get(key)?
                .parse()
                .map_err(|_| fail(format!("header '{key}' is not a number")))
        };
        let list = |key: &str| -> Result<Vec<f64>> {
            let v = get(key)?;
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(',')
                .map(|x| x.trim().parse().map_err(|_| fail(format!("bad value in '{key}'"))))
                .collect()
        };
        let failure = match get("failure")? {
            "none" => None,
            s => Some(serde_json::from_str(s).map_err(|e| fail(format!("failure: {e}")))?),
        };
        let header = EnvelopeHeader {
            tool_version: get("tool_version")?.to_string(),
            params_hash: get("params_hash")?.to_string(),
            h_ft: num("h_ft")?,
            gamma_deg: num("gamma_deg")?,
            v_kt: list("v_kt")?,
            psidot_dps: list("psidot_degps")?,
            failure,
            solver: serde_json::from_str(get("solver")?)
                .map_err(|e| fail(format!("solver: {e}")))?,
        };
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let records = reader
            .deserialize()
            .collect::<std::result::Result<Vec<EnvelopeRecord>, _>>()
            .map_err(|e| fail(e.to_string()))?;

        let expected = header.v_kt.len() * header.psidot_dps.len();
        if records.len() != expected {
            return Err(fail(format!(
                "{} records for a {}x{} grid",
                records.len(),
                header.v_kt.len(),
                header.psidot_dps.len()
            )));
        }
        let nw = header.psidot_dps.len();
        for (i, r) in records.iter().enumerate() {
            let (v, w) = (header.v_kt[i / nw], header.psidot_dps[i % nw]);
            if r.v_kt != v || r.psidot_degps != w || r.h_ft != header.h_ft || r.gamma_deg != header.gamma_deg {
                return Err(fail(format!("record {} is out of grid order", i + 1)));
            }
        }
        Ok(EnvelopeFile { header, records })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv_string()?.as_bytes())
    }

    /// Reads an envelope file straight into a slice.
    pub fn load_slice(path: &Path) -> Result<EnvelopeSlice> {
        Self::load(path)?.to_slice()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{sweep_slice, SweepOptions};
    use crate::model::{AircraftParams, Surface};

    fn small() -> EnvelopeSlice {
        let p = AircraftParams::default();
        let f = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0).unwrap();
        sweep_slice(
            0.0,
            0.0,
            &[50.0, 100.0, 150.0],
            &[-4.0, 0.0, 4.0],
            Some(&f),
            &p,
            &SolverConfig::default(),
            SweepOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn file_round_trip_is_exact() {
        let file = EnvelopeFile::from_slice(&small());
        let text = file.to_csv_string().unwrap();
        let back = EnvelopeFile::parse(&text, Path::new("mem")).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_csv_string().unwrap(), text);
    }

    #[test]
    fn slice_round_trip_keeps_status_and_values() {
        let slice = small();
        let back = EnvelopeFile::from_slice(&slice).to_slice().unwrap();
        assert_eq!(back.mask(), slice.mask());
        for (a, b) in slice.cells.iter().zip(&back.cells) {
            assert_eq!(a.status, b.status);
            assert_eq!(a.active, b.active);
            for (x, y) in a.state.to_array().iter().zip(b.state.to_array()) {
                assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
            }
            for (x, y) in a.controls.to_array().iter().zip(b.controls.to_array()) {
                assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn missing_header_is_refused() {
        let text = EnvelopeFile::from_slice(&small()).to_csv_string().unwrap();
        let body: String = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = EnvelopeFile::parse(&body, Path::new("x.csv")).unwrap_err();
        assert!(matches!(err, Error::Format { .. }), "{err}");
        let partial = text.replace("# params_hash", "# nothing");
        assert!(EnvelopeFile::parse(&partial, Path::new("x.csv")).is_err());
    }

    #[test]
    fn truncated_body_is_refused() {
        let text = EnvelopeFile::from_slice(&small()).to_csv_string().unwrap();
        let cut: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
        assert!(EnvelopeFile::parse(&cut, Path::new("x.csv")).is_err());
    }
}
