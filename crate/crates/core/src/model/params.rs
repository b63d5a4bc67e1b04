//! Aircraft parameter set and its JSON file schema.
//!
//! Files carry angles in degrees; derivatives stay per radian. The default set
//! uses the subscale transport's published mass and geometry with a surrogate
//! coefficient buildup calibrated so that the sea-level, level-flight speed
//! range is roughly 58 to 176 kt. Inertias are surrogate values from
//! radius-of-gyration scaling of a generic twin-jet transport.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lift_coefficient;
use super::state::Surface;
use crate::units::deg;
use crate::{Error, Result};

mod degrees {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rad: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(rad.to_degrees())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(f64::deserialize(d)?.to_radians())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MassGeometry {
    /// Weight (N).
    pub weight: f64,
    /// Mass (kg).
    pub mass: f64,
    /// Wing reference area (m²).
    pub wing_area: f64,
    pub span: f64,
    /// Mean aerodynamic chord (m).
    pub chord: f64,
    pub length: f64,
    pub ixx: f64,
    pub iyy: f64,
    pub izz: f64,
    pub ixz: f64,
}

impl Default for MassGeometry {
    fn default() -> Self {
        MassGeometry {
            weight: 257.0,
            mass: 26.2,
            wing_area: 0.5483,
            span: 2.09,
            chord: 0.2790,
            length: 2.59,
            // m·(R·ref/2)² with R = 0.21 (span), 0.20 (length), 0.30 (mean of both).
            ixx: 1.26,
            iyy: 1.76,
            izz: 3.23,
            ixz: 0.14,
        }
    }
}

/// Coefficient buildup derivatives. All per radian unless noted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AeroDerivativeSet {
    #[serde(rename = "CL0")]
    pub cl0: f64,
    #[serde(rename = "CLalpha")]
    pub cl_alpha: f64,
    /// Angle of attack at maximum lift.
    #[serde(rename = "alpha_crit_deg", with = "degrees")]
    pub alpha_crit: f64,
    /// Lift lost per radian beyond `alpha_crit` (≥ 0).
    #[serde(rename = "CL_post_stall_slope")]
    pub cl_post_stall: f64,
    #[serde(rename = "CD0")]
    pub cd0: f64,
    /// Induced-drag polar factor in `CD0 + K·CL²`.
    #[serde(rename = "K")]
    pub k: f64,
    /// Sideslip drag factor, per rad².
    #[serde(rename = "CDbeta")]
    pub cd_beta: f64,
    #[serde(rename = "CYbeta")]
    pub cy_beta: f64,
    #[serde(rename = "CYdr")]
    pub cy_dr: f64,
    #[serde(rename = "Clbeta")]
    pub cll_beta: f64,
    #[serde(rename = "Clp")]
    pub cll_p: f64,
    #[serde(rename = "Clr")]
    pub cll_r: f64,
    #[serde(rename = "Clda")]
    pub cll_da: f64,
    #[serde(rename = "Cldr")]
    pub cll_dr: f64,
    #[serde(rename = "Cm0")]
    pub cm0: f64,
    #[serde(rename = "Cmalpha")]
    pub cm_alpha: f64,
    #[serde(rename = "Cmq")]
    pub cm_q: f64,
    #[serde(rename = "Cmde")]
    pub cm_de: f64,
    #[serde(rename = "Cnbeta")]
    pub cn_beta: f64,
    #[serde(rename = "Cnp")]
    pub cn_p: f64,
    #[serde(rename = "Cnr")]
    pub cn_r: f64,
    #[serde(rename = "Cnda")]
    pub cn_da: f64,
    #[serde(rename = "Cndr")]
    pub cn_dr: f64,
    /// Lateral asymmetry offsets (damage, rigging); zero for a symmetric airframe.
    #[serde(rename = "CY0")]
    pub cy0: f64,
    #[serde(rename = "Cl0")]
    pub cll0: f64,
    #[serde(rename = "Cn0")]
    pub cn0: f64,
}

impl Default for AeroDerivativeSet {
    fn default() -> Self {
        AeroDerivativeSet {
            cl0: 0.10,
            cl_alpha: 4.07,
            alpha_crit: deg(10.5),
            cl_post_stall: 2.0,
            cd0: 0.032,
            k: 0.0705,
            cd_beta: 0.5,
            cy_beta: -0.6,
            cy_dr: 0.15,
            cll_beta: -0.20,
            cll_p: -0.45,
            cll_r: 0.12,
            cll_da: -0.10,
            cll_dr: 0.01,
            cm0: 0.05,
            cm_alpha: -1.0,
            cm_q: -30.0,
            cm_de: -1.5,
            cn_beta: 0.12,
            cn_p: -0.04,
            cn_r: -0.20,
            cn_da: 0.01,
            cn_dr: -0.045,
            cy0: 0.0,
            cll0: 0.0,
            cn0: 0.0,
        }
    }
}

impl AeroDerivativeSet {
    pub fn cl_max(&self) -> f64 {
        lift_coefficient(self, self.alpha_crit)
    }

    pub fn is_laterally_symmetric(&self) -> bool {
        self.cy0 == 0.0 && self.cll0 == 0.0 && self.cn0 == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropulsionParams {
    /// Maximum sea-level static thrust (N).
    pub tmax_sl: f64,
    /// Density-ratio exponent of the thrust lapse.
    pub m_lapse: f64,
    /// Linear speed falloff (per m/s, ≤ 0).
    pub c1: f64,
    /// Quadratic speed falloff (per (m/s)²).
    pub c2: f64,
}

impl Default for PropulsionParams {
    fn default() -> Self {
        PropulsionParams {
            tmax_sl: 95.2,
            m_lapse: 1.0,
            c1: -6.3e-4,
            c2: 0.0,
        }
    }
}

/// Closed deflection window `[lower, upper]`; radians for surfaces,
/// dimensionless for throttle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceWindow {
    pub lower: f64,
    pub upper: f64,
}

impl SurfaceWindow {
    pub fn new(lower: f64, upper: f64) -> Self {
        SurfaceWindow { lower, upper }
    }

    pub fn symmetric(half_width: f64) -> Self {
        SurfaceWindow::new(-half_width, half_width)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn contains_window(&self, other: &SurfaceWindow) -> bool {
        other.lower >= self.lower && other.upper <= self.upper
    }

    pub fn is_jam(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Trim inequality constraints: flight limits and the active actuator windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstraintConfig {
    #[serde(rename = "alpha_max_deg", with = "degrees")]
    pub alpha_max: f64,
    /// Lower end of the modeled angle-of-attack range.
    #[serde(rename = "alpha_min_deg", with = "degrees")]
    pub alpha_min: f64,
    /// Modeled sideslip range, symmetric.
    #[serde(rename = "beta_max_deg", with = "degrees")]
    pub beta_max: f64,
    #[serde(rename = "phi_max_deg", with = "degrees")]
    pub phi_max: f64,
    pub throttle: SurfaceWindow,
    #[serde(rename = "elevator_deg", with = "window_degrees")]
    pub elevator: SurfaceWindow,
    #[serde(rename = "aileron_deg", with = "window_degrees")]
    pub aileron: SurfaceWindow,
    #[serde(rename = "rudder_deg", with = "window_degrees")]
    pub rudder: SurfaceWindow,
}

mod window_degrees {
    use super::SurfaceWindow;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(w: &SurfaceWindow, s: S) -> Result<S::Ok, S::Error> {
        [w.lower.to_degrees(), w.upper.to_degrees()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SurfaceWindow, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        Ok(SurfaceWindow::new(lo.to_radians(), hi.to_radians()))
    }
}

impl Default for ConstraintConfig {
    fn default() -> Self {
        ConstraintConfig {
            alpha_max: deg(10.5),
            alpha_min: deg(-5.0),
            beta_max: deg(45.0),
            phi_max: deg(30.0),
            throttle: SurfaceWindow::new(0.0, 1.0),
            elevator: SurfaceWindow::symmetric(deg(30.0)),
            aileron: SurfaceWindow::symmetric(deg(20.0)),
            rudder: SurfaceWindow::symmetric(deg(30.0)),
        }
    }
}

impl ConstraintConfig {
    pub fn window(&self, s: Surface) -> SurfaceWindow {
        match s {
            Surface::Throttle => self.throttle,
            Surface::Elevator => self.elevator,
            Surface::Aileron => self.aileron,
            Surface::Rudder => self.rudder,
        }
    }

    pub fn window_mut(&mut self, s: Surface) -> &mut SurfaceWindow {
        match s {
            Surface::Throttle => &mut self.throttle,
            Surface::Elevator => &mut self.elevator,
            Surface::Aileron => &mut self.aileron,
            Surface::Rudder => &mut self.rudder,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_max > 0.0) || !(self.phi_max > 0.0) {
            return Err(Error::Validation("alpha_max and phi_max must be positive".into()));
        }
        if !(self.alpha_min < self.alpha_max) {
            return Err(Error::Validation("alpha_min must be below alpha_max".into()));
        }
        if !(self.beta_max > 0.0) {
            return Err(Error::Validation("beta_max must be positive".into()));
        }
        for s in Surface::ALL {
            let w = self.window(s);
            if !(w.lower <= w.upper) {
                return Err(Error::Validation(format!(
                    "{s} window lower limit exceeds upper limit"
                )));
            }
        }
        if self.throttle.lower < 0.0 || self.throttle.upper > 1.0 {
            return Err(Error::Validation("throttle window must lie within [0, 1]".into()));
        }
        Ok(())
    }
}

/// Complete parameter set consumed by the model.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AircraftParams {
    pub mass_geometry: MassGeometry,
    pub aero: AeroDerivativeSet,
    pub propulsion: PropulsionParams,
    pub limits: ConstraintConfig,
}

/// Alias naming the on-disk form; the schema is `AircraftParams` itself.
pub type ParamsFile = AircraftParams;

impl AircraftParams {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: AircraftParams = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Json(j) => Error::format(path, j.to_string()),
            other => other,
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }

    /// Gravitational acceleration implied by weight and mass.
    pub fn gravity(&self) -> f64 {
        self.mass_geometry.weight / self.mass_geometry.mass
    }

    /// Hex SHA-256 of the canonical JSON form; identifies the parameter set
    /// in envelope provenance.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("params serialize");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let mg = &self.mass_geometry;
        for (name, x) in [
            ("weight", mg.weight),
            ("mass", mg.mass),
            ("wing_area", mg.wing_area),
            ("span", mg.span),
            ("chord", mg.chord),
            ("length", mg.length),
            ("ixx", mg.ixx),
            ("iyy", mg.iyy),
            ("izz", mg.izz),
        ] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::Validation(format!("{name} must be positive, got {x}")));
            }
        }
        // Principal minors of the inertia tensor with only Ixz coupling.
        if !(mg.ixx * mg.izz - mg.ixz * mg.ixz > 0.0) {
            return Err(Error::Validation("inertia tensor is not positive definite".into()));
        }
        let a = &self.aero;
        if !(a.cl_alpha > 0.0) {
            return Err(Error::Validation("CLalpha must be positive".into()));
        }
        if !(a.cd0 > 0.0) || !(a.k > 0.0) {
            return Err(Error::Validation("CD0 and K must be positive".into()));
        }
        if a.cd_beta < 0.0 || a.cl_post_stall < 0.0 {
            return Err(Error::Validation(
                "CDbeta and CL_post_stall_slope must be non-negative".into(),
            ));
        }
        if !(a.alpha_crit > 0.0) {
            return Err(Error::Validation("alpha_crit must be positive".into()));
        }
        let pr = &self.propulsion;
        if !(pr.tmax_sl > 0.0) {
            return Err(Error::Validation("tmax_sl must be positive".into()));
        }
        if pr.c1 > 0.0 {
            return Err(Error::Validation("thrust speed falloff c1 must be <= 0".into()));
        }
        self.limits.validate()
    }
}
