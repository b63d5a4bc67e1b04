//! Control-surface failures as deflection windows. A jam is the degenerate
//! window `LL = UL`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{ConstraintConfig, Surface, SurfaceWindow};
use crate::{Error, Result};

/// Window slack when checking containment in the nominal range, so that
/// degree/radian round trips of the nominal limits themselves are accepted.
const WINDOW_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Jam,
    Restriction,
}

/// Failed surface with its remaining `[LL, UL]` window; radians internally
/// (throttle dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FailureFile", into = "FailureFile")]
pub struct FailureSpec {
    pub surface: Surface,
    pub lower: f64,
    pub upper: f64,
}

/// File form: limits in degrees for angle surfaces, fraction for throttle.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FailureFile {
    surface: Surface,
    ll: f64,
    ul: f64,
}

impl TryFrom<FailureFile> for FailureSpec {
    type Error = Error;

    fn try_from(f: FailureFile) -> Result<Self> {
        if !(f.ll <= f.ul) {
            return Err(Error::Validation(format!(
                "{} failure window has LL > UL ({} > {})",
                f.surface, f.ll, f.ul
            )));
        }
        if f.surface.is_angle() {
            FailureSpec::from_degrees(f.surface, f.ll, f.ul)
        } else {
            FailureSpec::new(f.surface, f.ll, f.ul)
        }
    }
}

impl From<FailureSpec> for FailureFile {
    fn from(f: FailureSpec) -> Self {
        let (ll, ul) = f.limits_external();
        FailureFile {
            surface: f.surface,
            ll,
            ul,
        }
    }
}

impl FailureSpec {
    pub fn new(surface: Surface, lower: f64, upper: f64) -> Result<Self> {
        if !(lower <= upper) {
            return Err(Error::Validation(format!(
                "{surface} failure window has LL > UL ({lower} > {upper})"
            )));
        }
        Ok(FailureSpec {
            surface,
            lower,
            upper,
        })
    }

    pub fn from_degrees(surface: Surface, ll_deg: f64, ul_deg: f64) -> Result<Self> {
        Self::new(surface, ll_deg.to_radians(), ul_deg.to_radians())
    }

    pub fn jam_degrees(surface: Surface, at_deg: f64) -> Result<Self> {
        Self::from_degrees(surface, at_deg, at_deg)
    }

    pub fn kind(&self) -> FailureKind {
        if self.lower == self.upper {
            FailureKind::Jam
        } else {
            FailureKind::Restriction
        }
    }

    pub fn window(&self) -> SurfaceWindow {
        SurfaceWindow::new(self.lower, self.upper)
    }

    /// Limits in external units (degrees, or fraction for throttle).
    /// Degrees are rounded to 1e-9 so that `-30` survives the trip through
    /// radians as `-30`.
    pub fn limits_external(&self) -> (f64, f64) {
        let round = |x: f64| {
            let r = (x.to_degrees() * 1e9).round() / 1e9;
            if r == 0.0 {
                0.0
            } else {
                r
            }
        };
        if self.surface.is_angle() {
            (round(self.lower), round(self.upper))
        } else {
            (self.lower, self.upper)
        }
    }

    /// The failure seen in a mirror through the plane of symmetry:
    /// `[LL, UL] → [−UL, −LL]` for aileron and rudder, unchanged otherwise.
    pub fn mirrored(&self) -> Self {
        if self.surface.is_lateral() {
            FailureSpec {
                surface: self.surface,
                lower: -self.upper,
                upper: -self.lower,
            }
        } else {
            *self
        }
    }

    /// File-name friendly label, e.g. `rudder_m30_10` or `aileron_jam_0`.
    pub fn slug(&self) -> String {
        let fmt = |x: f64| {
            let s = format!("{}", (x * 1e6).round() / 1e6);
            s.replace('-', "m").replace('.', "p")
        };
        let (ll, ul) = self.limits_external();
        match self.kind() {
            FailureKind::Jam => format!("{}_jam_{}", self.surface, fmt(ll)),
            FailureKind::Restriction => format!("{}_{}_{}", self.surface, fmt(ll), fmt(ul)),
        }
    }
}

impl fmt::Display for FailureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (ll, ul) = self.limits_external();
        match self.kind() {
            FailureKind::Jam => write!(f, "{} jam {}", self.surface, ll),
            FailureKind::Restriction => write!(f, "{} [{}, {}]", self.surface, ll, ul),
        }
    }
}

/// `SURFACE:LL:UL` with limits in external units, e.g. `rudder:-30:10`.
impl std::str::FromStr for FailureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("failure '{s}' is not SURFACE:LL:UL"));
        let parts: Vec<&str> = s.split(':').collect();
        let [surface, ll, ul] = parts[..] else {
            return Err(bad());
        };
        let surface: Surface = surface.trim().parse()?;
        let ll: f64 = ll.trim().parse().map_err(|_| bad())?;
        let ul: f64 = ul.trim().parse().map_err(|_| bad())?;
        FailureSpec::try_from(FailureFile { surface, ll, ul })
    }
}

/// Replaces the failed surface's window with `[LL, UL]`; other windows are
/// untouched. `None` is the identity.
pub fn apply_failure(
    limits: &ConstraintConfig,
    failure: Option<&FailureSpec>,
) -> Result<ConstraintConfig> {
    let mut out = limits.clone();
    let Some(f) = failure else {
        return Ok(out);
    };
    if !(f.lower <= f.upper) {
        return Err(Error::Validation(format!("{f}: LL exceeds UL")));
    }
    let nominal = limits.window(f.surface);
    if f.lower < nominal.lower - WINDOW_SLACK || f.upper > nominal.upper + WINDOW_SLACK {
        return Err(Error::Validation(format!(
            "{f} lies outside the nominal {} window",
            f.surface
        )));
    }
    *out.window_mut(f.surface) = SurfaceWindow::new(
        f.lower.max(nominal.lower),
        f.upper.min(nominal.upper),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::deg;

    #[test]
    fn parses_command_line_form() {
        let f: FailureSpec = "rudder:-30:10".parse().unwrap();
        assert_eq!(f, FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0).unwrap());
        let t: FailureSpec = "throttle:0.2:0.2".parse().unwrap();
        assert_eq!(t.kind(), FailureKind::Jam);
        assert_eq!(t.lower, 0.2);
        assert!("rudder:10:-30".parse::<FailureSpec>().is_err());
        assert!("rudder:10".parse::<FailureSpec>().is_err());
        assert!("canard:0:1".parse::<FailureSpec>().is_err());
    }

    #[test]
    fn rudder_restriction_replaces_only_rudder() {
        let nominal = ConstraintConfig::default();
        let f = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0).unwrap();
        let l = apply_failure(&nominal, Some(&f)).unwrap();
        assert!((l.rudder.lower - deg(-30.0)).abs() < 1e-15);
        assert!((l.rudder.upper - deg(10.0)).abs() < 1e-15);
        assert_eq!(l.aileron, nominal.aileron);
        assert!((l.aileron.upper - deg(20.0)).abs() < 1e-15);
        assert_eq!(f.kind(), FailureKind::Restriction);
    }

    #[test]
    fn aileron_jam_at_zero() {
        let f = FailureSpec::jam_degrees(Surface::Aileron, 0.0).unwrap();
        let l = apply_failure(&ConstraintConfig::default(), Some(&f)).unwrap();
        assert_eq!(l.aileron, SurfaceWindow::new(0.0, 0.0));
        assert_eq!(f.kind(), FailureKind::Jam);
        assert!(l.aileron.is_jam());
    }

    #[test]
    fn table_of_jam_angles_are_valid() {
        let nominal = ConstraintConfig::default();
        for a in [-20.0, -10.0, 0.0, 10.0, 20.0] {
            let f = FailureSpec::jam_degrees(Surface::Aileron, a).unwrap();
            apply_failure(&nominal, Some(&f)).unwrap();
        }
        for r in [-30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0] {
            let f = FailureSpec::jam_degrees(Surface::Rudder, r).unwrap();
            apply_failure(&nominal, Some(&f)).unwrap();
        }
    }

    #[test]
    fn no_failure_is_identity() {
        let nominal = ConstraintConfig::default();
        assert_eq!(apply_failure(&nominal, None).unwrap(), nominal);
    }

    #[test]
    fn invalid_windows() {
        assert!(FailureSpec::from_degrees(Surface::Rudder, 10.0, -10.0).is_err());
        let f = FailureSpec::from_degrees(Surface::Aileron, -25.0, 0.0).unwrap();
        assert!(matches!(
            apply_failure(&ConstraintConfig::default(), Some(&f)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn mirror_and_slug() {
        let f = FailureSpec::from_degrees(Surface::Rudder, -30.0, 10.0).unwrap();
        let m = f.mirrored();
        assert!((m.lower - deg(-10.0)).abs() < 1e-15 && (m.upper - deg(30.0)).abs() < 1e-15);
        assert_eq!(m.mirrored(), f);
        assert_eq!(f.slug(), "rudder_m30_10");
        let th = FailureSpec::new(Surface::Throttle, 0.0, 0.6).unwrap();
        assert_eq!(th.mirrored(), th);
        assert_eq!(th.slug(), "throttle_0_0p6");
    }

    #[test]
    fn file_form_uses_degrees() {
        let f: FailureSpec =
            serde_json::from_str(r#"{"surface":"rudder","ll":-30,"ul":10}"#).unwrap();
        assert!((f.upper - deg(10.0)).abs() < 1e-15);
        let back = serde_json::to_value(f).unwrap();
        assert!((back["ul"].as_f64().unwrap() - 10.0).abs() < 1e-12);
        assert!(serde_json::from_str::<FailureSpec>(r#"{"surface":"rudder","ll":5,"ul":1}"#).is_err());
    }
}
