use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Evenly spaced axis `min, min + step, …, ≤ max` in external units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        Axis { min, max, step }
    }

    pub fn single(x: f64) -> Self {
        Axis {
            min: x,
            max: x,
            step: 1.0,
        }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !(self.step > 0.0) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Validation(format!(
                "{name} axis needs finite bounds and a positive step"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        if self.max < self.min {
            return 0;
        }
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid values, rounded to 1e-9 so that accumulated step error never
    /// shows up in files.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let x = self.min + i as f64 * self.step;
                let r = (x * 1e9).round() / 1e9;
                if r == 0.0 {
                    0.0
                } else {
                    r
                }
            })
            .collect()
    }
}

/// Sweep grid in the units of the plots: knots, degrees per second, degrees
/// and feet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub v_kt: Axis,
    pub psidot_dps: Axis,
    #[serde(default = "default_gamma")]
    pub gamma_deg: Axis,
    #[serde(default = "default_altitudes")]
    pub altitudes_ft: Vec<f64>,
}

fn default_gamma() -> Axis {
    Axis::new(-5.0, 5.0, 1.0)
}

fn default_altitudes() -> Vec<f64> {
    vec![0.0, 10000.0, 20000.0, 30000.0]
}

impl Default for GridSpec {
    /// Full-resolution grid: 1 kt, 0.2 °/s, 1°.
    fn default() -> Self {
        GridSpec {
            v_kt: Axis::new(40.0, 200.0, 1.0),
            psidot_dps: Axis::new(-30.0, 30.0, 0.2),
            gamma_deg: default_gamma(),
            altitudes_ft: default_altitudes(),
        }
    }
}

impl GridSpec {
    /// Desk-scale grid at sea level and γ = 0.
    pub fn desk() -> Self {
        GridSpec {
            v_kt: Axis::new(60.0, 180.0, 5.0),
            psidot_dps: Axis::new(-12.0, 12.0, 1.0),
            gamma_deg: Axis::single(0.0),
            altitudes_ft: vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.v_kt.validate("V")?;
        self.psidot_dps.validate("turn rate")?;
        self.gamma_deg.validate("flight path")?;
        if self.v_kt.min <= 0.0 && !self.v_kt.is_empty() {
            return Err(Error::Validation("airspeed axis must be positive".into()));
        }
        if self.altitudes_ft.iter().any(|h| !h.is_finite()) {
            return Err(Error::Validation("altitudes must be finite".into()));
        }
        Ok(())
    }
}
