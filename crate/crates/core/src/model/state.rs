use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Trim state `[V, α, β, p, q, r, φ, θ]` plus the altitude it is flown at.
///
/// Altitude is context for the atmosphere, not a free trim variable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AircraftState {
    /// True airspeed (m/s).
    pub v: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
    /// Altitude (m).
    pub h: f64,
}

impl AircraftState {
    pub const DIM: usize = 8;

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.v, self.alpha, self.beta, self.p, self.q, self.r, self.phi, self.theta,
        ]
    }

    pub fn from_array(x: [f64; 8], h: f64) -> Self {
        AircraftState {
            v: x[0],
            alpha: x[1],
            beta: x[2],
            p: x[3],
            q: x[4],
            r: x[5],
            phi: x[6],
            theta: x[7],
            h,
        }
    }

    /// Reflection through the aircraft's plane of symmetry.
    pub fn mirrored(&self) -> Self {
        AircraftState {
            beta: -self.beta,
            p: -self.p,
            r: -self.r,
            phi: -self.phi,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        use std::f64::consts::FRAC_PI_2;
        let finite = self.to_array().iter().all(|x| x.is_finite()) && self.h.is_finite();
        if !finite {
            return Err(Error::Domain("non-finite state component".into()));
        }
        if self.v <= 0.0 {
            return Err(Error::Domain(format!("airspeed must be positive, got {}", self.v)));
        }
        for (name, x) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("phi", self.phi),
            ("theta", self.theta),
        ] {
            if x.abs() >= FRAC_PI_2 {
                return Err(Error::Domain(format!("|{name}| must be below 90 deg, got {x} rad")));
            }
        }
        Ok(())
    }
}

/// Control surface / effector identifiers, in the order of the control vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Throttle,
    Elevator,
    Aileron,
    Rudder,
}

impl Surface {
    pub const ALL: [Surface; 4] = [
        Surface::Throttle,
        Surface::Elevator,
        Surface::Aileron,
        Surface::Rudder,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Aileron and rudder deflections flip sign under lateral mirroring.
    pub fn is_lateral(self) -> bool {
        matches!(self, Surface::Aileron | Surface::Rudder)
    }

    /// Throttle is dimensionless; the others are angles.
    pub fn is_angle(self) -> bool {
        !matches!(self, Surface::Throttle)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Surface::Throttle => "throttle",
            Surface::Elevator => "elevator",
            Surface::Aileron => "aileron",
            Surface::Rudder => "rudder",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Surface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "throttle" | "th" => Ok(Surface::Throttle),
            "elevator" | "e" => Ok(Surface::Elevator),
            "aileron" | "a" => Ok(Surface::Aileron),
            "rudder" | "r" => Ok(Surface::Rudder),
            other => Err(Error::Validation(format!("unknown surface '{other}'"))),
        }
    }
}

/// Control vector `[δ_th, δ_e, δ_a, δ_r]`; deflections in radians.
///
/// Sign conventions: elevator trailing edge down, rudder trailing edge left
/// and left-wing aileron trailing edge up are positive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlVector {
    pub dth: f64,
    pub de: f64,
    pub da: f64,
    pub dr: f64,
}

impl ControlVector {
    pub const DIM: usize = 4;

    pub fn to_array(&self) -> [f64; 4] {
        [self.dth, self.de, self.da, self.dr]
    }

    pub fn from_array(u: [f64; 4]) -> Self {
        ControlVector {
            dth: u[0],
            de: u[1],
            da: u[2],
            dr: u[3],
        }
    }

    pub fn get(&self, s: Surface) -> f64 {
        self.to_array()[s.index()]
    }

    pub fn set(&mut self, s: Surface, value: f64) {
        let mut u = self.to_array();
        u[s.index()] = value;
        *self = ControlVector::from_array(u);
    }

    pub fn mirrored(&self) -> Self {
        ControlVector {
            da: -self.da,
            dr: -self.dr,
            ..*self
        }
    }
}
