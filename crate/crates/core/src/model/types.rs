use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::error::{Error, Result};

/// Keplerian elements of the reduced one-body problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitElements {
    /// Semi-major axis, m.
    pub a: f64,
    /// Eccentricity.
    pub e: f64,
    /// Central strength G·M_central, m³/s².
    pub k: f64,
    /// Orbiting mass, kg.
    pub m: f64,
}

impl OrbitElements {
    pub fn new(a: f64, e: f64, k: f64, m: f64) -> Result<Self> {
        let elements = OrbitElements { a, e, k, m };
        elements.validate()?;
        Ok(elements)
    }

    pub fn validate(&self) -> Result<()> {
        positive("a", self.a)?;
        positive("k", self.k)?;
        positive("m", self.m)?;
        if !self.e.is_finite() || self.e < 0.0 || self.e >= 1.0 {
            return Err(Error::invalid(
                "e",
                format!("eccentricity {} must lie in [0, 1)", self.e),
            ));
        }
        Ok(())
    }

    /// Unperturbed Kepler period 2π√(a³/k).
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.a.powi(3) / self.k).sqrt()
    }

    /// Magnitude of the Kepler angular momentum, m·√(k·a·(1−e²)).
    pub fn angular_momentum(&self) -> f64 {
        self.m * (self.k * self.a * (1.0 - self.e * self.e)).sqrt()
    }

    /// Kepler energy −mk/2a.
    pub fn energy(&self) -> f64 {
        -self.m * self.k / (2.0 * self.a)
    }

    pub fn with_mass(self, m: f64) -> Self {
        OrbitElements { m, ..self }
    }

    pub fn with_e(self, e: f64) -> Self {
        OrbitElements { e, ..self }
    }
}

/// Rotationally averaged noncommutativity strengths attached to one mass.
///
/// `theta_sq` is ⟨θ²⟩ in s²/kg², `eta_sq` is ⟨η²⟩ in kg²/s². The
/// mass-independent combinations are A = ⟨θ²⟩·m² and B = ⟨η²⟩/m².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NCParams {
    pub theta_sq: f64,
    pub eta_sq: f64,
    pub mass: f64,
}

impl NCParams {
    pub fn new(theta_sq: f64, eta_sq: f64, mass: f64) -> Result<Self> {
        let nc = NCParams { theta_sq, eta_sq, mass };
        nc.validate()?;
        Ok(nc)
    }

    /// Commutative phase space for a body of the given mass.
    pub fn zero(mass: f64) -> Self {
        NCParams {
            theta_sq: 0.0,
            eta_sq: 0.0,
            mass,
        }
    }

    /// Parameters reproducing the given mass-independent constants at `mass`.
    pub fn from_scaling_constants(a_const: f64, b_const: f64, mass: f64) -> Result<Self> {
        positive("mass", mass)?;
        Self::new(a_const / (mass * mass), b_const * mass * mass, mass)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("theta_sq", self.theta_sq)?;
        non_negative("eta_sq", self.eta_sq)?;
        positive("mass", self.mass)?;
        let (a, b) = (self.a_const(), self.b_const());
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid("mass", "scaling constants A, B overflow"));
        }
        Ok(())
    }

    pub fn a_const(&self) -> f64 {
        self.theta_sq * self.mass * self.mass
    }

    pub fn b_const(&self) -> f64 {
        self.eta_sq / (self.mass * self.mass)
    }

    pub fn is_zero(&self) -> bool {
        self.theta_sq == 0.0 && self.eta_sq == 0.0
    }
}

/// Instantaneous phase-space point (x, p, t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub x: Vec3,
    pub p: Vec3,
    pub t: f64,
}

impl PhaseState {
    pub fn new(x: Vec3, p: Vec3, t: f64) -> Result<Self> {
        if !x.is_finite() || !p.is_finite() || !t.is_finite() {
            return Err(Error::invalid("state", "components must be finite"));
        }
        if x.norm() == 0.0 {
            return Err(Error::SingularOrigin {
                radius: 0.0,
                guard: 0.0,
            });
        }
        Ok(PhaseState { x, p, t })
    }

    pub fn radius(&self) -> f64 {
        self.x.norm()
    }
}

pub(crate) fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} must be finite and > 0")))
    }
}

pub(crate) fn non_negative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} must be finite and >= 0")))
    }
}
