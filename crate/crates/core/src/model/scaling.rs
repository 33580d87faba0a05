//! Unit system with a = 1, k = 1, m = 1.
//!
//! Length unit is the semi-major axis, time unit is √(a³/k) (one radian of
//! mean motion), mass unit is the orbiting mass. In these units ⟨θ²⟩ carries
//! the factor m²k/a³ and ⟨η²⟩ the factor a³/(m²k).

use serde::{Deserialize, Serialize};

use super::{NCParams, OrbitElements, PhaseState, Vec3};
use crate::error::Result;

/// Conversion factors from scaled to SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scales {
    /// m per scaled length.
    pub length: f64,
    /// s per scaled time.
    pub time: f64,
    /// kg per scaled mass.
    pub mass: f64,
}

impl Scales {
    pub fn momentum(&self) -> f64 {
        self.mass * self.length / self.time
    }

    pub fn energy(&self) -> f64 {
        self.mass * self.length * self.length / (self.time * self.time)
    }

    /// SI value of one scaled unit of ⟨θ²⟩ (s²/kg²).
    pub fn theta_sq(&self) -> f64 {
        (self.time / self.mass).powi(2)
    }

    /// SI value of one scaled unit of ⟨η²⟩ (kg²/s²).
    pub fn eta_sq(&self) -> f64 {
        (self.mass / self.time).powi(2)
    }

    pub fn state_to_si(&self, s: &PhaseState) -> PhaseState {
        PhaseState {
            x: s.x * self.length,
            p: s.p * self.momentum(),
            t: s.t * self.time,
        }
    }

    pub fn state_from_si(&self, s: &PhaseState) -> PhaseState {
        PhaseState {
            x: s.x / self.length,
            p: s.p / self.momentum(),
            t: s.t / self.time,
        }
    }

    pub fn nc_to_si(&self, nc: &NCParams) -> NCParams {
        NCParams {
            theta_sq: nc.theta_sq * self.theta_sq(),
            eta_sq: nc.eta_sq * self.eta_sq(),
            mass: nc.mass * self.mass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub elements: OrbitElements,
    pub nc: NCParams,
    pub scales: Scales,
}

impl Scaled {
    /// Dimensionless coordinate-noncommutativity strength ⟨θ²⟩m²k/a³.
    pub fn theta_group(&self) -> f64 {
        self.nc.theta_sq
    }

    /// Dimensionless momentum-noncommutativity strength ⟨η²⟩a³/(m²k).
    pub fn eta_group(&self) -> f64 {
        self.nc.eta_sq
    }
}

/// Rescales elements and noncommutativity to the a = k = m = 1 system.
pub fn nondimensionalize(elements: &OrbitElements, nc: &NCParams) -> Result<Scaled> {
    elements.validate()?;
    nc.validate()?;
    let scales = Scales {
        length: elements.a,
        time: (elements.a.powi(3) / elements.k).sqrt(),
        mass: elements.m,
    };
    Ok(Scaled {
        elements: OrbitElements {
            a: 1.0,
            e: elements.e,
            k: 1.0,
            m: 1.0,
        },
        nc: NCParams {
            theta_sq: nc.theta_sq / scales.theta_sq(),
            eta_sq: nc.eta_sq / scales.eta_sq(),
            mass: nc.mass / scales.mass,
        },
        scales,
    })
}

/// Unperturbed Kepler state at perihelion: x along +x̂, p along +ŷ, t = 0.
pub fn kepler_state_at_perihelion(elements: &OrbitElements) -> Result<PhaseState> {
    elements.validate()?;
    let OrbitElements { a, e, k, m } = *elements;
    let r = a * (1.0 - e);
    let speed = (k * (1.0 + e) / r).sqrt();
    Ok(PhaseState {
        x: Vec3::new(r, 0.0, 0.0),
        p: Vec3::new(0.0, m * speed, 0.0),
        t: 0.0,
    })
}
