use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{rad_per_rev_to_arcsec_per_century, ObservationRecord, RoundingMode};
use crate::analytic::ParticleSpec;
use crate::model::PhysicalConstants;

/// Bounds for one particle species.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleBound {
    /// kg
    pub mass: f64,
    /// ħ√⟨θ²⟩, m²
    pub theta_bound: f64,
    /// ħ√⟨η²⟩, kg²m²/s²
    pub eta_bound: f64,
    /// kg·m/s
    pub p_min: f64,
}

/// Everything the bounds depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputsEcho {
    pub constants: PhysicalConstants,
    pub observation: ObservationRecord,
    pub sigma_multiplier: f64,
    pub rounding: RoundingMode,
    pub particles: Vec<ParticleSpec>,
}

/// Strict upper bounds derived from one observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// rad/revolution
    pub residual_cap: f64,
    /// ħ√⟨(θᶜ)²⟩, m²
    pub theta_bound_composite: f64,
    /// ħ√⟨(ηᶜ)²⟩, kg²m²/s²
    pub eta_bound_composite: f64,
    pub per_particle: BTreeMap<String, ParticleBound>,
    pub inputs_echo: InputsEcho,
}

impl BoundReport {
    pub fn to_table(&self) -> String {
        let obs = &self.inputs_echo.observation;
        let mut s = String::new();
        let _ = writeln!(s, "source: {}", obs.source);
        let _ = writeln!(
            s,
            "rounding: {}   sigma multiplier: {}",
            self.inputs_echo.rounding, self.inputs_echo.sigma_multiplier
        );
        let _ = writeln!(
            s,
            "residual cap: {:.4e} rad/rev = 2pi x {:.4e} rad/rev = {:.4e} arcsec/century",
            self.residual_cap,
            self.residual_cap / (2.0 * std::f64::consts::PI),
            rad_per_rev_to_arcsec_per_century(self.residual_cap, obs.revolutions_per_century)
        );
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:<12} {:>12} {:>16} {:>16} {:>14}",
            "body", "mass [kg]", "hbar*sqrt<th2>", "hbar*sqrt<eta2>", "p_min"
        );
        let _ = writeln!(
            s,
            "{:<12} {:>12} {:>16} {:>16} {:>14}",
            "", "", "[m^2]", "[kg^2 m^2/s^2]", "[kg m/s]"
        );
        let _ = writeln!(
            s,
            "{:<12} {:>12.4e} {:>16.3e} {:>16.3e} {:>14}",
            "composite", obs.mass_kg, self.theta_bound_composite, self.eta_bound_composite, "-"
        );
        for (label, b) in &self.per_particle {
            let _ = writeln!(
                s,
                "{:<12} {:>12.4e} {:>16.3e} {:>16.3e} {:>14.3e}",
                label, b.mass, b.theta_bound, b.eta_bound, b.p_min
            );
        }
        s
    }
}
