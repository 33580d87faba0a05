//! Closed-form perihelion shift and the scaling laws for the noncommutativity
//! parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{non_negative, positive, NCParams, OrbitElements};

/// A particle species identified by its mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpec {
    pub label: String,
    /// kg
    pub mass: f64,
}

impl ParticleSpec {
    pub fn new(label: impl Into<String>, mass: f64) -> Result<Self> {
        positive("mass", mass)?;
        Ok(ParticleSpec {
            label: label.into(),
            mass,
        })
    }
}

/// The two contributions to the shift per revolution, rad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftTerms {
    /// Coordinate noncommutativity, advances the perihelion.
    pub theta: f64,
    /// Momentum noncommutativity, regresses the perihelion.
    pub eta: f64,
}

impl ShiftTerms {
    pub fn total(&self) -> f64 {
        self.theta + self.eta
    }
}

/// ⟨θ²⟩ = 3c_θ²/(2l_P²), ⟨η²⟩ = 3c_η²/(2l_P²), attached to `mass`.
pub fn nc_from_constants(c_theta: f64, c_eta: f64, planck_length: f64, mass: f64) -> Result<NCParams> {
    positive("planck_length", planck_length)?;
    let denom = 2.0 * planck_length * planck_length;
    NCParams::new(3.0 * c_theta * c_theta / denom, 3.0 * c_eta * c_eta / denom, mass)
}

/// (A, B) = (⟨θ²⟩m², ⟨η²⟩/m²).
pub fn scaling_constants(nc: &NCParams) -> (f64, f64) {
    (nc.a_const(), nc.b_const())
}

/// Moves the parameters to another mass keeping A and B fixed.
pub fn rescale_params(nc: &NCParams, target_mass: f64) -> Result<NCParams> {
    positive("target_mass", target_mass)?;
    nc.validate()?;
    let ratio = nc.mass / target_mass;
    Ok(NCParams {
        theta_sq: nc.theta_sq * ratio * ratio,
        eta_sq: nc.eta_sq / (ratio * ratio),
        mass: target_mass,
    })
}

/// Relative agreement demanded of A and B across the constituents.
pub const SCALING_TOLERANCE: f64 = 1e-12;

fn agrees(v: f64, reference: f64) -> bool {
    (v - reference).abs() <= SCALING_TOLERANCE * v.abs().max(reference.abs())
}

/// Effective parameters of the centre of mass: ⟨(θᶜ)²⟩ = A/M², ⟨(ηᶜ)²⟩ = B·M².
pub fn composite_params(particles: &[(ParticleSpec, NCParams)]) -> Result<NCParams> {
    let (_, first) = particles
        .first()
        .ok_or_else(|| Error::invalid("particles", "composite needs at least one constituent"))?;
    first.validate()?;
    let (a_ref, b_ref) = scaling_constants(first);
    let mut total_mass = 0.0;
    for (spec, nc) in particles {
        positive("mass", spec.mass)?;
        nc.validate()?;
        if !agrees(nc.mass, spec.mass) {
            return Err(Error::invalid(
                "mass",
                format!(
                    "particle `{}` has mass {} but its parameters are attached to {}",
                    spec.label, spec.mass, nc.mass
                ),
            ));
        }
        let (a, b) = scaling_constants(nc);
        if !agrees(a, a_ref) || !agrees(b, b_ref) {
            return Err(Error::InconsistentScaling {
                label: spec.label.clone(),
                a,
                b,
                a_ref,
                b_ref,
            });
        }
        total_mass += spec.mass;
    }
    if particles.len() == 1 {
        return Ok(*first);
    }
    NCParams::new(
        a_ref / (total_mass * total_mass),
        b_ref * total_mass * total_mass,
        total_mass,
    )
}

fn theta_factor(a: f64, e: f64, k: f64) -> f64 {
    let one_minus = 1.0 - e * e;
    PI * k * (4.0 + e * e) / (8.0 * a.powi(3) * one_minus.powi(3))
}

fn eta_factor(a: f64, e: f64, k: f64) -> f64 {
    PI * a.powi(3) * (1.0 - e * e).sqrt() / (2.0 * k)
}

/// Both terms of the perihelion shift per revolution.
pub fn perihelion_shift_terms(elem: &OrbitElements, nc: &NCParams) -> Result<ShiftTerms> {
    elem.validate()?;
    nc.validate()?;
    let m2 = elem.m * elem.m;
    Ok(ShiftTerms {
        theta: nc.theta_sq * m2 * theta_factor(elem.a, elem.e, elem.k),
        eta: -nc.eta_sq / m2 * eta_factor(elem.a, elem.e, elem.k),
    })
}

/// ⟨θ²⟩πkm²(4+e²)/(8a³(1−e²)³) − ⟨η²⟩πa³√(1−e²)/(2m²k), rad per revolution.
pub fn perihelion_shift(elem: &OrbitElements, nc: &NCParams) -> Result<f64> {
    perihelion_shift_terms(elem, nc).map(|t| t.total())
}

/// Mass-independent form in terms of A and B. `elem.m` is ignored.
pub fn perihelion_shift_massless(elem: &OrbitElements, a_const: f64, b_const: f64) -> Result<f64> {
    elem.with_mass(1.0).validate()?;
    non_negative("A", a_const)?;
    non_negative("B", b_const)?;
    Ok(a_const * theta_factor(elem.a, elem.e, elem.k) - b_const * eta_factor(elem.a, elem.e, elem.k))
}

/// p_min = (3ħ²⟨η²⟩/2)^(1/4).
pub fn minimal_momentum(eta_sq: f64, hbar: f64) -> Result<f64> {
    non_negative("eta_sq", eta_sq)?;
    positive("hbar", hbar)?;
    Ok((1.5 * hbar * hbar * eta_sq).powf(0.25))
}
