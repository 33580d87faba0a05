//! Upper bounds on the noncommutativity parameters from an observed
//! perihelion advance.
//!
//! The unexplained part of the advance, |observed − GR| plus a multiple of
//! the 1σ uncertainty, caps |Δφ_nc|. Each of the two shift terms is inverted
//! separately for the composite body, the results are moved to individual
//! particles with the mass-scaling laws, and the electron momentum bound gives
//! the minimal momentum.

mod observation;
mod report;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{minimal_momentum, ParticleSpec};
use crate::error::{Error, Result};
use crate::model::{non_negative, positive, OrbitElements, PhysicalConstants};

pub use observation::{
    arcsec_per_century_to_rad_per_rev, rad_per_rev_to_arcsec_per_century, ObservationRecord, MERCURY_OBSERVATION,
    OBSERVATION_KEYS,
};
pub use report::{BoundReport, InputsEcho, ParticleBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingMode {
    /// No intermediate rounding.
    #[default]
    Exact,
    /// Round the inputs to their published digits and the cap to one
    /// significant figure, in units of 2π rad/rev.
    Paper,
}

impl FromStr for RoundingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RoundingMode::Exact),
            "paper" | "paper-rounding" => Ok(RoundingMode::Paper),
            other => Err(Error::invalid(
                "rounding",
                format!("`{other}` is not one of paper, exact"),
            )),
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundingMode::Exact => "exact",
            RoundingMode::Paper => "paper",
        })
    }
}

/// Rounds to `digits` significant figures through decimal formatting, so the
/// result is the double nearest to the rounded decimal.
fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

/// Largest |Δφ_nc| compatible with the observation, rad/revolution.
pub fn residual_cap(obs: &ObservationRecord, sigma_multiplier: f64, mode: RoundingMode) -> Result<f64> {
    obs.validate()?;
    positive("sigma_multiplier", sigma_multiplier)?;
    let turn = 2.0 * PI;
    let observed = obs.observed_rad_per_rev();
    let sigma = obs.sigma_rad_per_rev();
    match mode {
        RoundingMode::Exact => Ok((observed - obs.gr_rad_per_rev).abs() + sigma_multiplier * sigma),
        RoundingMode::Paper => {
            // published digits: six for the rates, two for σ, one for the cap
            let observed = round_significant(observed / turn, 6);
            let gr = round_significant(obs.gr_rad_per_rev / turn, 6);
            let sigma = round_significant(sigma / turn, 2);
            let residual = round_significant(observed - gr, 2);
            let cap = round_significant(residual.abs() + sigma_multiplier * sigma, 1);
            Ok(turn * cap)
        }
    }
}

/// ħ√⟨(θᶜ)²⟩ saturating ⟨(θᶜ)²⟩πkM²(4+e²)/(8a³(1−e²)³) = cap, m².
pub fn bound_theta(cap: f64, body: &OrbitElements, consts: &PhysicalConstants) -> Result<f64> {
    non_negative("cap", cap)?;
    body.validate()?;
    let OrbitElements { a, e, k, m } = *body;
    let one_minus = 1.0 - e * e;
    let theta_sq = cap * 8.0 * a.powi(3) * one_minus.powi(3) / (PI * k * m * m * (4.0 + e * e));
    Ok(consts.hbar * theta_sq.sqrt())
}

/// ħ√⟨(ηᶜ)²⟩ saturating ⟨(ηᶜ)²⟩πa³√(1−e²)/(2M²k) = cap, kg²m²/s².
pub fn bound_eta(cap: f64, body: &OrbitElements, consts: &PhysicalConstants) -> Result<f64> {
    non_negative("cap", cap)?;
    body.validate()?;
    let OrbitElements { a, e, k, m } = *body;
    let eta_sq = cap * 2.0 * k * m * m / (PI * a.powi(3) * (1.0 - e * e).sqrt());
    Ok(consts.hbar * eta_sq.sqrt())
}

/// Electron and nucleon with the masses in `consts`.
pub fn default_particles(consts: &PhysicalConstants) -> Vec<ParticleSpec> {
    vec![
        ParticleSpec {
            label: "electron".into(),
            mass: consts.electron_mass,
        },
        ParticleSpec {
            label: "nucleon".into(),
            mass: consts.nucleon_mass,
        },
    ]
}

/// Moves composite bounds to particles: the θ-bound scales as M/m, the
/// η-bound as m/M, and p_min = (3ħ²⟨η²⟩/2)^(1/4).
pub fn particle_bounds(
    theta_bound_composite: f64,
    eta_bound_composite: f64,
    composite_mass: f64,
    particles: &[ParticleSpec],
    consts: &PhysicalConstants,
) -> Result<Vec<(String, ParticleBound)>> {
    positive("composite_mass", composite_mass)?;
    particles
        .iter()
        .map(|p| {
            positive("mass", p.mass)?;
            let theta_bound = theta_bound_composite * composite_mass / p.mass;
            let eta_bound = eta_bound_composite * p.mass / composite_mass;
            let eta_sq = (eta_bound / consts.hbar).powi(2);
            let p_min = minimal_momentum(eta_sq, consts.hbar)?;
            Ok((
                p.label.clone(),
                ParticleBound {
                    mass: p.mass,
                    theta_bound,
                    eta_bound,
                    p_min,
                },
            ))
        })
        .collect()
}

/// Observation → cap → composite bounds → particle bounds.
pub fn run_pipeline(
    obs: &ObservationRecord,
    particles: &[ParticleSpec],
    consts: &PhysicalConstants,
    sigma_multiplier: f64,
    mode: RoundingMode,
) -> Result<BoundReport> {
    consts.validate()?;
    let cap = residual_cap(obs, sigma_multiplier, mode)?;
    let body = obs.body(consts)?;
    let theta = bound_theta(cap, &body, consts)?;
    let eta = bound_eta(cap, &body, consts)?;
    let per_particle = particle_bounds(theta, eta, body.m, particles, consts)?;
    Ok(BoundReport {
        residual_cap: cap,
        theta_bound_composite: theta,
        eta_bound_composite: eta,
        per_particle: per_particle.into_iter().collect(),
        inputs_echo: InputsEcho {
            constants: *consts,
            observation: obs.clone(),
            sigma_multiplier,
            rounding: mode,
            particles: particles.to_vec(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::perihelion_shift;
    use crate::model::NCParams;
    use approx::assert_relative_eq;

    fn mercury_body() -> (OrbitElements, PhysicalConstants) {
        let c = PhysicalConstants::default();
        (ObservationRecord::mercury().body(&c).unwrap(), c)
    }

    #[test]
    fn significant_rounding() {
        assert_eq!(round_significant(9.7e-12, 1), 1e-11);
        assert_eq!(round_significant(7.986984556e-8, 6), 7.98698e-8);
        assert_eq!(round_significant(-4.9e-12, 2), -4.9e-12);
        assert_eq!(round_significant(0.0, 3), 0.0);
    }

    #[test]
    fn rounded_cap_from_published_residual() {
        // residual 2π(−0.00049 ± 0.00017)e-8 expressed directly
        let rpc = 415.2;
        let to_arcsec = |turns: f64| rad_per_rev_to_arcsec_per_century(2.0 * PI * turns, rpc);
        let obs = ObservationRecord {
            observed_arcsec_per_century: to_arcsec(7.98695e-8),
            sigma_arcsec_per_century: to_arcsec(0.00017e-8),
            gr_rad_per_rev: 2.0 * PI * 7.98744e-8,
            revolutions_per_century: rpc,
            ..ObservationRecord::mercury()
        };
        let cap = residual_cap(&obs, 3.0, RoundingMode::Paper).unwrap();
        assert_eq!(cap, 2.0 * PI * 1e-11);
        let exact = residual_cap(&obs, 3.0, RoundingMode::Exact).unwrap();
        assert_relative_eq!(exact, 2.0 * PI * 0.001e-8, max_relative = 1e-9);
    }

    #[test]
    fn cap_edge_cases() {
        let obs = ObservationRecord::mercury();
        let one = residual_cap(&obs, 1.0, RoundingMode::Exact).unwrap();
        let three = residual_cap(&obs, 3.0, RoundingMode::Exact).unwrap();
        assert!(one < three);
        assert!(residual_cap(&obs, 0.0, RoundingMode::Exact).is_err());

        let zero = ObservationRecord {
            observed_arcsec_per_century: rad_per_rev_to_arcsec_per_century(
                obs.gr_rad_per_rev,
                obs.revolutions_per_century,
            ),
            sigma_arcsec_per_century: 0.0,
            ..obs
        };
        assert!(residual_cap(&zero, 3.0, RoundingMode::Exact).unwrap() < 1e-20);
        let exactly_zero = ObservationRecord {
            observed_arcsec_per_century: 0.0,
            gr_rad_per_rev: 0.0,
            sigma_arcsec_per_century: 0.0,
            ..ObservationRecord::mercury()
        };
        assert_eq!(residual_cap(&exactly_zero, 3.0, RoundingMode::Paper).unwrap(), 0.0);
    }

    #[test]
    fn mercury_composite_bounds() {
        let (body, c) = mercury_body();
        let cap = 2.0 * PI * 1e-11;
        assert_relative_eq!(bound_theta(cap, &body, &c).unwrap(), 2.3e-57, max_relative = 0.10);
        assert_relative_eq!(bound_eta(cap, &body, &c).unwrap(), 1.8e-22, max_relative = 0.10);
    }

    #[test]
    fn bound_power_laws() {
        let (body, c) = mercury_body();
        let cap = 1e-10;
        let t = bound_theta(cap, &body, &c).unwrap();
        let h = bound_eta(cap, &body, &c).unwrap();
        assert_relative_eq!(
            bound_theta(4.0 * cap, &body, &c).unwrap(),
            2.0 * t,
            max_relative = 1e-14
        );
        assert_relative_eq!(bound_eta(4.0 * cap, &body, &c).unwrap(), 2.0 * h, max_relative = 1e-14);
        let heavy = body.with_mass(2.0 * body.m);
        assert_relative_eq!(bound_theta(cap, &heavy, &c).unwrap(), t / 2.0, max_relative = 1e-14);
        let wide = OrbitElements {
            a: 2.0 * body.a,
            ..body
        };
        assert_relative_eq!(
            bound_eta(cap, &wide, &c).unwrap(),
            h / 2f64.powf(1.5),
            max_relative = 1e-14
        );
    }

    #[test]
    fn bounds_saturate_the_cap() {
        let (body, c) = mercury_body();
        let cap = 2.0 * PI * 1e-11;
        let theta = (bound_theta(cap, &body, &c).unwrap() / c.hbar).powi(2);
        let shift = perihelion_shift(&body, &NCParams::new(theta, 0.0, body.m).unwrap()).unwrap();
        assert_relative_eq!(shift, cap, max_relative = 1e-12);
        let eta = (bound_eta(cap, &body, &c).unwrap() / c.hbar).powi(2);
        let shift = perihelion_shift(&body, &NCParams::new(0.0, eta, body.m).unwrap()).unwrap();
        assert_relative_eq!(-shift, cap, max_relative = 1e-12);
    }

    #[test]
    fn particle_rescaling() {
        let c = PhysicalConstants::default();
        let parts = default_particles(&c);
        let out = particle_bounds(2.3e-57, 1.8e-22, 3.3011e23, &parts, &c).unwrap();
        let electron = &out[0].1;
        assert_relative_eq!(electron.theta_bound, 8.3e-4, max_relative = 0.01);
        assert_relative_eq!(electron.eta_bound, 5.1e-76, max_relative = 0.01);
        assert_relative_eq!(electron.p_min, 2.5e-38, max_relative = 0.01);
        assert_relative_eq!(out[1].1.eta_bound, 9.3e-73, max_relative = 0.03);

        let same = [ParticleSpec::new("body", 3.3011e23).unwrap()];
        let out = particle_bounds(2.3e-57, 1.8e-22, 3.3011e23, &same, &c).unwrap();
        assert_eq!(out[0].1.theta_bound, 2.3e-57);
        assert_eq!(out[0].1.eta_bound, 1.8e-22);
    }

    #[test]
    fn rounding_mode_parsing() {
        assert_eq!("paper".parse::<RoundingMode>().unwrap(), RoundingMode::Paper);
        assert_eq!("exact".parse::<RoundingMode>().unwrap(), RoundingMode::Exact);
        assert!("sloppy".parse::<RoundingMode>().is_err());
    }
}
