//! Effective classical Hamiltonian on the averaged noncommutative phase space
//! and the quantities derived from it.
//!
//! ```text
//! H = p²/2m − mk/x + ⟨η²⟩x²/(12m) − ⟨θ²⟩mkL²/(8x⁵) + ⟨θ²⟩mkp²/(12x³)
//! ```
//!
//! L² = x²p² − (x·p)² is a function of the canonical variables, so Hamilton's
//! equations differentiate through it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{NCParams, OrbitElements, PhaseState, Vec3};

/// Positions closer to the origin than this fraction of `a` are rejected.
pub const SINGULAR_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivatives {
    pub dx_dt: Vec3,
    pub dp_dt: Vec3,
}

fn guard(state: &PhaseState, elem: &OrbitElements) -> Result<f64> {
    let r = state.x.norm();
    let limit = SINGULAR_GUARD * elem.a;
    if r.is_nan() || r < limit {
        return Err(Error::SingularOrigin {
            radius: r,
            guard: limit,
        });
    }
    Ok(r)
}

pub fn angular_momentum(state: &PhaseState) -> Vec3 {
    state.x.cross(state.p)
}

/// L² written as x²p² − (x·p)², the form that is differentiated in the flow.
fn l_squared(x: Vec3, p: Vec3) -> f64 {
    let xp = x.dot(p);
    (x.norm_sq() * p.norm_sq() - xp * xp).max(0.0)
}

/// Kepler part p²/2m − mk/x.
pub fn kepler_hamiltonian(state: &PhaseState, elem: &OrbitElements) -> Result<f64> {
    let r = guard(state, elem)?;
    Ok(state.p.norm_sq() / (2.0 * elem.m) - elem.m * elem.k / r)
}

pub fn effective_hamiltonian(state: &PhaseState, elem: &OrbitElements, nc: &NCParams) -> Result<f64> {
    let r = guard(state, elem)?;
    let OrbitElements { k, m, .. } = *elem;
    let p2 = state.p.norm_sq();
    let l2 = l_squared(state.x, state.p);
    let kepler = p2 / (2.0 * m) - m * k / r;
    let eta = nc.eta_sq * r * r / (12.0 * m);
    let theta = nc.theta_sq * m * k * (p2 / (12.0 * r.powi(3)) - l2 / (8.0 * r.powi(5)));
    Ok(kepler + eta + theta)
}

/// Hamilton's equations dx/dt = ∂H/∂p, dp/dt = −∂H/∂x.
pub fn equations_of_motion(state: &PhaseState, elem: &OrbitElements, nc: &NCParams) -> Result<Derivatives> {
    let r = guard(state, elem)?;
    let OrbitElements { k, m, .. } = *elem;
    let PhaseState { x, p, .. } = *state;
    let r2 = r * r;
    let r3 = r2 * r;
    let r5 = r3 * r2;
    let r7 = r5 * r2;
    let p2 = p.norm_sq();
    let xp = x.dot(p);
    let l2 = l_squared(x, p);

    // ∂L²/∂x = 2p²x − 2(x·p)p, ∂L²/∂p = 2x²p − 2(x·p)x
    let dl2_dx = x * (2.0 * p2) - p * (2.0 * xp);
    let dl2_dp = p * (2.0 * r2) - x * (2.0 * xp);

    let mut dh_dp = p / m;
    let mut dh_dx = x * (m * k / r3);
    if nc.theta_sq != 0.0 {
        let c = nc.theta_sq * m * k;
        dh_dp += (p / (6.0 * r3) - dl2_dp / (8.0 * r5)) * c;
        dh_dx += (x * (5.0 * l2 / (8.0 * r7)) - dl2_dx / (8.0 * r5) - x * (p2 / (4.0 * r5))) * c;
    }
    if nc.eta_sq != 0.0 {
        dh_dx += x * (nc.eta_sq / (6.0 * m));
    }
    Ok(Derivatives {
        dx_dt: dh_dp,
        dp_dt: -dh_dx,
    })
}

/// u = p/m − mk[L×x]/(xL²); constant along Kepler orbits, |u| = mke/L.
pub fn hamilton_vector(state: &PhaseState, elem: &OrbitElements) -> Result<Vec3> {
    let r = guard(state, elem)?;
    let l = angular_momentum(state);
    let l2 = l.norm_sq();
    if l2 == 0.0 || l2 <= f64::EPSILON * state.x.norm_sq() * state.p.norm_sq() {
        return Err(Error::DegenerateOrbit("radial orbit has no angular momentum".into()));
    }
    Ok(state.p / elem.m - l.cross(state.x) * (elem.m * elem.k / (r * l2)))
}

/// Instantaneous precession rate Ω of the Hamilton vector, rad/s.
///
/// The e² in the denominators is the eccentricity carried by `elem` (the
/// osculating value at the start of the run), through u² = m²k²e²/L².
pub fn precession_rate(state: &PhaseState, elem: &OrbitElements, nc: &NCParams) -> Result<Vec3> {
    let r = guard(state, elem)?;
    let l = angular_momentum(state);
    let l2 = l.norm_sq();
    if l2 == 0.0 {
        return Err(Error::DegenerateOrbit("radial orbit has no angular momentum".into()));
    }
    if elem.e <= 0.0 {
        return Err(Error::DegenerateOrbit(
            "precession of the perihelion is undefined for a circular orbit".into(),
        ));
    }
    let OrbitElements { k, m, e, .. } = *elem;
    let e2 = e * e;
    let p2 = state.p.norm_sq();
    let m3 = m * m * m;

    let theta_bracket = 5.0 * l2 * l2 / (8.0 * k * m3 * r.powi(7) * e2) - p2 * l2 / (2.0 * m3 * r.powi(5) * k * e2)
        + p2 / (4.0 * m * e2 * r.powi(4))
        - 7.0 * l2 / (24.0 * m * r.powi(6) * e2)
        - m * k / (12.0 * r.powi(5) * e2);
    let eta_bracket = l2 / (6.0 * m.powi(5) * k * k * e2) - r / (6.0 * m3 * k * e2);

    Ok(l * (nc.theta_sq * theta_bracket + nc.eta_sq * eta_bracket))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::kepler_state_at_perihelion;
    use approx::assert_relative_eq;

    fn unit(e: f64) -> OrbitElements {
        OrbitElements::new(1.0, e, 1.0, 1.0).unwrap()
    }

    #[test]
    fn circular_energy() {
        let el = unit(0.0);
        let s = kepler_state_at_perihelion(&el).unwrap();
        assert_eq!(effective_hamiltonian(&s, &el, &NCParams::zero(1.0)).unwrap(), -0.5);
    }

    #[test]
    fn kepler_energy_at_perihelion() {
        for e in [0.0, 0.1, 0.2056, 0.5, 0.9] {
            for (a, k, m) in [(1.0, 1.0, 1.0), (5.7909e10, 1.327e20, 3.3011e23), (3.0, 0.2, 1e-3)] {
                let el = OrbitElements::new(a, e, k, m).unwrap();
                let s = kepler_state_at_perihelion(&el).unwrap();
                let h = kepler_hamiltonian(&s, &el).unwrap();
                assert_relative_eq!(h, el.energy(), max_relative = 1e-14);
                assert_relative_eq!(angular_momentum(&s).norm(), el.angular_momentum(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn five_terms_match_independent_evaluation() {
        let el = unit(0.2);
        let nc = NCParams::new(1e-4, 0.0, 1.0).unwrap();
        let s = kepler_state_at_perihelion(&el).unwrap();
        // x = 0.8, p = sqrt(1.2/0.8) along y, L = x p
        let x: f64 = 0.8;
        let p2: f64 = 1.2 / 0.8;
        let l2 = x * x * p2;
        let expected = p2 / 2.0 - 1.0 / x + 0.0 - 1e-4 * l2 / (8.0 * x.powi(5)) + 1e-4 * p2 / (12.0 * x.powi(3));
        assert_relative_eq!(
            effective_hamiltonian(&s, &el, &nc).unwrap(),
            expected,
            max_relative = 1e-14
        );
    }

    #[test]
    fn zero_nc_gives_kepler_equations() {
        let el = unit(0.3);
        let s = PhaseState::new(Vec3::new(0.4, -0.9, 0.1), Vec3::new(0.7, 0.3, -0.2), 0.0).unwrap();
        let d = equations_of_motion(&s, &el, &NCParams::zero(1.0)).unwrap();
        let r = s.x.norm();
        assert_eq!(d.dx_dt, s.p);
        let expected = -s.x / r.powi(3);
        assert_relative_eq!(d.dp_dt.x, expected.x, max_relative = 1e-15);
        assert_relative_eq!(d.dp_dt.y, expected.y, max_relative = 1e-15);
        assert_relative_eq!(d.dp_dt.z, expected.z, max_relative = 1e-15);
    }

    #[test]
    fn circular_force_points_inward() {
        let el = unit(0.0);
        let s = kepler_state_at_perihelion(&el).unwrap();
        let d = equations_of_motion(&s, &el, &NCParams::zero(1.0)).unwrap();
        assert_eq!(d.dp_dt, Vec3::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn singular_origin_rejected() {
        let el = unit(0.1);
        let s = PhaseState {
            x: Vec3::new(1e-12, 0.0, 0.0),
            p: Vec3::new(0.0, 1.0, 0.0),
            t: 0.0,
        };
        let nc = NCParams::zero(1.0);
        assert!(matches!(
            effective_hamiltonian(&s, &el, &nc),
            Err(Error::SingularOrigin { .. })
        ));
        assert!(matches!(
            equations_of_motion(&s, &el, &nc),
            Err(Error::SingularOrigin { .. })
        ));
        let at_origin = PhaseState { x: Vec3::ZERO, ..s };
        assert!(effective_hamiltonian(&at_origin, &el, &nc).is_err());
    }

    #[test]
    fn hamilton_vector_magnitude() {
        let s = kepler_state_at_perihelion(&unit(0.0)).unwrap();
        assert!(hamilton_vector(&s, &unit(0.0)).unwrap().norm() < 1e-15);

        let el = unit(0.3);
        let s = kepler_state_at_perihelion(&el).unwrap();
        let u = hamilton_vector(&s, &el).unwrap();
        assert_relative_eq!(u.norm(), 0.3 / 0.91f64.sqrt(), max_relative = 1e-14);
        // perpendicular to the apsidal line
        assert_eq!(u.x, 0.0);
    }

    #[test]
    fn hamilton_vector_radial_orbit_is_degenerate() {
        let s = PhaseState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0), 0.0).unwrap();
        assert!(matches!(
            hamilton_vector(&s, &unit(0.5)),
            Err(Error::DegenerateOrbit(_))
        ));
    }

    #[test]
    fn precession_rate_zero_without_nc() {
        let el = unit(0.4);
        let s = kepler_state_at_perihelion(&el).unwrap();
        assert_eq!(precession_rate(&s, &el, &NCParams::zero(1.0)).unwrap(), Vec3::ZERO);
    }

    #[test]
    fn precession_rate_degenerate_cases() {
        let el = unit(0.0);
        let s = kepler_state_at_perihelion(&el).unwrap();
        let nc = NCParams::new(1e-3, 0.0, 1.0).unwrap();
        assert!(matches!(precession_rate(&s, &el, &nc), Err(Error::DegenerateOrbit(_))));
    }

    #[test]
    fn angular_momentum_examples() {
        let s = PhaseState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), 0.0).unwrap();
        assert_eq!(angular_momentum(&s), Vec3::new(0.0, 0.0, 1.0));
        let s = PhaseState::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(2.0, 4.0, 6.0), 0.0).unwrap();
        assert_eq!(angular_momentum(&s), Vec3::ZERO);
        let s = kepler_state_at_perihelion(&unit(0.2)).unwrap();
        assert_relative_eq!(angular_momentum(&s).norm(), 0.96f64.sqrt(), max_relative = 1e-15);
    }
}
