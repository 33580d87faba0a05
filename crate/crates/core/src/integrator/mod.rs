//! Adaptive propagation of the effective Hamiltonian flow and numerical
//! measurement of the perihelion shift.

pub mod dop853;
mod perihelion;

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::{angular_momentum, effective_hamiltonian, equations_of_motion};
use crate::error::{Error, Result};
use crate::model::{nondimensionalize, NCParams, OrbitElements, PhaseState, Scales, Vec3};

pub use perihelion::{
    detect_perihelion_passages, linear_fit, measure_precession, LinearFit, Passage, PrecessionMeasurement,
    MIN_ECCENTRICITY, PERTURBATIVE_LIMIT,
};

/// Largest true-anomaly advance allowed in one step, rad.
pub const MAX_ANGLE_PER_STEP: f64 = PI / 100.0;

/// Steps below this fraction of a Kepler period count as a collapsed controller.
pub const STEP_FLOOR: f64 = 1e-14;

pub const MAX_TOLERANCE: f64 = 1e-3;

const SAFETY: f64 = 0.9;
const MAX_SHRINK: f64 = 0.333;
const MAX_GROW: f64 = 6.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub steps: usize,
    pub rejected: usize,
    /// max |H(t) − H(0)| / |H(0)|
    pub max_energy_drift: f64,
    /// max ||L(t)| − |L(0)|| / |L(0)|
    pub max_l_magnitude_drift: f64,
    /// max angle between L(t) and L(0), rad
    pub max_l_direction_drift: f64,
}

/// Accepted integrator states in SI units, ordered by time, together with the
/// flow that produced them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    pub step_stats: StepStats,
    pub elements: OrbitElements,
    pub nc: NCParams,
    pub tolerance: f64,
}

impl Trajectory {
    /// Writes `t,x,y,z,px,py,pz,H,Lz` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Io {
            path: "trajectory output".into(),
            message: e.to_string(),
        };
        writeln!(out, "t,x,y,z,px,py,pz,H,Lz").map_err(io)?;
        for s in &self.samples {
            let h = effective_hamiltonian(s, &self.elements, &self.nc)?;
            let lz = angular_momentum(s).z;
            writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                s.t, s.x.x, s.x.y, s.x.z, s.p.x, s.p.y, s.p.z, h, lz
            )
            .map_err(io)?;
        }
        Ok(())
    }
}

pub(crate) fn pack(s: &PhaseState) -> [f64; 6] {
    [s.x.x, s.x.y, s.x.z, s.p.x, s.p.y, s.p.z]
}

pub(crate) fn unpack(y: &[f64; 6], t: f64) -> PhaseState {
    PhaseState {
        x: Vec3::new(y[0], y[1], y[2]),
        p: Vec3::new(y[3], y[4], y[5]),
        t,
    }
}

/// Flow of the effective Hamiltonian in the scaled (a = k = m = 1) system.
pub(crate) struct ScaledFlow {
    pub elements: OrbitElements,
    pub nc: NCParams,
    pub tol: f64,
    pub scales: Scales,
}

impl ScaledFlow {
    pub fn new(elements: &OrbitElements, nc: &NCParams, tol: f64) -> Result<Self> {
        let scaled = nondimensionalize(elements, nc)?;
        Ok(ScaledFlow {
            elements: scaled.elements,
            nc: scaled.nc,
            tol,
            scales: scaled.scales,
        })
    }

    pub fn rhs(&self, y: &[f64; 6]) -> Result<[f64; 6]> {
        let d = equations_of_motion(&unpack(y, 0.0), &self.elements, &self.nc)?;
        Ok([d.dx_dt.x, d.dx_dt.y, d.dx_dt.z, d.dp_dt.x, d.dp_dt.y, d.dp_dt.z])
    }

    /// Single error-controlled trial step.
    pub fn trial(&self, y: &[f64; 6], f0: &[f64; 6], h: f64) -> Result<dop853::Trial<6>> {
        let mut f = |y: &[f64; 6]| self.rhs(y);
        dop853::step(&mut f, y, f0, h, self.tol, &[1.0; 6])
    }

    /// Step cap keeping the true-anomaly advance below `MAX_ANGLE_PER_STEP`.
    fn angular_cap(&self, y: &[f64; 6]) -> f64 {
        let s = unpack(y, 0.0);
        let r2 = s.x.norm_sq();
        let omega = angular_momentum(&s).norm() / (self.elements.m * r2);
        let speed = s.p.norm() / self.elements.m;
        // radial plunges have no angular rate; bound by the crossing time too
        let rate = omega.max(speed / r2.sqrt());
        if rate > 0.0 {
            MAX_ANGLE_PER_STEP / rate
        } else {
            f64::INFINITY
        }
    }

    /// Propagates a scaled state from `t0` to `t_end`.
    pub fn propagate(&self, start: &PhaseState, t_end: f64) -> Result<(Vec<PhaseState>, StepStats)> {
        let period = self.elements.period();
        let floor = STEP_FLOOR * period;
        let guard = crate::dynamics::SINGULAR_GUARD * self.elements.a;

        let mut y = pack(start);
        let mut t = start.t;
        let mut f0 = self.rhs(&y)?;
        let h0 = effective_hamiltonian(start, &self.elements, &self.nc)?;
        let l0 = angular_momentum(start);
        let l0_norm = l0.norm();

        let mut samples = vec![*start];
        let mut stats = StepStats::default();
        let mut h = (1e-3 * period).min(self.angular_cap(&y));
        let mut fac_old: f64 = 1e-4;
        let mut last_rejected = false;

        while t < t_end {
            let cap = self.angular_cap(&y);
            h = h.min(cap);
            let remaining = t_end - t;
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h < floor && !last {
                return Err(Error::StepCollapse { t, step: h, floor });
            }
            let trial = self.trial(&y, &f0, h)?;
            let err = trial.err;
            // Hairer's controller, exponent 1/8 with β = 0.04 stabilisation
            let fac11 = err.powf(0.125 - 0.04 * 0.2);
            let fac = (fac11 / fac_old.powf(0.04) / SAFETY).clamp(1.0 / MAX_GROW, 1.0 / MAX_SHRINK);
            if err <= 1.0 {
                fac_old = err.max(1e-4);
                t = if last { t_end } else { t + h };
                y = trial.y;
                f0 = trial.f_new;
                let state = unpack(&y, t);
                let r = state.x.norm();
                if r < guard {
                    return Err(Error::SingularOrigin { radius: r, guard });
                }
                let energy = effective_hamiltonian(&state, &self.elements, &self.nc)?;
                let l = angular_momentum(&state);
                stats.steps += 1;
                stats.max_energy_drift = stats.max_energy_drift.max(((energy - h0) / h0).abs());
                if l0_norm > 0.0 {
                    stats.max_l_magnitude_drift =
                        stats.max_l_magnitude_drift.max(((l.norm() - l0_norm) / l0_norm).abs());
                    let cos = (l.dot(l0) / (l.norm() * l0_norm)).clamp(-1.0, 1.0);
                    let sin = l.cross(l0).norm() / (l.norm() * l0_norm);
                    stats.max_l_direction_drift = stats.max_l_direction_drift.max(sin.atan2(cos));
                }
                samples.push(state);
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                last_rejected = false;
                h = h_new;
            } else {
                stats.rejected += 1;
                last_rejected = true;
                h /= (1.0 / MAX_SHRINK).min(fac11 / SAFETY);
                if h < floor {
                    return Err(Error::StepCollapse { t, step: h, floor });
                }
            }
        }
        Ok((samples, stats))
    }
}

fn validate_run(initial: &PhaseState, elem: &OrbitElements, n_orbits: usize, tolerance: f64) -> Result<()> {
    elem.validate()?;
    if !(tolerance > 0.0 && tolerance <= MAX_TOLERANCE) {
        return Err(Error::invalid(
            "tolerance",
            format!("{tolerance} must lie in (0, {MAX_TOLERANCE}]"),
        ));
    }
    if n_orbits < 1 {
        return Err(Error::invalid("n_orbits", "at least one orbit is required"));
    }
    if !initial.x.is_finite() || !initial.p.is_finite() || !initial.t.is_finite() {
        return Err(Error::invalid("initial", "state components must be finite"));
    }
    Ok(())
}

/// Integrates `n_orbits` Kepler periods from `initial` (SI units in and out).
pub fn integrate_orbit(
    initial: &PhaseState,
    elem: &OrbitElements,
    nc: &NCParams,
    n_orbits: usize,
    tolerance: f64,
) -> Result<Trajectory> {
    integrate_span(initial, elem, nc, n_orbits as f64, n_orbits, tolerance)
}

/// Like [`integrate_orbit`] but over a fractional number of periods.
pub(crate) fn integrate_span(
    initial: &PhaseState,
    elem: &OrbitElements,
    nc: &NCParams,
    periods: f64,
    n_orbits: usize,
    tolerance: f64,
) -> Result<Trajectory> {
    validate_run(initial, elem, n_orbits, tolerance)?;
    let flow = ScaledFlow::new(elem, nc, tolerance)?;
    let start = flow.scales.state_from_si(initial);
    let t_end = start.t + periods * flow.elements.period();
    let (scaled, step_stats) = flow.propagate(&start, t_end)?;
    let samples = scaled.iter().map(|s| flow.scales.state_to_si(s)).collect();
    Ok(Trajectory {
        samples,
        step_stats,
        elements: *elem,
        nc: *nc,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::kepler_state_at_perihelion;

    #[test]
    fn rejects_bad_run_parameters() {
        let el = OrbitElements::new(1.0, 0.2, 1.0, 1.0).unwrap();
        let s = kepler_state_at_perihelion(&el).unwrap();
        let nc = NCParams::zero(1.0);
        assert!(integrate_orbit(&s, &el, &nc, 1, 0.0).is_err());
        assert!(integrate_orbit(&s, &el, &nc, 1, 2e-3).is_err());
        assert!(integrate_orbit(&s, &el, &nc, 0, 1e-9).is_err());
    }

    #[test]
    fn samples_strictly_increase() {
        let el = OrbitElements::new(1.0, 0.6, 1.0, 1.0).unwrap();
        let s = kepler_state_at_perihelion(&el).unwrap();
        let traj = integrate_orbit(&s, &el, &NCParams::zero(1.0), 2, 1e-10).unwrap();
        assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
        assert_eq!(traj.samples.last().unwrap().t, 2.0 * el.period());
    }

    #[test]
    fn plunging_orbit_hits_the_guard() {
        let el = OrbitElements::new(1.0, 0.2, 1.0, 1.0).unwrap();
        // almost radial infall
        let s = PhaseState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(-0.1, 1e-12, 0.0), 0.0).unwrap();
        let err = integrate_orbit(&s, &el, &NCParams::zero(1.0), 1, 1e-8).unwrap_err();
        assert!(
            matches!(err, Error::SingularOrigin { .. } | Error::StepCollapse { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn csv_dump_format() {
        let el = OrbitElements::new(1.0, 0.2, 1.0, 1.0).unwrap();
        let s = kepler_state_at_perihelion(&el).unwrap();
        let traj = integrate_orbit(&s, &el, &NCParams::zero(1.0), 1, 1e-8).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,y,z,px,py,pz,H,Lz"));
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first.len(), 9);
        assert_eq!(first[1], 0.8);
        assert_eq!(text.lines().count(), traj.samples.len() + 1);
    }
}
