use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{integrate_span, pack, unpack, ScaledFlow, Trajectory};
use crate::analytic::perihelion_shift;
use crate::error::{Error, Result};
use crate::model::{kepler_state_at_perihelion, NCParams, OrbitElements, PhaseState};

/// Below this eccentricity the perihelion is not reliably detectable.
pub const MIN_ECCENTRICITY: f64 = 0.01;

/// Analytic |shift| per revolution above which the closed form is not trusted.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// Samples bracketing a minimum may be at most this far apart in true anomaly.
const MAX_BRACKET_ANGLE: f64 = PI / 50.0;

/// A refined perihelion passage: time (s) and unwrapped argument (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Passage {
    pub t: f64,
    pub argument: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecessionMeasurement {
    /// Slope of perihelion argument against revolution index, rad/revolution.
    pub shift_per_rev: f64,
    pub per_passage_angles: Vec<Passage>,
    pub n_revolutions: usize,
    /// RMS residual of the linear fit, rad.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

/// Ordinary least squares y = intercept + slope·x.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        rms_residual: (ss / nf).sqrt(),
    })
}

fn radial_rate(s: &PhaseState) -> f64 {
    s.x.dot(s.p)
}

/// Vertex of the parabola through three (t, |x|²) points.
fn quadratic_vertex(pts: [(f64, f64); 3]) -> Option<f64> {
    let [(t0, f0), (t1, f1), (t2, f2)] = pts;
    let d01 = (f1 - f0) / (t1 - t0);
    let d12 = (f2 - f1) / (t2 - t1);
    let curvature = (d12 - d01) / (t2 - t0);
    if curvature <= 0.0 || !curvature.is_finite() {
        return None;
    }
    // f'(t) = d01 + curvature·(2t − t0 − t1)
    Some(0.5 * (t0 + t1) - d01 / (2.0 * curvature))
}

/// Locates the root of x·p between samples `i` and `i + 1` in scaled units.
///
/// The quadratic vertex of |x|² seeds an Illinois iteration whose function
/// evaluations are single sub-steps of the integrator from sample `i`.
fn refine(flow: &ScaledFlow, samples: &[PhaseState], i: usize) -> Result<PhaseState> {
    let left = samples[i];
    let right = samples[i + 1];
    let g_left = radial_rate(&left);
    if g_left == 0.0 {
        return Ok(left);
    }
    let y0 = pack(&left);
    let f0 = flow.rhs(&y0)?;
    let span = right.t - left.t;
    let eval = |dt: f64| -> Result<PhaseState> {
        let trial = flow.trial(&y0, &f0, dt)?;
        Ok(unpack(&trial.y, left.t + dt))
    };

    let triple = if i > 0 {
        [i - 1, i, i + 1]
    } else {
        [i, i + 1, (i + 2).min(samples.len() - 1)]
    };
    let seed = if triple[2] > triple[1] {
        let pts = triple.map(|j| (samples[j].t, samples[j].x.norm_sq()));
        quadratic_vertex(pts).map(|t| (t - left.t).clamp(0.0, span))
    } else {
        None
    };

    let (mut a, mut ga) = (0.0, g_left);
    let (mut b, mut gb) = (span, radial_rate(&right));
    let mut best = right;
    if let Some(dt) = seed.filter(|dt| *dt > 0.0 && *dt < span) {
        let s = eval(dt)?;
        let g = radial_rate(&s);
        if g == 0.0 {
            return Ok(s);
        }
        if g < 0.0 {
            (a, ga) = (dt, g);
        } else {
            (b, gb) = (dt, g);
            best = s;
        }
    }
    let mut side = 0i8;
    for _ in 0..100 {
        if b - a <= 4.0 * f64::EPSILON * (left.t.abs() + span) {
            break;
        }
        let c = (a * gb - b * ga) / (gb - ga);
        let c = if c > a && c < b { c } else { 0.5 * (a + b) };
        let s = eval(c)?;
        let g = radial_rate(&s);
        best = s;
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            (a, ga) = (c, g);
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            (b, gb) = (c, g);
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(best)
}

fn angle_between(a: &PhaseState, b: &PhaseState) -> f64 {
    a.x.cross(b.x).norm().atan2(a.x.dot(b.x))
}

/// Finds perihelion passages (x·p crossing from ≤ 0 to > 0) and their
/// arguments atan2(y, x), unwrapped so consecutive values differ by < π.
pub fn detect_perihelion_passages(traj: &Trajectory) -> Result<Vec<Passage>> {
    let flow = ScaledFlow::new(&traj.elements, &traj.nc, traj.tolerance)?;
    let samples: Vec<PhaseState> = traj.samples.iter().map(|s| flow.scales.state_from_si(s)).collect();
    if samples.len() < 3 {
        return Err(Error::TooFewPassages { found: 0, needed: 2 });
    }

    let (r_min, r_max) = samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
        let r = s.x.norm();
        (lo.min(r), hi.max(r))
    });
    if r_max - r_min <= 1e-9 * r_max {
        return Err(Error::AmbiguousMinimum(format!(
            "radius varies by only {:e} relative; the orbit has no distinct perihelion",
            (r_max - r_min) / r_max
        )));
    }

    let mut passages: Vec<Passage> = Vec::new();
    for i in 0..samples.len() - 1 {
        let (g0, g1) = (radial_rate(&samples[i]), radial_rate(&samples[i + 1]));
        if !(g0 <= 0.0 && g1 > 0.0) {
            continue;
        }
        let gap = angle_between(&samples[i], &samples[i + 1]);
        if gap > MAX_BRACKET_ANGLE {
            return Err(Error::AmbiguousMinimum(format!(
                "samples around t = {:e} are {gap:.4} rad apart in true anomaly (limit {MAX_BRACKET_ANGLE:.4})",
                traj.samples[i].t
            )));
        }
        let s = refine(&flow, &samples, i)?;
        let raw = s.x.y.atan2(s.x.x);
        let argument = match passages.last() {
            Some(prev) => {
                let mut d = raw - prev.argument;
                d -= 2.0 * PI * (d / (2.0 * PI)).round();
                prev.argument + d
            }
            None => raw,
        };
        passages.push(Passage {
            t: s.t * flow.scales.time,
            argument,
        });
    }
    if passages.len() < 2 {
        return Err(Error::TooFewPassages {
            found: passages.len(),
            needed: 2,
        });
    }
    Ok(passages)
}

/// Integrates from perihelion for `n_orbits` revolutions and fits the
/// perihelion argument against revolution index.
pub fn measure_precession(
    elem: &OrbitElements,
    nc: &NCParams,
    n_orbits: usize,
    tolerance: f64,
) -> Result<PrecessionMeasurement> {
    elem.validate()?;
    nc.validate()?;
    if elem.e <= MIN_ECCENTRICITY {
        return Err(Error::invalid(
            "e",
            format!(
                "eccentricity {} too small to locate the perihelion (need > {MIN_ECCENTRICITY})",
                elem.e
            ),
        ));
    }
    if n_orbits < 2 {
        return Err(Error::invalid(
            "n_orbits",
            "a measurement needs at least two revolutions",
        ));
    }
    let analytic = perihelion_shift(elem, nc)?;
    if analytic.abs() >= PERTURBATIVE_LIMIT {
        return Err(Error::NonPerturbative {
            shift: analytic,
            limit: PERTURBATIVE_LIMIT,
        });
    }

    let start = kepler_state_at_perihelion(elem)?;
    // half a period past the last passage so it is bracketed
    let traj = integrate_span(&start, elem, nc, n_orbits as f64 + 0.5, n_orbits, tolerance)?;
    let passages = detect_perihelion_passages(&traj)?;
    let n_revolutions = passages.len() - 1;
    if n_revolutions < 2 {
        return Err(Error::TooFewPassages {
            found: passages.len(),
            needed: 3,
        });
    }
    let xs: Vec<f64> = (0..passages.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = passages.iter().map(|p| p.argument).collect();
    let fit = linear_fit(&xs, &ys).expect("at least three distinct abscissae");
    Ok(PrecessionMeasurement {
        shift_per_rev: fit.slope,
        per_passage_angles: passages,
        n_revolutions,
        fit_residual: fit.rms_residual,
    })
}
