mod common;

use std::f64::consts::PI;

use common::{rel, unit_elements};
use ncperihelion::analytic::perihelion_shift;
use ncperihelion::dynamics::{angular_momentum, hamilton_vector};
use ncperihelion::integrator::{detect_perihelion_passages, integrate_orbit, measure_precession};
use ncperihelion::model::kepler_state_at_perihelion;
use ncperihelion::{Error, NCParams, OrbitElements, PhaseState};
use proptest::prelude::*;

/// ⟨θ²⟩ (alone) giving the analytic shift `target` at the unit elements.
fn theta_for(el: &OrbitElements, target: f64) -> NCParams {
    let per_unit = perihelion_shift(el, &NCParams::new(1.0, 0.0, el.m).unwrap()).unwrap();
    NCParams::new(target / per_unit, 0.0, el.m).unwrap()
}

fn eta_for(el: &OrbitElements, target: f64) -> NCParams {
    let per_unit = perihelion_shift(el, &NCParams::new(0.0, 1.0, el.m).unwrap()).unwrap();
    NCParams::new(0.0, target / per_unit, el.m).unwrap()
}

/// Osculating eccentricity from the Hamilton vector, |u|·L/(mk).
fn osculating_e(s: &PhaseState, el: &OrbitElements) -> f64 {
    let u = hamilton_vector(s, el).unwrap();
    u.norm() * angular_momentum(s).norm() / (el.m * el.k)
}

#[test]
fn kepler_orbit_closes() {
    let el = unit_elements(0.2);
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &NCParams::zero(1.0), 10, 1e-12).unwrap();
    let end = traj.samples.last().unwrap();
    assert_eq!(end.t, 10.0 * 2.0 * PI);
    for (a, b) in end.x.to_array().iter().zip(start.x.to_array()) {
        assert!((a - b).abs() < 1e-8, "x: {a} vs {b}");
    }
    for (a, b) in end.p.to_array().iter().zip(start.p.to_array()) {
        assert!((a - b).abs() < 1e-8, "p: {a} vs {b}");
    }
}

#[test]
fn trajectory_spans_the_requested_periods() {
    let el = OrbitElements::new(5.79e10, 0.2056, 1.327e20, 3.3e23).unwrap();
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &NCParams::zero(el.m), 3, 1e-10).unwrap();
    assert!(rel(traj.samples.last().unwrap().t, 3.0 * el.period()) < 1e-14);
    assert!(traj.step_stats.max_energy_drift < 100.0 * 1e-10);
}

#[test]
fn long_run_conserves_energy_and_l() {
    let el = unit_elements(0.2056);
    let nc = theta_for(&el, 1e-4);
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &nc, 100, 1e-12).unwrap();
    let s = traj.step_stats;
    assert!(s.max_energy_drift < 1e-10, "{s:?}");
    assert!(s.max_l_magnitude_drift < 1e-10, "{s:?}");
    assert!(s.max_l_direction_drift < 1e-10, "{s:?}");
}

#[test]
fn perturbed_orbit_stays_bounded() {
    let el = unit_elements(0.2056);
    let nc = theta_for(&el, 1e-4);
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &nc, 50, 1e-12).unwrap();
    let e0 = osculating_e(&start, &el);
    for s in &traj.samples {
        assert!(s.radius() < 2.0 && s.radius() > 0.5);
        let e = osculating_e(s, &el);
        assert!((e - e0).abs() < 0.01 * e0, "e drifted from {e0} to {e}");
    }
}

#[test]
fn unperturbed_passages_sit_at_the_start() {
    let el = unit_elements(0.2);
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &NCParams::zero(1.0), 6, 1e-12).unwrap();
    let passages = detect_perihelion_passages(&traj).unwrap();
    assert!(passages.len() >= 6);
    for (n, p) in passages.iter().enumerate() {
        assert!((p.t - n as f64 * 2.0 * PI).abs() < 1e-6, "passage {n} at {}", p.t);
        assert!(p.argument.abs() < 1e-8, "passage {n} argument {}", p.argument);
    }
}

#[test]
fn circular_orbit_has_no_perihelion() {
    let el = unit_elements(0.0);
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &NCParams::zero(1.0), 3, 1e-12).unwrap();
    assert!(matches!(
        detect_perihelion_passages(&traj),
        Err(Error::AmbiguousMinimum(_))
    ));
}

#[test]
fn short_trajectory_has_too_few_passages() {
    let el = unit_elements(0.3);
    // start half a period away so only one minimum falls inside the run
    let start = kepler_state_at_perihelion(&el).unwrap();
    let apo = PhaseState::new(
        -start.x * ((1.0 + el.e) / (1.0 - el.e)),
        -start.p * ((1.0 - el.e) / (1.0 + el.e)),
        0.0,
    )
    .unwrap();
    let traj = integrate_orbit(&apo, &el, &NCParams::zero(1.0), 1, 1e-12).unwrap();
    assert!(matches!(
        detect_perihelion_passages(&traj),
        Err(Error::TooFewPassages { found: 1, .. })
    ));
}

#[test]
fn eta_passages_regress_step_by_step() {
    let el = unit_elements(0.3);
    let x = 1e-4 * PI;
    let nc = eta_for(&el, -x);
    let start = kepler_state_at_perihelion(&el).unwrap();
    let traj = integrate_orbit(&start, &el, &nc, 8, 1e-12).unwrap();
    let passages = detect_perihelion_passages(&traj).unwrap();
    // later passages are unaffected by the osculating start
    for w in passages.windows(2).skip(1) {
        let d = w[1].argument - w[0].argument;
        assert!(rel(d, -x) < 0.05, "{d:e} vs {:e}", -x);
    }
}

#[test]
fn null_precession() {
    let m = measure_precession(&unit_elements(0.2056), &NCParams::zero(1.0), 30, 1e-12).unwrap();
    assert!(m.shift_per_rev.abs() < 1e-8, "{:e}", m.shift_per_rev);
    assert_eq!(m.n_revolutions, 30);
}

#[test]
fn single_term_shifts_within_one_percent() {
    let el = unit_elements(0.2056);
    let target = 1e-4 * PI;
    let theta = measure_precession(&el, &theta_for(&el, target), 30, 1e-12).unwrap();
    assert!(theta.shift_per_rev > 0.0);
    assert!(rel(theta.shift_per_rev, target) < 0.01, "{:e}", theta.shift_per_rev);
    let eta = measure_precession(&el, &eta_for(&el, -target), 30, 1e-12).unwrap();
    assert!(eta.shift_per_rev < 0.0);
    assert!(rel(eta.shift_per_rev, -target) < 0.01, "{:e}", eta.shift_per_rev);
}

#[test]
fn measurement_preconditions() {
    let nc = NCParams::new(1e-4, 0.0, 1.0).unwrap();
    assert!(matches!(
        measure_precession(&unit_elements(0.005), &nc, 10, 1e-12),
        Err(Error::InvalidInput { .. })
    ));
    assert!(matches!(
        measure_precession(&unit_elements(0.2), &nc, 1, 1e-12),
        Err(Error::InvalidInput { .. })
    ));
    let el = unit_elements(0.2);
    assert!(matches!(
        measure_precession(&el, &theta_for(&el, 0.2), 10, 1e-12),
        Err(Error::NonPerturbative { .. })
    ));
}

#[test]
fn tighter_tolerance_converges_to_the_truncation_floor() {
    let el = unit_elements(0.3);
    let eps = 1e-5;
    let nc = theta_for(&el, 2.0 * PI * eps);
    let analytic = perihelion_shift(&el, &nc).unwrap();
    let floor = 10.0 * eps * analytic.abs();
    let mut previous = f64::INFINITY;
    for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
        let m = measure_precession(&el, &nc, 20, tol).unwrap();
        let d = (m.shift_per_rev - analytic).abs();
        assert!(
            d <= previous + floor,
            "tol {tol:e}: discrepancy {d:e} after {previous:e}"
        );
        previous = d;
    }
    assert!(previous < floor);
}

#[test]
fn measured_shift_is_mass_independent() {
    let base = unit_elements(0.2056);
    let (a_const, b_const) = (1e-3, 2e-5);
    let shifts: Vec<f64> = [1e-3, 1.0, 1e3]
        .iter()
        .map(|&m| {
            let nc = NCParams::from_scaling_constants(a_const, b_const, m).unwrap();
            measure_precession(&base.with_mass(m), &nc, 20, 1e-12)
                .unwrap()
                .shift_per_rev
        })
        .collect();
    for s in &shifts {
        assert!(rel(*s, shifts[1]) < 1e-3, "{shifts:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn drift_stays_within_budget(e in 0.05..0.7f64, eps in 1e-6..1e-3f64, theta_share in 0.0..1.0f64, tol_exp in 8..12i32) {
        let el = unit_elements(e);
        let target = 2.0 * PI * eps;
        let t = theta_for(&el, theta_share * target);
        let h = eta_for(&el, -(1.0 - theta_share) * target);
        let nc = NCParams::new(t.theta_sq, h.eta_sq, 1.0).unwrap();
        let tol = 10f64.powi(-tol_exp);
        let start = kepler_state_at_perihelion(&el).unwrap();
        let traj = integrate_orbit(&start, &el, &nc, 5, tol).unwrap();
        prop_assert!(traj.step_stats.max_energy_drift < 100.0 * tol, "{:?}", traj.step_stats);
        prop_assert!(traj.step_stats.max_l_magnitude_drift < 100.0 * tol, "{:?}", traj.step_stats);
    }

    #[test]
    fn measured_sign_follows_the_dominant_term(e in 0.05..0.6f64, eps in 1e-5..1e-3f64) {
        let el = unit_elements(e);
        let target = 2.0 * PI * eps;
        let up = measure_precession(&el, &theta_for(&el, target), 8, 1e-11).unwrap();
        let down = measure_precession(&el, &eta_for(&el, -target), 8, 1e-11).unwrap();
        prop_assert!(up.shift_per_rev > 0.0 && down.shift_per_rev < 0.0);
    }
}
