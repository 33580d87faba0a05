#![allow(dead_code)]

use ncperihelion::dynamics::{effective_hamiltonian, equations_of_motion};
use ncperihelion::{NCParams, OrbitElements, PhaseState, Vec3};
use rand::Rng;

/// Scaled units a = k = m = 1.
pub fn unit_elements(e: f64) -> OrbitElements {
    OrbitElements::new(1.0, e, 1.0, 1.0).unwrap()
}

/// A state on a bound, well-separated-from-the-origin orbit with small deformation.
pub fn random_perturbative_case<R: Rng>(rng: &mut R) -> (PhaseState, OrbitElements, NCParams) {
    let el = unit_elements(rng.gen_range(0.0..0.7));
    let dir = random_unit(rng);
    let r = rng.gen_range(0.3..2.0);
    let x = dir * r;
    // bound velocity: |p| below escape speed √(2/r)
    let speed = rng.gen_range(0.2..0.95) * (2.0 / r).sqrt();
    let p = random_unit(rng) * speed;
    let nc = NCParams::new(rng.gen_range(0.0..1e-2), rng.gen_range(0.0..1e-2), 1.0).unwrap();
    (PhaseState::new(x, p, 0.0).unwrap(), el, nc)
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Rodrigues rotation of `v` by `angle` about the unit `axis`.
pub fn rotate(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))
}

/// Central-difference gradient of the effective Hamiltonian, step `h` scaled
/// by the magnitude of each coordinate block.
pub fn fd_gradient(state: &PhaseState, el: &OrbitElements, nc: &NCParams, h: f64) -> ([f64; 3], [f64; 3]) {
    let mut dx = [0.0; 3];
    let mut dp = [0.0; 3];
    let hx = h * state.x.norm().max(1.0);
    let hp = h * state.p.norm().max(1.0);
    for i in 0..3 {
        let mut xa = state.x.to_array();
        let mut xb = xa;
        xa[i] += hx;
        xb[i] -= hx;
        let ha = effective_hamiltonian(
            &PhaseState {
                x: Vec3::from_array(xa),
                ..*state
            },
            el,
            nc,
        )
        .unwrap();
        let hb = effective_hamiltonian(
            &PhaseState {
                x: Vec3::from_array(xb),
                ..*state
            },
            el,
            nc,
        )
        .unwrap();
        dx[i] = (ha - hb) / (2.0 * hx);

        let mut pa = state.p.to_array();
        let mut pb = pa;
        pa[i] += hp;
        pb[i] -= hp;
        let ha = effective_hamiltonian(
            &PhaseState {
                p: Vec3::from_array(pa),
                ..*state
            },
            el,
            nc,
        )
        .unwrap();
        let hb = effective_hamiltonian(
            &PhaseState {
                p: Vec3::from_array(pb),
                ..*state
            },
            el,
            nc,
        )
        .unwrap();
        dp[i] = (ha - hb) / (2.0 * hp);
    }
    (dx, dp)
}

/// Largest component error of the analytic gradient relative to the norm of
/// the respective gradient block (∂H/∂x or ∂H/∂p).
pub fn gradient_error(state: &PhaseState, el: &OrbitElements, nc: &NCParams) -> f64 {
    let d = equations_of_motion(state, el, nc).unwrap();
    let (fd_x, fd_p) = fd_gradient(state, el, nc, 1e-6);
    // dp/dt = −∂H/∂x, dx/dt = ∂H/∂p
    let an_x = (-d.dp_dt).to_array();
    let an_p = d.dx_dt.to_array();
    let nx = (-d.dp_dt).norm();
    let np = d.dx_dt.norm();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        worst = worst.max((fd_x[i] - an_x[i]).abs() / nx);
        worst = worst.max((fd_p[i] - an_p[i]).abs() / np);
    }
    worst
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
