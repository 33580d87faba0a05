//! Integrates a deformed orbit, reports conservation and the measured
//! precession, and writes the trajectory to CSV.
//!
//! ```text
//! cargo run --release --example simulate_orbit [out.csv]
//! ```

use ncperihelion::analytic::perihelion_shift;
use ncperihelion::integrator::{integrate_orbit, measure_precession};
use ncperihelion::model::kepler_state_at_perihelion;
use ncperihelion::{NCParams, OrbitElements};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let elements = OrbitElements::new(1.0, 0.3, 1.0, 1.0)?;
    let nc = NCParams::new(2e-4, 5e-5, 1.0)?;
    let start = kepler_state_at_perihelion(&elements)?;

    let traj = integrate_orbit(&start, &elements, &nc, 20, 1e-12)?;
    let s = &traj.step_stats;
    println!("{} steps ({} rejected) over 20 orbits", s.steps, s.rejected);
    println!(
        "energy drift {:.2e}, |L| drift {:.2e}",
        s.max_energy_drift, s.max_l_magnitude_drift
    );

    let measured = measure_precession(&elements, &nc, 20, 1e-12)?;
    let analytic = perihelion_shift(&elements, &nc)?;
    println!("measured {:.6e} rad/rev", measured.shift_per_rev);
    println!("analytic {:.6e} rad/rev", analytic);

    if let Some(path) = std::env::args().nth(1) {
        traj.write_csv(std::io::BufWriter::new(std::fs::File::create(&path)?))?;
        println!("trajectory written to {path}");
    }
    Ok(())
}
