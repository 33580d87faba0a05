//! Bounds on the deformation parameters from Mercury's perihelion residual,
//! with the cap both rounded as in published tables and kept exact.
//!
//! ```text
//! cargo run --example mercury_bounds
//! ```

use ncperihelion::bounds::{default_particles, run_pipeline, ObservationRecord, RoundingMode};
use ncperihelion::PhysicalConstants;

fn main() -> ncperihelion::Result<()> {
    let consts = PhysicalConstants::default();
    let obs = ObservationRecord::mercury();
    let particles = default_particles(&consts);
    for mode in [RoundingMode::Paper, RoundingMode::Exact] {
        let report = run_pipeline(&obs, &particles, &consts, 3.0, mode)?;
        println!("{}", report.to_table());
    }
    Ok(())
}
