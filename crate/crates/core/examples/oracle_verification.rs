//! Runs the integrator-versus-closed-form grid: three eccentricities, four
//! shift magnitudes, θ-only, η-only and mixed deformations.
//!
//! ```text
//! cargo run --release --example oracle_verification
//! ```

use ncperihelion::analytic::perihelion_shift;
use ncperihelion::cli::verify::{all_passed, run_grid, summary_table, VerifyGrid};

fn main() {
    let grid = VerifyGrid::default();
    let started = std::time::Instant::now();
    let rows = run_grid(&grid, 1e-12, perihelion_shift);
    print!("{}", summary_table(&rows));
    println!("elapsed {:.2?}", started.elapsed());
    if !all_passed(&rows) {
        std::process::exit(1);
    }
}
