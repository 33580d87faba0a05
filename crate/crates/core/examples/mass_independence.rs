//! With A = ⟨θ²⟩m² and B = ⟨η²⟩/m² held fixed, the shift does not depend on the
//! orbiting mass — neither the closed form nor the integrated orbit.
//!
//! ```text
//! cargo run --release --example mass_independence
//! ```

use ncperihelion::analytic::{perihelion_shift, perihelion_shift_massless};
use ncperihelion::integrator::measure_precession;
use ncperihelion::{NCParams, OrbitElements};

fn main() -> ncperihelion::Result<()> {
    let (a_const, b_const) = (1e-3, 2e-5);
    let base = OrbitElements::new(1.0, 0.2056, 1.0, 1.0)?;
    println!(
        "massless form: {:.12e}",
        perihelion_shift_massless(&base, a_const, b_const)?
    );
    for m in [1e-30, 1e-3, 1.0, 1e3, 1e25] {
        let elements = base.with_mass(m);
        let nc = NCParams::from_scaling_constants(a_const, b_const, m)?;
        let analytic = perihelion_shift(&elements, &nc)?;
        let measured = measure_precession(&elements, &nc, 20, 1e-12)?.shift_per_rev;
        println!("m = {m:>7.0e}  analytic {analytic:.12e}  measured {measured:.12e}");
    }
    Ok(())
}
