//! Closed-form perihelion shift of Mercury for a given pair of deformation
//! parameters, split into its two competing terms.
//!
//! ```text
//! cargo run --example analytic_shift
//! ```

use ncperihelion::analytic::perihelion_shift_terms;
use ncperihelion::bounds::{rad_per_rev_to_arcsec_per_century, ObservationRecord};
use ncperihelion::{NCParams, PhysicalConstants};

fn main() -> ncperihelion::Result<()> {
    let consts = PhysicalConstants::default();
    let obs = ObservationRecord::mercury();
    let mercury = obs.body(&consts)?;

    // ħ√⟨θ²⟩ = 1e-57 m² and ħ√⟨η²⟩ = 1e-22 kg²m²/s² on the planet as a whole
    let theta_sq = (1e-57 / consts.hbar).powi(2);
    let eta_sq = (1e-22 / consts.hbar).powi(2);
    let nc = NCParams::new(theta_sq, eta_sq, mercury.m)?;

    let terms = perihelion_shift_terms(&mercury, &nc)?;
    let rpc = obs.revolutions_per_century;
    println!(
        "Mercury: a = {:e} m, e = {}, m = {:e} kg",
        mercury.a, mercury.e, mercury.m
    );
    for (name, value) in [("theta", terms.theta), ("eta", terms.eta), ("total", terms.total())] {
        println!(
            "{name:>6}: {value:>+12.4e} rad/rev  {:>+12.4e} arcsec/century",
            rad_per_rev_to_arcsec_per_century(value, rpc)
        );
    }
    Ok(())
}
