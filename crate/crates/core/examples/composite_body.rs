//! Deformation parameters of a composite body from its constituents.
//!
//! If every constituent shares the same A and B, the centre of mass sees
//! ⟨(θᶜ)²⟩ = A/M² and ⟨(ηᶜ)²⟩ = B·M², so a heavy body is almost blind to θ and
//! very sensitive to η. Constituents that break the scaling are rejected.
//!
//! ```text
//! cargo run --example composite_body
//! ```

use ncperihelion::analytic::{composite_params, rescale_params, ParticleSpec};
use ncperihelion::{NCParams, PhysicalConstants};

fn main() -> ncperihelion::Result<()> {
    let consts = PhysicalConstants::default();
    let electron = ParticleSpec::new("electron", consts.electron_mass)?;
    let nucleon = ParticleSpec::new("nucleon", consts.nucleon_mass)?;

    let nc_electron = NCParams::new(1e40, 1e-80, electron.mass)?;
    let nc_nucleon = rescale_params(&nc_electron, nucleon.mass)?;

    // hydrogen: one electron and one nucleon
    let atom = composite_params(&[(electron.clone(), nc_electron), (nucleon.clone(), nc_nucleon)])?;
    println!(
        "electron: theta_sq {:.3e}  eta_sq {:.3e}",
        nc_electron.theta_sq, nc_electron.eta_sq
    );
    println!(
        "nucleon:  theta_sq {:.3e}  eta_sq {:.3e}",
        nc_nucleon.theta_sq, nc_nucleon.eta_sq
    );
    println!(
        "atom:     theta_sq {:.3e}  eta_sq {:.3e}  (M = {:.4e} kg)",
        atom.theta_sq, atom.eta_sq, atom.mass
    );

    let broken = NCParams::new(1e40, 1e-80, nucleon.mass)?;
    match composite_params(&[(electron, nc_electron), (nucleon, broken)]) {
        Err(err) => println!("inconsistent constituents: {err}"),
        Ok(_) => unreachable!("the scaling check should have fired"),
    }
    Ok(())
}
