//! Perihelion precession of a Kepler orbit on a rotationally-invariant
//! noncommutative phase space.
//!
//! The crate evaluates the averaged effective Hamiltonian and its flow
//! ([`dynamics`]), integrates orbits and measures their precession numerically
//! ([`integrator`]), provides the closed-form shift and the mass-scaling laws
//! of the noncommutativity parameters ([`analytic`]), and turns the observed
//! Mercury perihelion advance into upper bounds on those parameters and on the
//! minimal momentum ([`bounds`]). The [`cli`] module backs the `ncperi` binary.

pub mod analytic;
pub mod bounds;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod kv;
pub mod model;

pub use error::{Error, Result};
pub use model::{NCParams, OrbitElements, PhaseState, PhysicalConstants, Vec3};
