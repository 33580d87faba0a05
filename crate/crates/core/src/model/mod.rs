//! Domain types, constants and the scaled unit system shared by every module.

mod constants;
mod scaling;
mod types;
mod vec3;

pub use constants::{PhysicalConstants, CONSTANT_KEYS, DEFAULT_CONSTANTS};
pub use scaling::{kepler_state_at_perihelion, nondimensionalize, Scaled, Scales};
pub use types::{NCParams, OrbitElements, PhaseState};
pub use vec3::Vec3;

pub(crate) use types::{non_negative, positive};
