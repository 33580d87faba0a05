//! Flat key-value run configuration.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `a` | semi-major axis, m | 1 |
//! | `e` | eccentricity | 0.2056 |
//! | `k` | central strength G·M, m³/s² (exclusive with `central_mass`) | 1 |
//! | `central_mass` | central mass, kg; k = G·central_mass | |
//! | `m` | orbiting mass, kg | 1 |
//! | `theta_sq`, `eta_sq` | ⟨θ²⟩ (s²/kg²), ⟨η²⟩ (kg²/s²) at mass `m` | 0 |
//! | `A`, `B` | mass-independent constants (exclusive with `theta_sq`/`eta_sq`) | |
//! | `revolutions_per_century` | enables arcsec/century output of `shift` | |
//! | `n_orbits` | revolutions integrated by `simulate`, `verify`, `sweep` | 40 |
//! | `tolerance` | integrator step tolerance | 1e-12 |
//! | `sigma_multiplier` | σ multiple in the residual cap | 3 |
//! | `rounding` | `paper` or `exact` | exact |
//! | `observation` | observation file for `bounds` | shipped Mercury record |
//! | `verify_e`, `verify_eps` | comma-separated grid for `verify` | 0.1,0.2056,0.5 / 1e-6,1e-5,1e-4,1e-3 |
//! | `verify_kinds` | any of `theta`, `eta`, `mixed` | all three |
//! | `sweep_axis` | one of `e`, `a`, `theta_sq`, `eta_sq`, `m` | |
//! | `sweep_min`, `sweep_max`, `sweep_count` | grid range and size | |
//! | `sweep_scale` | `linear` or `log` | linear |
//! | `sweep_measure` | also integrate each point (`true`/`false`) | false |
//!
//! Unknown keys are fatal.

use std::path::PathBuf;
use std::str::FromStr;

use crate::bounds::RoundingMode;
use crate::error::{Error, Result};
use crate::integrator::MAX_TOLERANCE;
use crate::kv::KvFile;
use crate::model::{positive, NCParams, OrbitElements, PhysicalConstants};

use super::verify::{CaseKind, VerifyGrid};

pub const CONFIG_KEYS: [&str; 25] = [
    "a",
    "e",
    "k",
    "central_mass",
    "m",
    "theta_sq",
    "eta_sq",
    "A",
    "B",
    "revolutions_per_century",
    "n_orbits",
    "tolerance",
    "sigma_multiplier",
    "rounding",
    "observation",
    "verify_e",
    "verify_eps",
    "verify_kinds",
    "sweep_axis",
    "sweep_min",
    "sweep_max",
    "sweep_count",
    "sweep_scale",
    "sweep_measure",
    "verify_n_orbits",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Shift,
    Simulate,
    Verify,
    Bounds,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    E,
    A,
    ThetaSq,
    EtaSq,
    M,
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "e" => SweepAxis::E,
            "a" => SweepAxis::A,
            "theta_sq" => SweepAxis::ThetaSq,
            "eta_sq" => SweepAxis::EtaSq,
            "m" => SweepAxis::M,
            other => {
                return Err(Error::invalid(
                    "sweep_axis",
                    format!("`{other}` is not one of e, a, theta_sq, eta_sq, m"),
                ))
            }
        })
    }
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::E => "e",
            SweepAxis::A => "a",
            SweepAxis::ThetaSq => "theta_sq",
            SweepAxis::EtaSq => "eta_sq",
            SweepAxis::M => "m",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
    pub measure: bool,
}

impl SweepSpec {
    /// Grid points in ascending order.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / n;
                if self.log {
                    (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + f * (self.max - self.min)
                }
            })
            .collect()
    }
}

/// Command-line flags that can override or complement the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub constants: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub rounding: Option<RoundingMode>,
    pub tolerance: Option<f64>,
    pub no_timestamp: bool,
    pub observation: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub observation: Option<PathBuf>,
    pub constants: PhysicalConstants,
    pub elements: OrbitElements,
    pub nc: NCParams,
    pub revolutions_per_century: Option<f64>,
    pub n_orbits: usize,
    pub tolerance: f64,
    pub sigma_multiplier: f64,
    pub rounding: RoundingMode,
    pub timestamp: bool,
    pub verify: VerifyGrid,
    pub sweep: Option<SweepSpec>,
}

fn parse_bool(kv: &KvFile, key: &str) -> Result<Option<bool>> {
    match kv.get_str(key) {
        None => Ok(None),
        Some("true") | Some("yes") | Some("1") => Ok(Some(true)),
        Some("false") | Some("no") | Some("0") => Ok(Some(false)),
        Some(other) => Err(Error::invalid(key, format!("`{other}` is not a boolean"))),
    }
}

impl RunConfig {
    /// Reads the config and constants files and validates every field.
    pub fn load(command: Command, flags: &Overrides) -> Result<Self> {
        let kv = match &flags.config {
            Some(path) => KvFile::read(path)?,
            None => KvFile::default(),
        };
        let constants = match &flags.constants {
            Some(path) => PhysicalConstants::load(path)?,
            None => PhysicalConstants::default(),
        };
        Self::from_kv(command, &kv, constants, flags)
    }

    pub fn from_kv(command: Command, kv: &KvFile, constants: PhysicalConstants, flags: &Overrides) -> Result<Self> {
        kv.reject_unknown(&CONFIG_KEYS)?;

        let m = kv.get_f64("m")?.unwrap_or(1.0);
        positive("m", m)?;
        let k = match (kv.get_f64("k")?, kv.get_f64("central_mass")?) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "central_mass",
                    "give either `k` or `central_mass`, not both",
                ))
            }
            (Some(k), None) => k,
            (None, Some(mass)) => {
                positive("central_mass", mass)?;
                constants.g * mass
            }
            (None, None) => 1.0,
        };
        let elements = OrbitElements {
            a: kv.get_f64("a")?.unwrap_or(1.0),
            e: kv.get_f64("e")?.unwrap_or(0.2056),
            k,
            m,
        };
        elements.validate()?;

        let theta = kv.get_f64("theta_sq")?;
        let eta = kv.get_f64("eta_sq")?;
        let a_const = kv.get_f64("A")?;
        let b_const = kv.get_f64("B")?;
        if a_const.is_some() && theta.is_some() {
            return Err(Error::invalid("A", "give either `A` or `theta_sq`, not both"));
        }
        if b_const.is_some() && eta.is_some() {
            return Err(Error::invalid("B", "give either `B` or `eta_sq`, not both"));
        }
        let theta_sq = match a_const {
            Some(a) => {
                crate::model::non_negative("A", a)?;
                a / (m * m)
            }
            None => theta.unwrap_or(0.0),
        };
        let eta_sq = match b_const {
            Some(b) => {
                crate::model::non_negative("B", b)?;
                b * m * m
            }
            None => eta.unwrap_or(0.0),
        };
        let nc = NCParams::new(theta_sq, eta_sq, m)?;

        let revolutions_per_century = kv.get_f64("revolutions_per_century")?;
        if let Some(r) = revolutions_per_century {
            positive("revolutions_per_century", r)?;
        }

        let n_orbits = kv.get_usize("n_orbits")?.unwrap_or(40);
        if n_orbits < 1 {
            return Err(Error::invalid("n_orbits", "must be at least 1"));
        }
        if command != Command::Simulate && n_orbits < 2 {
            return Err(Error::invalid(
                "n_orbits",
                "a precession measurement needs at least 2 revolutions",
            ));
        }
        let tolerance = match flags.tolerance {
            Some(t) => t,
            None => kv.get_f64("tolerance")?.unwrap_or(1e-12),
        };
        if !(tolerance > 0.0 && tolerance <= MAX_TOLERANCE) {
            return Err(Error::invalid(
                "tolerance",
                format!("{tolerance} must lie in (0, {MAX_TOLERANCE}]"),
            ));
        }
        let sigma_multiplier = kv.get_f64("sigma_multiplier")?.unwrap_or(3.0);
        positive("sigma_multiplier", sigma_multiplier)?;
        let rounding = match flags.rounding {
            Some(r) => r,
            None => kv.get_str("rounding").map(str::parse).transpose()?.unwrap_or_default(),
        };

        let verify = VerifyGrid {
            e: kv.get_f64_list("verify_e")?.unwrap_or_else(|| VerifyGrid::default().e),
            eps: kv
                .get_f64_list("verify_eps")?
                .unwrap_or_else(|| VerifyGrid::default().eps),
            kinds: match kv.get_str("verify_kinds") {
                Some(list) => list
                    .split(',')
                    .map(|s| s.trim().parse::<CaseKind>())
                    .collect::<Result<Vec<_>>>()?,
                None => VerifyGrid::default().kinds,
            },
            n_orbits: kv.get_usize("verify_n_orbits")?.unwrap_or(n_orbits),
        };
        verify.validate()?;

        let sweep = if command == Command::Sweep || kv.contains("sweep_axis") {
            let axis: SweepAxis = kv
                .get_str("sweep_axis")
                .ok_or_else(|| Error::invalid("sweep_axis", "required by the sweep command"))?
                .parse()?;
            let min = kv
                .get_f64("sweep_min")?
                .ok_or_else(|| Error::invalid("sweep_min", "required by the sweep command"))?;
            let max = kv.get_f64("sweep_max")?.unwrap_or(min);
            let count = kv.get_usize("sweep_count")?.unwrap_or(1);
            let log = match kv.get_str("sweep_scale") {
                None | Some("linear") => false,
                Some("log") => true,
                Some(other) => return Err(Error::invalid("sweep_scale", format!("`{other}` is not linear or log"))),
            };
            let measure = parse_bool(kv, "sweep_measure")?.unwrap_or(false);
            let spec = SweepSpec {
                axis,
                min,
                max,
                count,
                log,
                measure,
            };
            validate_sweep(&spec, &elements, &nc)?;
            Some(spec)
        } else {
            None
        };

        Ok(RunConfig {
            command,
            out: flags.out.clone(),
            observation: flags
                .observation
                .clone()
                .or_else(|| kv.get_str("observation").map(PathBuf::from)),
            constants,
            elements,
            nc,
            revolutions_per_century,
            n_orbits,
            tolerance,
            sigma_multiplier,
            rounding,
            timestamp: !flags.no_timestamp,
            verify,
            sweep,
        })
    }
}

fn validate_sweep(spec: &SweepSpec, elements: &OrbitElements, nc: &NCParams) -> Result<()> {
    if spec.count == 0 {
        return Err(Error::invalid("sweep_count", "grid is empty"));
    }
    if spec.min > spec.max {
        return Err(Error::invalid(
            "sweep_max",
            format!("{} is below sweep_min {}", spec.max, spec.min),
        ));
    }
    if spec.log && spec.min <= 0.0 {
        return Err(Error::invalid(
            "sweep_min",
            "log-spaced grids need a positive lower end",
        ));
    }
    // every grid point must satisfy the owning operation's preconditions
    for v in [spec.min, spec.max] {
        let (el, nc) = apply_axis(spec.axis, v, elements, nc);
        el.validate().map_err(|_| {
            Error::invalid(
                "sweep_max",
                format!("{} = {v} gives invalid elements", spec.axis.name()),
            )
        })?;
        nc.validate().map_err(|_| {
            Error::invalid(
                "sweep_min",
                format!("{} = {v} gives invalid parameters", spec.axis.name()),
            )
        })?;
    }
    Ok(())
}

/// Elements and parameters at one grid value. Along `m` the constants A and B
/// of the base parameters are held fixed.
pub fn apply_axis(axis: SweepAxis, value: f64, elements: &OrbitElements, nc: &NCParams) -> (OrbitElements, NCParams) {
    match axis {
        SweepAxis::E => (elements.with_e(value), *nc),
        SweepAxis::A => (OrbitElements { a: value, ..*elements }, *nc),
        SweepAxis::ThetaSq => (*elements, NCParams { theta_sq: value, ..*nc }),
        SweepAxis::EtaSq => (*elements, NCParams { eta_sq: value, ..*nc }),
        SweepAxis::M => {
            let (a, b) = (nc.a_const(), nc.b_const());
            (
                elements.with_mass(value),
                NCParams {
                    theta_sq: a / (value * value),
                    eta_sq: b * value * value,
                    mass: value,
                },
            )
        }
    }
}
