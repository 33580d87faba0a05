use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kv::KvFile;
use crate::model::{non_negative, positive, OrbitElements, PhysicalConstants};

/// Shipped Mercury record, see `data/mercury.obs`.
pub const MERCURY_OBSERVATION: &str = include_str!("../../data/mercury.obs");

pub const OBSERVATION_KEYS: [&str; 8] = [
    "observed_arcsec_per_century",
    "sigma_arcsec_per_century",
    "gr_rad_per_rev",
    "revolutions_per_century",
    "a_m",
    "e",
    "mass_kg",
    "source",
];

const ARCSEC: f64 = PI / 648_000.0;

pub fn arcsec_per_century_to_rad_per_rev(value: f64, revolutions_per_century: f64) -> f64 {
    value * ARCSEC / revolutions_per_century
}

pub fn rad_per_rev_to_arcsec_per_century(value: f64, revolutions_per_century: f64) -> f64 {
    value * revolutions_per_century / ARCSEC
}

/// Observed anomalous perihelion advance of one body and its GR prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRecord {
    pub observed_arcsec_per_century: f64,
    pub sigma_arcsec_per_century: f64,
    pub gr_rad_per_rev: f64,
    pub revolutions_per_century: f64,
    pub a_m: f64,
    pub e: f64,
    pub mass_kg: f64,
    pub source: String,
}

impl ObservationRecord {
    pub fn mercury() -> Self {
        Self::parse("data/mercury.obs", MERCURY_OBSERVATION).expect("shipped Mercury record is valid")
    }

    pub fn parse(source_name: &str, text: &str) -> Result<Self> {
        Self::from_kv(&KvFile::parse(source_name, text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_kv(&KvFile::read(path)?)
    }

    pub fn from_kv(kv: &KvFile) -> Result<Self> {
        kv.reject_unknown(&OBSERVATION_KEYS)?;
        let record = ObservationRecord {
            observed_arcsec_per_century: kv.require_f64("observed_arcsec_per_century")?,
            sigma_arcsec_per_century: kv.require_f64("sigma_arcsec_per_century")?,
            gr_rad_per_rev: kv.require_f64("gr_rad_per_rev")?,
            revolutions_per_century: kv.require_f64("revolutions_per_century")?,
            a_m: kv.require_f64("a_m")?,
            e: kv.require_f64("e")?,
            mass_kg: kv.require_f64("mass_kg")?,
            source: kv.require_str("source")?.to_string(),
        };
        record.validate().map_err(|err| match err {
            Error::InvalidInput { field, reason } => Error::Parse {
                source_name: kv.source_name.clone(),
                line: kv.line_of(&field).unwrap_or(0),
                message: format!("`{field}`: {reason}"),
            },
            other => other,
        })?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("sigma_arcsec_per_century", self.sigma_arcsec_per_century)?;
        positive("revolutions_per_century", self.revolutions_per_century)?;
        positive("a_m", self.a_m)?;
        positive("mass_kg", self.mass_kg)?;
        if !self.observed_arcsec_per_century.is_finite() {
            return Err(Error::invalid("observed_arcsec_per_century", "must be finite"));
        }
        if !self.gr_rad_per_rev.is_finite() {
            return Err(Error::invalid("gr_rad_per_rev", "must be finite"));
        }
        if !(0.0..1.0).contains(&self.e) {
            return Err(Error::invalid(
                "e",
                format!("eccentricity {} must lie in [0, 1)", self.e),
            ));
        }
        Ok(())
    }

    pub fn observed_rad_per_rev(&self) -> f64 {
        arcsec_per_century_to_rad_per_rev(self.observed_arcsec_per_century, self.revolutions_per_century)
    }

    pub fn sigma_rad_per_rev(&self) -> f64 {
        arcsec_per_century_to_rad_per_rev(self.sigma_arcsec_per_century, self.revolutions_per_century)
    }

    /// Orbit of the body around the Sun, k = G·M_⊙.
    pub fn body(&self, consts: &PhysicalConstants) -> Result<OrbitElements> {
        OrbitElements::new(self.a_m, self.e, consts.solar_k(), self.mass_kg)
    }
}
