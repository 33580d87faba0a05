use std::path::Path;

use serde::{Deserialize, Serialize};

use super::types::positive;
use crate::error::Result;
use crate::kv::KvFile;

/// Shipped defaults, see `data/constants.txt` for provenance.
pub const DEFAULT_CONSTANTS: &str = include_str!("../../data/constants.txt");

pub const CONSTANT_KEYS: [&str; 6] = [
    "G",
    "hbar",
    "planck_length",
    "solar_mass",
    "electron_mass",
    "nucleon_mass",
];

/// SI constants used by the bound pipeline and the unit conversions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    #[serde(rename = "G")]
    pub g: f64,
    pub hbar: f64,
    pub planck_length: f64,
    pub solar_mass: f64,
    pub electron_mass: f64,
    pub nucleon_mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        let kv = KvFile::parse("data/constants.txt", DEFAULT_CONSTANTS).expect("shipped constants file parses");
        Self::from_kv_complete(&kv).expect("shipped constants file is complete")
    }
}

impl PhysicalConstants {
    fn from_kv_complete(kv: &KvFile) -> Result<Self> {
        kv.reject_unknown(&CONSTANT_KEYS)?;
        let c = PhysicalConstants {
            g: kv.require_f64("G")?,
            hbar: kv.require_f64("hbar")?,
            planck_length: kv.require_f64("planck_length")?,
            solar_mass: kv.require_f64("solar_mass")?,
            electron_mass: kv.require_f64("electron_mass")?,
            nucleon_mass: kv.require_f64("nucleon_mass")?,
        };
        c.validate()?;
        Ok(c)
    }

    /// Applies the keys present in `kv` on top of `self`; absent keys keep their value.
    pub fn with_overrides(mut self, kv: &KvFile) -> Result<Self> {
        kv.reject_unknown(&CONSTANT_KEYS)?;
        let slots: [(&str, &mut f64); 6] = [
            ("G", &mut self.g),
            ("hbar", &mut self.hbar),
            ("planck_length", &mut self.planck_length),
            ("solar_mass", &mut self.solar_mass),
            ("electron_mass", &mut self.electron_mass),
            ("nucleon_mass", &mut self.nucleon_mass),
        ];
        for (key, slot) in slots {
            if let Some(v) = kv.get_f64(key)? {
                *slot = v;
            }
        }
        self.validate()?;
        Ok(self)
    }

    /// Defaults overridden by the file at `path`.
    pub fn load(path: &Path) -> Result<Self> {
        Self::default().with_overrides(&KvFile::read(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        positive("G", self.g)?;
        positive("hbar", self.hbar)?;
        positive("planck_length", self.planck_length)?;
        positive("solar_mass", self.solar_mass)?;
        positive("electron_mass", self.electron_mass)?;
        positive("nucleon_mass", self.nucleon_mass)
    }

    /// k = G·M_⊙.
    pub fn solar_k(&self) -> f64 {
        self.g * self.solar_mass
    }
}
