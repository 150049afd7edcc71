//! Bath realizations on disk.
//!
//! ```json
//! {
//!   "n_spins": 2,
//!   "r_min": 0.57,
//!   "r_max": 2.5,
//!   "seed": 42,
//!   "sites": [{ "r": 1.2, "theta": 0.4, "a_z": -0.05, "a_x": 0.02 }, ...]
//! }
//! ```
//!
//! Distances in nm, couplings in rad/μs. On load the stored couplings are
//! used as-is; r and θ are kept only as a record of where they came from.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use quasistatic_core::bath::MAX_SPINS;
use quasistatic_core::{BathRealization, NuclearSite};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathFile {
    pub n_spins: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub seed: u64,
    pub sites: Vec<SiteRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteRecord {
    pub r: f64,
    pub theta: f64,
    pub a_z: f64,
    pub a_x: f64,
}

impl From<&BathRealization> for BathFile {
    fn from(bath: &BathRealization) -> Self {
        BathFile {
            n_spins: bath.n_spins(),
            r_min: bath.r_min(),
            r_max: bath.r_max(),
            seed: bath.seed(),
            sites: bath
                .sites()
                .iter()
                .map(|s| SiteRecord {
                    r: s.r,
                    theta: s.theta,
                    a_z: s.a_z,
                    a_x: s.a_x,
                })
                .collect(),
        }
    }
}

impl BathFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bath records always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_bath(&self) -> Result<BathRealization, CliError> {
        if self.n_spins != self.sites.len() {
            return Err(CliError::Format {
                path: "bath".into(),
                reason: format!("n_spins is {} but {} sites are listed", self.n_spins, self.sites.len()),
            });
        }
        let sites = self
            .sites
            .iter()
            .map(|s| NuclearSite::with_couplings(s.r, s.theta, s.a_z, s.a_x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BathRealization::from_sites(sites, self.r_min, self.r_max, self.seed)?)
    }
}

pub fn write_bath(path: &Path, bath: &BathRealization) -> Result<(), CliError> {
    fs::write(path, BathFile::from(bath).to_json()).map_err(|e| CliError::io(path, e))
}

pub fn read_bath(path: &Path) -> Result<BathRealization, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file = BathFile::from_json(&text).map_err(|e| CliError::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    if file.sites.len() > MAX_SPINS {
        return Err(CliError::Capacity(format!(
            "{}: bath of {} spins exceeds the enumeration limit of {MAX_SPINS} spins",
            path.display(),
            file.sites.len()
        )));
    }
    file.to_bath().map_err(|e| match e {
        CliError::Format { reason, .. } => CliError::Format {
            path: path.display().to_string(),
            reason,
        },
        CliError::Usage { flag, reason } => CliError::Format {
            path: path.display().to_string(),
            reason: format!("{flag}: {reason}"),
        },
        other => other,
    })
}
