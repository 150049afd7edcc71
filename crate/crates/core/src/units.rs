//! Physical constants and the unit conventions used throughout the crate.
//!
//! Internally every frequency is an angular frequency in rad/μs, every time is
//! in μs and every distance in nm, so that products such as σ·τ stay of order
//! one for typical nuclear baths.
//!
//! Gyromagnetic ratios are kept as ordinary frequencies per tesla (γ/2π, the
//! way they are usually quoted) and multiplied by 2π only when converted to an
//! angular frequency.
//!
//! Energies are reported with ħ: 1 rad/μs corresponds to 0.6582 neV. Some
//! sources quote bath widths using h instead (E = h·f), which differs by 2π;
//! [`energy_of`] and [`energy_of_with_planck`] give both readings so a quoted
//! width can be compared either way.

use crate::math::TAU;

/// A gyromagnetic ratio stored as γ/2π in Hz/T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gyromagnetic {
    hz_per_tesla: f64,
}

impl Gyromagnetic {
    pub const fn from_hz_per_tesla(hz_per_tesla: f64) -> Self {
        Self { hz_per_tesla }
    }

    pub const fn from_mhz_per_tesla(mhz: f64) -> Self {
        Self::from_hz_per_tesla(mhz * 1e6)
    }

    pub const fn from_ghz_per_tesla(ghz: f64) -> Self {
        Self::from_hz_per_tesla(ghz * 1e9)
    }

    pub const fn hz_per_tesla(self) -> f64 {
        self.hz_per_tesla
    }

    /// 2π·γ in rad/(s·T).
    pub fn angular_si(self) -> f64 {
        TAU * self.hz_per_tesla
    }
}

/// The constants needed by the bath model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// NV electron, 28.02 GHz/T.
    pub gamma_e: Gyromagnetic,
    /// ¹³C nucleus, 10.71 MHz/T.
    pub gamma_c13: Gyromagnetic,
    /// Vacuum permeability, N·A⁻².
    pub mu0: f64,
    /// Reduced Planck constant, neV·μs.
    pub hbar: f64,
}

pub const GAMMA_E: Gyromagnetic = Gyromagnetic::from_ghz_per_tesla(28.02);
pub const GAMMA_C13: Gyromagnetic = Gyromagnetic::from_mhz_per_tesla(10.71);
pub const MU0: f64 = 4.0 * core::f64::consts::PI * 1e-7;
/// ħ in neV·μs (CODATA 2018: 6.582119569e-16 eV·s).
pub const HBAR_NEV_US: f64 = 0.658_211_956_9;
/// ħ in J·s (CODATA 2018).
pub const HBAR_J_S: f64 = 1.054_571_817e-34;

pub const CONSTANTS: Constants = Constants {
    gamma_e: GAMMA_E,
    gamma_c13: GAMMA_C13,
    mu0: MU0,
    hbar: HBAR_NEV_US,
};

/// |2π·γ·B| in rad/μs. The sign of a Larmor frequency is left to the caller.
pub fn angular_frequency_of(gyro: Gyromagnetic, field_tesla: f64) -> f64 {
    gyro.angular_si() * field_tesla.abs() * 1e-6
}

/// ħω in neV for ω in rad/μs.
pub fn energy_of(omega: f64) -> f64 {
    omega * HBAR_NEV_US
}

/// Inverse of [`energy_of`]: rad/μs for an energy in neV.
pub fn angular_frequency_of_energy(energy_nev: f64) -> f64 {
    energy_nev / HBAR_NEV_US
}

/// h·f in neV for ω = 2πf in rad/μs, i.e. the energy a source using Planck's
/// constant (rather than ħ) would quote for the same frequency.
pub fn energy_of_with_planck(omega: f64) -> f64 {
    omega * HBAR_NEV_US * TAU
}
