//! Spatial realizations of the ¹³C bath around an NV center, their hyperfine
//! couplings, and the configuration frequencies Δω_α.
//!
//! Internuclear dipolar couplings are neglected, so in both supported field
//! regimes each nucleus k contributes an independent ±c_k to the qubit
//! splitting:
//!
//! * zero field: c_k = v_k = √(A_x² + A_z²),
//! * high field (leading order): c_k = A_z,
//! * high field (exact in the common basis): c_k = ½[√(A_x² + (ω + A_z)²) − √(A_x² + (ω − A_z)²)]
//!   with ω the ¹³C Larmor frequency.
//!
//! A configuration α is an N-bit pattern; bit k = 0 means σ_α(k) = +1 and
//! bit k = 1 means σ_α(k) = −1, so Δω_α = Σ_k σ_α(k)·c_k.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::{acos, cbrt, cos, sin};
use crate::units::{angular_frequency_of, GAMMA_C13, GAMMA_E, HBAR_J_S, MU0};

/// Largest bath the enumeration engines accept (2^30 configurations).
pub const MAX_SPINS: usize = 30;
pub const DEFAULT_R_MIN_NM: f64 = 0.57;
pub const DEFAULT_R_MAX_NM: f64 = 2.5;
/// Field used for the high-field regime unless told otherwise.
pub const DEFAULT_HIGH_FIELD_TESLA: f64 = 0.1;

/// One nuclear spin: geometry relative to the qubit and its hyperfine couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuclearSite {
    /// Distance from the qubit, nm.
    pub r: f64,
    /// Polar angle from the NV axis, rad.
    pub theta: f64,
    /// Longitudinal coupling A_z, rad/μs.
    pub a_z: f64,
    /// Transverse coupling A_x, rad/μs.
    pub a_x: f64,
    /// √(A_x² + A_z²), rad/μs.
    pub v: f64,
}

impl NuclearSite {
    /// A site at (r, θ) with dipolar couplings from [`couplings_of`].
    pub fn at(r: f64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let (a_z, a_x) = couplings_of(r, theta)?;
        Ok(Self::with_couplings_unchecked(r, theta, a_z, a_x))
    }

    /// A site whose couplings are given directly (e.g. loaded from a file);
    /// the geometry is kept only as a record.
    pub fn with_couplings(r: f64, theta: f64, a_z: f64, a_x: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid("r", "distance must be positive and finite"));
        }
        check_theta(theta)?;
        if !a_z.is_finite() || !a_x.is_finite() {
            return Err(Error::invalid("a_z/a_x", "couplings must be finite"));
        }
        Ok(Self::with_couplings_unchecked(r, theta, a_z, a_x))
    }

    fn with_couplings_unchecked(r: f64, theta: f64, a_z: f64, a_x: f64) -> Self {
        Self {
            r,
            theta,
            a_z,
            a_x,
            v: libm::hypot(a_x, a_z),
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=core::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid("theta", "polar angle must lie in [0, π]"));
    }
    Ok(())
}

/// Which Δω_α the qubit sees for a bath configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldRegime {
    ZeroField,
    /// Leading-order high field: only A_z enters.
    HighField { b_z: f64 },
    /// High field including the A_x corrections in the common product basis.
    HighFieldExact { b_z: f64 },
}

impl FieldRegime {
    pub fn high_field(b_z: f64) -> Result<Self> {
        check_field(b_z)?;
        Ok(FieldRegime::HighField { b_z })
    }

    pub fn high_field_exact(b_z: f64) -> Result<Self> {
        check_field(b_z)?;
        Ok(FieldRegime::HighFieldExact { b_z })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldRegime::ZeroField => Ok(()),
            FieldRegime::HighField { b_z } | FieldRegime::HighFieldExact { b_z } => {
                check_field(b_z)
            }
        }
    }

    /// The per-spin amplitude c_k for one site.
    pub fn amplitude(&self, site: &NuclearSite) -> f64 {
        match *self {
            FieldRegime::ZeroField => site.v,
            FieldRegime::HighField { .. } => site.a_z,
            FieldRegime::HighFieldExact { b_z } => {
                exact_high_field_amplitude(site, angular_frequency_of(GAMMA_C13, b_z))
            }
        }
    }
}

fn check_field(b_z: f64) -> Result<()> {
    if !(b_z > 0.0) || !b_z.is_finite() {
        return Err(Error::invalid("b_z", "high-field regime needs a positive field"));
    }
    Ok(())
}

/// ½[√(A_x² + (ω+A_z)²) − √(A_x² + (ω−A_z)²)], rewritten as
/// 2ωA_z / (√+ + √−) to avoid cancelling two nearly equal roots.
fn exact_high_field_amplitude(site: &NuclearSite, larmor: f64) -> f64 {
    let up = libm::hypot(site.a_x, larmor + site.a_z);
    let down = libm::hypot(site.a_x, larmor - site.a_z);
    let denom = up + down;
    if denom == 0.0 {
        return 0.0;
    }
    2.0 * larmor * site.a_z / denom
}

/// A concrete arrangement of N nuclear spins.
#[derive(Debug, Clone, PartialEq)]
pub struct BathRealization {
    sites: Vec<NuclearSite>,
    r_min: f64,
    r_max: f64,
    seed: u64,
}

impl BathRealization {
    /// Assemble a bath from explicit sites. Every site must lie inside the
    /// shell `[r_min, r_max]`.
    pub fn from_sites(sites: Vec<NuclearSite>, r_min: f64, r_max: f64, seed: u64) -> Result<Self> {
        check_shell(r_min, r_max)?;
        check_count(sites.len())?;
        if let Some(bad) = sites.iter().position(|s| s.r < r_min || s.r > r_max) {
            return Err(Error::invalid(
                "sites",
                alloc::format!("site {bad} at r = {} nm lies outside [{r_min}, {r_max}]", sites[bad].r),
            ));
        }
        Ok(Self {
            sites,
            r_min,
            r_max,
            seed,
        })
    }

    pub fn sites(&self) -> &[NuclearSite] {
        &self.sites
    }

    pub fn n_spins(&self) -> usize {
        self.sites.len()
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of configurations, 2^N.
    pub fn n_configs(&self) -> u64 {
        1u64 << self.sites.len()
    }

    /// Per-spin amplitudes c_k for a regime.
    pub fn amplitudes(&self, regime: FieldRegime) -> Vec<f64> {
        self.sites.iter().map(|s| regime.amplitude(s)).collect()
    }

    /// Σ_k c_k², the exact variance of Δω over the uniform prior.
    pub fn second_moment(&self, regime: FieldRegime) -> f64 {
        self.sites
            .iter()
            .map(|s| {
                let c = regime.amplitude(s);
                c * c
            })
            .sum()
    }

    /// max_k c_k² / Σ_k c_k²; large values flag baths dominated by one or two
    /// close nuclei, whose Δω distribution is far from Gaussian.
    pub fn dominance(&self, regime: FieldRegime) -> f64 {
        let total = self.second_moment(regime);
        if total == 0.0 {
            return 0.0;
        }
        self.sites
            .iter()
            .map(|s| {
                let c = regime.amplitude(s);
                c * c
            })
            .fold(0.0, f64::max)
            / total
    }
}

fn check_shell(r_min: f64, r_max: f64) -> Result<()> {
    if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
        return Err(Error::invalid("r_min/r_max", "need 0 < r_min < r_max"));
    }
    Ok(())
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n_spins", "a bath needs at least one spin"));
    }
    if n > MAX_SPINS {
        return Err(Error::Capacity {
            n_spins: n,
            max: MAX_SPINS,
        });
    }
    Ok(())
}

/// Draw `n_spins` positions uniformly from the volume of the shell
/// `[r_min, r_max]` and attach their couplings. Deterministic in `seed`.
pub fn sample_bath(n_spins: usize, r_min: f64, r_max: f64, seed: u64) -> Result<BathRealization> {
    check_shell(r_min, r_max)?;
    check_count(n_spins)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo3, hi3) = (r_min * r_min * r_min, r_max * r_max * r_max);
    let mut sites = Vec::with_capacity(n_spins);
    for _ in 0..n_spins {
        let u: f64 = rng.random();
        let r = cbrt(lo3 + u * (hi3 - lo3)).clamp(r_min, r_max);
        let cos_theta = 2.0 * rng.random::<f64>() - 1.0;
        let theta = acos(cos_theta);
        sites.push(NuclearSite::at(r, theta)?);
    }
    BathRealization::from_sites(sites, r_min, r_max, seed)
}

/// (μ0/4π)·γ_e·γ_C·ħ / r³ in rad/μs, both γ as angular (2π·γ).
pub fn coupling_prefactor(r_nm: f64) -> f64 {
    let r = r_nm * 1e-9;
    MU0 / (4.0 * core::f64::consts::PI) * GAMMA_E.angular_si() * GAMMA_C13.angular_si() * HBAR_J_S
        / (r * r * r)
        * 1e-6
}

/// Dipolar couplings (A_z, A_x) in rad/μs for a nucleus at distance `r` (nm)
/// and polar angle `theta`.
///
/// A_z = P(r)(1 − 3cos²θ) and A_x = P(r)(1 − 3 sinθ cosθ). The transverse
/// angular factor is kept in this form; the conventional secular dipolar term
/// −3 sinθ cosθ is not used.
pub fn couplings_of(r: f64, theta: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", "distance must be positive and finite"));
    }
    let p = coupling_prefactor(r);
    let (s, c) = (sin(theta), cos(theta));
    Ok((p * (1.0 - 3.0 * c * c), p * (1.0 - 3.0 * s * c)))
}

/// σ_α(k) for bit k of a configuration.
#[inline]
pub fn spin_sign(config: u64, k: usize) -> f64 {
    if (config >> k) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_config(bath: &BathRealization, config: u64) -> Result<()> {
    if config >= bath.n_configs() {
        return Err(Error::invalid("config", "configuration index exceeds 2^N − 1"));
    }
    Ok(())
}

/// Δω_α = Σ_k σ_α(k)·c_k.
pub fn delta_omega(bath: &BathRealization, config: u64, regime: FieldRegime) -> Result<f64> {
    check_config(bath, config)?;
    regime.validate()?;
    Ok(bath
        .sites()
        .iter()
        .enumerate()
        .map(|(k, s)| spin_sign(config, k) * regime.amplitude(s))
        .sum())
}

/// High-field Δω_α keeping the transverse couplings:
/// ω_α^{↑/↓} = ½Σ_k σ_α(k)·√(A_x² + (ω ± A_z)²), Δω_α = ω_α^↑ − ω_α^↓.
pub fn delta_omega_exact_high_field(bath: &BathRealization, config: u64, b_z: f64) -> Result<f64> {
    delta_omega(bath, config, FieldRegime::high_field_exact(b_z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    fn toy(values: &[f64]) -> BathRealization {
        let sites = values
            .iter()
            .map(|&v| NuclearSite::with_couplings(1.0, 0.0, v, 0.0).unwrap())
            .collect();
        BathRealization::from_sites(sites, 0.5, 2.0, 0).unwrap()
    }

    #[test]
    fn sample_bath_contains_sites() {
        let b = sample_bath(20, 0.57, 2.5, 42).unwrap();
        assert_eq!(b.n_spins(), 20);
        assert!(b.sites().iter().all(|s| (0.57..=2.5).contains(&s.r)));
        let thin = sample_bath(1, 0.57, 0.58, 7).unwrap();
        assert!((0.57..=0.58).contains(&thin.sites()[0].r));
    }

    #[test]
    fn sample_bath_is_deterministic() {
        assert_eq!(sample_bath(20, 0.57, 2.5, 42).unwrap(), sample_bath(20, 0.57, 2.5, 42).unwrap());
        assert_ne!(sample_bath(20, 0.57, 2.5, 42).unwrap(), sample_bath(20, 0.57, 2.5, 43).unwrap());
    }

    #[test]
    fn sample_bath_rejects_bad_arguments() {
        assert!(matches!(sample_bath(0, 0.57, 2.5, 1), Err(Error::InvalidArgument { .. })));
        assert!(matches!(sample_bath(5, 0.0, 2.5, 1), Err(Error::InvalidArgument { .. })));
        assert!(matches!(sample_bath(5, 2.5, 0.57, 1), Err(Error::InvalidArgument { .. })));
        assert!(matches!(sample_bath(31, 0.57, 2.5, 1), Err(Error::Capacity { n_spins: 31, .. })));
    }

    #[test]
    fn couplings_examples() {
        let magic = acos(1.0 / sqrt(3.0));
        let (a_z, _) = couplings_of(0.57, magic).unwrap();
        assert!(a_z.abs() < 1e-12);

        // Prefactor evaluated by hand with CODATA ħ: 0.674635 rad/μs.
        let (a_z, a_x) = couplings_of(0.57, 0.0).unwrap();
        assert!((a_z + 2.0 * 0.674_635_098_9).abs() < 1e-8, "{a_z}");
        assert!((a_x - 0.674_635_098_9).abs() < 1e-8, "{a_x}");

        let (far_z, far_x) = couplings_of(1.14, 0.0).unwrap();
        assert!((far_z - a_z / 8.0).abs() < 1e-14);
        assert!((far_x - a_x / 8.0).abs() < 1e-14);

        assert!(couplings_of(0.0, 0.0).is_err());
        assert!(couplings_of(-1.0, 0.0).is_err());
    }

    #[test]
    fn exclusion_radius_matches_larmor_criterion() {
        let larmor = angular_frequency_of(GAMMA_C13, 0.1);
        let p = coupling_prefactor(0.57);
        assert!((p - 0.1 * larmor).abs() / (0.1 * larmor) < 0.12);
    }

    #[test]
    fn site_splitting_is_norm_of_couplings() {
        let b = sample_bath(25, 0.57, 2.5, 9).unwrap();
        for s in b.sites() {
            assert!((s.v * s.v - (s.a_x * s.a_x + s.a_z * s.a_z)).abs() <= 1e-12 * s.v * s.v);
            let (a_z, a_x) = couplings_of(s.r, s.theta).unwrap();
            assert_eq!((a_z, a_x), (s.a_z, s.a_x));
        }
    }

    #[test]
    fn delta_omega_toy_bath() {
        let b = toy(&[1.0, 0.5]);
        let got: Vec<f64> = (0..4)
            .map(|c| delta_omega(&b, c, FieldRegime::ZeroField).unwrap())
            .collect();
        assert_eq!(got, [1.5, -0.5, 0.5, -1.5]);
        assert!(delta_omega(&b, 4, FieldRegime::ZeroField).is_err());
    }

    #[test]
    fn delta_omega_all_up_and_complement() {
        let b = sample_bath(12, 0.57, 2.5, 3).unwrap();
        let sum_v: f64 = b.sites().iter().map(|s| s.v).sum();
        let d0 = delta_omega(&b, 0, FieldRegime::ZeroField).unwrap();
        assert!((d0 - sum_v).abs() < 1e-14);
        let mask = b.n_configs() - 1;
        for regime in [
            FieldRegime::ZeroField,
            FieldRegime::HighField { b_z: 0.1 },
            FieldRegime::HighFieldExact { b_z: 0.1 },
        ] {
            for c in [0u64, 1, 77, 1234, 4000] {
                let a = delta_omega(&b, c, regime).unwrap();
                let bar = delta_omega(&b, c ^ mask, regime).unwrap();
                assert!((a + bar).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_high_field_reduces_without_transverse() {
        let sites = [(0.3, 0.0), (-0.2, 0.0), (0.05, 0.0)]
            .iter()
            .map(|&(z, x)| NuclearSite::with_couplings(1.0, 0.0, z, x).unwrap())
            .collect();
        let b = BathRealization::from_sites(sites, 0.5, 2.0, 0).unwrap();
        for c in 0..8 {
            let lead = delta_omega(&b, c, FieldRegime::HighField { b_z: 0.1 }).unwrap();
            let full = delta_omega_exact_high_field(&b, c, 0.1).unwrap();
            assert!((lead - full).abs() < 1e-12);
        }
        assert!(delta_omega_exact_high_field(&b, 0, 0.0).is_err());
    }

    #[test]
    fn exact_high_field_single_spin() {
        let w = angular_frequency_of(GAMMA_C13, 0.1);
        let site = NuclearSite::with_couplings(1.0, 0.0, 0.1 * w, 0.1 * w).unwrap();
        let b = BathRealization::from_sites(alloc::vec![site], 0.5, 2.0, 0).unwrap();
        let got = delta_omega_exact_high_field(&b, 0, 0.1).unwrap();
        let expected = 0.5 * (sqrt(0.01 * w * w + 1.21 * w * w) - sqrt(0.01 * w * w + 0.81 * w * w));
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn exact_high_field_converges_to_leading_order() {
        let site = NuclearSite::with_couplings(1.0, 0.0, 0.4, 0.3).unwrap();
        let b = BathRealization::from_sites(alloc::vec![site], 0.5, 2.0, 0).unwrap();
        let mut prev_err = f64::INFINITY;
        for &field in &[1.0, 10.0, 100.0] {
            let w = angular_frequency_of(GAMMA_C13, field);
            let err = (delta_omega_exact_high_field(&b, 0, field).unwrap() - 0.4).abs();
            assert!(err <= 2.0 * (0.3 / w) * (0.3 / w) * 0.4 + 1e-15);
            assert!(err < prev_err);
            prev_err = err;
        }
    }

    #[test]
    fn dominance_and_moments() {
        let b = toy(&[1.0, 0.5]);
        assert!((b.second_moment(FieldRegime::ZeroField) - 1.25).abs() < 1e-15);
        assert!((b.dominance(FieldRegime::ZeroField) - 0.8).abs() < 1e-15);
        let real = sample_bath(20, 0.57, 2.5, 11).unwrap();
        assert!(
            real.second_moment(FieldRegime::HighField { b_z: 0.1 })
                <= real.second_moment(FieldRegime::ZeroField)
        );
    }
}
