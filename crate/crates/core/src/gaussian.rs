//! Gaussian-bath engine: Δω is drawn from N(0, σ²) instead of a finite
//! spectrum.
//!
//! Every quantity is an average of cos^{2(n−k)}(τΔω/2)·sin^{2k}(τΔω/2) (times
//! e^{iΔωt} for coherences) over the Gaussian. Expanding the cosine powers in
//! exponentials turns those averages into binomial sums of Gaussians, e.g.
//!
//! ```text
//! ℙ_n(M_0) = 4^−n Σ_{r=0}^{2n} C(2n, r) exp(−½σ²τ²(n − r)²)
//! ```
//!
//! Records with −x outcomes are alternating combinations of such sums and can
//! cancel catastrophically. Whenever an alternating sum keeps less than
//! [`CANCELLATION_LIMIT`] of its largest term, the defining integral is
//! evaluated by adaptive quadrature instead.
//!
//! The `*_large_n` functions are the asymptotic forms obtained by replacing
//! the binomial weights with a Gaussian. They are returned for any input but
//! are only trustworthy once στ√n ≳ 3.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{
    binomial, binomial_row, ceil, cos, exp, ln, ln_binomial, powu, sin, sqrt, SignedLogSum,
    CANCELLATION_LIMIT, LN_2, PI,
};
use crate::quadrature::{integrate, QuadratureConfig};

/// Binomial rows up to this many measurements are built directly; longer
/// sequences use log-gamma.
const DIRECT_BINOMIAL_LIMIT: u32 = 64;

/// Quadrature truncates the Gaussian at ±this many σ.
const TRUNCATION_SIGMAS: f64 = 8.0;

const QUADRATURE: QuadratureConfig = QuadratureConfig {
    abs_tol: 1e-14,
    rel_tol: 1e-10,
    max_intervals: 200_000,
};

/// A zero-mean Gaussian distribution of Δω with standard deviation σ (rad/μs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEnvironment {
    sigma: f64,
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid("tau", "evolution time must be finite and non-negative"));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::invalid("t", "time must be finite"));
    }
    Ok(())
}

fn check_k(n: u32, k: u32) -> Result<()> {
    if k > n {
        return Err(Error::invalid("k", "path length cannot exceed the number of measurements"));
    }
    Ok(())
}

fn ln_binomial_row(m: u64) -> Vec<f64> {
    if m <= 2 * DIRECT_BINOMIAL_LIMIT as u64 {
        binomial_row(m).into_iter().map(ln).collect()
    } else {
        (0..=m).map(|r| ln_binomial(m, r)).collect()
    }
}

/// Accumulate sign·C(k, r)·4^−m Σ_l C(2m, l) exp(−½(shift + (m − l)·step)²)
/// into `acc`, with m = `m`.
fn push_comb_terms(acc: &mut SignedLogSum, m: u32, sign: f64, ln_prefactor: f64, step: f64, shift: f64) {
    let row = ln_binomial_row(2 * m as u64);
    let base = ln_prefactor - 2.0 * m as f64 * LN_2;
    for (l, &ln_c) in row.iter().enumerate() {
        let offset = shift + (m as f64 - l as f64) * step;
        acc.push(sign, base + ln_c - 0.5 * offset * offset);
    }
}

fn parity(x: u32) -> f64 {
    if x.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl GaussianEnvironment {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid("sigma", "width must be positive and finite"));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Free-induction decay time √2/σ.
    pub fn t2_star(&self) -> f64 {
        sqrt(2.0) / self.sigma
    }

    /// σ²τ²: the dimensionless squared phase spread accumulated in one cycle.
    fn phase_variance(&self, tau: f64) -> f64 {
        let s = self.sigma * tau;
        s * s
    }

    /// ℙ_n(M_j) for path length k by direct quadrature of
    /// ∫ N(0,σ²)(Δω)·cos^{2(n−k)}(τΔω/2)·sin^{2k}(τΔω/2) dΔω.
    pub fn p_sequence_quadrature(&self, n: u32, k: u32, tau: f64) -> Result<f64> {
        check_k(n, k)?;
        check_tau(tau)?;
        self.quadrature(n, k, tau, 0.0)
    }

    /// ∫ φ(u)·cos^{2(n−k)}(στu/2)·sin^{2k}(στu/2)·cos(σtu) du over the
    /// standard normal density φ.
    fn quadrature(&self, n: u32, k: u32, tau: f64, t: f64) -> Result<f64> {
        let half_phase = 0.5 * self.sigma * tau;
        let freq = self.sigma * t;
        let norm = 1.0 / sqrt(2.0 * PI);
        let n_cos = (n - k) as u64;
        let n_sin = k as u64;
        let integrand = |u: f64| {
            let (s, c) = (sin(half_phase * u), cos(half_phase * u));
            norm * exp(-0.5 * u * u) * powu(c * c, n_cos) * powu(s * s, n_sin) * cos(freq * u)
        };
        // Panels no wider than half a period of the fastest factor.
        let pieces = ceil(TRUNCATION_SIGMAS * (2.0 * half_phase + freq.abs()) / PI) as usize + 1;
        let half = integrate(integrand, 0.0, TRUNCATION_SIGMAS, pieces.min(50_000), QUADRATURE)?;
        Ok(2.0 * half.value)
    }

    fn m0_sum(&self, n: u32, tau: f64) -> SignedLogSum {
        let mut acc = SignedLogSum::new();
        push_comb_terms(&mut acc, n, 1.0, 0.0, self.sigma * tau, 0.0);
        acc
    }

    /// ℙ_n(M_0), the probability of n identical +x outcomes.
    pub fn p_m0_closed(&self, n: u32, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        if n == 0 || tau == 0.0 {
            return Ok(1.0);
        }
        Ok(self.m0_sum(n, tau).to_f64())
    }

    /// ℙ_n(M_{2^n−1}), the probability of n identical −x outcomes:
    /// 4^−n Σ_r C(2n, r)(−1)^{n−r} exp(−½σ²τ²(n − r)²).
    pub fn p_all_minus_closed(&self, n: u32, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        if n == 0 {
            return Ok(1.0);
        }
        if tau == 0.0 {
            return Ok(0.0);
        }
        let row = ln_binomial_row(2 * n as u64);
        let step = self.sigma * tau;
        let mut acc = SignedLogSum::new();
        for (r, &ln_c) in row.iter().enumerate() {
            let d = n as f64 - r as f64;
            let sign = parity((n as i64 - r as i64).unsigned_abs() as u32);
            acc.push(sign, ln_c - 2.0 * n as f64 * LN_2 - 0.5 * d * d * step * step);
        }
        if acc.retained_fraction() < CANCELLATION_LIMIT {
            return self.quadrature(n, n, tau, 0.0);
        }
        Ok(acc.to_f64())
    }

    /// ℙ_n(M_j) for path length k as Σ_{r=0}^{k} (−1)^{k−r} C(k, r) ℙ_{n−r}(M_0).
    pub fn p_sequence_closed(&self, n: u32, k: u32, tau: f64) -> Result<f64> {
        check_k(n, k)?;
        check_tau(tau)?;
        if k == 0 {
            return self.p_m0_closed(n, tau);
        }
        if tau == 0.0 {
            return Ok(0.0);
        }
        let mut acc = SignedLogSum::new();
        for r in 0..=k {
            let p = self.p_m0_closed(n - r, tau)?;
            if p > 0.0 {
                acc.push(parity(k - r), ln(binomial(k as u64, r as u64)) + ln(p));
            }
        }
        if acc.retained_fraction() < CANCELLATION_LIMIT {
            return self.quadrature(n, k, tau, 0.0);
        }
        Ok(acc.to_f64())
    }

    /// The same probability through the complementary expansion
    /// Σ_{r=0}^{n−k} (−1)^r C(n−k, r) ℙ_{k+r}(M_{2^{k+r}−1}).
    pub fn p_sequence_closed_via_all_minus(&self, n: u32, k: u32, tau: f64) -> Result<f64> {
        check_k(n, k)?;
        check_tau(tau)?;
        if k == n {
            return self.p_all_minus_closed(n, tau);
        }
        let mut acc = SignedLogSum::new();
        for r in 0..=(n - k) {
            let p = self.p_all_minus_closed(k + r, tau)?;
            if p > 0.0 {
                acc.push(parity(r), ln(binomial((n - k) as u64, r as u64)) + ln(p));
            }
        }
        if acc.retained_fraction() < CANCELLATION_LIMIT {
            return self.quadrature(n, k, tau, 0.0);
        }
        Ok(acc.to_f64())
    }

    /// f(n, τ) = √(2 / (2 + nσ²τ²)).
    pub fn narrowing_factor(&self, n: u32, tau: f64) -> f64 {
        sqrt(2.0 / (2.0 + n as f64 * self.phase_variance(tau)))
    }

    /// Large-n ℙ_n(M_0) ≈ f(n, τ).
    pub fn p_m0_large_n(&self, n: u32, tau: f64) -> f64 {
        self.narrowing_factor(n, tau)
    }

    /// Large-n ℙ_n(M_{2^n−1}) ≈ f·exp(−π²f²/4).
    pub fn p_all_minus_large_n(&self, n: u32, tau: f64) -> f64 {
        let f = self.narrowing_factor(n, tau);
        f * exp(-PI * PI * f * f / 4.0)
    }

    /// Large-n ℙ_{n+1}(M_0)/ℙ_n(M_0) ≈ √(1 − σ²τ²/(2 + (n+1)σ²τ²)).
    pub fn adaptive_ratio_m0(&self, n: u32, tau: f64) -> f64 {
        let s2 = self.phase_variance(tau);
        sqrt(1.0 - s2 / (2.0 + (n as f64 + 1.0) * s2))
    }

    /// Large-n ℙ_{n+1}(M_{2^{n+1}−1})/ℙ_n(M_{2^n−1}).
    pub fn adaptive_ratio_all_minus(&self, n: u32, tau: f64) -> f64 {
        let s2 = self.phase_variance(tau);
        let (n0, n1) = (n as f64, n as f64 + 1.0);
        let correction = -n1 * PI * PI / (4.0 + 2.0 * n1 * s2) + n0 * PI * PI / (4.0 + 2.0 * n0 * s2);
        self.adaptive_ratio_m0(n, tau) * exp(correction)
    }

    /// ℙ_{n+1}(M_0)/ℙ_n(M_0) from the closed forms.
    pub fn adaptive_ratio_m0_closed(&self, n: u32, tau: f64) -> Result<f64> {
        Ok(self.p_m0_closed(n + 1, tau)? / self.p_m0_closed(n, tau)?)
    }

    /// ℙ_{n+1}(M_{2^{n+1}−1})/ℙ_n(M_{2^n−1}) from the closed forms.
    pub fn adaptive_ratio_all_minus_closed(&self, n: u32, tau: f64) -> Result<f64> {
        Ok(self.p_all_minus_closed(n + 1, tau)? / self.p_all_minus_closed(n, tau)?)
    }

    /// Unnormalized density of Δω after n results +x:
    /// N(0,σ²)(Δω)·cos^{2n}(τΔω/2), sampled on `grid`.
    pub fn postselected_pdf(&self, n: u32, tau: f64, grid: &[f64]) -> Result<Vec<f64>> {
        check_tau(tau)?;
        let norm = 1.0 / (sqrt(2.0 * PI) * self.sigma);
        Ok(grid
            .iter()
            .map(|&x| {
                let z = x / self.sigma;
                let c = cos(0.5 * tau * x);
                norm * exp(-0.5 * z * z) * powu(c * c, n as u64)
            })
            .collect())
    }

    /// ⟨σ_x(t)⟩ after n results +x:
    /// Σ_r C(2n,r) e^{−½σ²[t+(n−r)τ]²} / Σ_r C(2n,r) e^{−½σ²(n−r)²τ²}.
    pub fn sigma_x_postselected(&self, n: u32, tau: f64, t: f64) -> Result<f64> {
        check_tau(tau)?;
        check_time(t)?;
        let step = self.sigma * tau;
        let mut num = SignedLogSum::new();
        let mut den = SignedLogSum::new();
        push_comb_terms(&mut num, n, 1.0, 0.0, step, self.sigma * t);
        push_comb_terms(&mut den, n, 1.0, 0.0, step, 0.0);
        Ok(exp(num.value().1 - den.value().1))
    }

    /// ⟨σ_x(t)⟩ after any record of n outcomes with path length k, as the
    /// alternating combination of shorter all-(+x) records, falling back to
    /// quadrature when the combination cancels.
    pub fn sigma_x_sequence(&self, n: u32, k: u32, tau: f64, t: f64) -> Result<f64> {
        check_k(n, k)?;
        check_tau(tau)?;
        check_time(t)?;
        if k == 0 {
            return self.sigma_x_postselected(n, tau, t);
        }
        let step = self.sigma * tau;
        let mut num = SignedLogSum::new();
        let mut den = SignedLogSum::new();
        for r in 0..=k {
            let sign = parity(k - r);
            let ln_ck = ln(binomial(k as u64, r as u64));
            push_comb_terms(&mut num, n - r, sign, ln_ck, step, self.sigma * t);
            push_comb_terms(&mut den, n - r, sign, ln_ck, step, 0.0);
        }
        if num.retained_fraction() < CANCELLATION_LIMIT || den.retained_fraction() < CANCELLATION_LIMIT {
            let numerator = self.quadrature(n, k, tau, t)?;
            let denominator = self.p_sequence_closed(n, k, tau)?;
            if denominator <= 0.0 {
                return Err(Error::invalid("k", "record has zero probability at this τ"));
            }
            return Ok(numerator / denominator);
        }
        Ok(num.to_f64() / den.to_f64())
    }

    /// Large-n ⟨σ_x(t)⟩ ≈ exp(−½f²(n,τ)σ²t²).
    pub fn sigma_x_large_n(&self, n: u32, tau: f64, t: f64) -> f64 {
        let f = self.narrowing_factor(n, tau);
        let x = f * self.sigma * t;
        exp(-0.5 * x * x)
    }

    /// T_{1/2} ≈ √(ln 2·(2 + nσ²τ²)/σ²), where the large-n coherence halves.
    pub fn half_decay_time(&self, n: u32, tau: f64) -> f64 {
        sqrt(LN_2 * (2.0 + n as f64 * self.phase_variance(tau))) / self.sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn local_peaks(v: &[f64]) -> usize {
        v.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
    }

    fn env(sigma: f64) -> GaussianEnvironment {
        GaussianEnvironment::new(sigma).unwrap()
    }

    #[test]
    fn rejects_bad_sigma() {
        assert!(GaussianEnvironment::new(0.0).is_err());
        assert!(GaussianEnvironment::new(f64::NAN).is_err());
    }

    #[test]
    fn single_measurement_oracle() {
        // ∫ N(0,σ²) cos²(τx/2) = ½(1 + e^{−σ²τ²/2})
        let g = env(0.7);
        for &tau in &[0.0, 0.5, 2.0, 9.0] {
            let s2 = (0.7f64 * tau).powi(2);
            let plus = 0.5 * (1.0 + (-s2 / 2.0).exp());
            let minus = 0.5 * (1.0 - (-s2 / 2.0).exp());
            assert!((g.p_sequence_quadrature(1, 0, tau).unwrap() - plus).abs() < 1e-12);
            assert!((g.p_sequence_quadrature(1, 1, tau).unwrap() - minus).abs() < 1e-12);
            assert!((g.p_m0_closed(1, tau).unwrap() - plus).abs() < 1e-14);
            assert!((g.p_all_minus_closed(1, tau).unwrap() - minus).abs() < 1e-12);
        }
        assert!((g.p_sequence_quadrature(2, 0, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_phase_limit() {
        // Mean of cos⁴u·sin⁴u over a period is 3/128.
        let g = env(1.0);
        let p = g.p_sequence_quadrature(4, 2, 50.0).unwrap();
        assert!((p - 3.0 / 128.0).abs() < 1e-10, "{p}");
        // Central binomial term survives for M_0.
        let p0 = g.p_m0_closed(5, 60.0).unwrap();
        assert!((p0 - binomial(10, 5) / 1024.0).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_against_quadrature() {
        let g = env(1.3);
        for n in 1..=8u32 {
            for &st in &[0.1, 1.0, 5.0] {
                let tau = st / 1.3;
                let q0 = g.p_sequence_quadrature(n, 0, tau).unwrap();
                let qn = g.p_sequence_quadrature(n, n, tau).unwrap();
                assert!((g.p_m0_closed(n, tau).unwrap() - q0).abs() <= 1e-8 * q0.max(1e-300));
                assert!((g.p_all_minus_closed(n, tau).unwrap() - qn).abs() < 1e-8);
                assert!((g.p_sequence_closed(n, n, tau).unwrap() - g.p_all_minus_closed(n, tau).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn all_minus_identities() {
        let g = env(1.0);
        assert_eq!(g.p_all_minus_closed(3, 0.0).unwrap(), 0.0);
        let ratio = g.p_all_minus_closed(6, 30.0).unwrap() / g.p_m0_closed(6, 30.0).unwrap();
        assert!((ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn both_expansions_agree() {
        let g = env(0.9);
        for n in 1..=10u32 {
            for k in 0..=n {
                for &tau in &[0.3, 1.5, 6.0] {
                    let a = g.p_sequence_closed(n, k, tau).unwrap();
                    let b = g.p_sequence_closed_via_all_minus(n, k, tau).unwrap();
                    assert!((a - b).abs() < 1e-10, "n={n} k={k} tau={tau}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn path_length_completeness() {
        let g = env(1.0);
        for n in 1..=12u32 {
            for &tau in &[0.0, 0.4, 2.0, 20.0] {
                let total: f64 = (0..=n)
                    .map(|k| binomial(n as u64, k as u64) * g.p_sequence_closed(n, k, tau).unwrap())
                    .sum();
                assert!((total - 1.0).abs() < 1e-10, "n={n} tau={tau}: {total}");
            }
        }
    }

    #[test]
    fn m0_decreases_with_n() {
        let g = env(1.0);
        let mut prev = 1.0;
        for n in 1..200u32 {
            let p = g.p_m0_closed(n, 1.5).unwrap();
            assert!(p < prev);
            prev = p;
        }
        // log-space and direct paths meet smoothly at the switch.
        let a = g.p_m0_closed(64, 1.5).unwrap();
        let b = g.p_m0_closed(65, 1.5).unwrap();
        assert!(b < a && b > 0.98 * a);
    }

    #[test]
    fn large_n_forms() {
        let g = env(1.0);
        assert_eq!(g.p_m0_large_n(5, 0.0), 1.0);
        assert!((g.p_all_minus_large_n(5, 0.0) - (-PI * PI / 4.0).exp()).abs() < 1e-15);
        for n in [50u32, 100, 400] {
            let exact = g.p_m0_closed(n, 1.0).unwrap();
            assert!((g.p_m0_large_n(n, 1.0) - exact).abs() / exact < 0.1);
        }
        let big = g.p_all_minus_large_n(10, 1e4) / g.p_m0_large_n(10, 1e4);
        assert!((big - 1.0).abs() < 1e-6);
        // στ ≫ 1: √2/(στ√n)
        let p = g.p_m0_large_n(400, 100.0);
        assert!((p - 2f64.sqrt() / (100.0 * 20.0)).abs() / p < 1e-4);
    }

    #[test]
    fn adaptive_ratios() {
        let g = env(1.0);
        assert_eq!(g.adaptive_ratio_m0(3, 0.0), 1.0);
        assert!(g.adaptive_ratio_m0(100, 4.0) >= 0.99);
        assert!(g.adaptive_ratio_m0(1_000_000, 2.0) > 0.999_999);
        assert!(g.adaptive_ratio_all_minus(1_000_000, 2.0) > 0.999_99);
        for n in [50u32, 80, 150] {
            let exact = g.adaptive_ratio_all_minus_closed(n, 2.0).unwrap();
            assert!((g.adaptive_ratio_all_minus(n, 2.0) - exact).abs() / exact < 0.15);
            let exact0 = g.adaptive_ratio_m0_closed(n, 2.0).unwrap();
            assert!((g.adaptive_ratio_m0(n, 2.0) - exact0).abs() / exact0 < 0.05);
        }
        let s2: f64 = 4.0;
        let n = 7.0;
        let composed = g.adaptive_ratio_m0(7, 2.0)
            * (-(n + 1.0) * PI * PI / (4.0 + 2.0 * (n + 1.0) * s2) + n * PI * PI / (4.0 + 2.0 * n * s2)).exp();
        assert_eq!(g.adaptive_ratio_all_minus(7, 2.0), composed);
    }

    #[test]
    fn postselected_pdf_shapes() {
        let g = env(1.0);
        let grid: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.01).collect();
        let prior = g.postselected_pdf(0, 1.0, &grid).unwrap();
        for (x, p) in grid.iter().zip(&prior) {
            assert!((p - (-x * x / 2.0).exp() / (2.0 * PI).sqrt()).abs() < 1e-15);
        }
        // n = 4, στ = 1: one central peak narrowed to roughly f·σ.
        let post = g.postselected_pdf(4, 1.0, &grid).unwrap();
        let mass: f64 = post.iter().sum();
        let var: f64 = grid.iter().zip(&post).map(|(x, p)| x * x * p).sum::<f64>() / mass;
        let f = g.narrowing_factor(4, 1.0);
        assert!((var.sqrt() - f).abs() < 0.05 * f, "{}", var.sqrt());
        assert_eq!(local_peaks(&post), 1);
    }

    #[test]
    fn sigma_x_limits() {
        let g = env(0.8);
        assert!((g.sigma_x_postselected(5, 2.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        for &t in &[0.3, 1.0, 4.0] {
            let free = g.sigma_x_postselected(0, 2.0, t).unwrap();
            assert!((free - (-0.32 * t * t).exp()).abs() < 1e-15);
            assert!((free - (-(t / g.t2_star()).powi(2)).exp()).abs() < 1e-14);
            assert!((g.sigma_x_sequence(4, 0, 2.0, t).unwrap() - g.sigma_x_postselected(4, 2.0, t).unwrap()).abs() < 1e-15);
        }
        for k in 0..=4 {
            assert!((g.sigma_x_sequence(4, k, 2.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_x_sequence_against_quadrature() {
        let g = env(1.0);
        for k in 0..=4u32 {
            for &tau in &[0.5, 2.7, 8.0] {
                let den = g.p_sequence_quadrature(4, k, tau).unwrap();
                for &t in &[0.0, 0.9, 2.7, 6.0] {
                    let num = g.quadrature(4, k, tau, t).unwrap();
                    let got = g.sigma_x_sequence(4, k, tau, t).unwrap();
                    assert!((got - num / den).abs() < 1e-8, "k={k} tau={tau} t={t}: {got} vs {}", num / den);
                    assert!(got.abs() <= 1.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn sigma_x_all_minus_rotates_to_minus_x() {
        let g = env(1.0);
        // Teeth of width ~1/(τ√n) leave e^{−1/n} of the contrast at t = τ.
        assert!((g.sigma_x_sequence(4, 0, 8.0, 8.0).unwrap() - (-0.25f64).exp()).abs() < 0.03);
        assert!((g.sigma_x_sequence(4, 4, 8.0, 8.0).unwrap() + (-0.25f64).exp()).abs() < 0.03);
        let mut prev = 0.0;
        for n in [2u32, 8, 32] {
            let v = g.sigma_x_sequence(n, n, 12.0, 12.0).unwrap();
            assert!(v < prev, "n={n}: {v}");
            prev = v;
        }
        assert!(prev < -0.95);
    }

    #[test]
    fn sigma_x_revivals() {
        let g = env(1.0);
        let tau = 6.0;
        let at = |t: f64| g.sigma_x_postselected(4, tau, t).unwrap();
        for m in 1..=3 {
            let t = m as f64 * tau;
            assert!(at(t) > at(t - 0.5) && at(t) > at(t + 0.5), "revival near {t}");
        }
    }

    #[test]
    fn large_n_coherence_and_half_decay() {
        let g = env(1.0);
        assert_eq!(g.sigma_x_large_n(10, 1.0, 0.0), 1.0);
        assert!((g.sigma_x_large_n(0, 1.0, 1.3) - (-0.5f64 * 1.69).exp()).abs() < 1e-15);
        assert!((g.half_decay_time(0, 3.0) - (2.0 * LN_2).sqrt()).abs() < 1e-15);
        assert!((g.half_decay_time(100, 2.0) - (LN_2 * 402.0).sqrt()).abs() < 1e-12);
        assert!((g.half_decay_time(100, 2.0) - 16.69).abs() < 0.01);
        let n = 60u32;
        let t_half = g.half_decay_time(n, 1.0);
        for i in 0..=40 {
            let t = 2.0 * t_half * i as f64 / 40.0;
            let a = g.sigma_x_large_n(n, 1.0, t);
            let b = g.sigma_x_postselected(n, 1.0, t).unwrap();
            assert!((a - b).abs() < 0.05, "t={t}: {a} vs {b}");
        }
    }
}
