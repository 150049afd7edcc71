//! Scalar helpers shared by the engines: `libm` wrappers (the crate is
//! `no_std`), binomial coefficients and sign-aware log-sum-exp.

use alloc::vec::Vec;

pub use core::f64::consts::{LN_2, PI, TAU};

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `x^k` by binary exponentiation.
#[inline]
pub fn powu(mut x: f64, mut k: u64) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}

/// `2^-n` without rounding (for `n` up to 1074).
#[inline]
pub fn exp2_neg(n: u32) -> f64 {
    libm::ldexp(1.0, -(n as i32))
}

/// ln C(m, r).
pub fn ln_binomial(m: u64, r: u64) -> f64 {
    debug_assert!(r <= m);
    if r == 0 || r == m {
        return 0.0;
    }
    ln_gamma(m as f64 + 1.0) - ln_gamma(r as f64 + 1.0) - ln_gamma((m - r) as f64 + 1.0)
}

/// The full row C(m, 0..=m) by the multiplicative recurrence.
///
/// Accurate to a few ulps while the entries fit in an `f64`; callers switch to
/// [`ln_binomial`] long before `m` reaches the overflow point (~1030).
pub fn binomial_row(m: u64) -> Vec<f64> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = 1.0;
    row.push(c);
    for r in 0..m {
        c = c * (m - r) as f64 / (r + 1) as f64;
        row.push(c);
    }
    row
}

/// C(m, r) as a float.
pub fn binomial(m: u64, r: u64) -> f64 {
    if r > m {
        return 0.0;
    }
    let r = r.min(m - r);
    let mut c = 1.0;
    for i in 0..r {
        c = c * (m - i) as f64 / (i + 1) as f64;
    }
    c
}

/// A sum of signed terms represented as `sign · exp(log_magnitude)`.
///
/// Keeps a running log-domain maximum so no term overflows, and remembers the
/// largest term so callers can tell when the sum has cancelled away most of
/// its significant digits.
#[derive(Debug, Clone)]
pub struct SignedLogSum {
    terms: Vec<(f64, f64)>,
}

impl Default for SignedLogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl SignedLogSum {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    /// Add `sign · exp(log_mag)`. Terms with `log_mag = -inf` are dropped.
    pub fn push(&mut self, sign: f64, log_mag: f64) {
        if log_mag == f64::NEG_INFINITY || sign == 0.0 {
            return;
        }
        self.terms.push((sign.signum(), log_mag));
    }

    /// Largest term magnitude, as a log.
    pub fn log_max_term(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(_, l)| l)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The sum as `(sign, ln|sum|)`; `(0, -inf)` when empty or exactly zero.
    pub fn value(&self) -> (f64, f64) {
        let m = self.log_max_term();
        if m == f64::NEG_INFINITY {
            return (0.0, f64::NEG_INFINITY);
        }
        let scaled: f64 = self.terms.iter().map(|&(s, l)| s * exp(l - m)).sum();
        if scaled == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        (scaled.signum(), m + ln(scaled.abs()))
    }

    /// The sum as a plain float (may underflow to zero).
    pub fn to_f64(&self) -> f64 {
        let (s, l) = self.value();
        s * exp(l)
    }

    /// `|sum| / max|term|`, 1 for a sum without cancellation.
    pub fn retained_fraction(&self) -> f64 {
        let m = self.log_max_term();
        if m == f64::NEG_INFINITY {
            return 1.0;
        }
        let (_, l) = self.value();
        exp(l - m)
    }
}

/// Relative cancellation below which alternating closed forms are abandoned.
pub const CANCELLATION_LIMIT: f64 = 1e-6;

/// Plain log-sum-exp over an iterator of logs.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(logs: I) -> f64 {
    let mut acc = SignedLogSum::new();
    for l in logs {
        acc.push(1.0, l);
    }
    acc.value().1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_rows_match_pascal() {
        let mut row: Vec<u128> = alloc::vec![1];
        for m in 1..=60u64 {
            let mut next = alloc::vec![1u128; m as usize + 1];
            for r in 1..m as usize {
                next[r] = row[r - 1] + row[r];
            }
            row = next;
            let fl = binomial_row(m);
            for (r, &exact) in row.iter().enumerate() {
                let rel = (fl[r] - exact as f64).abs() / exact as f64;
                assert!(rel < 1e-14, "C({m},{r})");
                assert!((binomial(m, r as u64) - exact as f64).abs() / (exact as f64) < 1e-14);
            }
        }
    }

    #[test]
    fn ln_binomial_tracks_direct() {
        for &(m, r) in &[(10u64, 3u64), (128, 64), (500, 17)] {
            let direct = ln(binomial(m, r));
            assert!((ln_binomial(m, r) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn signed_sum_cancellation() {
        let mut s = SignedLogSum::new();
        s.push(1.0, ln(3.0));
        s.push(-1.0, ln(2.0));
        assert!((s.to_f64() - 1.0).abs() < 1e-15);
        assert!((s.retained_fraction() - 1.0 / 3.0).abs() < 1e-15);

        let mut big = SignedLogSum::new();
        big.push(1.0, 1000.0);
        big.push(1.0, 1000.0);
        assert!((big.value().1 - (1000.0 + LN_2)).abs() < 1e-12);
    }

    #[test]
    fn powu_matches_repeated_product() {
        let x = 0.93_f64;
        let mut p = 1.0;
        for k in 0..40u64 {
            assert!((powu(x, k) - p).abs() <= 1e-15 * p.max(1e-300));
            p *= x;
        }
        assert_eq!(exp2_neg(20), 1.0 / 1048576.0);
    }
}
