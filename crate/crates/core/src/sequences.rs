//! Measurement records and measurement models.
//!
//! A run of n measurements is stored as an integer label j in `[0, 2^n)`. Bit
//! i of j (least significant first) is the outcome of measurement i + 1:
//! 0 for +x, 1 for −x. Written as a binary string with the most significant
//! bit first, the earliest measurement is therefore the last digit, so
//! `"0011"` means the first two outcomes were −x.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sin;

/// Longest sequence whose label fits in a `u64`.
pub const MAX_MEASUREMENTS: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Projection on |+x⟩, digit `0`.
    Plus,
    /// Projection on |−x⟩, digit `1`.
    Minus,
}

/// A recorded sequence M_j of n outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementSequence {
    n: u32,
    label: u64,
}

impl MeasurementSequence {
    pub fn new(n: u32, label: u64) -> Result<Self> {
        check_n(n)?;
        if label >> n != 0 {
            return Err(Error::invalid("j", "label must be below 2^n"));
        }
        Ok(Self { n, label })
    }

    /// All-(+x) sequence M_0.
    pub fn all_plus(n: u32) -> Result<Self> {
        Self::new(n, 0)
    }

    /// All-(−x) sequence M_{2^n − 1}.
    pub fn all_minus(n: u32) -> Result<Self> {
        check_n(n)?;
        Self::new(n, low_mask(n))
    }

    /// Parse a binary label such as `"0011"` (most significant digit first).
    pub fn from_binary(digits: &str) -> Result<Self> {
        let n = u32::try_from(digits.len()).map_err(|_| Error::invalid("seq", "too long"))?;
        check_n(n)?;
        let mut label = 0u64;
        for ch in digits.chars() {
            label <<= 1;
            match ch {
                '0' => {}
                '1' => label |= 1,
                _ => return Err(Error::invalid("seq", "binary label may contain only 0 and 1")),
            }
        }
        Self::new(n, label)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    /// Number of −x outcomes.
    pub fn path_length(&self) -> u32 {
        self.label.count_ones()
    }

    /// Outcome of the measurement with zero-based index `step`.
    pub fn outcome(&self, step: u32) -> Option<Outcome> {
        if step >= self.n {
            return None;
        }
        Some(if (self.label >> step) & 1 == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        })
    }

    /// Outcomes in the order they were measured.
    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        (0..self.n).filter_map(move |i| self.outcome(i))
    }

    /// `n` binary digits, most significant first.
    pub fn binary_label(&self) -> String {
        binary_label(self.label, self.n)
    }
}

impl core::fmt::Display for MeasurementSequence {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.binary_label())
    }
}

fn check_n(n: u32) -> Result<()> {
    if n > MAX_MEASUREMENTS {
        return Err(Error::invalid("n", "at most 63 measurements fit in a label"));
    }
    Ok(())
}

fn low_mask(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

/// Render `label` as `n` binary digits, most significant first.
pub fn binary_label(label: u64, n: u32) -> String {
    (0..n)
        .rev()
        .map(|i| if (label >> i) & 1 == 0 { '0' } else { '1' })
        .collect()
}

/// k(j), the number of −x outcomes in M_j.
pub fn path_length(j: u64, n: u32) -> Result<u32> {
    Ok(MeasurementSequence::new(n, j)?.path_length())
}

/// Labels j < 2^n with exactly `k` set bits, ascending.
pub fn labels_with_path_length(n: u32, k: u32) -> Result<SameWeightLabels> {
    check_n(n)?;
    if k > n {
        return Err(Error::invalid("k", "path length cannot exceed n"));
    }
    Ok(SameWeightLabels {
        next: Some(low_mask(k)),
        limit: low_mask(n),
        k,
    })
}

/// [`labels_with_path_length`] collected into a vector. There are C(n, k) of
/// them, so keep n moderate.
pub fn sequences_with_path_length(n: u32, k: u32) -> Result<Vec<u64>> {
    Ok(labels_with_path_length(n, k)?.collect())
}

/// Ascending enumeration of fixed-popcount labels (Gosper's hack).
#[derive(Debug, Clone)]
pub struct SameWeightLabels {
    next: Option<u64>,
    limit: u64,
    k: u32,
}

impl Iterator for SameWeightLabels {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        if cur > self.limit {
            self.next = None;
            return None;
        }
        self.next = if self.k == 0 || cur == self.limit {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.checked_add(c);
            r.map(|r| (((r ^ cur) >> 2) / c) | r)
        };
        Some(cur)
    }
}

/// How each ±x measurement acts on the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementModel {
    Projective,
    /// Unsharp commuting two-outcome POVM, M_± = (cos θ·I ± sin θ·σ_x)/√2,
    /// with 0 < θ ≤ π/4. θ = π/4 is the projective limit.
    WeakPovm { theta: f64 },
}

impl MeasurementModel {
    pub fn weak(theta: f64) -> Result<Self> {
        let m = MeasurementModel::WeakPovm { theta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasurementModel::WeakPovm { theta } = *self {
            if !(theta > 0.0 && theta <= core::f64::consts::FRAC_PI_4) {
                return Err(Error::invalid("theta", "POVM strength must lie in (0, π/4]"));
            }
        }
        Ok(())
    }

    /// Contrast factor multiplying cos(Δω·τ): 1 for projective, sin 2θ otherwise.
    pub fn sharpness(&self) -> f64 {
        match *self {
            MeasurementModel::Projective => 1.0,
            MeasurementModel::WeakPovm { theta } => sin(2.0 * theta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_length_examples() {
        assert_eq!(path_length(0, 4).unwrap(), 0);
        assert_eq!(path_length(15, 4).unwrap(), 4);
        assert_eq!(path_length(3, 4).unwrap(), 2);
        assert!(path_length(16, 4).is_err());
        assert!(path_length(0, 64).is_err());
    }

    #[test]
    fn labels_by_path_length() {
        assert_eq!(sequences_with_path_length(4, 1).unwrap(), [1, 2, 4, 8]);
        assert_eq!(sequences_with_path_length(4, 0).unwrap(), [0]);
        assert_eq!(sequences_with_path_length(3, 2).unwrap(), [3, 5, 6]);
        assert_eq!(sequences_with_path_length(3, 3).unwrap(), [7]);
        assert_eq!(sequences_with_path_length(0, 0).unwrap(), [0]);
        assert!(sequences_with_path_length(3, 4).is_err());
        assert_eq!(labels_with_path_length(63, 63).unwrap().collect::<Vec<_>>(), [u64::MAX >> 1]);
        assert_eq!(labels_with_path_length(63, 1).unwrap().count(), 63);
    }

    #[test]
    fn partition_and_complement() {
        for n in 0..=10u32 {
            let mut all: Vec<u64> = (0..=n).flat_map(|k| sequences_with_path_length(n, k).unwrap()).collect();
            assert_eq!(all.len(), 1 << n);
            all.sort_unstable();
            assert!(all.iter().enumerate().all(|(i, &j)| i as u64 == j));
            for k in 0..=n {
                let mut flipped: Vec<u64> = sequences_with_path_length(n, n - k)
                    .unwrap()
                    .into_iter()
                    .map(|j| j ^ low_mask(n))
                    .collect();
                flipped.sort_unstable();
                assert_eq!(flipped, sequences_with_path_length(n, k).unwrap());
            }
        }
    }

    #[test]
    fn binary_labels_and_outcome_order() {
        let m3 = MeasurementSequence::new(4, 3).unwrap();
        assert_eq!(m3.binary_label(), "0011");
        assert_eq!(
            m3.outcomes().collect::<Vec<_>>(),
            [Outcome::Minus, Outcome::Minus, Outcome::Plus, Outcome::Plus]
        );
        assert_eq!(MeasurementSequence::from_binary("0011").unwrap(), m3);
        assert_eq!(MeasurementSequence::all_minus(4).unwrap().label(), 15);
        assert!(MeasurementSequence::from_binary("01a").is_err());
        assert_eq!(MeasurementSequence::from_binary("").unwrap().n(), 0);
    }

    #[test]
    fn povm_strength() {
        assert_eq!(MeasurementModel::weak(core::f64::consts::FRAC_PI_4).unwrap().sharpness(), 1.0);
        assert!(MeasurementModel::weak(0.0).is_err());
        assert!(MeasurementModel::weak(1.0).is_err());
        assert!((MeasurementModel::weak(0.3).unwrap().sharpness() - sin(0.6)).abs() < 1e-16);
    }
}
