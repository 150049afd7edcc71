//! Enumeration of Δω over all 2^N configurations.
//!
//! Configuration α is split as `α = (block << low_bits) | low`. Partial sums
//! over the low and high bits are tabulated once, so each Δω_α costs a single
//! addition and never depends on how the configuration space is traversed.
//! Blocks are combined with a fixed binary tree over block indices; with the
//! `parallel` feature the two halves of each tree node run under
//! `rayon::join`, which changes where the work runs but not the order of any
//! floating-point operation.

use alloc::vec::Vec;
use core::ops::Range;

use crate::bath::{spin_sign, BathRealization, FieldRegime, MAX_SPINS};
use crate::error::{Error, Result};

/// Spins handled by the low (inner-loop) table.
const MAX_LOW_BITS: usize = 12;

#[derive(Debug, Clone)]
pub(crate) struct SplitSpectrum {
    low: Vec<f64>,
    high: Vec<f64>,
    low_bits: usize,
    n_spins: usize,
}

impl SplitSpectrum {
    pub(crate) fn new(bath: &BathRealization, regime: FieldRegime) -> Result<Self> {
        regime.validate()?;
        Self::from_amplitudes(&bath.amplitudes(regime))
    }

    pub(crate) fn from_amplitudes(amps: &[f64]) -> Result<Self> {
        let n = amps.len();
        if n > MAX_SPINS {
            return Err(Error::Capacity {
                n_spins: n,
                max: MAX_SPINS,
            });
        }
        let low_bits = n.min(MAX_LOW_BITS);
        let low = partial_sums(&amps[..low_bits]);
        let high = partial_sums(&amps[low_bits..]);
        Ok(Self {
            low,
            high,
            low_bits,
            n_spins: n,
        })
    }

    pub(crate) fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub(crate) fn n_blocks(&self) -> usize {
        self.high.len()
    }

    pub(crate) fn low(&self) -> &[f64] {
        &self.low
    }

    pub(crate) fn high(&self, block: usize) -> f64 {
        self.high[block]
    }

    #[inline]
    pub(crate) fn value(&self, config: u64) -> f64 {
        let low = (config as usize) & ((1usize << self.low_bits) - 1);
        let block = (config >> self.low_bits) as usize;
        self.high[block] + self.low[low]
    }

    /// Iterate Δω over one block in configuration order.
    pub(crate) fn block(&self, block: usize) -> impl Iterator<Item = f64> + '_ {
        let h = self.high[block];
        self.low.iter().map(move |&l| h + l)
    }

    pub(crate) fn min_max(&self) -> (f64, f64) {
        let fold = |v: &[f64]| v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let (lmin, lmax) = fold(&self.low);
        let (hmin, hmax) = fold(&self.high);
        (hmin + lmin, hmax + lmax)
    }
}

/// Σ_k σ(k)·a_k for every sign pattern of `amps`, summed in ascending k.
fn partial_sums(amps: &[f64]) -> Vec<f64> {
    (0..1u64 << amps.len())
        .map(|pattern| {
            amps.iter()
                .enumerate()
                .map(|(k, &a)| spin_sign(pattern, k) * a)
                .sum()
        })
        .collect()
}

/// Reduce `leaf(i)` for every `i` in `range` with a balanced binary tree whose
/// shape depends only on the range.
pub(crate) fn tree_reduce<T, L, C>(range: Range<usize>, leaf: &L, combine: &C) -> T
where
    T: Send,
    L: Fn(usize) -> T + Sync,
    C: Fn(T, T) -> T + Sync,
{
    debug_assert!(!range.is_empty());
    if range.len() == 1 {
        return leaf(range.start);
    }
    let mid = range.start + range.len() / 2;
    let (a, b) = join(
        || tree_reduce(range.start..mid, leaf, combine),
        || tree_reduce(mid..range.end, leaf, combine),
    );
    combine(a, b)
}

#[cfg(feature = "parallel")]
fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    (a(), b())
}
