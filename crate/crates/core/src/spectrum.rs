//! The Δω spectrum of a finite bath: enumeration, histograms and Gaussian
//! width.

use alloc::vec;
use alloc::vec::Vec;

use crate::bath::{BathRealization, FieldRegime};
use crate::enumerate::{tree_reduce, SplitSpectrum};
use crate::error::{Error, Result};
use crate::math::{exp, exp2_neg, floor, ln, sqrt};
use crate::units::angular_frequency_of_energy;

/// Bin count used for coarse-grained histograms unless told otherwise.
pub const DEFAULT_BINS: usize = 40;

/// Energy resolution for direct counting of Δω values, in neV (5×10⁻⁵ μeV).
pub const DIRECT_COUNT_RESOLUTION_NEV: f64 = 0.05;

/// [`DIRECT_COUNT_RESOLUTION_NEV`] in rad/μs.
pub fn direct_count_resolution() -> f64 {
    angular_frequency_of_energy(DIRECT_COUNT_RESOLUTION_NEV)
}

/// Every configuration's Δω_α with its prior weight 2^−N, in configuration
/// order.
#[derive(Debug, Clone)]
pub struct SpectrumIter {
    split: SplitSpectrum,
    next: u64,
    end: u64,
    weight: f64,
}

impl Iterator for SpectrumIter {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        if self.next >= self.end {
            return None;
        }
        let v = self.split.value(self.next);
        self.next += 1;
        Some((v, self.weight))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

pub fn enumerate_spectrum(bath: &BathRealization, regime: FieldRegime) -> Result<SpectrumIter> {
    let split = SplitSpectrum::new(bath, regime)?;
    let n = split.n_spins() as u32;
    Ok(SpectrumIter {
        split,
        next: 0,
        end: 1u64 << n,
        weight: exp2_neg(n),
    })
}

/// Probability mass of Δω on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseDistribution {
    bin_edges: Vec<f64>,
    densities: Vec<f64>,
}

impl CoarseDistribution {
    /// `n_bins + 1` ascending edges.
    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    /// Probability mass per bin.
    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn n_bins(&self) -> usize {
        self.densities.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.bin_edges[self.n_bins()] - self.bin_edges[0]) / self.n_bins() as f64
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Mass divided by bin width, i.e. a probability density per rad/μs.
    pub fn pdf(&self) -> Vec<f64> {
        let w = self.bin_width();
        self.densities.iter().map(|d| d / w).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.densities.iter().sum()
    }

    /// Bin indices of local maxima holding at least `min_fraction` of the
    /// tallest bin.
    pub fn peaks(&self, min_fraction: f64) -> Vec<usize> {
        local_maxima(&self.densities, min_fraction)
    }
}

/// Uniform binning of `[lo, hi]` into `n` bins, mirror-symmetric about the
/// midpoint: x and its reflection land in reflected bins.
#[derive(Debug, Clone, Copy)]
struct Binning {
    mid: f64,
    width: f64,
    n: usize,
}

impl Binning {
    fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n_bins", "need at least two bins"));
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid("spectrum", "values must be finite"));
        }
        if !(hi > lo) {
            return Err(Error::invalid("spectrum", "all values coincide, so there is no range to bin"));
        }
        Ok(Self {
            mid: 0.5 * (lo + hi),
            width: (hi - lo) / n as f64,
            n,
        })
    }

    fn index(&self, x: f64) -> usize {
        let y = (x - self.mid) / self.width;
        let d = y.abs();
        let half = self.n / 2;
        let idx = if self.n.is_multiple_of(2) {
            let f = floor(d) as i64;
            if y >= 0.0 {
                half as i64 + f
            } else {
                half as i64 - 1 - f
            }
        } else if d < 0.5 {
            half as i64
        } else {
            let f = floor(d + 0.5) as i64;
            if y > 0.0 {
                half as i64 + f
            } else {
                half as i64 - f
            }
        };
        idx.clamp(0, self.n as i64 - 1) as usize
    }

    fn edges(&self) -> Vec<f64> {
        let lo = self.mid - 0.5 * self.n as f64 * self.width;
        (0..=self.n)
            .map(|i| lo + i as f64 * self.width)
            .collect()
    }
}

/// Histogram any re-iterable `(Δω, weight)` stream: one pass for the range,
/// one to fill, so nothing is stored beyond the bins.
pub fn coarse_grain<I>(spectrum: I, n_bins: usize) -> Result<CoarseDistribution>
where
    I: IntoIterator<Item = (f64, f64)> + Clone,
{
    if n_bins < 2 {
        return Err(Error::invalid("n_bins", "need at least two bins"));
    }
    let (lo, hi) = spectrum
        .clone()
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (x, _)| (a.min(x), b.max(x)));
    let binning = Binning::new(lo, hi, n_bins)?;
    let mut densities = vec![0.0; n_bins];
    for (x, w) in spectrum {
        densities[binning.index(x)] += w;
    }
    Ok(CoarseDistribution {
        bin_edges: binning.edges(),
        densities,
    })
}

/// [`coarse_grain`] of the full enumerated spectrum, with integer bin counts
/// accumulated per block and merged in a fixed order.
pub fn coarse_grain_spectrum(bath: &BathRealization, regime: FieldRegime, n_bins: usize) -> Result<CoarseDistribution> {
    let split = SplitSpectrum::new(bath, regime)?;
    let (lo, hi) = split.min_max();
    let binning = Binning::new(lo, hi, n_bins)?;
    let counts = tree_reduce(
        0..split.n_blocks(),
        &|b| {
            let mut c = vec![0u64; n_bins];
            for x in split.block(b) {
                c[binning.index(x)] += 1;
            }
            c
        },
        &|mut a: Vec<u64>, b: Vec<u64>| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    let weight = exp2_neg(split.n_spins() as u32);
    Ok(CoarseDistribution {
        bin_edges: binning.edges(),
        densities: counts.into_iter().map(|c| c as f64 * weight).collect(),
    })
}

/// Σ_α Δω_α² / 2^N by enumeration.
pub fn enumerated_second_moment(bath: &BathRealization, regime: FieldRegime) -> Result<f64> {
    let split = SplitSpectrum::new(bath, regime)?;
    let total = tree_reduce(
        0..split.n_blocks(),
        &|b| split.block(b).map(|x| x * x).sum::<f64>(),
        &|a, b| a + b,
    );
    Ok(total * exp2_neg(split.n_spins() as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    /// σ² = Σ_k c_k², the exact variance.
    Moment,
    /// Zero-mean Gaussian fitted to the coarse histogram by least squares.
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub sigma: f64,
    pub method: FitMethod,
}

impl GaussianFit {
    /// T2* = √2/σ.
    pub fn t2_star(&self) -> f64 {
        sqrt(2.0) / self.sigma
    }
}

/// √(Σ_k c_k²), no enumeration needed.
pub fn moment_sigma(bath: &BathRealization, regime: FieldRegime) -> Result<f64> {
    regime.validate()?;
    let s = sqrt(bath.second_moment(regime));
    if !(s > 0.0) {
        return Err(Error::invalid("bath", "all couplings vanish in this regime"));
    }
    Ok(s)
}

pub fn fit_sigma(bath: &BathRealization, regime: FieldRegime, method: FitMethod) -> Result<GaussianFit> {
    let moment = moment_sigma(bath, regime)?;
    let sigma = match method {
        FitMethod::Moment => moment,
        FitMethod::LeastSquares => {
            let dist = coarse_grain_spectrum(bath, regime, DEFAULT_BINS)?;
            fit_histogram(&dist, moment)?
        }
    };
    Ok(GaussianFit { sigma, method })
}

/// Least-squares σ of A·exp(−x²/2σ²) against the histogram's pdf, searching
/// σ within a factor of ten of `sigma_guess`. The amplitude A is eliminated
/// in closed form.
pub fn fit_histogram(dist: &CoarseDistribution, sigma_guess: f64) -> Result<f64> {
    if !(sigma_guess > 0.0) || !sigma_guess.is_finite() {
        return Err(Error::invalid("sigma_guess", "must be positive and finite"));
    }
    let x = dist.bin_centers();
    let y = dist.pdf();
    let residual = |ln_sigma: f64| {
        let s = exp(ln_sigma);
        let (mut yg, mut gg) = (0.0, 0.0);
        for (xi, yi) in x.iter().zip(&y) {
            let z = xi / s;
            let g = exp(-0.5 * z * z);
            yg += yi * g;
            gg += g * g;
        }
        if gg == 0.0 {
            f64::INFINITY
        } else {
            -(yg * yg) / gg
        }
    };

    // Coarse scan, then golden-section refinement around the best point.
    const SCAN: usize = 200;
    let (a, b) = (ln(sigma_guess) - ln(10.0), ln(sigma_guess) + ln(10.0));
    let step = (b - a) / SCAN as f64;
    let best = (0..=SCAN)
        .map(|i| (i, residual(a + i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc })
        .0;
    let mut lo = a + best.saturating_sub(1) as f64 * step;
    let mut hi = a + (best + 1).min(SCAN) as f64 * step;
    let g = 0.5 * (sqrt(5.0) - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (residual(c), residual(d));
    for _ in 0..100 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = residual(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = residual(d);
        }
    }
    Ok(exp(0.5 * (lo + hi)))
}

/// Indices of local maxima of `values` at or above `min_fraction` of the
/// global maximum. A flat top counts once, at its middle.
pub fn local_maxima(values: &[f64], min_fraction: f64) -> Vec<usize> {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor_level = min_fraction * top;
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] == values[i] {
            j += 1;
        }
        let rises = i == 0 || values[i - 1] < values[i];
        let falls = j + 1 == values.len() || values[j + 1] < values[j];
        if rises && falls && values[i] >= floor_level && values[i] > 0.0 {
            peaks.push((i + j) / 2);
        }
        i = j + 1;
    }
    peaks
}
