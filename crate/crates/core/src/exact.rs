//! Exact quasi-static engine: full enumeration over the 2^N bath
//! configurations.
//!
//! With the bath frozen, configuration α simply biases a coin. One
//! measurement cycle of duration τ gives +x with probability
//! A⁺_α = cos²(Δω_α τ/2) and −x with A⁻_α = sin²(Δω_α τ/2) (for a weak POVM of
//! strength θ: ½[1 ± sin 2θ·cos(Δω_α τ)]). After n outcomes containing k
//! results −x the unnormalized weight of α is
//!
//! ```text
//! p_α = 2^−N · (A⁺_α)^(n−k) · (A⁻_α)^k
//! ```
//!
//! which depends on the record only through k. Sequence probabilities are sums
//! of these weights, and the coherence of a qubit interacting with the
//! post-selected bath is W(t) = Σ_α p_α e^{−iΔω_α t} / Σ_α p_α.

use alloc::vec;
use alloc::vec::Vec;

use crate::bath::{BathRealization, FieldRegime};
use crate::enumerate::{tree_reduce, SplitSpectrum};
use crate::error::{Error, Result};
use crate::math::{cos, exp, exp2_neg, ln, powu, sin};
use crate::sequences::{MeasurementModel, MeasurementSequence, Outcome};

/// Above this many measurements the per-configuration weights are formed in
/// log space.
pub const DIRECT_POWER_LIMIT: u32 = 64;

/// Time points evaluated per enumeration pass in [`PosteriorState::coherence`].
const TIME_CHUNK: usize = 64;

/// Single-cycle outcome probability A^±_α(τ) for a configuration with
/// splitting `delta_omega`.
pub fn a_coeff(outcome: Outcome, delta_omega: f64, tau: f64, model: MeasurementModel) -> f64 {
    let (plus, minus) = a_pair(delta_omega, tau, model.sharpness());
    match outcome {
        Outcome::Plus => plus,
        Outcome::Minus => minus,
    }
}

/// (A⁺, A⁻) = ½(1 − s) + s·(cos², sin²)(Δω τ/2); exactly (cos², sin²) when s = 1.
#[inline]
fn a_pair(delta_omega: f64, tau: f64, sharpness: f64) -> (f64, f64) {
    let half = 0.5 * delta_omega * tau;
    let (s, c) = (sin(half), cos(half));
    let floor = 0.5 * (1.0 - sharpness);
    (floor + sharpness * c * c, floor + sharpness * s * s)
}

/// (A⁺)^(n−k)·(A⁻)^k.
#[inline]
fn config_weight(plus: f64, minus: f64, n: u32, k: u32) -> f64 {
    let n_plus = n - k;
    if n <= DIRECT_POWER_LIMIT {
        return powu(plus, n_plus as u64) * powu(minus, k as u64);
    }
    let mut log_w = 0.0;
    if n_plus > 0 {
        log_w += n_plus as f64 * ln(plus);
    }
    if k > 0 {
        log_w += k as f64 * ln(minus);
    }
    exp(log_w)
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid("tau", "evolution time must be finite and non-negative"));
    }
    Ok(())
}

fn check_k(n: u32, k: u32) -> Result<()> {
    if k > n {
        return Err(Error::invalid("k", "path length cannot exceed the number of measurements"));
    }
    Ok(())
}

/// Sampled decoherence function W(t).
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceCurve {
    pub times: Vec<f64>,
    pub w_re: Vec<f64>,
    pub w_im: Vec<f64>,
}

impl CoherenceCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// First time at which Re W falls to `level`, linearly interpolated
    /// between samples. `None` if it never does.
    pub fn first_crossing(&self, level: f64) -> Option<f64> {
        first_crossing(&self.times, &self.w_re, level)
    }
}

/// First downward crossing of `level` by `values` sampled at `times`.
pub fn first_crossing(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    let first = *values.first()?;
    if first <= level {
        return Some(times[0]);
    }
    values.windows(2).zip(times.windows(2)).find_map(|(v, t)| {
        if v[1] <= level {
            let frac = (v[0] - level) / (v[0] - v[1]);
            Some(t[0] + frac * (t[1] - t[0]))
        } else {
            None
        }
    })
}

/// Enumeration engine for one bath, field regime and measurement model.
#[derive(Debug, Clone)]
pub struct ExactEngine {
    bath: BathRealization,
    regime: FieldRegime,
    model: MeasurementModel,
    split: SplitSpectrum,
}

impl ExactEngine {
    pub fn new(bath: &BathRealization, regime: FieldRegime, model: MeasurementModel) -> Result<Self> {
        model.validate()?;
        let split = SplitSpectrum::new(bath, regime)?;
        Ok(Self {
            bath: bath.clone(),
            regime,
            model,
            split,
        })
    }

    pub fn bath(&self) -> &BathRealization {
        &self.bath
    }

    pub fn regime(&self) -> FieldRegime {
        self.regime
    }

    pub fn model(&self) -> MeasurementModel {
        self.model
    }

    /// Prior weight 2^−N of every configuration.
    pub fn prior_weight(&self) -> f64 {
        exp2_neg(self.split.n_spins() as u32)
    }

    /// Δω_α as used by the engine.
    pub fn delta_omega(&self, config: u64) -> Result<f64> {
        if config >= self.bath.n_configs() {
            return Err(Error::invalid("config", "configuration index exceeds 2^N − 1"));
        }
        Ok(self.split.value(config))
    }

    fn reduce_blocks<T, L, C>(&self, leaf: L, combine: C) -> T
    where
        T: Send,
        L: Fn(usize) -> T + Sync,
        C: Fn(T, T) -> T + Sync,
    {
        tree_reduce(0..self.split.n_blocks(), &leaf, &combine)
    }

    /// Σ_α (A⁺_α)^(n−k)(A⁻_α)^k, without the prior factor.
    fn weight_sum(&self, n: u32, k: u32, tau: f64) -> f64 {
        let s = self.model.sharpness();
        self.reduce_blocks(
            |b| {
                self.split
                    .block(b)
                    .map(|dw| {
                        let (p, m) = a_pair(dw, tau, s);
                        config_weight(p, m, n, k)
                    })
                    .sum::<f64>()
            },
            |a, b| a + b,
        )
    }

    /// ℙ_n(M_j) for any record of n outcomes with path length k.
    pub fn sequence_probability(&self, n: u32, k: u32, tau: f64) -> Result<f64> {
        check_k(n, k)?;
        check_tau(tau)?;
        Ok(self.prior_weight() * self.weight_sum(n, k, tau))
    }

    /// Probability of observing any record with path length k: C(n, k)·ℙ_n(M_j).
    pub fn path_length_probability(&self, n: u32, k: u32, tau: f64) -> Result<f64> {
        Ok(crate::math::binomial(n as u64, k as u64) * self.sequence_probability(n, k, tau)?)
    }

    /// Per-record probabilities ℙ_n(k) for k = 0..=n in a single pass.
    /// Entry k equals [`sequence_probability`](Self::sequence_probability)`(n, k, tau)` bit for bit.
    pub fn sequence_probability_table(&self, n: u32, tau: f64) -> Result<Vec<f64>> {
        check_tau(tau)?;
        let s = self.model.sharpness();
        let len = n as usize + 1;
        let sums = self.reduce_blocks(
            |b| {
                let mut acc = vec![0.0; len];
                for dw in self.split.block(b) {
                    let (p, m) = a_pair(dw, tau, s);
                    for (k, slot) in acc.iter_mut().enumerate() {
                        *slot += config_weight(p, m, n, k as u32);
                    }
                }
                acc
            },
            add_vectors,
        );
        let p0 = self.prior_weight();
        Ok(sums.into_iter().map(|x| x * p0).collect())
    }

    /// ℙ_n of the all-(+x) record (or all-(−x) for `Outcome::Minus`) for
    /// n = 0..=n_max in one pass, by repeated multiplication.
    pub fn identical_outcome_table(&self, outcome: Outcome, n_max: u32, tau: f64) -> Result<Vec<f64>> {
        check_tau(tau)?;
        let s = self.model.sharpness();
        let len = n_max as usize + 1;
        let sums = self.reduce_blocks(
            |b| {
                let mut acc = vec![0.0; len];
                for dw in self.split.block(b) {
                    let (p, m) = a_pair(dw, tau, s);
                    let a = if outcome == Outcome::Plus { p } else { m };
                    let mut w = 1.0;
                    for slot in acc.iter_mut() {
                        *slot += w;
                        w *= a;
                    }
                }
                acc
            },
            add_vectors,
        );
        let p0 = self.prior_weight();
        Ok(sums.into_iter().map(|x| x * p0).collect())
    }

    /// ℙ_{n+1}(M_0)/ℙ_n(M_0) for n = 1..=n_max.
    pub fn adaptive_ratios(&self, outcome: Outcome, n_max: u32, tau: f64) -> Result<Vec<f64>> {
        let table = self.identical_outcome_table(outcome, n_max + 1, tau)?;
        Ok(table.windows(2).skip(1).map(|w| w[1] / w[0]).collect())
    }

    /// ℙ_n(M_j) evaluated directly from the outcome record, multiplying the
    /// per-step coefficients in measurement order. Independent of the
    /// path-length shortcut used everywhere else.
    pub fn label_probability(&self, seq: MeasurementSequence, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        let s = self.model.sharpness();
        let sum = self.reduce_blocks(
            |b| {
                self.split
                    .block(b)
                    .map(|dw| {
                        let (p, m) = a_pair(dw, tau, s);
                        seq.outcomes()
                            .map(|o| if o == Outcome::Plus { p } else { m })
                            .product::<f64>()
                    })
                    .sum::<f64>()
            },
            |a, b| a + b,
        );
        Ok(self.prior_weight() * sum)
    }

    /// The bath state after n measurements with k results −x.
    pub fn posterior(&self, n: u32, k: u32, tau: f64) -> Result<PosteriorState<'_>> {
        let norm = self.sequence_probability(n, k, tau)?;
        Ok(PosteriorState {
            engine: self,
            n,
            k,
            tau,
            norm,
        })
    }

    /// max_α |A⁺_α + A⁻_α − 1|: how far discarding an outcome is from leaving
    /// the bath untouched. Zero up to rounding for every valid model.
    pub fn outcome_averaged_state_check(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        let s = self.model.sharpness();
        Ok(self.reduce_blocks(
            |b| {
                self.split
                    .block(b)
                    .map(|dw| {
                        let (p, m) = a_pair(dw, tau, s);
                        (p + m - 1.0).abs()
                    })
                    .fold(0.0, f64::max)
            },
            f64::max,
        ))
    }
}

fn add_vectors(mut a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Bath state conditioned on a measurement record, kept as a view: the
/// weights are recomputed from Δω_α on demand rather than stored.
#[derive(Debug, Clone, Copy)]
pub struct PosteriorState<'e> {
    engine: &'e ExactEngine,
    n: u32,
    k: u32,
    tau: f64,
    norm: f64,
}

impl<'e> PosteriorState<'e> {
    pub fn engine(&self) -> &'e ExactEngine {
        self.engine
    }

    pub fn bath(&self) -> &'e BathRealization {
        &self.engine.bath
    }

    pub fn regime(&self) -> FieldRegime {
        self.engine.regime
    }

    pub fn model(&self) -> MeasurementModel {
        self.engine.model
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Total weight, equal to the probability of the conditioning record.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    #[inline]
    fn raw_weight(&self, dw: f64) -> f64 {
        let (p, m) = a_pair(dw, self.tau, self.engine.model.sharpness());
        config_weight(p, m, self.n, self.k)
    }

    /// Unnormalized weight p_α (prior factor included).
    pub fn weight(&self, config: u64) -> Result<f64> {
        let dw = self.engine.delta_omega(config)?;
        Ok(self.engine.prior_weight() * self.raw_weight(dw))
    }

    /// p_α / Σ p_α.
    pub fn normalized_weight(&self, config: u64) -> Result<f64> {
        Ok(self.weight(config)? / self.norm)
    }

    /// (Δω_α, normalized weight) for every configuration, in index order.
    pub fn weighted_spectrum(&self) -> impl Iterator<Item = (f64, f64)> + Clone + 'e {
        let this = *self;
        let scale = self.engine.prior_weight() / self.norm;
        (0..self.engine.bath.n_configs()).map(move |c| {
            let dw = this.engine.split.value(c);
            (dw, scale * this.raw_weight(dw))
        })
    }

    /// W(t) = Σ_α p_α e^{−iΔω_α t} / Σ_α p_α at each requested time.
    pub fn coherence(&self, times: &[f64]) -> Result<CoherenceCurve> {
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("times", "time points must be finite"));
        }
        if self.norm == 0.0 {
            return Err(Error::invalid("posterior", "conditioning record has probability zero"));
        }
        let mut w_re = Vec::with_capacity(times.len());
        let mut w_im = Vec::with_capacity(times.len());
        for chunk in times.chunks(TIME_CHUNK) {
            let (re, im) = self.coherence_chunk(chunk);
            w_re.extend(re);
            w_im.extend(im);
        }
        Ok(CoherenceCurve {
            times: times.to_vec(),
            w_re,
            w_im,
        })
    }

    fn coherence_chunk(&self, times: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let split = &self.engine.split;
        let low = split.low();
        let lo_cos: Vec<Vec<f64>> = times.iter().map(|&t| low.iter().map(|&l| cos(l * t)).collect()).collect();
        let lo_sin: Vec<Vec<f64>> = times.iter().map(|&t| low.iter().map(|&l| sin(l * t)).collect()).collect();
        let n_t = times.len();

        // Leaf: (Σ w, [Σ w cos Δω t, ...], [Σ w sin Δω t, ...]) for one block,
        // using cos/sin(H + l) = angle-addition of the block and low parts.
        let (total, re, im) = self.engine.reduce_blocks(
            |b| {
                let weights: Vec<f64> = split.block(b).map(|dw| self.raw_weight(dw)).collect();
                let total: f64 = weights.iter().sum();
                let h = split.high(b);
                let mut re = vec![0.0; n_t];
                let mut im = vec![0.0; n_t];
                for (i, &t) in times.iter().enumerate() {
                    let mut c_sum = 0.0;
                    let mut s_sum = 0.0;
                    for ((w, c), s) in weights.iter().zip(&lo_cos[i]).zip(&lo_sin[i]) {
                        c_sum += w * c;
                        s_sum += w * s;
                    }
                    let (sh, ch) = (sin(h * t), cos(h * t));
                    re[i] = ch * c_sum - sh * s_sum;
                    im[i] = -(sh * c_sum + ch * s_sum);
                }
                (total, re, im)
            },
            |a, b| (a.0 + b.0, add_vectors(a.1, b.1), add_vectors(a.2, b.2)),
        );
        (
            re.into_iter().map(|x| x / total).collect(),
            im.into_iter().map(|x| x / total).collect(),
        )
    }
}
