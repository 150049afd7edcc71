//! Measurement-sequence statistics for a qubit dephasing under a quasi-static
//! spin environment.
//!
//! A qubit is repeatedly prepared in `|+x⟩`, left to precess for a time τ
//! under the field of a frozen nuclear-spin bath, and measured along ±x. The
//! bath never evolves between cycles, so the record of outcomes acts as a
//! Bayesian filter on which bath configuration α (and therefore which
//! precession frequency Δω_α) the qubit is seeing.
//!
//! The crate offers two engines:
//!
//! * [`exact`] enumerates all 2^N configurations of a finite bath produced by
//!   [`bath`], giving sequence probabilities, post-selected bath states and
//!   coherence curves.
//! * [`gaussian`] treats Δω as a Gaussian random variable and evaluates the
//!   same quantities in closed form, with [`quadrature`] as an independent
//!   check and as a fallback where the alternating closed forms lose precision.
//!
//! [`spectrum`] connects the two: it coarse-grains the enumerated Δω spectrum
//! and extracts the Gaussian width σ.
//!
//! Units: angular frequencies in rad/μs, times in μs, distances in nm, fields
//! in tesla. See [`units`].
//!
//! The crate is `no_std` (it needs `alloc`). The default `parallel` feature
//! pulls in `std` and `rayon` for data-parallel enumeration; results are
//! bit-identical with and without it.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod enumerate;
mod error;
pub mod math;

pub mod bath;
pub mod exact;
pub mod gaussian;
pub mod quadrature;
pub mod sequences;
pub mod spectrum;
pub mod units;

pub use bath::{BathRealization, FieldRegime, NuclearSite};
pub use error::{Error, Result};
pub use exact::{CoherenceCurve, ExactEngine, PosteriorState};
pub use gaussian::GaussianEnvironment;
pub use sequences::{MeasurementModel, MeasurementSequence, Outcome};
pub use spectrum::{CoarseDistribution, FitMethod, GaussianFit};
