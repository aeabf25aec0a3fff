//! Direct and reverse secret-key rate bounds for one-mode Gaussian channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`symplectic`]: covariance matrices, symplectic spectra, entropies, linear
//!   optics and homodyne conditioning (vacuum variance 1, entropies in bits).
//! * [`channel`]: canonical one-mode channels `(τ, n̄)`, their action and
//!   class-C dilations.
//! * [`rates`]: closed forms for `E_R`, `Q^(1,g)` and the noisy reverse rate.
//! * [`engines`]: finite-μ coherent informations and the dilation-based
//!   protocol rate, an independent route to the closed forms.
//! * [`threshold`]: security thresholds `ε(τ)` and region labels.
//! * [`sim`]: seeded Monte Carlo of the homodyne protocol.
//!
//! The numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the CLI uses.

#![forbid(unsafe_code)]
// `!(x >= lo)` is used on purpose so that NaN fails domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod engines;
pub mod error;
pub mod format;
pub mod matrix;
pub mod rates;
pub mod scalar;
pub mod sim;
pub mod symplectic;
pub mod threshold;

pub use channel::{CanonicalChannel, ChannelClass, DilatedState, Dilation, Noise};
pub use engines::{ConvergenceRow, Engine, PortModel, ProtocolBreakdown};
pub use error::{Error, Result};
pub use matrix::Mat;
pub use rates::{RateId, RateReport};
pub use scalar::Real;
pub use sim::{RoundRecord, SimConfig, SimMode, SimStats};
pub use symplectic::{entropy_g, CovMat, Quadrature, SymplecticSpectrum};
pub use threshold::{RegionLabel, Threshold, ThresholdCurve, ThresholdRow};

pub type Mat64 = Mat<f64>;
pub type CovMat64 = CovMat<f64>;
pub type CovMat32 = CovMat<f32>;
pub type SymplecticSpectrum64 = SymplecticSpectrum<f64>;
pub type Channel64 = CanonicalChannel<f64>;
pub type Channel32 = CanonicalChannel<f32>;
pub type RateReport64 = RateReport<f64>;
pub type ThresholdCurve64 = ThresholdCurve<f64>;
pub type ConvergenceRow64 = ConvergenceRow<f64>;
pub type ProtocolBreakdown64 = ProtocolBreakdown<f64>;
