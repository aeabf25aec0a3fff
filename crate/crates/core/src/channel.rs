//! One-mode Gaussian channels in canonical form.
//!
//! A canonical channel is fixed by its transmission `τ` and temperature `n̄`
//! (the rank is implied by the class for the classes handled here). On the
//! covariance matrix it acts as `V → X V Xᵀ + Y` with
//!
//! * `X = √τ·I` for `τ > 0`, `X = 0` for `τ = 0`, `X = √(−τ)·diag(1, −1)` for `τ < 0`,
//! * `Y = |1 − τ|·(2n̄ + 1)·I`.
//!
//! `τ = 1` (classes B1/B2) is rejected everywhere.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::matrix::Mat;
use crate::scalar::Real;
use crate::symplectic::{beam_splitter, two_mode_squeezer, CovMat};

/// Canonical class, determined by the transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChannelClass {
    /// `τ = 0`: complete replacement by a thermal state.
    A1,
    /// `0 < τ < 1`: thermal-loss channel.
    CAtt,
    /// `τ > 1`: thermal amplifier.
    CAmp,
    /// `τ < 0`: phase-conjugating channel.
    D,
}

impl ChannelClass {
    pub fn of<T: Real>(tau: T) -> Self {
        if tau == T::zero() {
            ChannelClass::A1
        } else if tau < T::zero() {
            ChannelClass::D
        } else if tau < T::one() {
            ChannelClass::CAtt
        } else {
            ChannelClass::CAmp
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChannelClass::A1 => "A1",
            ChannelClass::CAtt => "C_att",
            ChannelClass::CAmp => "C_amp",
            ChannelClass::D => "D",
        }
    }

    /// Rank invariant `r`: 0 for A1, 2 for the classes with invertible `X`.
    pub fn rank(self) -> u8 {
        match self {
            ChannelClass::A1 => 0,
            _ => 2,
        }
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Noise specification accepted by [`CanonicalChannel::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise<T> {
    /// Mean thermal photon number `n̄`.
    Nbar(T),
    /// Scaled thermal noise `ε = 2n̄|1 − τ|`.
    Eps(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalChannel<T> {
    tau: T,
    nbar: T,
}

impl<T: Real> CanonicalChannel<T> {
    pub fn new(tau: T, noise: Noise<T>) -> Result<Self> {
        if !tau.is_finite() {
            return domain("tau", tau.to_f64_lossy(), "transmission must be finite");
        }
        if tau == T::one() {
            return Err(Error::UnsupportedClass);
        }
        let nbar = match noise {
            Noise::Nbar(n) => {
                if !(n >= T::zero()) || !n.is_finite() {
                    return domain("nbar", n.to_f64_lossy(), "temperature must be >= 0");
                }
                n
            }
            Noise::Eps(e) => {
                if !(e >= T::zero()) || !e.is_finite() {
                    return domain("eps", e.to_f64_lossy(), "scaled noise must be >= 0");
                }
                nbar_of_eps(tau, e)
            }
        };
        Ok(Self { tau, nbar })
    }

    pub fn with_nbar(tau: T, nbar: T) -> Result<Self> {
        Self::new(tau, Noise::Nbar(nbar))
    }

    pub fn with_eps(tau: T, eps: T) -> Result<Self> {
        Self::new(tau, Noise::Eps(eps))
    }

    #[inline]
    pub fn tau(&self) -> T {
        self.tau
    }

    #[inline]
    pub fn nbar(&self) -> T {
        self.nbar
    }

    /// `ε = 2n̄|1 − τ|`.
    #[inline]
    pub fn eps(&self) -> T {
        eps_of_nbar(self.tau, self.nbar)
    }

    /// Environment variance `w = 2n̄ + 1`.
    #[inline]
    pub fn w(&self) -> T {
        T::lit(2.0) * self.nbar + T::one()
    }

    pub fn class(&self) -> ChannelClass {
        ChannelClass::of(self.tau)
    }

    pub fn rank(&self) -> u8 {
        self.class().rank()
    }

    /// `|1 − τ|`.
    #[inline]
    pub fn loss(&self) -> T {
        (T::one() - self.tau).abs()
    }

    /// Matrix `X` of the canonical form.
    pub fn x_matrix(&self) -> Mat<T> {
        let tau = self.tau;
        if tau > T::zero() {
            let s = tau.sqrt();
            Mat::diag(&[s, s])
        } else if tau == T::zero() {
            Mat::zeros(2, 2)
        } else {
            let s = (-tau).sqrt();
            Mat::diag(&[s, -s])
        }
    }

    /// Matrix `Y = |1 − τ|·w·I` of the canonical form.
    pub fn y_matrix(&self) -> Mat<T> {
        let y = self.loss() * self.w();
        Mat::diag(&[y, y])
    }

    /// Applies the channel to `mode` of `v`.
    pub fn apply(&self, v: &CovMat<T>, mode: usize) -> Result<CovMat<T>> {
        let n = v.n_modes();
        if mode >= n {
            return Err(Error::ModeSelection(format!(
                "mode {mode} out of range for a {n}-mode state"
            )));
        }
        let x = self.x_matrix();
        let mut t = Mat::identity(2 * n);
        t.set_block(2 * mode, 2 * mode, &x);
        let mut out = &(&t * v.matrix()) * &t.transpose();
        let y = self.y_matrix();
        for i in 0..2 {
            for j in 0..2 {
                let (r, c) = (2 * mode + i, 2 * mode + j);
                out[(r, c)] = out[(r, c)] + y[(i, j)];
            }
        }
        let v = CovMat::from_trusted(out);
        v.symplectic_spectrum()?;
        Ok(v)
    }

    /// Stinespring-style dilation; available for class C only.
    pub fn dilate(&self) -> Result<Dilation<T>> {
        let system_symplectic = match self.class() {
            ChannelClass::CAtt => beam_splitter(self.tau)?,
            ChannelClass::CAmp => two_mode_squeezer(self.tau)?,
            other => return Err(Error::UnsupportedDilation(other.label())),
        };
        Ok(Dilation {
            system_symplectic,
            environment_state: CovMat::tmsv(self.w())?,
        })
    }
}

/// `ε = 2n̄|1 − τ|`.
pub fn eps_of_nbar<T: Real>(tau: T, nbar: T) -> T {
    T::lit(2.0) * nbar * (T::one() - tau).abs()
}

/// `n̄ = ε / (2|1 − τ|)`.
pub fn nbar_of_eps<T: Real>(tau: T, eps: T) -> T {
    eps / (T::lit(2.0) * (T::one() - tau).abs())
}

/// Purification of a class-C channel.
///
/// The input mode interacts with the first mode of a two-mode squeezed vacuum
/// of variance `w` (a beam splitter of transmissivity `τ` for attenuators, a
/// two-mode squeezer of gain `τ` for amplifiers). Eve holds both environment
/// outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation<T> {
    pub system_symplectic: Mat<T>,
    pub environment_state: CovMat<T>,
}

/// Global state produced by [`Dilation::apply`].
#[derive(Debug, Clone, PartialEq)]
pub struct DilatedState<T> {
    pub state: CovMat<T>,
    /// Index of the channel output (same as the input mode).
    pub output_mode: usize,
    /// Environment output modes, held by Eve.
    pub eve_modes: [usize; 2],
}

impl<T: Real> Dilation<T> {
    /// Appends the environment to `v` and lets `mode` interact with it.
    pub fn apply(&self, v: &CovMat<T>, mode: usize) -> Result<DilatedState<T>> {
        let n = v.n_modes();
        if mode >= n {
            return Err(Error::ModeSelection(format!(
                "mode {mode} out of range for a {n}-mode state"
            )));
        }
        let joint = v.product(&self.environment_state);
        let state = joint.apply_symplectic(&self.system_symplectic, &[mode, n])?;
        Ok(DilatedState {
            state,
            output_mode: mode,
            eve_modes: [n, n + 1],
        })
    }
}
