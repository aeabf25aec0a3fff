//! Closed-form key-rate quantities for a canonical channel, in bits per use.
//!
//! * `e_r`: reverse-coherent-information capacity, `log₂|1/(1−τ)| − g(n̄)`.
//! * `q1g`: single-use Gaussian coherent information, `log₂|τ/(1−τ)| − g(n̄)`.
//! * `r_rev`: noisy reverse protocol rate,
//!   `½log₂(λ/|1−τ|) + g(√(w/4λ) − ½) − g(n̄)` with `w = 2n̄+1` and
//!   `λ = (|1−τ| + w)/(1 + |1−τ|·w)`.
//!
//! Each rate is the positive part of its interior. The signed interiors are
//! exposed for root finding.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::CanonicalChannel;
use crate::scalar::Real;
use crate::symplectic::g_nonneg;

/// Identifies one of the three closed-form rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateId {
    ER,
    Q1g,
    RRev,
}

impl RateId {
    pub const ALL: [RateId; 3] = [RateId::ER, RateId::Q1g, RateId::RRev];

    pub fn name(self) -> &'static str {
        match self {
            RateId::ER => "e_r",
            RateId::Q1g => "q1g",
            RateId::RRev => "r_rev",
        }
    }

    pub fn interior<T: Real>(self, ch: &CanonicalChannel<T>) -> T {
        match self {
            RateId::ER => e_r_interior(ch),
            RateId::Q1g => q1g_interior(ch),
            RateId::RRev => r_rev_interior(ch),
        }
    }

    pub fn rate<T: Real>(self, ch: &CanonicalChannel<T>) -> T {
        positive_part(self.interior(ch))
    }
}

impl fmt::Display for RateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RateId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e_r" => Ok(RateId::ER),
            "q1g" => Ok(RateId::Q1g),
            "r_rev" => Ok(RateId::RRev),
            other => Err(format!(
                "unknown rate '{other}' (expected e_r, q1g or r_rev)"
            )),
        }
    }
}

#[inline]
fn positive_part<T: Real>(x: T) -> T {
    if x > T::zero() {
        x
    } else {
        T::zero()
    }
}

pub fn e_r_interior<T: Real>(ch: &CanonicalChannel<T>) -> T {
    -ch.loss().log2() - g_nonneg(ch.nbar())
}

/// `−∞` at `τ = 0`.
pub fn q1g_interior<T: Real>(ch: &CanonicalChannel<T>) -> T {
    if ch.tau() == T::zero() {
        return T::neg_infinity();
    }
    (ch.tau().abs() / ch.loss()).log2() - g_nonneg(ch.nbar())
}

/// `λ = (|1−τ| + w)/(1 + |1−τ|·w)`.
pub fn lambda<T: Real>(ch: &CanonicalChannel<T>) -> T {
    let a = ch.loss();
    let w = ch.w();
    (a + w) / (T::one() + a * w)
}

pub fn r_rev_interior<T: Real>(ch: &CanonicalChannel<T>) -> T {
    let a = ch.loss();
    let w = ch.w();
    let lam = lambda(ch);
    let half = T::lit(0.5);
    let nu = (w / lam).sqrt();
    half * (lam / a).log2() + g_nonneg((nu - T::one()) * half) - g_nonneg(ch.nbar())
}

pub fn e_r<T: Real>(ch: &CanonicalChannel<T>) -> T {
    positive_part(e_r_interior(ch))
}

pub fn q1g<T: Real>(ch: &CanonicalChannel<T>) -> T {
    positive_part(q1g_interior(ch))
}

pub fn r_rev<T: Real>(ch: &CanonicalChannel<T>) -> T {
    positive_part(r_rev_interior(ch))
}

/// All three rates at one channel, with the intermediates of the reverse rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateReport<T> {
    pub tau: T,
    pub nbar: T,
    pub eps: T,
    pub e_r: T,
    pub q1g: T,
    pub r_rev: T,
    pub lambda: T,
    pub w: T,
}

impl<T: Real> RateReport<T> {
    pub fn new(ch: &CanonicalChannel<T>) -> Self {
        Self {
            tau: ch.tau(),
            nbar: ch.nbar(),
            eps: ch.eps(),
            e_r: e_r(ch),
            q1g: q1g(ch),
            r_rev: r_rev(ch),
            lambda: lambda(ch),
            w: ch.w(),
        }
    }

    /// Best lower bound on the reverse secret-key capacity among the rates.
    pub fn reverse_key_bound(&self) -> T {
        self.e_r.max(self.r_rev)
    }
}
