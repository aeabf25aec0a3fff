//! Security thresholds in the `(τ, ε)` plane.
//!
//! For each rate, the threshold `ε*(τ)` is the smallest scaled noise at which
//! the rate vanishes. `e_r` and `q1g` are strictly decreasing in `ε` (through
//! `g(n̄)`), so plain bisection on their signed interiors is exact. The reverse
//! protocol rate is only known numerically to be monotone, so its sign pattern
//! is checked first and a scan is used if that check ever fails.

use std::io::{self, Write};

use serde::Serialize;

use crate::channel::CanonicalChannel;
use crate::error::{domain, Error, Result};
use crate::format::format_sig;
use crate::rates::RateId;
use crate::scalar::Real;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_TAU_MIN: f64 = 0.05;
pub const DEFAULT_TAU_MAX: f64 = 2.5;
pub const DEFAULT_STEPS: usize = 200;
/// Grid points closer than this to `τ = 1` are skipped.
pub const TAU_ONE_EXCLUSION: f64 = 1e-6;
pub const CSV_HEADER: &str = "tau,eps_q,eps_r,eps_rev";

const MONOTONICITY_SAMPLES: usize = 256;
const MAX_SCAN_STEPS: f64 = 1e6;
const MAX_BRACKET: f64 = 1e12;

/// Threshold found for one rate at one `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold<T> {
    pub eps: T,
    /// Set when the monotonicity check failed and the scan fallback was used.
    pub flagged: bool,
}

fn interior_at<T: Real>(rate: RateId, tau: T, eps: T) -> Result<T> {
    Ok(rate.interior(&CanonicalChannel::with_eps(tau, eps)?))
}

/// Smallest `ε ≥ 0` at which `rate` vanishes for transmission `tau`.
///
/// The returned value has a non-positive interior within `tol` of zero, and the
/// interior is positive just below it.
pub fn threshold_eps<T: Real>(rate: RateId, tau: T, tol: T) -> Result<Threshold<T>> {
    if !(tol > T::zero()) {
        return domain("tol", tol.to_f64_lossy(), "tolerance must be > 0");
    }
    if tau == T::one() {
        return Err(Error::UnsupportedClass);
    }
    let f = |eps: T| interior_at(rate, tau, eps);
    if f(T::zero())? <= T::zero() {
        return Ok(Threshold {
            eps: T::zero(),
            flagged: false,
        });
    }

    let mut hi = T::one();
    while f(hi)? > T::zero() {
        hi = hi * T::lit(2.0);
        if hi > T::lit(MAX_BRACKET) {
            return Err(Error::Numeric(format!(
                "no sign change of {rate} below eps = {MAX_BRACKET:e} at tau = {tau}"
            )));
        }
    }

    if rate == RateId::RRev && !is_non_increasing(&f, hi)? {
        let eps = scan_first_crossing(&f, hi, tol)?;
        return Ok(Threshold { eps, flagged: true });
    }

    Ok(Threshold {
        eps: bisect(&f, T::zero(), hi, tol)?,
        flagged: false,
    })
}

fn is_non_increasing<T: Real>(f: &impl Fn(T) -> Result<T>, hi: T) -> Result<bool> {
    let n = T::lit(MONOTONICITY_SAMPLES as f64);
    let mut prev = f(T::zero())?;
    for i in 1..=MONOTONICITY_SAMPLES {
        let x = hi * T::lit(i as f64) / n;
        let v = f(x)?;
        if v > prev + T::tol(1e-12) * prev.abs().max(T::one()) {
            return Ok(false);
        }
        prev = v;
    }
    Ok(true)
}

/// Bisection on `f(lo) > 0 ≥ f(hi)`; returns the right end of the final bracket.
fn bisect<T: Real>(f: &impl Fn(T) -> Result<T>, mut lo: T, mut hi: T, tol: T) -> Result<T> {
    let half = T::lit(0.5);
    for _ in 0..2000 {
        let converged = hi - lo <= tol && f(hi)?.abs() <= tol;
        if converged {
            break;
        }
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Walks up from 0 to the first non-positive interior, then refines by bisection.
fn scan_first_crossing<T: Real>(f: &impl Fn(T) -> Result<T>, hi: T, tol: T) -> Result<T> {
    let steps = (hi / tol)
        .to_f64_lossy()
        .min(MAX_SCAN_STEPS)
        .ceil()
        .max(1.0);
    let step = hi / T::lit(steps);
    let mut prev = T::zero();
    let mut i = 1.0;
    while i <= steps {
        let x = step * T::lit(i);
        if f(x)? <= T::zero() {
            return bisect(f, prev, x, tol);
        }
        prev = x;
        i += 1.0;
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRow<T> {
    pub tau: T,
    pub eps_q: T,
    pub eps_r: T,
    pub eps_rev: T,
    /// `eps_rev` came from the scan fallback.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCurve<T> {
    pub rows: Vec<ThresholdRow<T>>,
    pub tolerance: T,
}

impl<T: Real> ThresholdCurve<T> {
    /// CSV with header `tau,eps_q,eps_r,eps_rev`, LF endings.
    pub fn write_csv<W: Write>(&self, mut out: W, digits: usize) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                format_sig(r.tau.to_f64_lossy(), digits),
                format_sig(r.eps_q.to_f64_lossy(), digits),
                format_sig(r.eps_r.to_f64_lossy(), digits),
                format_sig(r.eps_rev.to_f64_lossy(), digits),
            )?;
        }
        Ok(())
    }
}

pub fn threshold_row<T: Real>(tau: T, tol: T) -> Result<ThresholdRow<T>> {
    let q = threshold_eps(RateId::Q1g, tau, tol)?;
    let r = threshold_eps(RateId::ER, tau, tol)?;
    let rev = threshold_eps(RateId::RRev, tau, tol)?;
    Ok(ThresholdRow {
        tau,
        eps_q: q.eps,
        eps_r: r.eps,
        eps_rev: rev.eps,
        flagged: rev.flagged,
    })
}

/// Uniform `τ` grid of `steps` points on `[tau_min, tau_max]`, minus points near 1.
pub fn tau_grid<T: Real>(tau_min: T, tau_max: T, steps: usize) -> Result<Vec<T>> {
    if !tau_min.is_finite() || !tau_max.is_finite() || tau_min > tau_max {
        return Err(Error::EmptyGrid(format!(
            "invalid range [{tau_min}, {tau_max}]"
        )));
    }
    if steps == 0 {
        return Err(Error::EmptyGrid("zero steps".into()));
    }
    let grid: Vec<T> = if steps == 1 {
        vec![tau_min]
    } else {
        let h = (tau_max - tau_min) / T::lit((steps - 1) as f64);
        (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    tau_max
                } else {
                    tau_min + h * T::lit(i as f64)
                }
            })
            .collect()
    };
    let grid: Vec<T> = grid
        .into_iter()
        .filter(|&t| (t - T::one()).abs() >= T::lit(TAU_ONE_EXCLUSION))
        .collect();
    if grid.is_empty() {
        return Err(Error::EmptyGrid("every grid point lies at tau = 1".into()));
    }
    Ok(grid)
}

/// Threshold curves over a uniform `τ` grid, in increasing `τ` order.
pub fn sweep<T: Real>(tau_min: T, tau_max: T, steps: usize, tol: T) -> Result<ThresholdCurve<T>> {
    let rows = tau_grid(tau_min, tau_max, steps)?
        .into_iter()
        .map(|tau| threshold_row(tau, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdCurve {
        rows,
        tolerance: tol,
    })
}

/// Which rates are positive at a point, and whether the point is antidegradable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionLabel {
    /// `τ ≤ 1/2`.
    pub antidegradable: bool,
    pub e_r_positive: bool,
    pub q1g_positive: bool,
    pub r_rev_positive: bool,
    /// Antidegradable, yet a reverse-reconciliation rate is positive.
    pub reverse_beats_antidegradability: bool,
}

impl RegionLabel {
    /// One-line description of the key-rate situation at this point.
    pub fn summary(&self) -> String {
        let degr = if self.antidegradable {
            "antidegradable"
        } else {
            "not antidegradable"
        };
        let reverse = if self.e_r_positive {
            "K_rev ≥ E_R > 0"
        } else if self.r_rev_positive {
            "K_rev ≥ R_rev > E_R = 0"
        } else {
            "E_R = R_rev = 0"
        };
        let forward = if self.q1g_positive {
            "Q1g > 0"
        } else {
            "Q1g = 0"
        };
        format!("{degr}; {reverse}; {forward}")
    }
}

pub fn classify<T: Real>(tau: T, eps: T) -> Result<RegionLabel> {
    let ch = CanonicalChannel::with_eps(tau, eps)?;
    let antidegradable = tau <= T::lit(0.5);
    let e_r_positive = RateId::ER.rate(&ch) > T::zero();
    let q1g_positive = RateId::Q1g.rate(&ch) > T::zero();
    let r_rev_positive = RateId::RRev.rate(&ch) > T::zero();
    Ok(RegionLabel {
        antidegradable,
        e_r_positive,
        q1g_positive,
        r_rev_positive,
        reverse_beats_antidegradability: antidegradable && (e_r_positive || r_rev_positive),
    })
}
