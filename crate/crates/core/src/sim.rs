//! Seeded Monte Carlo of the homodyne reverse-reconciliation protocol.
//!
//! Alice sends half of a two-mode squeezed vacuum through the canonical
//! channel. Bob mixes the output with vacuum on a balanced beam splitter, keeps
//! one port and homodynes it in a random basis. In `memory` mode Alice learns
//! the basis and measures the same quadrature; in `sifted` mode she picks her
//! own basis uniformly and mismatched rounds are discarded.
//!
//! Outcomes are drawn directly from the Gaussian outcome distribution the
//! covariance matrix implies, which is exact for Gaussian states and homodyne
//! detection. Each round uses its own ChaCha8 stream (stream id = round index)
//! so the result does not depend on evaluation order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::symplectic::Quadrature;

pub const RNG_DESCRIPTION: &str =
    "rand_chacha::ChaCha8Rng::seed_from_u64(seed), stream = round index; normals via rand_distr::StandardNormal";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Memory,
    Sifted,
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimMode::Memory => "memory",
            SimMode::Sifted => "sifted",
        })
    }
}

impl FromStr for SimMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "memory" => Ok(SimMode::Memory),
            "sifted" => Ok(SimMode::Sifted),
            other => Err(format!(
                "unknown mode '{other}' (expected memory or sifted)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub tau: f64,
    pub nbar: f64,
    pub mu: f64,
    pub rounds: u64,
    pub seed: u64,
    pub mode: SimMode,
}

fn check_params<T: Real>(tau: T, nbar: T, mu: T) -> Result<()> {
    if !tau.is_finite() {
        return domain("tau", tau.to_f64_lossy(), "transmission must be finite");
    }
    if tau == T::one() {
        return Err(Error::UnsupportedClass);
    }
    if !(nbar >= T::zero()) || !nbar.is_finite() {
        return domain("nbar", nbar.to_f64_lossy(), "temperature must be >= 0");
    }
    if !(mu >= T::one()) || !mu.is_finite() {
        return domain("mu", mu.to_f64_lossy(), "source variance must be >= 1");
    }
    Ok(())
}

/// Sign of the Alice–Bob correlation in `basis`, relative to the `q` basis.
///
/// The source anticorrelates the `p` quadratures; a phase-conjugating channel
/// (`τ < 0`) undoes that.
pub fn basis_sign<T: Real>(tau: T, basis: Quadrature) -> T {
    match basis {
        Quadrature::Q => T::one(),
        Quadrature::P if tau > T::zero() => -T::one(),
        Quadrature::P => T::one(),
    }
}

/// Covariance of `(x_A, x_B)` when both parties measure `basis`.
///
/// `V_A = μ`, `V_B = (|τ|μ + |1−τ|w + 1)/2`, `cov = ±√(|τ|(μ²−1)/2)`.
pub fn analytic_moments<T: Real>(tau: T, nbar: T, mu: T, basis: Quadrature) -> Result<[[T; 2]; 2]> {
    check_params(tau, nbar, mu)?;
    let half = T::lit(0.5);
    let w = T::lit(2.0) * nbar + T::one();
    let v_a = mu;
    let v_b = (tau.abs() * mu + (T::one() - tau).abs() * w + T::one()) * half;
    let c = basis_sign(tau, basis) * (tau.abs() * (mu * mu - T::one()) * half).sqrt();
    Ok([[v_a, c], [c, v_b]])
}

/// Gaussian mutual information `½log₂(V_A V_B / (V_A V_B − c²))` in bits.
pub fn gaussian_mutual_info<T: Real>(cov: &[[T; 2]; 2]) -> T {
    let prod = cov[0][0] * cov[1][1];
    let cond = prod - cov[0][1] * cov[1][0];
    (prod / cond).log2() * T::lit(0.5)
}

/// One simulated round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundRecord {
    pub basis_b: Quadrature,
    pub basis_a: Quadrature,
    pub kept: bool,
    pub x_a: f64,
    pub x_b: f64,
}

pub const ROUNDS_CSV_HEADER: &str = "basis_b,basis_a,kept,x_a,x_b";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub kept_rounds: u64,
    /// Sample covariance of `(x_A, x_B)` over kept rounds, with `x_B` sign-aligned
    /// to the `q`-basis convention via [`basis_sign`].
    pub empirical_cov: [[f64; 2]; 2],
    /// `q`-basis analytic covariance.
    pub analytic_cov: [[f64; 2]; 2],
    pub mi_empirical: f64,
    pub mi_analytic: f64,
    pub sift_ratio: f64,
    /// Standard errors of the `empirical_cov` entries for Gaussian samples.
    pub cov_std_err: [[f64; 2]; 2],
    /// Raw (unaligned) `x_A`–`x_B` covariance of kept rounds measured in `q`.
    pub raw_cov_q: Option<f64>,
    /// Same for rounds measured in `p`.
    pub raw_cov_p: Option<f64>,
    pub rounds: u64,
    pub seed: u64,
    pub mode: SimMode,
    pub rng: &'static str,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    a: CompensatedSum,
    b: CompensatedSum,
    aa: CompensatedSum,
    bb: CompensatedSum,
    ab: CompensatedSum,
}

impl Moments {
    fn push(&mut self, a: f64, b: f64) {
        self.n += 1;
        self.a.add(a);
        self.b.add(b);
        self.aa.add(a * a);
        self.bb.add(b * b);
        self.ab.add(a * b);
    }

    /// Unbiased sample covariance matrix; needs at least two samples.
    fn covariance(&self) -> Option<[[f64; 2]; 2]> {
        if self.n < 2 {
            return None;
        }
        let n = self.n as f64;
        let (sa, sb) = (self.a.value(), self.b.value());
        let vaa = (self.aa.value() - sa * sa / n) / (n - 1.0);
        let vbb = (self.bb.value() - sb * sb / n) / (n - 1.0);
        let vab = (self.ab.value() - sa * sb / n) / (n - 1.0);
        Some([[vaa, vab], [vab, vbb]])
    }
}

fn draw_basis(rng: &mut ChaCha8Rng) -> Quadrature {
    if rng.random::<bool>() {
        Quadrature::P
    } else {
        Quadrature::Q
    }
}

pub fn simulate(cfg: &SimConfig) -> Result<SimStats> {
    simulate_with(cfg, |_| {})
}

/// Runs the simulation, handing every round (kept or not) to `on_round`.
pub fn simulate_with(cfg: &SimConfig, mut on_round: impl FnMut(&RoundRecord)) -> Result<SimStats> {
    check_params(cfg.tau, cfg.nbar, cfg.mu)?;
    if cfg.rounds == 0 {
        return domain("rounds", 0.0, "at least one round is required");
    }
    let moments_q = analytic_moments(cfg.tau, cfg.nbar, cfg.mu, Quadrature::Q)?;
    let moments_p = analytic_moments(cfg.tau, cfg.nbar, cfg.mu, Quadrature::P)?;
    let sd_a = moments_q[0][0].sqrt();
    let sd_b = moments_q[1][1].sqrt();

    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut aligned = Moments::default();
    let mut raw_q = Moments::default();
    let mut raw_p = Moments::default();

    for round in 0..cfg.rounds {
        let mut rng = base.clone();
        rng.set_stream(round);
        let basis_b = draw_basis(&mut rng);
        let basis_a = match cfg.mode {
            SimMode::Memory => basis_b,
            SimMode::Sifted => draw_basis(&mut rng),
        };
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let kept = basis_a == basis_b;
        let (x_a, x_b) = if kept {
            let m = match basis_b {
                Quadrature::Q => &moments_q,
                Quadrature::P => &moments_p,
            };
            // x_B = (c/V_A)·x_A + √(V_B − c²/V_A)·z₂
            let c = m[0][1];
            let x_a = sd_a * z1;
            let cond_sd = (m[1][1] - c * c / m[0][0]).max(0.0).sqrt();
            (x_a, c / m[0][0] * x_a + cond_sd * z2)
        } else {
            // orthogonal quadratures of these states are uncorrelated
            (sd_a * z1, sd_b * z2)
        };
        if kept {
            aligned.push(x_a, basis_sign(cfg.tau, basis_b) * x_b);
            match basis_b {
                Quadrature::Q => raw_q.push(x_a, x_b),
                Quadrature::P => raw_p.push(x_a, x_b),
            }
        }
        on_round(&RoundRecord {
            basis_b,
            basis_a,
            kept,
            x_a,
            x_b,
        });
    }

    let empirical_cov = aligned.covariance().ok_or(Error::EmptyStatistics)?;
    let n = aligned.n as f64;
    let (va, vb, c) = (
        empirical_cov[0][0],
        empirical_cov[1][1],
        empirical_cov[0][1],
    );
    let se_var = |v: f64| v * (2.0 / (n - 1.0)).sqrt();
    let se_cov = ((va * vb + c * c) / (n - 1.0)).sqrt();

    Ok(SimStats {
        kept_rounds: aligned.n,
        empirical_cov,
        analytic_cov: moments_q,
        mi_empirical: gaussian_mutual_info(&empirical_cov),
        mi_analytic: gaussian_mutual_info(&moments_q),
        sift_ratio: n / cfg.rounds as f64,
        cov_std_err: [[se_var(va), se_cov], [se_cov, se_var(vb)]],
        raw_cov_q: raw_q.covariance().map(|m| m[0][1]),
        raw_cov_p: raw_p.covariance().map(|m| m[0][1]),
        rounds: cfg.rounds,
        seed: cfg.seed,
        mode: cfg.mode,
        rng: RNG_DESCRIPTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: SimMode, rounds: u64, seed: u64) -> SimConfig {
        SimConfig {
            tau: 0.5,
            nbar: 0.0,
            mu: 5.0,
            rounds,
            seed,
            mode,
        }
    }

    #[test]
    fn analytic_moment_examples() {
        let m = analytic_moments(0.5_f64, 0.0, 5.0, Quadrature::Q).unwrap();
        assert!((m[1][1] - 2.0).abs() < 1e-15);
        assert!((m[0][1] - 6f64.sqrt()).abs() < 1e-15);
        // ½log₂(5/2), mpmath
        assert!((gaussian_mutual_info(&m) - 0.660_964_047_443_681_2).abs() < 1e-12);
        let p = analytic_moments(0.5_f64, 0.0, 5.0, Quadrature::P).unwrap();
        assert!((p[0][1] + 6f64.sqrt()).abs() < 1e-15);

        let m = analytic_moments(0.3_f64, 0.4, 1.0, Quadrature::Q).unwrap();
        assert_eq!(m[0][1], 0.0);
        assert!((m[1][1] - (0.3 + 0.7 * 1.8 + 1.0) / 2.0).abs() < 1e-15);

        let d = analytic_moments(-0.5, 0.1, 3.0, Quadrature::P).unwrap();
        assert!(d[0][1] > 0.0);
    }

    #[test]
    fn analytic_moment_errors() {
        assert_eq!(
            analytic_moments(1.0, 0.0, 2.0, Quadrature::Q),
            Err(Error::UnsupportedClass)
        );
        assert!(analytic_moments(0.5, 0.0, 0.9, Quadrature::Q).is_err());
        assert!(analytic_moments(0.5, -1.0, 2.0, Quadrature::Q).is_err());
    }

    #[test]
    fn memory_mode_keeps_everything() {
        let s = simulate(&cfg(SimMode::Memory, 2000, 7)).unwrap();
        assert_eq!(s.kept_rounds, 2000);
        assert_eq!(s.sift_ratio, 1.0);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let a = simulate(&cfg(SimMode::Sifted, 5000, 42)).unwrap();
        let b = simulate(&cfg(SimMode::Sifted, 5000, 42)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&cfg(SimMode::Sifted, 5000, 43)).unwrap();
        assert_ne!(a.empirical_cov, c.empirical_cov);
        assert_eq!(a.analytic_cov, c.analytic_cov);
        assert_eq!(a.mi_analytic, c.mi_analytic);
    }

    #[test]
    fn round_callback_sees_every_round() {
        let mut n = 0;
        let mut kept = 0;
        let s = simulate_with(&cfg(SimMode::Sifted, 1000, 1), |r| {
            n += 1;
            if r.kept {
                kept += 1;
                assert_eq!(r.basis_a, r.basis_b);
            }
        })
        .unwrap();
        assert_eq!(n, 1000);
        assert_eq!(kept, s.kept_rounds);
    }

    #[test]
    fn degenerate_runs_are_rejected() {
        assert!(simulate(&cfg(SimMode::Memory, 0, 1)).is_err());
        // a single round can never yield a sample covariance
        assert_eq!(
            simulate(&cfg(SimMode::Memory, 1, 1)),
            Err(Error::EmptyStatistics)
        );
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
