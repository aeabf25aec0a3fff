//! Covariance-matrix algebra for Gaussian states.
//!
//! Conventions: quadratures are ordered `(q₁, p₁, …, q_n, p_n)` and measured in
//! shot-noise units with `[q̂, p̂] = 2i`, so the vacuum has covariance matrix
//! `I` and a thermal state with mean photon number `n̄` has `(2n̄ + 1)·I`.
//! Entropies are in bits. First moments are never tracked here since none of
//! the entropic quantities depend on them.

use crate::error::{domain, Error, Result};
use crate::matrix::Mat;
use crate::scalar::Real;

/// Symmetry tolerance, relative to the largest entry (and at least absolute).
const SYMMETRY_TOL: f64 = 1e-12;
/// Symplectic eigenvalues down to `1 - PHYSICAL_TOL` are accepted and clamped to 1.
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Negative discriminants down to `-DISCRIMINANT_TOL` (relative to `Δ²`) are clamped to 0.
const DISCRIMINANT_TOL: f64 = 1e-9;
/// Relative discriminant below which the two-mode closed form is not used.
const NEAR_DEGENERATE: f64 = 1e-6;
const SYMPLECTIC_TOL: f64 = 1e-10;
const MIN_MEASURED_VARIANCE: f64 = 1e-12;

/// Quadrature selected by a homodyne detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Q,
    P,
}

impl Quadrature {
    #[inline]
    pub(crate) fn offset(self) -> usize {
        match self {
            Quadrature::Q => 0,
            Quadrature::P => 1,
        }
    }
}

/// Thermal entropy function `g(x) = (x+1)log₂(x+1) − x·log₂x`, with `g(0) = 0`.
pub fn entropy_g<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x < T::zero() {
        return domain("x", x.to_f64_lossy(), "entropy_g requires x >= 0");
    }
    Ok(g_nonneg(x))
}

/// `g` for arguments already known to be non-negative.
///
/// Evaluated as `log₂(x+1) + x·log₂(1 + 1/x)`, which keeps both terms positive
/// and avoids cancelling two large products for big `x`.
pub(crate) fn g_nonneg<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x.is_infinite() {
        return x;
    }
    let ln2 = T::lit(std::f64::consts::LN_2);
    ((x + T::one()).ln() + x * x.recip().ln_1p()) / ln2
}

/// Standard symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]` on `n` modes.
pub fn symplectic_form<T: Real>(n_modes: usize) -> Mat<T> {
    let mut om = Mat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        om[(2 * k, 2 * k + 1)] = T::one();
        om[(2 * k + 1, 2 * k)] = -T::one();
    }
    om
}

/// Covariance matrix of an `n`-mode Gaussian state.
#[derive(Clone, PartialEq, Debug)]
pub struct CovMat<T> {
    n_modes: usize,
    m: Mat<T>,
}

/// Symplectic eigenvalues of a valid state, sorted descending, each `≥ 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct SymplecticSpectrum<T> {
    pub values: Vec<T>,
}

impl<T: Real> SymplecticSpectrum<T> {
    /// Von Neumann entropy `Σ g((ν_k − 1)/2)` in bits.
    pub fn entropy(&self) -> T {
        let half = T::lit(0.5);
        self.values
            .iter()
            .map(|&nu| g_nonneg((nu - T::one()) * half))
            .sum()
    }

    pub fn is_pure(&self, tol: T) -> bool {
        self.values.iter().all(|&nu| (nu - T::one()).abs() <= tol)
    }
}

impl<T: Real> CovMat<T> {
    /// Validates and wraps a covariance matrix.
    pub fn new(m: Mat<T>) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 || !m.rows().is_multiple_of(2) {
            return Err(Error::Dimension {
                expected: 2 * (m.rows() / 2).max(1),
                got: m.rows(),
            });
        }
        let scale = m.max_abs().max(T::one());
        let asym = m.asymmetry();
        if asym > T::tol(SYMMETRY_TOL) * scale {
            return Err(Error::NotSymmetric(asym.to_f64_lossy()));
        }
        let v = Self {
            n_modes: m.rows() / 2,
            m: m.symmetrized(),
        };
        if v.m.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        v.symplectic_spectrum()?;
        Ok(v)
    }

    /// Wraps a matrix produced by an internal transform; symmetrizes but does not validate.
    pub(crate) fn from_trusted(m: Mat<T>) -> Self {
        Self {
            n_modes: m.rows() / 2,
            m: m.symmetrized(),
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::from_trusted(Mat::identity(2 * n_modes))
    }

    /// Single-mode thermal state `w·I` with quadrature variance `w = 2n̄ + 1`.
    pub fn thermal(w: T) -> Result<Self> {
        if w.is_nan() || w < T::one() {
            return domain("w", w.to_f64_lossy(), "thermal variance must be >= 1");
        }
        Ok(Self::from_trusted(Mat::diag(&[w, w])))
    }

    /// Two-mode squeezed vacuum with local variance `μ`:
    /// blocks `A = B = μI` and `C = √(μ²−1)·diag(1, −1)`.
    pub fn tmsv(mu: T) -> Result<Self> {
        if mu.is_nan() || mu < T::one() {
            return domain(
                "mu",
                mu.to_f64_lossy(),
                "two-mode squeezed vacuum needs mu >= 1",
            );
        }
        let c = (mu * mu - T::one()).sqrt();
        let z = T::zero();
        let m = Mat::from_rows(&[[mu, z, c, z], [z, mu, z, -c], [c, z, mu, z], [z, -c, z, mu]])?;
        Ok(Self::from_trusted(m))
    }

    /// Tensor product `self ⊗ other` (modes of `other` appended).
    pub fn product(&self, other: &CovMat<T>) -> Self {
        let d1 = self.m.rows();
        let d2 = other.m.rows();
        let mut m = Mat::zeros(d1 + d2, d1 + d2);
        m.set_block(0, 0, &self.m);
        m.set_block(d1, d1, &other.m);
        Self::from_trusted(m)
    }

    #[inline]
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    #[inline]
    pub fn matrix(&self) -> &Mat<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Mat<T> {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[(i, j)]
    }

    /// 2×2 block between modes `a` and `b`.
    pub fn mode_block(&self, a: usize, b: usize) -> Mat<T> {
        self.m.block(2 * a, 2 * b, 2, 2)
    }

    pub fn det(&self) -> T {
        self.m.det()
    }

    /// Symplectic spectrum, validated against the uncertainty relation.
    ///
    /// One mode uses `√det V`, two modes the `Δ`-invariant closed form, and
    /// larger states the singular values of `LᵀΩL` where `V = LLᵀ`.
    pub fn symplectic_spectrum(&self) -> Result<SymplecticSpectrum<T>> {
        let raw = match self.n_modes {
            1 => vec![self.det().max(T::zero()).sqrt()],
            2 => match two_mode_spectrum(self)? {
                Some(nu) => nu,
                None => general_spectrum(self)?,
            },
            _ => general_spectrum(self)?,
        };
        let floor = T::one() - self.physical_tolerance();
        let mut values = Vec::with_capacity(raw.len());
        for nu in raw {
            if nu.is_nan() || nu < floor {
                return Err(Error::Unphysical(nu.to_f64_lossy()));
            }
            values.push(nu.max(T::one()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Ok(SymplecticSpectrum { values })
    }

    /// Allowed dip of a symplectic eigenvalue below 1: `PHYSICAL_TOL`, widened
    /// to the float resolution of the matrix (`~ε·max|V_ij|²`) for strongly
    /// squeezed states whose purity is only representable to that level.
    pub fn physical_tolerance(&self) -> T {
        let s = self.m.max_abs();
        T::tol(PHYSICAL_TOL).max(T::epsilon() * T::lit(16.0) * s * s)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<T> {
        Ok(self.symplectic_spectrum()?.entropy())
    }

    /// Reduced state on the listed modes, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        check_modes(keep, self.n_modes)?;
        let idx = quadrature_indices(keep);
        Ok(Self::from_trusted(self.m.select(&idx, &idx)))
    }

    /// Applies the symplectic matrix `s` (size `2m × 2m`) to the listed `m` modes.
    pub fn apply_symplectic(&self, s: &Mat<T>, modes: &[usize]) -> Result<Self> {
        check_modes(modes, self.n_modes)?;
        if s.rows() != 2 * modes.len() || !s.is_square() {
            return Err(Error::Dimension {
                expected: 2 * modes.len(),
                got: s.rows(),
            });
        }
        let deviation = symplectic_deviation(s);
        if deviation > T::tol(SYMPLECTIC_TOL) * s.max_abs().powi(2).max(T::one()) {
            return Err(Error::NotSymplectic(deviation.to_f64_lossy()));
        }
        let idx = quadrature_indices(modes);
        let mut full = Mat::identity(2 * self.n_modes);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                full[(i, j)] = s[(a, b)];
            }
        }
        let out = &(&full * &self.m) * &full.transpose();
        let v = Self::from_trusted(out);
        v.symplectic_spectrum()?;
        Ok(v)
    }

    /// Conditional state of the remaining modes after homodyne detection of
    /// `quadrature` on `mode`: `A' = A − c·cᵀ / V_kk`. Independent of the outcome.
    pub fn homodyne_condition(&self, mode: usize, quadrature: Quadrature) -> Result<Self> {
        if self.n_modes < 2 {
            return Err(Error::ModeSelection(
                "homodyne conditioning needs at least two modes".into(),
            ));
        }
        check_modes(&[mode], self.n_modes)?;
        let k = 2 * mode + quadrature.offset();
        let var = self.m[(k, k)];
        if !(var > T::tol(MIN_MEASURED_VARIANCE)) {
            return Err(Error::DegenerateMeasurement(var.to_f64_lossy()));
        }
        let kept: Vec<usize> = (0..self.n_modes).filter(|&j| j != mode).collect();
        let idx = quadrature_indices(&kept);
        let mut out = self.m.select(&idx, &idx);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = out[(a, b)] - self.m[(i, k)] * self.m[(j, k)] / var;
            }
        }
        let v = Self::from_trusted(out);
        v.symplectic_spectrum()?;
        Ok(v)
    }
}

/// Closed form `ν±² = (Δ ± √(Δ² − 4 det V))/2`, `Δ = det A + det B + 2 det C`.
///
/// Returns `None` when the spectrum is nearly degenerate: there the square root
/// turns rounding in `Δ² − 4 det V` into a much larger error in `ν±`, so the
/// caller uses the factorisation route instead.
fn two_mode_spectrum<T: Real>(v: &CovMat<T>) -> Result<Option<Vec<T>>> {
    let a = v.mode_block(0, 0).det();
    let b = v.mode_block(1, 1).det();
    let c = v.mode_block(0, 1).det();
    let det = v.det();
    let delta = a + b + T::lit(2.0) * c;
    let mut disc = delta * delta - T::lit(4.0) * det;
    if disc < T::zero() {
        if disc < -T::tol(DISCRIMINANT_TOL) * (delta * delta).max(T::one()) {
            return Err(Error::Numeric(format!(
                "negative discriminant {} in two-mode spectrum",
                disc.to_f64_lossy()
            )));
        }
        disc = T::zero();
    }
    if disc <= T::lit(NEAR_DEGENERATE) * delta * delta {
        return Ok(None);
    }
    let root = disc.sqrt();
    let plus_sq = (delta + root) * T::lit(0.5);
    // ν₋² = det / ν₊², avoiding the cancellation in (Δ − √disc)/2
    let minus_sq = if plus_sq > T::zero() {
        det / plus_sq
    } else {
        T::zero()
    };
    Ok(Some(vec![
        plus_sq.max(T::zero()).sqrt(),
        minus_sq.max(T::zero()).sqrt(),
    ]))
}

fn general_spectrum<T: Real>(v: &CovMat<T>) -> Result<Vec<T>> {
    let n = v.n_modes;
    let l = v.m.cholesky().ok_or(Error::NotPositiveDefinite)?;
    // LᵀΩL is antisymmetric and similar to ΩV up to a factor; its singular
    // values are the ν_k, each appearing twice.
    let k = &(&l.transpose() * &symplectic_form(n)) * &l;
    let d = 2 * n;
    let mut embed = Mat::zeros(2 * d, 2 * d);
    embed.set_block(0, d, &k);
    embed.set_block(d, 0, &k.transpose());
    let ev = embed.symmetric_eigenvalues();
    Ok(ev.iter().take(d).step_by(2).copied().collect())
}

pub(crate) fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

fn check_modes(modes: &[usize], n_modes: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::ModeSelection("empty mode set".into()));
    }
    for (i, &m) in modes.iter().enumerate() {
        if m >= n_modes {
            return Err(Error::ModeSelection(format!(
                "mode {m} out of range for a {n_modes}-mode state"
            )));
        }
        if modes[..i].contains(&m) {
            return Err(Error::ModeSelection(format!("mode {m} listed twice")));
        }
    }
    Ok(())
}

/// `max |SΩSᵀ − Ω|`.
pub fn symplectic_deviation<T: Real>(s: &Mat<T>) -> T {
    let om = symplectic_form(s.rows() / 2);
    let lhs = &(s * &om) * &s.transpose();
    lhs.max_abs_diff(&om)
}

/// Beam splitter of transmissivity `η` on two modes.
pub fn beam_splitter<T: Real>(eta: T) -> Result<Mat<T>> {
    if eta.is_nan() || eta < T::zero() || eta > T::one() {
        return domain(
            "eta",
            eta.to_f64_lossy(),
            "transmissivity must lie in [0, 1]",
        );
    }
    let t = eta.sqrt();
    let r = (T::one() - eta).sqrt();
    let z = T::zero();
    Mat::from_rows(&[[t, z, r, z], [z, t, z, r], [-r, z, t, z], [z, -r, z, t]])
}

/// Balanced (50:50) beam splitter.
pub fn balanced_beam_splitter<T: Real>() -> Mat<T> {
    beam_splitter(T::lit(0.5)).expect("0.5 is a valid transmissivity")
}

/// Two-mode squeezer (phase-insensitive amplifier dilation) with gain `G ≥ 1`.
pub fn two_mode_squeezer<T: Real>(gain: T) -> Result<Mat<T>> {
    if gain.is_nan() || gain < T::one() {
        return domain(
            "gain",
            gain.to_f64_lossy(),
            "two-mode squeezer gain must be >= 1",
        );
    }
    let a = gain.sqrt();
    let b = (gain - T::one()).sqrt();
    let z = T::zero();
    Mat::from_rows(&[[a, z, b, z], [z, a, z, -b], [b, z, a, z], [z, -b, z, a]])
}

/// Single-mode phase rotation by `θ`.
pub fn phase_rotation<T: Real>(theta: T) -> Mat<T> {
    let (s, c) = theta.sin_cos();
    Mat::from_rows(&[[c, s], [-s, c]]).expect("2x2 literal")
}

/// Single-mode squeezer `diag(e^{−r}, e^{r})`.
pub fn single_mode_squeezer<T: Real>(r: T) -> Mat<T> {
    Mat::diag(&[(-r).exp(), r.exp()])
}
