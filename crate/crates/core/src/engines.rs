//! First-principles evaluation of the rates at finite source squeezing.
//!
//! The closed forms in [`crate::rates`] are μ → ∞ limits. The functions here
//! build the actual Gaussian states for a two-mode squeezed vacuum source of
//! variance `μ` and compute entropies from symplectic spectra, which gives an
//! independent route to the same numbers.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::CanonicalChannel;
use crate::error::{domain, Result};
use crate::rates::{e_r_interior, q1g_interior, r_rev_interior};
use crate::scalar::Real;
use crate::symplectic::{balanced_beam_splitter, g_nonneg, CovMat, Quadrature};

/// Alice's half of the source.
const ALICE: usize = 0;
/// Channel input/output, later Bob's kept beam-splitter port.
const BOB: usize = 1;

/// Output state `(I ⊗ N)(|μ⟩⟨μ|)` with Alice on mode 0 and Bob on mode 1.
pub fn channel_output<T: Real>(ch: &CanonicalChannel<T>, mu: T) -> Result<CovMat<T>> {
    ch.apply(&CovMat::tmsv(mu)?, BOB)
}

/// Reverse coherent information `S(A) − S(AB)` for a TMSV(μ) input.
pub fn rci_finite_mu<T: Real>(ch: &CanonicalChannel<T>, mu: T) -> Result<T> {
    let out = channel_output(ch, mu)?;
    let s_a = g_nonneg((mu - T::one()) * T::lit(0.5));
    Ok(s_a - out.entropy()?)
}

/// Coherent information `S(B) − S(AB)` for a TMSV(μ) input.
pub fn ci_finite_mu<T: Real>(ch: &CanonicalChannel<T>, mu: T) -> Result<T> {
    let out = channel_output(ch, mu)?;
    let s_b = out.partial_trace(&[BOB])?.entropy()?;
    Ok(s_b - out.entropy()?)
}

/// Whether the vacuum port discarded at Bob's beam splitter is given to Eve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PortModel {
    /// The discarded port stays out of Eve's reach (trusted detector noise).
    Trusted,
    /// Eve also holds the discarded port.
    Untrusted,
}

impl PortModel {
    pub const ALL: [PortModel; 2] = [PortModel::Trusted, PortModel::Untrusted];

    pub fn name(self) -> &'static str {
        match self {
            PortModel::Trusted => "trusted",
            PortModel::Untrusted => "untrusted",
        }
    }
}

impl fmt::Display for PortModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PortModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "trusted" => Ok(PortModel::Trusted),
            "untrusted" => Ok(PortModel::Untrusted),
            other => Err(format!(
                "unknown port model '{other}' (expected trusted or untrusted)"
            )),
        }
    }
}

/// Terms of the reverse-reconciliation rate `I(x_A : x_B) − χ(E : x_B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolBreakdown<T> {
    /// Classical mutual information between Alice's and Bob's homodyne outcomes.
    pub mutual_info: T,
    /// Eve's entropy before Bob's measurement.
    pub eve_entropy: T,
    /// Eve's entropy conditioned on Bob's outcome.
    pub eve_conditional_entropy: T,
    /// `χ(E : x_B) = S(E) − S(E | x_B)`.
    pub holevo_eve: T,
    /// Entropy of the modes complementary to Eve; equals `eve_entropy` for a pure global state.
    pub complement_entropy: T,
    pub rate: T,
}

/// Global pure state of the protocol.
///
/// Mode layout: 0 Alice, 1 Bob's kept port, 2 and 3 the environment (Eve),
/// 4 Bob's discarded port.
pub fn protocol_state<T: Real>(ch: &CanonicalChannel<T>, mu: T) -> Result<CovMat<T>> {
    let dilated = ch.dilate()?.apply(&CovMat::tmsv(mu)?, BOB)?;
    debug_assert_eq!(dilated.eve_modes, [2, 3]);
    let with_vacuum = dilated.state.product(&CovMat::vacuum(1));
    with_vacuum.apply_symplectic(&balanced_beam_splitter(), &[BOB, 4])
}

/// Signed reverse-reconciliation rate of the homodyne protocol at finite `μ`,
/// computed from the dilated global state; `quadrature` is the basis both
/// parties measure.
pub fn protocol_breakdown<T: Real>(
    ch: &CanonicalChannel<T>,
    mu: T,
    ports: PortModel,
    quadrature: Quadrature,
) -> Result<ProtocolBreakdown<T>> {
    if !(mu > T::one() + T::tol(1e-9)) {
        return domain(
            "mu",
            mu.to_f64_lossy(),
            "protocol engine needs mu > 1 + 1e-9",
        );
    }
    let global = protocol_state(ch, mu)?;
    let (eve, complement): (&[usize], &[usize]) = match ports {
        PortModel::Trusted => (&[2, 3], &[0, 1, 4]),
        PortModel::Untrusted => (&[2, 3, 4], &[0, 1]),
    };

    let ab = global.partial_trace(&[ALICE, BOB])?;
    let alice_given_bob = ab.homodyne_condition(1, quadrature)?;
    let k = quadrature.offset();
    let mutual_info = (ab.get(k, k) / alice_given_bob.get(k, k)).log2() * T::lit(0.5);

    let eve_entropy = global.partial_trace(eve)?.entropy()?;
    let complement_entropy = global.partial_trace(complement)?.entropy()?;
    let mut bob_and_eve = vec![BOB];
    bob_and_eve.extend_from_slice(eve);
    let eve_conditional_entropy = global
        .partial_trace(&bob_and_eve)?
        .homodyne_condition(0, quadrature)?
        .entropy()?;
    let holevo_eve = eve_entropy - eve_conditional_entropy;

    Ok(ProtocolBreakdown {
        mutual_info,
        eve_entropy,
        eve_conditional_entropy,
        holevo_eve,
        complement_entropy,
        rate: mutual_info - holevo_eve,
    })
}

/// [`protocol_breakdown`] rate with both parties measuring `q`.
pub fn protocol_rate_numeric<T: Real>(
    ch: &CanonicalChannel<T>,
    mu: T,
    ports: PortModel,
) -> Result<T> {
    Ok(protocol_breakdown(ch, mu, ports, Quadrature::Q)?.rate)
}

/// Which finite-μ quantity to track against its closed-form limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Rci,
    Ci,
    Protocol(PortModel),
}

impl Engine {
    pub fn value<T: Real>(self, ch: &CanonicalChannel<T>, mu: T) -> Result<T> {
        match self {
            Engine::Rci => rci_finite_mu(ch, mu),
            Engine::Ci => ci_finite_mu(ch, mu),
            Engine::Protocol(ports) => protocol_rate_numeric(ch, mu, ports),
        }
    }

    /// The μ → ∞ interior this engine converges to.
    pub fn target<T: Real>(self, ch: &CanonicalChannel<T>) -> T {
        match self {
            Engine::Rci => e_r_interior(ch),
            Engine::Ci => q1g_interior(ch),
            Engine::Protocol(_) => r_rev_interior(ch),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow<T> {
    pub mu: T,
    pub value: T,
    pub target: T,
    pub gap: T,
}

/// Evaluates `engine` at each `μ` and compares with its closed-form limit.
pub fn convergence<T: Real>(
    ch: &CanonicalChannel<T>,
    mus: &[T],
    engine: Engine,
) -> Result<Vec<ConvergenceRow<T>>> {
    let target = engine.target(ch);
    mus.iter()
        .map(|&mu| {
            let value = engine.value(ch, mu)?;
            Ok(ConvergenceRow {
                mu,
                value,
                target,
                gap: target - value,
            })
        })
        .collect()
}
