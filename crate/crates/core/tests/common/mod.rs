#![allow(dead_code)]

use gausskey::symplectic::{
    beam_splitter, phase_rotation, single_mode_squeezer, two_mode_squeezer,
};
use gausskey::{CovMat64, Mat64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters of a random two-mode state `S (⊕ν_k I) Sᵀ`.
#[derive(Debug, Clone, Copy)]
pub struct TwoModeParams {
    pub nu: [f64; 2],
    pub squeeze: [f64; 2],
    pub phase: [f64; 4],
    pub eta: f64,
    pub gain: f64,
}

impl TwoModeParams {
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            nu: [
                1.0 + rng.random::<f64>() * 9.0,
                1.0 + rng.random::<f64>() * 9.0,
            ],
            squeeze: [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
            phase: std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU)),
            eta: rng.random(),
            gain: 1.0 + rng.random::<f64>() * 3.0,
        }
    }

    pub fn state(&self) -> CovMat64 {
        let v = CovMat64::thermal(self.nu[0])
            .unwrap()
            .product(&CovMat64::thermal(self.nu[1]).unwrap());
        let v = v
            .apply_symplectic(&single_mode_squeezer(self.squeeze[0]), &[0])
            .unwrap();
        let v = v
            .apply_symplectic(&phase_rotation(self.phase[0]), &[0])
            .unwrap();
        let v = v
            .apply_symplectic(&single_mode_squeezer(self.squeeze[1]), &[1])
            .unwrap();
        let v = v
            .apply_symplectic(&phase_rotation(self.phase[1]), &[1])
            .unwrap();
        let v = v
            .apply_symplectic(&beam_splitter(self.eta).unwrap(), &[0, 1])
            .unwrap();
        let v = v
            .apply_symplectic(&phase_rotation(self.phase[2]), &[0])
            .unwrap();
        let v = v
            .apply_symplectic(&two_mode_squeezer(self.gain).unwrap(), &[0, 1])
            .unwrap();
        v.apply_symplectic(&phase_rotation(self.phase[3]), &[1])
            .unwrap()
    }

    pub fn sorted_nu(&self) -> Vec<f64> {
        let mut nu = self.nu.to_vec();
        nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
        nu
    }
}

/// Seeded stream of random two-mode states.
pub fn random_states(seed: u64, count: usize) -> Vec<TwoModeParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| TwoModeParams::random(&mut rng))
        .collect()
}

/// Symplectic eigenvalues from the eigenvalues `±iν` of `ΩV`, sorted descending.
pub fn oracle_spectrum(v: &Mat64) -> Vec<f64> {
    let n = v.rows();
    let om = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            1.0
        } else if i % 2 == 1 && i == j + 1 {
            -1.0
        } else {
            0.0
        }
    });
    let vm = DMatrix::<f64>::from_fn(n, n, |i, j| v[(i, j)]);
    let ev = (om * vm).complex_eigenvalues();
    let mut nu: Vec<f64> = ev.iter().map(|z| z.im).filter(|&x| x > 0.0).collect();
    nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
    nu
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max)
}
