//! Seeded random instances for tests and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Exp1, StandardNormal};

use crate::channel::CqChannel;
use crate::linalg::CMatrix;
use crate::state::DensityMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform point on the probability simplex.
pub fn distribution(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Full-rank Hilbert–Schmidt random state `GG†/Tr GG†`.
pub fn state(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    state_of_rank(rng, dim, dim)
}

/// Random state of rank at most `rank`.
pub fn state_of_rank(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, rank.max(1), |_, _| gaussian(rng));
    DensityMatrix::normalized(&g * g.adjoint()).expect("Gram matrix of a Gaussian sample is PSD")
}

pub fn pure_state(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let psi: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&psi).expect("Gaussian vector is nonzero")
}

pub fn diagonal_state(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    DensityMatrix::from_diagonal(&distribution(rng, dim)).expect("simplex point")
}

/// Haar-ish unitary from the QR factor of a Ginibre matrix.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column phases so the distribution does not depend on QR's sign choice
    let mut q = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn channel(rng: &mut impl Rng, letters: usize, dim: usize) -> CqChannel {
    CqChannel::new((0..letters).map(|_| state(rng, dim)).collect()).expect("uniform output dimension")
}

pub fn pure_output_channel(rng: &mut impl Rng, letters: usize, dim: usize) -> CqChannel {
    CqChannel::new((0..letters).map(|_| pure_state(rng, dim)).collect()).expect("uniform output dimension")
}

/// Channel whose outputs are all diagonal in the computational basis.
pub fn commuting_channel(rng: &mut impl Rng, letters: usize, dim: usize) -> CqChannel {
    CqChannel::new((0..letters).map(|_| diagonal_state(rng, dim)).collect()).expect("uniform output dimension")
}
