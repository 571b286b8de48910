//! Reference implementations used as test oracles.
//!
//! Matrix functions go through the real symmetric embedding
//! `[[Re A, −Im A], [Im A, Re A]]`, a different path from the library's
//! complex eigensolver.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use cqstein::linalg::CMatrix;
use cqstein::{random, DensityMatrix};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn realify(a: &CMatrix) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = a[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// `f(A)` for Hermitian `A`.
pub fn mat_fn(a: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = a.nrows();
    let h = (a + a.adjoint()) * c(0.5);
    let eig = realify(&h).symmetric_eigen();
    let fl = DMatrix::from_diagonal(&eig.eigenvalues.map(&f));
    let r = &eig.eigenvectors * fl * eig.eigenvectors.transpose();
    CMatrix::from_fn(n, n, |i, j| Complex64::new(r[(i, j)], r[(i + n, j)]))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigvals(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * c(0.5);
    let mut v: Vec<f64> = realify(&h).symmetric_eigen().eigenvalues.iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    // every eigenvalue of the embedding appears twice
    v.into_iter().step_by(2).collect()
}

pub fn trace_norm(a: &CMatrix) -> f64 {
    eigvals(a).iter().map(|v| v.abs()).sum()
}

fn safe_ln(x: f64) -> f64 {
    if x > 1e-300 {
        x.ln()
    } else {
        0.0
    }
}

/// `D(ρ‖σ)` for full-rank `σ`.
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let lr = mat_fn(rho.matrix(), safe_ln);
    let ls = mat_fn(sigma.matrix(), safe_ln);
    (rho.matrix() * (lr - ls)).trace().re
}

pub fn entropy(rho: &DensityMatrix) -> f64 {
    -eigvals(rho.matrix()).iter().map(|&l| if l > 1e-300 { l * l.ln() } else { 0.0 }).sum::<f64>()
}

/// Sandwiched Rényi divergence for full-rank `σ`.
pub fn renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> f64 {
    let g = (1.0 - alpha) / (2.0 * alpha);
    let s = mat_fn(sigma.matrix(), |x| x.powf(g));
    let inner = &s * rho.matrix() * &s;
    let q: f64 = eigvals(&inner).iter().map(|l| l.max(0.0).powf(alpha)).sum();
    q.ln() / (alpha - 1.0)
}

/// `D_max(ρ‖σ)` for full-rank `σ`.
pub fn dmax(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let s = mat_fn(sigma.matrix(), |x| 1.0 / x.sqrt());
    let m = &s * rho.matrix() * &s;
    eigvals(&m).last().unwrap().ln()
}

pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    0.5 * trace_norm(&(rho.matrix() - sigma.matrix()))
}

/// Neyman–Pearson by sorting outcomes on the likelihood ratio: returns the
/// smallest type-II error with type-I error at most `eps`.
pub fn neyman_pearson_beta(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let mut idx: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    // p/q descending without dividing: q = 0 outcomes come first
    idx.sort_by(|&i, &j| (p[j] * q[i]).total_cmp(&(p[i] * q[j])));
    let mut need = 1.0 - eps;
    let mut beta = 0.0;
    for i in idx {
        if need <= 0.0 {
            break;
        }
        let take = (need / p[i]).min(1.0);
        beta += take * q[i];
        need -= take * p[i];
    }
    beta
}

/// Random channel `ρ ↦ Tr_env V ρ V†` with `V` an isometry into `d_out·env`.
pub struct Stinespring {
    pub kraus: Vec<CMatrix>,
}

impl Stinespring {
    pub fn random(rng: &mut impl Rng, d_in: usize, d_out: usize, env: usize) -> Self {
        let big = d_out * env;
        assert!(big >= d_in);
        let u = random::unitary(rng, big);
        let v = u.columns(0, d_in).into_owned();
        let kraus = (0..env).map(|k| CMatrix::from_fn(d_out, d_in, |i, j| v[(i * env + k, j)])).collect();
        Self { kraus }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let d = self.kraus[0].nrows();
        let mut out = CMatrix::zeros(d, d);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        DensityMatrix::validate((&out + out.adjoint()) * c(0.5)).expect("CPTP output is a state")
    }
}

/// `Tr_B` of a state on `A ⊗ B`.
pub fn trace_out_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum())
}

pub fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Binary entropy in nats.
pub fn h2(x: f64) -> f64 {
    let t = |v: f64| if v > 0.0 { -v * v.ln() } else { 0.0 };
    t(x) + t(1.0 - x)
}
