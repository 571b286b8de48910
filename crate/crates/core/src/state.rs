//! Density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Tolerance for the Hermitian, PSD and trace checks in [`DensityMatrix::validate`].
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, positive semi-definite, unit-trace complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Checks a raw square matrix and returns it as a state.
    ///
    /// The matrix is symmetrized, and eigenvalues in `[-1e-10, 0)` are clamped
    /// to zero. Anything more negative is rejected.
    pub fn validate(raw: CMatrix) -> Result<Self> {
        if raw.nrows() != raw.ncols() {
            return Err(Error::NotSquare(raw.nrows(), raw.ncols()));
        }
        let dev = linalg::hermitian_deviation(&raw);
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let mut m = linalg::hermitize(&raw);
        let eig = linalg::eigh(&m);
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::NotPsd(min));
        }
        if min < 0.0 {
            m = eig.reconstruct(|x| x.max(0.0));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceMismatch(tr));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix the caller already knows to be a state.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    /// Validates a PSD operator after rescaling it to unit trace.
    pub fn normalized(raw: CMatrix) -> Result<Self> {
        let tr = raw.trace().re;
        if !(tr > 0.0) {
            return Err(Error::TraceMismatch(tr));
        }
        Self::validate(raw / Complex64::new(tr, 0.0))
    }

    /// Rescales a nonzero PSD operator to unit trace after clamping negative
    /// eigenvalues no larger in magnitude than `neg_tol·λ_max`.
    pub fn from_psd_clamped(raw: CMatrix, neg_tol: f64) -> Result<Self> {
        if raw.nrows() != raw.ncols() {
            return Err(Error::NotSquare(raw.nrows(), raw.ncols()));
        }
        let eig = linalg::eigh(&linalg::hermitize(&raw));
        let max = eig.values.last().copied().unwrap_or(0.0);
        let min = eig.values.first().copied().unwrap_or(0.0);
        if !(max > 0.0) {
            return Err(Error::TraceMismatch(max));
        }
        if min < -neg_tol * max {
            return Err(Error::NotPsd(min));
        }
        let m = eig.reconstruct(|x| x.max(0.0));
        let tr = m.trace().re;
        Ok(Self::from_trusted(m / Complex64::new(tr, 0.0)))
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::validate(linalg::from_real_diagonal(probs))
    }

    /// `1/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(linalg::identity(dim) / Complex64::new(dim as f64, 0.0))
    }

    /// `|i⟩⟨i|`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, i)] = linalg::ONE;
        Self::from_trusted(m)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let n = psi.len();
        let s = norm.sqrt();
        let m = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (s * s));
        Ok(Self::from_trusted(linalg::hermitize(&m)))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_trusted(linalg::kron(&self.m, &other.m))
    }

    pub fn is_diagonal(&self) -> bool {
        linalg::is_diagonal(&self.m)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        linalg::real_diagonal(&self.m)
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[&DensityMatrix]) -> Result<DensityMatrix> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidArgument("weights and states differ in length".into()));
        }
        let d = states[0].dim();
        let mut acc = CMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != d {
                return Err(Error::DimensionMismatch(format!("{} vs {}", d, s.dim())));
            }
            acc += s.matrix() * Complex64::new(*w, 0.0);
        }
        Self::validate(acc)
    }
}
