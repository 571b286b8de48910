//! Dense complex linear-algebra helpers built on `nalgebra`.
//!
//! Every spectral function goes through [`eigh`], which short-circuits
//! matrices whose off-diagonal entries are exactly zero. Large tensor-power
//! states in this crate are frequently diagonal, and the shortcut keeps
//! those cases linear in the dimension.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Columns are eigenvectors. `None` means the identity (diagonal input).
    vectors: Option<CMatrix>,
    /// For diagonal inputs: `order[i]` is the basis index of the i-th eigenvalue.
    order: Vec<usize>,
}

impl Eigh {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.vectors.is_none()
    }

    /// Eigenvector matrix (columns), materialized for diagonal inputs.
    pub fn vectors(&self) -> CMatrix {
        match &self.vectors {
            Some(v) => v.clone(),
            None => {
                let n = self.dim();
                let mut v = CMatrix::zeros(n, n);
                for (col, &row) in self.order.iter().enumerate() {
                    v[(row, col)] = ONE;
                }
                v
            }
        }
    }

    /// `⟨v_i| m |v_i⟩` for every eigenvector.
    pub fn expectations(&self, m: &CMatrix) -> Vec<f64> {
        match &self.vectors {
            None => self.order.iter().map(|&r| m[(r, r)].re).collect(),
            Some(v) => {
                let mv = m * v;
                (0..self.dim())
                    .map(|j| {
                        let mut acc = ZERO;
                        for i in 0..self.dim() {
                            acc += v[(i, j)].conj() * mv[(i, j)];
                        }
                        acc.re
                    })
                    .collect()
            }
        }
    }

    /// Rebuild `Σ f(λ_i) |v_i⟩⟨v_i|`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.reconstruct_indexed(|_, l| f(l))
    }

    /// Rebuild `Σ f(i, λ_i) |v_i⟩⟨v_i|`.
    pub fn reconstruct_indexed(&self, f: impl Fn(usize, f64) -> f64) -> CMatrix {
        let n = self.dim();
        match &self.vectors {
            None => {
                let mut out = CMatrix::zeros(n, n);
                for (i, &r) in self.order.iter().enumerate() {
                    out[(r, r)] = Complex64::new(f(i, self.values[i]), 0.0);
                }
                out
            }
            Some(v) => {
                let mut scaled = v.clone();
                for j in 0..n {
                    let w = f(j, self.values[j]);
                    for i in 0..n {
                        scaled[(i, j)] *= w;
                    }
                }
                hermitize(&(&scaled * v.adjoint()))
            }
        }
    }

    /// Projector onto the eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(usize, f64) -> bool) -> CMatrix {
        self.reconstruct_indexed(|i, l| if keep(i, l) { 1.0 } else { 0.0 })
    }
}

/// True when every off-diagonal entry is exactly zero.
pub fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != ZERO {
                return false;
            }
        }
    }
    true
}

pub fn real_diagonal(m: &CMatrix) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, i)].re).collect()
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj) * Complex64::new(0.5, 0.0)
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian eigendecomposition (the input is hermitized first).
pub fn eigh(m: &CMatrix) -> Eigh {
    let n = m.nrows();
    if is_diagonal(m) {
        let diag = real_diagonal(m);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
        let values = order.iter().map(|&i| diag[i]).collect();
        return Eigh { values, vectors: None, order };
    }
    let h = hermitize(m);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    Eigh { values, vectors: Some(vectors), order: (0..n).collect() }
}

pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    eigh(m).values
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues(m).last().copied().unwrap_or(0.0)
}

/// Schatten-1 norm of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    eigenvalues(m).iter().map(|x| x.abs()).sum()
}

/// Positive part `(m)_+` of a Hermitian matrix.
pub fn positive_part(m: &CMatrix) -> CMatrix {
    eigh(m).reconstruct(|x| x.max(0.0))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Operator (spectral) norm of a Hermitian matrix.
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    let ev = eigenvalues(m);
    ev.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real_diagonal(diag: &[f64]) -> CMatrix {
    let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
    CMatrix::from_diagonal(&v)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `Tr_R` of an operator on `R ⊗ A` (R is the first factor).
pub fn partial_trace_first(m: &CMatrix, dim_r: usize, dim_a: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim_a, dim_a);
    for r in 0..dim_r {
        for i in 0..dim_a {
            for j in 0..dim_a {
                out[(i, j)] += m[(r * dim_a + i, r * dim_a + j)];
            }
        }
    }
    out
}

/// `Tr_A` of an operator on `R ⊗ A` (A is the second factor).
pub fn partial_trace_second(m: &CMatrix, dim_r: usize, dim_a: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim_r, dim_r);
    for r in 0..dim_r {
        for s in 0..dim_r {
            let mut acc = ZERO;
            for a in 0..dim_a {
                acc += m[(r * dim_a + a, s * dim_a + a)];
            }
            out[(r, s)] = acc;
        }
    }
    out
}

/// Partial transpose on the second factor of `A ⊗ B`.
pub fn partial_transpose_second(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    let n = dim_a * dim_b;
    let mut out = CMatrix::zeros(n, n);
    for a1 in 0..dim_a {
        for b1 in 0..dim_b {
            for a2 in 0..dim_a {
                for b2 in 0..dim_b {
                    out[(a1 * dim_b + b2, a2 * dim_b + b1)] = m[(a1 * dim_b + b1, a2 * dim_b + b2)];
                }
            }
        }
    }
    out
}

/// Matrix `P† m P` for the permutation matrix with `P|i⟩ = |map[i]⟩`.
pub fn conjugate_by_index_map(m: &CMatrix, map: &[usize]) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])])
}

/// Commutator norm `‖ab − ba‖` measured by its largest entry.
pub fn commutator_max_abs(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}
