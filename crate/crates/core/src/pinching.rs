//! Pinching with respect to the spectral projectors of a state.

use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;

/// Default relative gap below which eigenvalues are treated as equal.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// `ρ ↦ Σ_j E_j ρ E_j` for mutually orthogonal projectors summing to 1.
#[derive(Debug, Clone)]
pub struct PinchingMap {
    dim: usize,
    projectors: Vec<CMatrix>,
    eigenvalues: Vec<f64>,
}

impl PinchingMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct eigenvalues `k`.
    pub fn k(&self) -> usize {
        self.projectors.len()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    /// Representative (mean) eigenvalue of each cluster, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for p in &self.projectors {
            out += p * rho * p;
        }
        linalg::hermitize(&out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_trusted(self.apply_matrix(rho.matrix()))
    }
}

/// Groups ascending eigenvalues whose consecutive gap is at most
/// `cluster_tol · max|λ|`. Returns the index ranges of each group.
pub fn cluster_sorted(values: &[f64], cluster_tol: f64) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > cluster_tol * scale {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}

/// Pinching map built from the eigenprojectors of `sigma`.
pub fn pinching_of(sigma: &DensityMatrix, cluster_tol: f64) -> PinchingMap {
    let eig = linalg::eigh(sigma.matrix());
    let groups = cluster_sorted(&eig.values, cluster_tol);
    let projectors = groups
        .iter()
        .map(|g| eig.projector(|i, _| g.contains(&i)))
        .collect();
    let eigenvalues = groups
        .iter()
        .map(|g| eig.values[g.clone()].iter().sum::<f64>() / g.len() as f64)
        .collect();
    PinchingMap { dim: sigma.dim(), projectors, eigenvalues }
}

/// Number of distinct values after clustering.
pub fn distinct_count(values: &[f64], cluster_tol: f64) -> usize {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    cluster_sorted(&sorted, cluster_tol).len()
}
