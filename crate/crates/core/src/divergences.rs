//! State divergences in nats.
//!
//! All routines return `f64::INFINITY` when the support condition fails;
//! no large finite stand-in is ever used. Logarithms and matrix powers are
//! taken on supports, where eigenvalues at or below `1e-12·λ_max` count as
//! zero.

use crate::error::{Error, Result};
use crate::linalg::{self, Eigh};
use crate::pinching::{pinching_of, DEFAULT_CLUSTER_TOL};
use crate::state::DensityMatrix;

/// Relative cutoff below which eigenvalues are outside the support.
pub const SUPPORT_REL_TOL: f64 = 1e-12;

/// Mass of `ρ` outside `supp σ` beyond which `ρ ⋘ σ` is declared.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

pub(crate) fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    Ok(())
}

pub(crate) fn support_threshold(values: &[f64]) -> f64 {
    SUPPORT_REL_TOL * values.last().copied().unwrap_or(0.0).max(0.0)
}

/// Diagonals of `(ρ, σ)` when both are exactly diagonal.
pub(crate) fn both_diagonal(rho: &DensityMatrix, sigma: &DensityMatrix) -> Option<(Vec<f64>, Vec<f64>)> {
    if rho.is_diagonal() && sigma.is_diagonal() {
        Some((rho.diagonal(), sigma.diagonal()))
    } else {
        None
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, &b| a.max(b))
}

/// `σ` spectrum split into support weights of `ρ`.
struct SupportView {
    sigma: Eigh,
    weights: Vec<f64>,
    threshold: f64,
}

impl SupportView {
    fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Self {
        let eig = linalg::eigh(sigma.matrix());
        let weights = eig.expectations(rho.matrix());
        let threshold = support_threshold(&eig.values);
        Self { sigma: eig, weights, threshold }
    }

    fn leak(&self) -> f64 {
        self.sigma
            .values
            .iter()
            .zip(&self.weights)
            .filter(|(l, _)| **l <= self.threshold)
            .map(|(_, w)| *w)
            .sum()
    }

    /// `σ^p` on the support, zero elsewhere.
    fn power(&self, p: f64) -> linalg::CMatrix {
        let t = self.threshold;
        self.sigma.reconstruct(|x| if x > t { x.powf(p) } else { 0.0 })
    }
}

fn entropy_term(values: &[f64]) -> f64 {
    let t = support_threshold(values);
    values.iter().filter(|&&x| x > t).map(|&x| x * x.ln()).sum()
}

/// Classical relative entropy of two probability vectors.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    let tq = SUPPORT_REL_TOL * max_of(q);
    let tp = SUPPORT_REL_TOL * max_of(p);
    let leak: f64 = p.iter().zip(q).filter(|(_, &qi)| qi <= tq).map(|(&pi, _)| pi).sum();
    if leak > SUPPORT_LEAK_TOL {
        return f64::INFINITY;
    }
    let d: f64 = p
        .iter()
        .zip(q)
        .filter(|(&pi, &qi)| pi > tp && qi > tq)
        .map(|(&pi, &qi)| pi * (pi.ln() - qi.ln()))
        .sum();
    d.max(0.0)
}

/// Umegaki relative entropy `Tr ρ(log ρ − log σ)`.
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    if let Some((p, q)) = both_diagonal(rho, sigma) {
        return Ok(kl_divergence(&p, &q));
    }
    let view = SupportView::new(rho, sigma);
    if view.leak() > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let cross: f64 = view
        .sigma
        .values
        .iter()
        .zip(&view.weights)
        .filter(|(l, _)| **l > view.threshold)
        .map(|(l, w)| w * l.ln())
        .sum();
    let neg_entropy = entropy_term(&linalg::eigenvalues(rho.matrix()));
    Ok((neg_entropy - cross).max(0.0))
}

/// `σ` diagonalized once for repeated evaluations of `D(·‖σ)`.
pub struct LogReference {
    view: Eigh,
    threshold: f64,
}

impl LogReference {
    pub fn new(sigma: &DensityMatrix) -> Self {
        let view = linalg::eigh(sigma.matrix());
        let threshold = support_threshold(&view.values);
        Self { view, threshold }
    }

    /// `D(ρ‖σ)` given `Tr ρ log ρ` precomputed by the caller.
    pub fn rel_entropy(&self, rho: &DensityMatrix, rho_log_rho: f64) -> f64 {
        let w = self.view.expectations(rho.matrix());
        let mut leak = 0.0;
        let mut cross = 0.0;
        for (l, wi) in self.view.values.iter().zip(&w) {
            if *l > self.threshold {
                cross += wi * l.ln();
            } else {
                leak += wi;
            }
        }
        if leak > SUPPORT_LEAK_TOL {
            return f64::INFINITY;
        }
        (rho_log_rho - cross).max(0.0)
    }
}

/// `Tr ρ log ρ`.
pub fn neg_entropy(rho: &DensityMatrix) -> f64 {
    entropy_term(&linalg::eigenvalues(rho.matrix()))
}

/// Von Neumann entropy `−Tr ρ log ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -entropy_term(&linalg::eigenvalues(rho.matrix()))
}

/// Sandwiched Rényi divergence of order `α > 1`.
pub fn sandwiched_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_dims(rho, sigma)?;
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if let Some((p, q)) = both_diagonal(rho, sigma) {
        let tq = SUPPORT_REL_TOL * max_of(&q);
        let leak: f64 = p.iter().zip(&q).filter(|(_, &qi)| qi <= tq).map(|(&pi, _)| pi).sum();
        if leak > SUPPORT_LEAK_TOL {
            return Ok(f64::INFINITY);
        }
        let s: f64 = p
            .iter()
            .zip(&q)
            .filter(|(&pi, &qi)| pi > 0.0 && qi > tq)
            .map(|(&pi, &qi)| pi.powf(alpha) * qi.powf(1.0 - alpha))
            .sum();
        return Ok((s.ln() / (alpha - 1.0)).max(0.0));
    }
    let view = SupportView::new(rho, sigma);
    if view.leak() > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let s = view.power((1.0 - alpha) / (2.0 * alpha));
    let q = &s * rho.matrix() * &s;
    let trace: f64 = linalg::eigenvalues(&q).iter().filter(|&&x| x > 0.0).map(|x| x.powf(alpha)).sum();
    Ok((trace.ln() / (alpha - 1.0)).max(0.0))
}

/// `max p_i/q_i` over the support of `q`, or `None` when `p ⋘ q`.
pub fn max_likelihood_ratio(p: &[f64], q: &[f64]) -> Option<f64> {
    let tq = SUPPORT_REL_TOL * max_of(q);
    let tp = SUPPORT_REL_TOL * max_of(p);
    let mut best: f64 = 0.0;
    for (pi, qi) in p.iter().zip(q) {
        if *qi <= tq {
            if *pi > SUPPORT_LEAK_TOL.max(tp) {
                return None;
            }
        } else {
            best = best.max(pi / qi);
        }
    }
    Some(best)
}

/// Max-relative entropy `log inf{λ : ρ ≤ λσ}`.
pub fn dmax(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    if let Some((p, q)) = both_diagonal(rho, sigma) {
        return Ok(max_likelihood_ratio(&p, &q).map_or(f64::INFINITY, |r| r.ln().max(0.0)));
    }
    let view = SupportView::new(rho, sigma);
    if view.leak() > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let s = view.power(-0.5);
    let m = &s * rho.matrix() * &s;
    Ok(linalg::max_eigenvalue(&m).ln().max(0.0))
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok(0.5 * linalg::trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Pinching loss `D(ρ‖σ) − D(E(ρ)‖σ)` and its bound `log k`, with `E` the
/// pinching map of `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinchingGap {
    pub gap: f64,
    pub bound: f64,
}

pub fn pinching_entropy_gap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<PinchingGap> {
    check_dims(rho, sigma)?;
    let full = rel_entropy(rho, sigma)?;
    if full.is_infinite() {
        return Err(Error::SupportViolation);
    }
    let pinch = pinching_of(sigma, DEFAULT_CLUSTER_TOL);
    let pinched = rel_entropy(&pinch.apply(rho), sigma)?;
    Ok(PinchingGap { gap: full - pinched, bound: (pinch.k() as f64).ln() })
}
