//! Hypothesis-testing relative entropy `D_H^ε(ρ‖σ) = −log min{Tr Mσ : 0 ⪯ M ⪯ 1, Tr Mρ ≥ 1−ε}`.
//!
//! Solved through the concave dual `g(μ) = μ(1−ε) − Tr[(μρ − σ)₊]`. Its
//! supergradient `(1−ε) − Tr[P₊(μ)ρ]` is monotone in `μ`, so the optimum is
//! found by bisection. The primal test is read off the final spectrum: the
//! strictly positive eigenspace plus a fraction of the (near-)zero eigenspace
//! that makes `Tr Mρ = 1−ε` exact.

use crate::divergences::{self, check_dims, SUPPORT_REL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;

/// Relative size below which an eigenvalue of `μρ − σ` is treated as zero.
pub const ZERO_EIG_REL_TOL: f64 = 1e-11;
pub const MAX_BISECTION_STEPS: usize = 200;
const MAX_BRACKET_DOUBLINGS: usize = 1000;

/// Optimal test for a quantum pair.
#[derive(Debug, Clone)]
pub struct TestResult {
    /// `−log β`, or `+∞` when `β = 0`.
    pub value: f64,
    pub optimal_test: CMatrix,
    pub dual_multiplier: f64,
    /// `|Tr Mσ − g(μ)|`.
    pub duality_gap: f64,
    /// Type-II error `Tr Mσ`.
    pub beta: f64,
    /// `Tr Mρ`, which is `1 − ε` up to rounding.
    pub acceptance: f64,
}

/// Optimal test for commuting inputs, kept as a diagonal.
#[derive(Debug, Clone)]
pub struct ClassicalTestResult {
    pub value: f64,
    pub test: Vec<f64>,
    pub dual_multiplier: f64,
    pub duality_gap: f64,
    pub beta: f64,
    pub acceptance: f64,
}

/// Spectrum of `μρ − σ` with `ρ`-weights of each eigenvector.
struct Slice {
    values: Vec<f64>,
    rho_weights: Vec<f64>,
}

impl Slice {
    fn scale(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    /// `Tr[P₊ρ]` with the exact sign; tolerances only enter at assembly so
    /// the bisection lands on the true breakpoint.
    fn positive_mass(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.rho_weights)
            .filter(|(l, _)| **l > 0.0)
            .map(|(_, w)| *w)
            .sum()
    }

    fn positive_trace(&self) -> f64 {
        self.values.iter().filter(|l| **l > 0.0).sum()
    }

    /// Per-eigenvector test coefficients in `{1, s, 0}`.
    fn test_coefficients(&self, eps: f64, width: f64) -> Vec<f64> {
        let tau = 2.0 * ZERO_EIG_REL_TOL * self.scale() + 2.0 * width;
        let mut above = 0.0;
        let mut flat = 0.0;
        for (l, w) in self.values.iter().zip(&self.rho_weights) {
            if *l > tau {
                above += w;
            } else if *l >= -tau {
                flat += w;
            }
        }
        let s = if flat > 0.0 { ((1.0 - eps - above) / flat).clamp(0.0, 1.0) } else { 0.0 };
        self.values
            .iter()
            .map(|l| if *l > tau { 1.0 } else if *l >= -tau { s } else { 0.0 })
            .collect()
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsOutOfRange(eps));
    }
    Ok(())
}

/// Bisection on the dual supergradient. Returns `(lo, hi)` with
/// `Tr[P₊(lo)ρ] < 1−ε ≤ Tr[P₊(hi)ρ]`.
fn bracket_multiplier(eval: impl Fn(f64) -> Slice, eps: f64, start: f64) -> Result<(f64, f64)> {
    let target = 1.0 - eps;
    let mut lo = 0.0;
    let mut hi = if start.is_finite() && start > 0.0 { start } else { 1.0 };
    let mut doublings = 0;
    while eval(hi).positive_mass() < target {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(Error::ConvergenceFailure(doublings));
        }
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        if eval(mid).positive_mass() >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi - lo <= 4.0 * f64::EPSILON * hi {
        Ok((lo, hi))
    } else {
        Err(Error::ConvergenceFailure(MAX_BISECTION_STEPS))
    }
}

fn log_value(beta: f64) -> f64 {
    if beta > 0.0 {
        -beta.ln()
    } else {
        f64::INFINITY
    }
}

/// `D_H^ε` for probability vectors (commuting states).
pub fn hypothesis_test_diagonal(p: &[f64], q: &[f64], eps: f64) -> Result<ClassicalTestResult> {
    check_eps(eps)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", p.len(), q.len())));
    }
    let thr = SUPPORT_REL_TOL * q.iter().fold(0.0_f64, |a, &b| a.max(b));
    let leak: f64 = p.iter().zip(q).filter(|(_, &qi)| qi <= thr).map(|(&pi, _)| pi).sum();
    if leak >= 1.0 - eps {
        let test: Vec<f64> = q.iter().map(|&qi| if qi <= thr { 1.0 } else { 0.0 }).collect();
        return Ok(ClassicalTestResult {
            value: f64::INFINITY,
            beta: test.iter().zip(q).map(|(t, qi)| t * qi).sum(),
            acceptance: leak,
            test,
            dual_multiplier: f64::INFINITY,
            duality_gap: 0.0,
        });
    }
    let eval = |mu: f64| Slice {
        values: p.iter().zip(q).map(|(pi, qi)| mu * pi - qi).collect(),
        rho_weights: p.to_vec(),
    };
    let start = divergences::max_likelihood_ratio(p, q).map(|r| r + 1.0).unwrap_or(1.0);
    let (lo, hi) = bracket_multiplier(eval, eps, start)?;
    let slice = eval(hi);
    let test = slice.test_coefficients(eps, hi - lo);
    let beta: f64 = test.iter().zip(q).map(|(t, qi)| t * qi).sum();
    let acceptance: f64 = test.iter().zip(p).map(|(t, pi)| t * pi).sum();
    let dual = hi * (1.0 - eps) - slice.positive_trace();
    Ok(ClassicalTestResult {
        value: log_value(beta),
        test,
        dual_multiplier: hi,
        duality_gap: (beta - dual).abs(),
        beta,
        acceptance,
    })
}

/// `D_H^ε(ρ‖σ)` with its optimal test and dual certificate.
pub fn hypothesis_test(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<TestResult> {
    check_dims(rho, sigma)?;
    check_eps(eps)?;
    if let Some((p, q)) = divergences::both_diagonal(rho, sigma) {
        let r = hypothesis_test_diagonal(&p, &q, eps)?;
        return Ok(TestResult {
            value: r.value,
            optimal_test: linalg::from_real_diagonal(&r.test),
            dual_multiplier: r.dual_multiplier,
            duality_gap: r.duality_gap,
            beta: r.beta,
            acceptance: r.acceptance,
        });
    }

    let s_eig = linalg::eigh(sigma.matrix());
    let thr = divergences::support_threshold(&s_eig.values);
    let weights = s_eig.expectations(rho.matrix());
    let leak: f64 = s_eig.values.iter().zip(&weights).filter(|(l, _)| **l <= thr).map(|(_, w)| *w).sum();
    if leak >= 1.0 - eps {
        let m = s_eig.projector(|_, l| l <= thr);
        let beta = linalg::trace_product(&m, sigma.matrix()).re.max(0.0);
        return Ok(TestResult {
            value: f64::INFINITY,
            acceptance: linalg::trace_product(&m, rho.matrix()).re,
            optimal_test: m,
            dual_multiplier: f64::INFINITY,
            duality_gap: beta,
            beta,
        });
    }

    let eval_full = |mu: f64| {
        let a = rho.matrix() * num_complex::Complex64::new(mu, 0.0) - sigma.matrix();
        let eig = linalg::eigh(&a);
        let rho_weights = eig.expectations(rho.matrix());
        (eig, rho_weights)
    };
    let eval = |mu: f64| {
        let (eig, rho_weights) = eval_full(mu);
        Slice { values: eig.values, rho_weights }
    };
    let start = divergences::dmax(rho, sigma)?.exp() + 1.0;
    let (lo, hi) = bracket_multiplier(eval, eps, start)?;
    let (eig, rho_weights) = eval_full(hi);
    let slice = Slice { values: eig.values.clone(), rho_weights };
    let coeffs = slice.test_coefficients(eps, hi - lo);
    let m = linalg::hermitize(&eig.reconstruct_indexed(|i, _| coeffs[i]));
    let beta = linalg::trace_product(&m, sigma.matrix()).re;
    let acceptance = linalg::trace_product(&m, rho.matrix()).re;
    let dual = hi * (1.0 - eps) - slice.positive_trace();
    Ok(TestResult {
        value: log_value(beta),
        optimal_test: m,
        dual_multiplier: hi,
        duality_gap: (beta - dual).abs(),
        beta,
        acceptance,
    })
}
