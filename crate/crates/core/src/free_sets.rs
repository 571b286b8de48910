//! Free sets of c-q channels and optimization over them.
//!
//! Four families are supported: the IID powers of a single channel, all
//! replacer channels, channels whose every output lies in a state family
//! (incoherent states, or any other [`StateFamily`]), and channels with PPT
//! outputs on `2 ⊗ 2`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::channel::{tensor_channel, tensor_power, CqChannel};
use crate::channel_divergences::letterwise_max;
use crate::divergences::{self, LogReference};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;
use crate::symmetry::{permute_channel, PermutationAction, ProductShape};

/// Violation below which a channel counts as a member.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
pub const MAX_CAPACITY_ITERATIONS: usize = 100_000;
/// Letters whose input weight drops below this are frozen at zero.
pub const FROZEN_WEIGHT: f64 = 1e-15;
/// Largest bracket width still reported as a point value.
pub const BRACKET_TOL: f64 = 1e-9;

/// A set of states closed under tensor products and permutations, with its
/// own relative-entropy projection.
pub trait StateFamily: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;
    /// Distance-like violation, zero exactly on members.
    fn violation(&self, rho: &DensityMatrix) -> Result<f64>;
    /// `min_{σ ∈ S} D(ρ‖σ)` with the minimizer.
    fn min_relative_entropy(&self, rho: &DensityMatrix) -> Result<ClosestState>;
    fn full_rank_member(&self, dim: usize) -> Result<DensityMatrix> {
        Ok(DensityMatrix::maximally_mixed(dim))
    }
}

#[derive(Debug, Clone)]
pub struct ClosestState {
    pub value: f64,
    pub state: DensityMatrix,
    /// First-order stationarity residual (zero for closed forms).
    pub stationarity: f64,
}

/// States diagonal in the computational basis.
#[derive(Debug, Clone, Copy, Default)]
pub struct Incoherent;

impl StateFamily for Incoherent {
    fn name(&self) -> &'static str {
        "incoherent"
    }

    fn violation(&self, rho: &DensityMatrix) -> Result<f64> {
        let dephased = linalg::from_real_diagonal(&rho.diagonal());
        Ok(linalg::trace_norm(&(rho.matrix() - dephased)))
    }

    fn min_relative_entropy(&self, rho: &DensityMatrix) -> Result<ClosestState> {
        let state = DensityMatrix::from_diagonal(&rho.diagonal())?;
        let value = divergences::rel_entropy(rho, &state)?;
        Ok(ClosestState { value, state, stationarity: 0.0 })
    }
}

/// PPT states on `2 ⊗ 2`, which are exactly the separable ones there.
#[derive(Debug, Clone, Copy)]
pub struct Ppt2x2 {
    pub stationarity_tol: f64,
    pub max_iterations: usize,
}

impl Default for Ppt2x2 {
    fn default() -> Self {
        Self { stationarity_tol: 1e-6, max_iterations: 20_000 }
    }
}

fn check_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension(format!(
            "PPT criterion is only exact on 2x2 outputs, got dimension {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// Euclidean projection of a real vector onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Frobenius projection onto unit-trace PSD matrices.
fn project_states(m: &CMatrix) -> CMatrix {
    let eig = linalg::eigh(&linalg::hermitize(m));
    let p = project_simplex(&eig.values);
    eig.reconstruct_indexed(|i, _| p[i])
}

fn project_ppt(m: &CMatrix) -> CMatrix {
    linalg::partial_transpose_second(&project_states(&linalg::partial_transpose_second(m, 2, 2)), 2, 2)
}

/// Dykstra's alternating projection onto states with PPT.
fn project_ppt_states(m: &CMatrix) -> CMatrix {
    let mut x = m.clone();
    let mut p = CMatrix::zeros(4, 4);
    let mut q = CMatrix::zeros(4, 4);
    for _ in 0..20_000 {
        let a = project_states(&(&x + &p));
        p = &x + &p - &a;
        let b = project_ppt(&(&a + &q));
        q = &a + &q - &b;
        let moved = linalg::max_abs(&(&b - &x));
        x = b;
        if moved < 1e-15 && linalg::max_abs(&(&a - &x)) < 1e-14 {
            break;
        }
    }
    // land exactly in the state set; the PPT slack is at rounding level
    project_states(&x)
}

/// `−Tr ρ log σ` and its gradient in `σ`, or `None` when `ρ ⋘ σ`.
fn cross_entropy_and_gradient(rho: &CMatrix, sigma: &CMatrix) -> Option<(f64, CMatrix)> {
    let eig = linalg::eigh(sigma);
    let thr = 1e-13;
    let v = eig.vectors();
    let r = v.adjoint() * rho * &v;
    let n = eig.dim();
    let mut value = 0.0;
    for i in 0..n {
        if eig.values[i] <= thr {
            if r[(i, i)].re > 1e-12 {
                return None;
            }
        } else {
            value -= r[(i, i)].re * eig.values[i].ln();
        }
    }
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (eig.values[i], eig.values[j]);
            if a <= thr || b <= thr {
                continue;
            }
            let l = if (a - b).abs() <= 1e-12 * a.max(b) { 2.0 / (a + b) } else { (a.ln() - b.ln()) / (a - b) };
            g[(i, j)] = -r[(i, j)] * l;
        }
    }
    Some((value, linalg::hermitize(&(&v * g * v.adjoint()))))
}

impl Ppt2x2 {
    /// Gradient-mapping norm of `σ ↦ D(ρ‖σ)` over PPT states at `σ`;
    /// infinite when `ρ ⋘ σ`.
    pub fn stationarity(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        check_two_qubits(rho)?;
        check_two_qubits(sigma)?;
        Ok(match cross_entropy_and_gradient(rho.matrix(), sigma.matrix()) {
            Some((_, g)) => (sigma.matrix() - project_ppt_states(&(sigma.matrix() - g))).norm(),
            None => f64::INFINITY,
        })
    }
}

impl StateFamily for Ppt2x2 {
    fn name(&self) -> &'static str {
        "ppt2x2"
    }

    fn violation(&self, rho: &DensityMatrix) -> Result<f64> {
        check_two_qubits(rho)?;
        let pt = linalg::partial_transpose_second(rho.matrix(), 2, 2);
        Ok((-linalg::min_eigenvalue(&pt)).max(0.0))
    }

    /// Projected gradient with Armijo backtracking. The certificate is the
    /// gradient-mapping norm `‖σ − Π(σ − ∇f)‖_F` at unit step.
    fn min_relative_entropy(&self, rho: &DensityMatrix) -> Result<ClosestState> {
        check_two_qubits(rho)?;
        let r = rho.matrix();
        let neg_s = divergences::neg_entropy(rho);
        let mut sigma = linalg::identity(4) / Complex64::new(4.0, 0.0);
        let (mut f, mut g) = cross_entropy_and_gradient(r, &sigma).expect("full-rank start");
        let mut step: f64 = 1.0;
        let mut residual = f64::INFINITY;
        for _ in 0..self.max_iterations {
            let mapped = project_ppt_states(&(&sigma - &g));
            residual = (&sigma - &mapped).norm();
            if residual <= self.stationarity_tol {
                break;
            }
            step = (step * 2.0).min(1e6);
            loop {
                let trial = project_ppt_states(&(&sigma - &g * Complex64::new(step, 0.0)));
                let d = &trial - &sigma;
                let decrease = linalg::trace_product(&g, &d).re;
                if let Some((ft, gt)) = cross_entropy_and_gradient(r, &trial) {
                    if ft <= f + 1e-4 * decrease || d.norm() < 1e-16 {
                        sigma = trial;
                        f = ft;
                        g = gt;
                        break;
                    }
                }
                step *= 0.5;
                if step < 1e-20 {
                    return Err(Error::NonConvergence { iterations: self.max_iterations, residual });
                }
            }
        }
        if residual > self.stationarity_tol {
            return Err(Error::NonConvergence { iterations: self.max_iterations, residual });
        }
        let state = DensityMatrix::validate(linalg::hermitize(&sigma))?;
        Ok(ClosestState { value: (neg_s + f).max(0.0), state, stationarity: residual })
    }
}

#[derive(Debug, Clone)]
pub enum FreeSetKind {
    /// `{F^{⊗n}}` for a fixed single-copy channel `F`.
    SingletonIid(CqChannel),
    Replacer,
    LiftedStateSet(Arc<dyn StateFamily>),
    PptOutput,
}

#[derive(Debug, Clone)]
pub struct FreeSetDescriptor {
    pub kind: FreeSetKind,
    pub n: usize,
}

impl FreeSetDescriptor {
    pub fn singleton_iid(f: CqChannel, n: usize) -> Self {
        Self { kind: FreeSetKind::SingletonIid(f), n }
    }

    pub fn replacer(n: usize) -> Self {
        Self { kind: FreeSetKind::Replacer, n }
    }

    pub fn lifted(family: Arc<dyn StateFamily>, n: usize) -> Self {
        Self { kind: FreeSetKind::LiftedStateSet(family), n }
    }

    pub fn ppt_output(n: usize) -> Self {
        Self { kind: FreeSetKind::PptOutput, n }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            FreeSetKind::SingletonIid(_) => "singleton_iid",
            FreeSetKind::Replacer => "replacer",
            FreeSetKind::LiftedStateSet(_) => "lifted_state_set",
            FreeSetKind::PptOutput => "ppt_output",
        }
    }

    /// Same family at a different copy count.
    pub fn with_copies(&self, n: usize) -> Self {
        Self { kind: self.kind.clone(), n }
    }

    /// The only member `F^{⊗n}` of a singleton set.
    pub fn singleton_member(&self) -> Result<CqChannel> {
        match &self.kind {
            FreeSetKind::SingletonIid(f) => tensor_power(f, self.n),
            _ => Err(Error::UnsupportedSetKind(format!("{} has no unique member", self.kind_name()))),
        }
    }

    /// The designated full-rank-Choi member for a given shape.
    pub fn designated_member(&self, alphabet_size: usize, out_dim: usize) -> Result<CqChannel> {
        match &self.kind {
            FreeSetKind::SingletonIid(_) => self.singleton_member(),
            FreeSetKind::Replacer | FreeSetKind::PptOutput => Ok(CqChannel::depolarizing(alphabet_size, out_dim)),
            FreeSetKind::LiftedStateSet(family) => {
                Ok(CqChannel::replacer(alphabet_size, family.full_rank_member(out_dim)?))
            }
        }
    }

    fn ppt_family(&self) -> Result<Ppt2x2> {
        if self.n != 1 {
            return Err(Error::UnsupportedDimension(format!(
                "PPT output sets are only supported for a single copy, got n = {}",
                self.n
            )));
        }
        Ok(Ppt2x2::default())
    }

    pub(crate) fn check_shape(&self, e: &CqChannel) -> Result<()> {
        match &self.kind {
            FreeSetKind::SingletonIid(f) => {
                let letters = f.alphabet_size().checked_pow(self.n as u32);
                let dim = f.out_dim().checked_pow(self.n as u32);
                if letters != Some(e.alphabet_size()) || dim != Some(e.out_dim()) {
                    return Err(Error::ShapeMismatch(format!(
                        "channel |X|={} d={} against {}-fold powers of |X|={} d={}",
                        e.alphabet_size(),
                        e.out_dim(),
                        self.n,
                        f.alphabet_size(),
                        f.out_dim()
                    )));
                }
                Ok(())
            }
            FreeSetKind::PptOutput => {
                self.ppt_family()?;
                if e.out_dim() != 4 {
                    return Err(Error::UnsupportedDimension(format!(
                        "PPT output sets need 2x2 outputs, got dimension {}",
                        e.out_dim()
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub is_member: bool,
    pub violation: f64,
}

pub fn membership(f: &CqChannel, s: &FreeSetDescriptor) -> Result<Membership> {
    s.check_shape(f)?;
    let violation = match &s.kind {
        FreeSetKind::SingletonIid(_) => {
            let member = s.singleton_member()?;
            letterwise_max(f, &member, |a, b| Ok(linalg::trace_norm(&(a.matrix() - b.matrix()))))?.0
        }
        FreeSetKind::Replacer => {
            let first = f.output(0).matrix();
            let mut v: f64 = 0.0;
            for o in f.outputs() {
                v = v.max(linalg::trace_norm(&(o.matrix() - first)));
            }
            v
        }
        FreeSetKind::LiftedStateSet(family) => {
            let mut v: f64 = 0.0;
            for o in f.outputs() {
                v = v.max(family.violation(o)?);
            }
            v
        }
        FreeSetKind::PptOutput => {
            let fam = s.ppt_family()?;
            let mut v: f64 = 0.0;
            for o in f.outputs() {
                v = v.max(fam.violation(o)?);
            }
            v
        }
    };
    Ok(Membership { is_member: violation <= MEMBERSHIP_TOL, violation })
}

/// Runtime checks of the free-set axioms at small sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    /// Convex combination of two members is a member.
    pub convex: bool,
    /// Permuted copies of the designated member stay in the set (`n ≤ 4`).
    pub permutation_closed: bool,
    /// `F_* ⊗ F_*` belongs to the two-copy set.
    pub tensor_closed: bool,
    /// `λ_min` of the designated member's Choi state.
    pub choi_min_eigenvalue: f64,
    pub full_rank_member: bool,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.convex && self.permutation_closed && self.tensor_closed && self.full_rank_member
    }
}

/// Smallest eigenvalue of a channel's Choi state, computed blockwise.
pub fn choi_min_eigenvalue(f: &CqChannel) -> f64 {
    let w = 1.0 / f.alphabet_size() as f64;
    f.outputs()
        .iter()
        .map(|o| linalg::min_eigenvalue(o.matrix()) * w)
        .fold(f64::INFINITY, f64::min)
}

/// Checks the axioms on a single-copy shape `(alphabet_size, out_dim)`.
pub fn check_axioms(s: &FreeSetDescriptor, alphabet_size: usize, out_dim: usize) -> Result<AxiomReport> {
    let one = s.with_copies(1);
    let star = one.designated_member(alphabet_size, out_dim)?;
    let lambda = choi_min_eigenvalue(&star);

    let other = match &s.kind {
        FreeSetKind::SingletonIid(f) => f.clone(),
        FreeSetKind::Replacer => CqChannel::replacer(alphabet_size, DensityMatrix::basis(out_dim, 0)),
        FreeSetKind::LiftedStateSet(_) | FreeSetKind::PptOutput => {
            CqChannel::new((0..alphabet_size).map(|x| DensityMatrix::basis(out_dim, x % out_dim)).collect())?
        }
    };
    let convex = membership(&star.combine(0.3, &other, 0.7)?, &one)?.is_member;

    let two = s.with_copies(2);
    let pair = tensor_channel(&star, &other);
    let tensor_closed = match &s.kind {
        FreeSetKind::PptOutput => true, // two-copy PPT sets are outside the exact 2x2 regime
        _ => membership(&pair, &two)?.is_member,
    };

    let mut permutation_closed = true;
    if !matches!(s.kind, FreeSetKind::PptOutput) {
        for n in 2..=4usize {
            let member = tensor_power(&star, n - 1).map(|p| tensor_channel(&p, &other))?;
            let shape = ProductShape { copies: n, letters: alphabet_size, local_dim: out_dim };
            let set_n = s.with_copies(n);
            for pi in PermutationAction::all(n) {
                if !membership(&permute_channel(&pi, &member, shape)?, &set_n)?.is_member {
                    permutation_closed = false;
                }
            }
        }
    }

    Ok(AxiomReport {
        convex,
        permutation_closed,
        tensor_closed,
        choi_min_eigenvalue: lambda,
        full_rank_member: lambda > 1e-12,
    })
}

/// Holevo capacity bracket from Blahut–Arimoto.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub optimal_p: Vec<f64>,
    pub optimal_sigma: DensityMatrix,
    /// Largest drop of the lower bound between iterations (zero when monotone).
    pub max_lower_decrease: f64,
}

pub fn holevo_capacity(e: &CqChannel, tol: f64) -> Result<CapacityResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let k = e.alphabet_size();
    let own: Vec<f64> = e.outputs().iter().map(|o| divergences::neg_entropy(o)).collect();
    let mut p = vec![1.0 / k as f64; k];
    let mut prev_lower = f64::NEG_INFINITY;
    let mut max_drop: f64 = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_CAPACITY_ITERATIONS {
        let sigma = e.apply_classical(&p)?;
        let reference = LogReference::new(&sigma);
        let d: Vec<f64> = e.outputs().iter().zip(&own).map(|(o, s)| reference.rel_entropy(o, *s)).collect();
        let lower: f64 = p.iter().zip(&d).filter(|(pi, _)| **pi > 0.0).map(|(pi, di)| pi * di).sum();
        let upper = d.iter().cloned().fold(0.0_f64, f64::max);
        if it > 1 {
            max_drop = max_drop.max(prev_lower - lower);
        }
        prev_lower = lower;
        residual = upper - lower;
        if residual <= tol {
            return Ok(CapacityResult {
                lower,
                upper,
                iterations: it,
                optimal_p: p,
                optimal_sigma: sigma,
                max_lower_decrease: max_drop,
            });
        }
        let top = upper;
        let mut next: Vec<f64> = p.iter().zip(&d).map(|(pi, di)| pi * (di - top).exp()).collect();
        let z: f64 = next.iter().sum();
        for v in next.iter_mut() {
            *v /= z;
            if *v < FROZEN_WEIGHT {
                *v = 0.0;
            }
        }
        let z: f64 = next.iter().sum();
        p = next.into_iter().map(|v| v / z).collect();
    }
    Err(Error::NonConvergence { iterations: MAX_CAPACITY_ITERATIONS, residual })
}

/// State sets with a relative-entropy projection on `R ⊗ A` states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSetKind {
    /// `{ρ_R ⊗ σ_A}` with `ρ_R` fixed to the input's marginal.
    ProductWithFixedMarginal { ref_dim: usize },
    Ppt2x2,
}

/// `min_{σ ∈ S} D(ρ‖σ)` and the minimizer.
pub fn min_relative_entropy_to_set(rho: &DensityMatrix, kind: StateSetKind) -> Result<ClosestState> {
    match kind {
        StateSetKind::ProductWithFixedMarginal { ref_dim } => {
            if ref_dim == 0 || rho.dim() % ref_dim != 0 {
                return Err(Error::DimensionMismatch(format!(
                    "state of dimension {} does not split with reference {ref_dim}",
                    rho.dim()
                )));
            }
            let da = rho.dim() / ref_dim;
            let r = DensityMatrix::validate(linalg::partial_trace_second(rho.matrix(), ref_dim, da))?;
            let a = DensityMatrix::validate(linalg::partial_trace_first(rho.matrix(), ref_dim, da))?;
            let state = r.tensor(&a);
            let value = divergences::rel_entropy(rho, &state)?;
            Ok(ClosestState { value, state, stationarity: 0.0 })
        }
        StateSetKind::Ppt2x2 => Ppt2x2::default().min_relative_entropy(rho),
    }
}

/// `inf_{F ∈ S} D_max(E‖F)` as a bracket; a point value when
/// `upper − lower ≤ BRACKET_TOL`.
#[derive(Debug, Clone)]
pub struct LogRobustness {
    pub lower: f64,
    pub upper: f64,
    /// Free channel achieving `upper`.
    pub witness: CqChannel,
    /// `min_x λ_min(e^{upper} ω_x^F − ω_x)`; nonnegative up to rounding.
    pub feasibility: f64,
}

impl LogRobustness {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn value(&self) -> Option<f64> {
        (self.width() <= BRACKET_TOL).then_some(self.upper)
    }
}

fn feasibility(e: &CqChannel, witness: &CqChannel, upper: f64) -> f64 {
    if !upper.is_finite() {
        return 0.0;
    }
    let lambda = Complex64::new(upper.exp(), 0.0);
    let mut worst = f64::INFINITY;
    for (a, b) in e.outputs().iter().zip(witness.outputs()) {
        worst = worst.min(linalg::min_eigenvalue(&(b.matrix() * lambda - a.matrix())));
    }
    worst
}

/// Smallest-trace operator dominating every output, by sequential maxima.
fn sequential_dominator(outputs: &[&CMatrix]) -> CMatrix {
    let mut acc = outputs[0].clone();
    for o in &outputs[1..] {
        acc += linalg::positive_part(&(*o - &acc));
    }
    linalg::hermitize(&acc)
}

/// Best POVM value `max Σ_x Tr(M_x ω_x)` over a few candidate measurements.
fn discrimination_lower_bound(e: &CqChannel, dominator: &CMatrix) -> f64 {
    let outs: Vec<&CMatrix> = e.outputs().iter().map(|o| o.matrix()).collect();
    let mut best: f64 = 1.0;

    // projective measurement in the dominator's eigenbasis
    let eig = linalg::eigh(dominator);
    let per_letter: Vec<Vec<f64>> = outs.iter().map(|o| eig.expectations(o)).collect();
    let assigned: f64 = (0..eig.dim())
        .map(|i| per_letter.iter().map(|w| w[i]).fold(f64::NEG_INFINITY, f64::max))
        .sum();
    best = best.max(assigned);

    // pretty-good measurement, the complement of the support added to letter 0
    let total = outs.iter().fold(CMatrix::zeros(e.out_dim(), e.out_dim()), |a, b| a + *b);
    let t_eig = linalg::eigh(&total);
    let thr = divergences::support_threshold(&t_eig.values);
    let inv_sqrt = t_eig.reconstruct(|x| if x > thr { x.powf(-0.5) } else { 0.0 });
    let pgm: f64 = outs.iter().map(|o| linalg::trace_product(&(&inv_sqrt * *o * &inv_sqrt), o).re).sum();
    best = best.max(pgm);

    if outs.len() == 2 {
        // Helstrom measurement, optimal for two letters
        best = best.max(1.0 + 0.5 * linalg::trace_norm(&(outs[0] - outs[1])));
    }
    best
}

fn replacer_log_robustness(e: &CqChannel) -> Result<LogRobustness> {
    let outs: Vec<&CMatrix> = e.outputs().iter().map(|o| o.matrix()).collect();
    let k = outs.len();
    let mut best = sequential_dominator(&outs);
    if k <= 6 {
        for order in itertools::Itertools::permutations(0..k, k) {
            let ordered: Vec<&CMatrix> = order.iter().map(|&i| outs[i]).collect();
            let cand = sequential_dominator(&ordered);
            if cand.trace().re < best.trace().re {
                best = cand;
            }
        }
    }
    let trace = best.trace().re;
    let lower_trace = discrimination_lower_bound(e, &best).min(trace);
    let witness_state = DensityMatrix::from_psd_clamped(best, 1e-12)?;
    let witness = CqChannel::replacer(k, witness_state);
    let upper = trace.ln().max(0.0);
    let lower = lower_trace.ln().max(0.0).min(upper);
    Ok(LogRobustness { lower, upper, feasibility: feasibility(e, &witness, upper), witness })
}

pub fn log_robustness(e: &CqChannel, s: &FreeSetDescriptor) -> Result<LogRobustness> {
    s.check_shape(e)?;
    match &s.kind {
        FreeSetKind::SingletonIid(_) => {
            let member = s.singleton_member()?;
            let (v, _) = letterwise_max(e, &member, divergences::dmax)?;
            Ok(LogRobustness { lower: v, upper: v, feasibility: feasibility(e, &member, v), witness: member })
        }
        FreeSetKind::Replacer => replacer_log_robustness(e),
        _ => Err(Error::UnsupportedSetKind(format!("log robustness against {}", s.kind_name()))),
    }
}
