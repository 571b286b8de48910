//! Resource manipulations: robustness decompositions, `D_max` smoothing,
//! superchannels and the gentle measurement bound.

use num_complex::Complex64;

use crate::channel::{tensor_power, CqChannel, DENSE_DIM_GUARD};
use crate::channel_divergences::diamond_distance;
use crate::error::{Error, Result};
use crate::free_sets::{self, log_robustness, membership, FreeSetDescriptor, BRACKET_TOL};
use crate::linalg::{self, CMatrix};
use crate::pinching::{cluster_sorted, DEFAULT_CLUSTER_TOL};
use crate::state::DensityMatrix;

/// `(ω_x^E + r ω_x^{E'})/(1 + r) = ω_x^F` for every letter.
#[derive(Debug, Clone)]
pub struct RobustnessDecomposition {
    pub free_channel: CqChannel,
    pub complement: CqChannel,
    pub r: f64,
}

impl RobustnessDecomposition {
    /// Largest entrywise deviation of the reconstructed free channel.
    pub fn reconstruction_residual(&self, e: &CqChannel) -> Result<f64> {
        e.check_same_shape(&self.free_channel)?;
        let scale = Complex64::new(1.0 / (1.0 + self.r), 0.0);
        let r = Complex64::new(self.r, 0.0);
        let mut worst: f64 = 0.0;
        for x in 0..e.alphabet_size() {
            let mix = (e.output(x).matrix() + self.complement.output(x).matrix() * r) * scale;
            worst = worst.max(linalg::max_abs(&(mix - self.free_channel.output(x).matrix())));
        }
        Ok(worst)
    }
}

/// Below this robustness the complement is taken to be the free channel.
const ZERO_ROBUSTNESS: f64 = 1e-12;

pub fn robustness_decompose(e: &CqChannel, s: &FreeSetDescriptor) -> Result<RobustnessDecomposition> {
    let lr = log_robustness(e, s)?;
    if !lr.upper.is_finite() {
        return Err(Error::InfiniteRobustness);
    }
    if lr.width() > BRACKET_TOL {
        return Err(Error::BracketTooWide { lower: lr.lower, upper: lr.upper });
    }
    let lambda = lr.upper.exp();
    let r = lambda - 1.0;
    let free = lr.witness;
    if r <= ZERO_ROBUSTNESS {
        return Ok(RobustnessDecomposition { complement: free.clone(), free_channel: free, r: 0.0 });
    }
    let l = Complex64::new(lambda, 0.0);
    let outputs = e
        .outputs()
        .iter()
        .zip(free.outputs())
        .map(|(w, f)| DensityMatrix::from_psd_clamped(f.matrix() * l - w.matrix(), 1e-8))
        .collect::<Result<Vec<_>>>()?;
    Ok(RobustnessDecomposition { free_channel: free, complement: CqChannel::new(outputs)?, r })
}

/// Output of the `D_max` smoothing construction at `km` copies.
#[derive(Debug, Clone)]
pub struct SmoothedChannel {
    pub channel: CqChannel,
    /// Per-letter cut projectors `P^{(x)}`.
    pub projectors: Vec<CMatrix>,
    pub copies: usize,
    /// Number of distinct eigenvalues of `J(F_m^{⊗k})`.
    pub spectrum_size: usize,
    /// `kmR + log|spec|`.
    pub dmax_bound: f64,
    /// `log(|spec| e^{kmR} + 1)`, which follows from convexity alone.
    pub convexity_bound: f64,
    /// Bracket on `D_max(Ẽ‖S_km)`.
    pub dmax_lower: f64,
    pub dmax_upper: f64,
    /// `max_x Tr[P^{(x)} F_m^{⊗k}(x)]`, bounded by `e^{−kmR}`.
    pub max_cut_weight: f64,
    /// `‖E^{⊗km} − Ẽ‖_⋄`.
    pub diamond_to_original: f64,
}

/// Cuts from `E^{⊗km}` the eigenspaces where its pinched Choi state exceeds
/// `e^{kmR} J(F_m^{⊗k})`, then refills the lost weight with the set's
/// full-rank member.
pub fn smooth_channel(
    e: &CqChannel,
    f_m: &CqChannel,
    m: usize,
    s: &FreeSetDescriptor,
    rate: f64,
    k: usize,
) -> Result<SmoothedChannel> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidArgument(format!("rate must be positive, got {rate}")));
    }
    if m == 0 || k == 0 {
        return Err(Error::InvalidArgument("m and k must be positive".into()));
    }
    let km = k * m;
    let size = (e.alphabet_size() * e.out_dim()).checked_pow(km as u32);
    if size.is_none_or(|d| d > DENSE_DIM_GUARD) {
        return Err(Error::DimensionGuard(format!(
            "(|X| d)^km = ({}·{})^{km} exceeds {DENSE_DIM_GUARD}",
            e.alphabet_size(),
            e.out_dim()
        )));
    }
    let set_m = s.with_copies(m);
    let mem = membership(f_m, &set_m)?;
    if !mem.is_member {
        return Err(Error::PreconditionViolated(format!("F_m is not free (violation {:.3e})", mem.violation)));
    }

    let big_e = tensor_power(e, km)?;
    let big_f = tensor_power(f_m, k)?;
    big_e.check_same_shape(&big_f)?;
    let star = s.with_copies(1).designated_member(e.alphabet_size(), e.out_dim())?;
    let big_star = tensor_power(&star, km)?;

    // pinching of the block-diagonal J(F_m^{⊗k}): clusters are global, projectors blockwise
    let f_eigs: Vec<linalg::Eigh> = big_f.outputs().iter().map(|o| linalg::eigh(o.matrix())).collect();
    let mut all: Vec<(f64, usize, usize)> = Vec::new();
    for (x, eig) in f_eigs.iter().enumerate() {
        for (i, v) in eig.values.iter().enumerate() {
            all.push((*v, x, i));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let sorted: Vec<f64> = all.iter().map(|t| t.0).collect();
    let groups = cluster_sorted(&sorted, DEFAULT_CLUSTER_TOL);
    let mut cluster_of: Vec<Vec<usize>> = f_eigs.iter().map(|eig| vec![0; eig.dim()]).collect();
    for (c, g) in groups.iter().enumerate() {
        for &(_, x, i) in &all[g.clone()] {
            cluster_of[x][i] = c;
        }
    }

    let boost = Complex64::new((km as f64 * rate).exp(), 0.0);
    let d = big_e.out_dim();
    let mut outputs = Vec::with_capacity(big_e.alphabet_size());
    let mut projectors = Vec::with_capacity(big_e.alphabet_size());
    let mut max_cut: f64 = 0.0;
    for x in 0..big_e.alphabet_size() {
        let omega = big_e.output(x).matrix();
        let eig = &f_eigs[x];
        let mut ids: Vec<usize> = cluster_of[x].clone();
        ids.sort_unstable();
        ids.dedup();
        let mut pinched = CMatrix::zeros(d, d);
        for c in ids {
            let p = eig.projector(|i, _| cluster_of[x][i] == c);
            pinched += &p * omega * &p;
        }
        let a = linalg::hermitize(&(pinched - big_f.output(x).matrix() * boost));
        let a_eig = linalg::eigh(&a);
        let scale = a_eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let p = a_eig.projector(|_, l| l > 1e-12 * scale);
        let keep = linalg::identity(d) - &p;
        let kept = &keep * omega * &keep;
        let lost = 1.0 - kept.trace().re;
        let refill = big_star.output(x).matrix() * Complex64::new(lost, 0.0);
        outputs.push(DensityMatrix::validate(linalg::hermitize(&(kept + refill)))?);
        max_cut = max_cut.max(linalg::trace_product(&p, big_f.output(x).matrix()).re);
        projectors.push(p);
    }
    let channel = CqChannel::new(outputs)?;

    let spectrum_size = groups.len();
    let spec = spectrum_size as f64;
    let dmax_bound = km as f64 * rate + spec.ln();
    let convexity_bound = (spec * boost.re + 1.0).ln();
    let lr = log_robustness(&channel, &s.with_copies(km))?;
    let diamond_to_original = diamond_distance(&big_e, &channel)?;
    Ok(SmoothedChannel {
        channel,
        projectors,
        copies: km,
        spectrum_size,
        dmax_bound,
        convexity_bound,
        dmax_lower: lr.lower,
        dmax_upper: lr.upper,
        max_cut_weight: max_cut,
        diamond_to_original,
    })
}

/// A map from channels to channels.
pub trait Superchannel {
    fn apply(&self, n: &CqChannel) -> Result<CqChannel>;

    /// Upper bound on the log-robustness generated from a free input, for
    /// constructions that come with one.
    fn deficit_bound(&self, _free: &CqChannel, _s: &FreeSetDescriptor) -> Result<Option<f64>> {
        Ok(None)
    }
}

/// Test-and-prepare superchannel: probe `N` with a classical input, measure
/// `{Λ, 1 − Λ}`, and output `pass` or `fail` accordingly.
#[derive(Debug, Clone)]
pub struct SuperchannelRecipe {
    pub test_operator: CMatrix,
    pub probe: usize,
    pub pass: CqChannel,
    pub fail: CqChannel,
}

pub fn build_superchannel(
    test_operator: CMatrix,
    probe: usize,
    pass: CqChannel,
    fail: CqChannel,
) -> Result<SuperchannelRecipe> {
    if test_operator.nrows() != test_operator.ncols() {
        return Err(Error::NotSquare(test_operator.nrows(), test_operator.ncols()));
    }
    let dev = linalg::hermitian_deviation(&test_operator);
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let ev = linalg::eigenvalues(&test_operator);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo < -1e-10 || hi > 1.0 + 1e-10 {
        return Err(Error::InvalidArgument(format!("test eigenvalues [{lo}, {hi}] leave [0, 1]")));
    }
    pass.check_same_shape(&fail)?;
    Ok(SuperchannelRecipe { test_operator: linalg::hermitize(&test_operator), probe, pass, fail })
}

impl SuperchannelRecipe {
    /// `Tr[Λ N(probe)]`.
    pub fn acceptance(&self, n: &CqChannel) -> Result<f64> {
        if self.probe >= n.alphabet_size() || n.out_dim() != self.test_operator.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "probe {} and test of dimension {} on channel |X|={} d={}",
                self.probe,
                self.test_operator.nrows(),
                n.alphabet_size(),
                n.out_dim()
            )));
        }
        Ok(linalg::trace_product(&self.test_operator, n.output(self.probe).matrix()).re.clamp(0.0, 1.0))
    }
}

impl Superchannel for SuperchannelRecipe {
    fn apply(&self, n: &CqChannel) -> Result<CqChannel> {
        let t = self.acceptance(n)?;
        self.pass.combine(t, &self.fail, 1.0 - t)
    }

    /// `log((1 − t)/(1 − e^{−s}))` with `s = D_max(pass‖S)` and `t` the
    /// acceptance of the free input; requires `e^{−s} ≥ t`.
    fn deficit_bound(&self, free: &CqChannel, s: &FreeSetDescriptor) -> Result<Option<f64>> {
        let sn = log_robustness(&self.pass, s)?.upper;
        let t = self.acceptance(free)?;
        let es = (-sn).exp();
        if es < t {
            return Err(Error::PreconditionViolated(format!("e^-s = {es} is below the free acceptance {t}")));
        }
        let denom = 1.0 - es;
        Ok(Some(if denom <= 0.0 { f64::INFINITY } else { ((1.0 - t) / denom).ln() }))
    }
}

/// Classical pre-processing `Θ(N)(x) = N(map[x])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputRelabeling {
    pub map: Vec<usize>,
}

impl InputRelabeling {
    /// Every letter of `X^n` is sent to the single string `target`.
    pub fn constant(letters: usize, target: usize) -> Self {
        Self { map: vec![target; letters] }
    }
}

impl Superchannel for InputRelabeling {
    fn apply(&self, n: &CqChannel) -> Result<CqChannel> {
        if let Some(&bad) = self.map.iter().find(|&&y| y >= n.alphabet_size()) {
            return Err(Error::ShapeMismatch(format!("letter {bad} outside alphabet {}", n.alphabet_size())));
        }
        CqChannel::from_shared(self.map.iter().map(|&y| n.outputs()[y].clone()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArngDeficit {
    /// `D_max(Θ(F)‖S)` (upper end when only a bracket is available).
    pub deficit: f64,
    pub bound: Option<f64>,
}

pub fn arng_deficit(theta: &dyn Superchannel, free: &CqChannel, s: &FreeSetDescriptor) -> Result<ArngDeficit> {
    let mem = membership(free, s)?;
    if !mem.is_member {
        return Err(Error::PreconditionViolated(format!("input channel is not free (violation {:.3e})", mem.violation)));
    }
    let out = theta.apply(free)?;
    let deficit = free_sets::log_robustness(&out, s)?.upper;
    Ok(ArngDeficit { deficit, bound: theta.deficit_bound(free, s)? })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GentleMeasurement {
    /// `½‖ρ − √Λ ρ √Λ‖₁`.
    pub lhs: f64,
    /// `√ε + ε/2` with `ε = 1 − Tr Λρ`.
    pub rhs: f64,
}

pub fn gentle_measurement_check(rho: &DensityMatrix, lambda_op: &CMatrix) -> Result<GentleMeasurement> {
    if lambda_op.nrows() != rho.dim() || lambda_op.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch(format!("operator {}x{} on state of dimension {}", lambda_op.nrows(), lambda_op.ncols(), rho.dim())));
    }
    let eig = linalg::eigh(&linalg::hermitize(lambda_op));
    if eig.values[0] < -1e-10 || eig.values[eig.dim() - 1] > 1.0 + 1e-10 {
        return Err(Error::InvalidArgument("measurement operator must lie between 0 and 1".into()));
    }
    let root = eig.reconstruct(|x| x.clamp(0.0, 1.0).sqrt());
    let post = &root * rho.matrix() * &root;
    let eps = (1.0 - linalg::trace_product(lambda_op, rho.matrix()).re).max(0.0);
    Ok(GentleMeasurement {
        lhs: 0.5 * linalg::trace_norm(&(rho.matrix() - post)),
        rhs: eps.sqrt() + eps / 2.0,
    })
}
