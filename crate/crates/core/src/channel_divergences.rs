//! Channel divergences for c-q channels.
//!
//! Suprema over entangled inputs reduce to maxima over classical letters for
//! every divergence here except `D_H^ε`, whose classical-input value is only
//! reported as a lower bound.

use std::collections::HashMap;
use std::sync::Arc;

use crate::channel::{decode_string, encode_string, CqChannel, IidChannel, LetterChannel, DENSE_DIM_GUARD};
use crate::divergences;
use crate::error::{Error, Result};
use crate::free_sets::{self, FreeSetDescriptor, FreeSetKind};
use crate::hypothesis::{hypothesis_test, hypothesis_test_diagonal};
use crate::linalg;
use crate::state::DensityMatrix;
use crate::symmetry::enumerate_types;

/// Tolerance on the Blahut–Arimoto bracket when it stands in for a divergence value.
pub const SET_DIVERGENCE_TOL: f64 = 1e-10;
pub const MAX_ENUMERATED_INPUTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceKind {
    Umegaki,
    Renyi(f64),
    Dmax,
}

impl DivergenceKind {
    pub fn between(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        match *self {
            DivergenceKind::Umegaki => divergences::rel_entropy(rho, sigma),
            DivergenceKind::Renyi(a) => divergences::sandwiched_renyi(rho, sigma, a),
            DivergenceKind::Dmax => divergences::dmax(rho, sigma),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DivergenceKind::Umegaki => "umegaki".into(),
            DivergenceKind::Renyi(a) => format!("renyi({a})"),
            DivergenceKind::Dmax => "dmax".into(),
        }
    }
}

/// Input at which a channel divergence is attained.
#[derive(Debug, Clone, PartialEq)]
pub enum ArgInput {
    Letter(usize),
    /// Classical-classical input `Σ p(x)|x⟩⟨x| ⊗ |x⟩⟨x|`.
    Distribution(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct ChannelDivergenceResult {
    pub value: f64,
    pub arg_input: ArgInput,
    pub witness: Option<CqChannel>,
    /// Set when the value only bounds the entangled-input quantity from below.
    pub lower_bound_only: bool,
}

/// `max_x eval(ω_x^E, ω_x^F)` with its first maximizing letter. Pairs of
/// shared outputs are evaluated once.
pub(crate) fn letterwise_max(
    e: &CqChannel,
    f: &CqChannel,
    eval: impl Fn(&DensityMatrix, &DensityMatrix) -> Result<f64>,
) -> Result<(f64, usize)> {
    e.check_same_shape(f)?;
    let mut memo: HashMap<(usize, usize), f64> = HashMap::new();
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for (x, (a, b)) in e.outputs().iter().zip(f.outputs()).enumerate() {
        let key = (Arc::as_ptr(a) as usize, Arc::as_ptr(b) as usize);
        let v = match memo.get(&key) {
            Some(v) => *v,
            None => {
                let v = eval(a, b)?;
                memo.insert(key, v);
                v
            }
        };
        if v > best {
            best = v;
            arg = x;
        }
    }
    Ok((best, arg))
}

/// `sup_ν D(E(ν)‖F(ν))`, attained at a classical letter.
pub fn channel_divergence(kind: DivergenceKind, e: &CqChannel, f: &CqChannel) -> Result<ChannelDivergenceResult> {
    let (value, x) = letterwise_max(e, f, |a, b| kind.between(a, b))?;
    Ok(ChannelDivergenceResult {
        value,
        arg_input: ArgInput::Letter(x),
        witness: Some(f.clone()),
        lower_bound_only: false,
    })
}

/// `max_x ‖ω_x^E − ω_x^F‖₁`, in `[0, 2]`.
pub fn diamond_distance(e: &CqChannel, f: &CqChannel) -> Result<f64> {
    Ok(diamond_distance_with_letter(e, f)?.0)
}

pub fn diamond_distance_with_letter(e: &CqChannel, f: &CqChannel) -> Result<(f64, usize)> {
    letterwise_max(e, f, |a, b| Ok(linalg::trace_norm(&(a.matrix() - b.matrix()))))
}

/// `‖J(E) − J(F)‖₁` of the normalized Choi states.
pub fn choi_trace_distance(e: &CqChannel, f: &CqChannel) -> Result<f64> {
    e.check_same_shape(f)?;
    let mut memo: HashMap<(usize, usize), f64> = HashMap::new();
    let mut total = 0.0;
    for (a, b) in e.outputs().iter().zip(f.outputs()) {
        let key = (Arc::as_ptr(a) as usize, Arc::as_ptr(b) as usize);
        total += *memo
            .entry(key)
            .or_insert_with(|| linalg::trace_norm(&(a.matrix() - b.matrix())));
    }
    Ok(total / e.alphabet_size() as f64)
}

/// `D(J(E)‖J(F))` between normalized Choi states, evaluated blockwise.
pub fn choi_divergence(kind: DivergenceKind, e: &CqChannel, f: &CqChannel) -> Result<f64> {
    e.check_same_shape(f)?;
    let w = 1.0 / e.alphabet_size() as f64;
    let per: Vec<f64> = e
        .outputs()
        .iter()
        .zip(f.outputs())
        .map(|(a, b)| kind.between(a, b))
        .collect::<Result<_>>()?;
    if per.iter().any(|v| v.is_infinite()) {
        return Ok(f64::INFINITY);
    }
    Ok(match kind {
        DivergenceKind::Umegaki => per.iter().sum::<f64>() * w,
        DivergenceKind::Dmax => per.iter().cloned().fold(0.0, f64::max),
        DivergenceKind::Renyi(a) => {
            let q: f64 = per.iter().map(|d| ((a - 1.0) * d).exp() * w).sum();
            (q.ln() / (a - 1.0)).max(0.0)
        }
    })
}

/// Choi-based resource measure `inf_{F∈S} D(J(E)‖J(F))`; singleton sets only.
pub fn choi_divergence_to_set(kind: DivergenceKind, e: &CqChannel, s: &FreeSetDescriptor) -> Result<f64> {
    s.check_shape(e)?;
    match &s.kind {
        FreeSetKind::SingletonIid(_) => choi_divergence(kind, e, &s.singleton_member()?),
        _ => Err(Error::UnsupportedSetKind(format!("Choi divergence to {}", s.kind_name()))),
    }
}

/// `inf_{F∈S} sup_ν D(E(ν)‖F(ν))` through the set-specific routine.
pub fn divergence_to_set(kind: DivergenceKind, e: &CqChannel, s: &FreeSetDescriptor) -> Result<ChannelDivergenceResult> {
    s.check_shape(e)?;
    let unsupported = || Err(Error::UnsupportedSetKind(format!("{} against {}", kind.name(), s.kind_name())));
    match (&s.kind, kind) {
        (FreeSetKind::SingletonIid(_), _) => channel_divergence(kind, e, &s.singleton_member()?),
        (FreeSetKind::Replacer, DivergenceKind::Umegaki) => {
            let cap = free_sets::holevo_capacity(e, SET_DIVERGENCE_TOL)?;
            Ok(ChannelDivergenceResult {
                value: cap.upper,
                arg_input: ArgInput::Distribution(cap.optimal_p.clone()),
                witness: Some(CqChannel::replacer(e.alphabet_size(), cap.optimal_sigma)),
                lower_bound_only: false,
            })
        }
        (FreeSetKind::Replacer, DivergenceKind::Dmax) => {
            let r = free_sets::log_robustness(e, s)?;
            match r.value() {
                Some(v) => Ok(ChannelDivergenceResult {
                    value: v,
                    arg_input: ArgInput::Letter(0),
                    witness: Some(r.witness),
                    lower_bound_only: false,
                }),
                None => Err(Error::BracketTooWide { lower: r.lower, upper: r.upper }),
            }
        }
        (FreeSetKind::LiftedStateSet(family), DivergenceKind::Umegaki) => {
            per_letter_projection(e, |o| family.min_relative_entropy(o))
        }
        (FreeSetKind::PptOutput, DivergenceKind::Umegaki) => per_letter_projection(e, |o| {
            free_sets::min_relative_entropy_to_set(o, free_sets::StateSetKind::Ppt2x2)
        }),
        _ => unsupported(),
    }
}

/// Sets defined letterwise decouple: `max_x min_{σ∈S} D(ω_x‖σ)`.
fn per_letter_projection(
    e: &CqChannel,
    project: impl Fn(&DensityMatrix) -> Result<free_sets::ClosestState>,
) -> Result<ChannelDivergenceResult> {
    let closest: Vec<free_sets::ClosestState> = e.outputs().iter().map(|o| project(o)).collect::<Result<_>>()?;
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0);
    for (x, c) in closest.iter().enumerate() {
        if c.value > best {
            best = c.value;
            arg = x;
        }
    }
    let witness = CqChannel::new(closest.into_iter().map(|c| c.state).collect())?;
    Ok(ChannelDivergenceResult { value: best, arg_input: ArgInput::Letter(arg), witness: Some(witness), lower_bound_only: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputMode {
    ClassicalExhaustive,
    /// One representative string per type class; needs an IID channel.
    ClassicalTypes,
}

fn diagonal_of_string(base: &CqChannel, string: &[usize]) -> Option<Vec<f64>> {
    let mut acc = vec![1.0];
    for &x in string {
        let o = base.output(x);
        if !o.is_diagonal() {
            return None;
        }
        let d = o.diagonal();
        acc = acc.iter().flat_map(|a| d.iter().map(move |b| a * b)).collect();
    }
    Some(acc)
}

/// `max_x inf_{F∈S} D_H^ε(E(x)‖F(x))` over classical inputs of an n-copy channel.
pub fn hypothesis_test_channel(
    e: &dyn LetterChannel,
    s: &FreeSetDescriptor,
    eps: f64,
    mode: InputMode,
) -> Result<ChannelDivergenceResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsOutOfRange(eps));
    }
    if e.out_dim() > DENSE_DIM_GUARD {
        return Err(Error::EnumerationTooLarge(format!("output dimension {} exceeds {DENSE_DIM_GUARD}", e.out_dim())));
    }
    let letters: Vec<usize> = match mode {
        InputMode::ClassicalExhaustive => {
            if e.alphabet_size() > MAX_ENUMERATED_INPUTS {
                return Err(Error::EnumerationTooLarge(format!("{} inputs", e.alphabet_size())));
            }
            (0..e.alphabet_size()).collect()
        }
        InputMode::ClassicalTypes => {
            let (base, n) = e
                .iid_base()
                .ok_or_else(|| Error::InvalidArgument("type enumeration needs an IID channel".into()))?;
            enumerate_types(n, base.alphabet_size())
                .map_err(|err| Error::EnumerationTooLarge(err.to_string()))?
                .iter()
                .map(|t| encode_string(&t.representative(), base.alphabet_size()))
                .collect()
        }
    };

    let floor = -(1.0 - eps).ln();
    let evaluate: Box<dyn Fn(usize) -> Result<f64> + '_> = match &s.kind {
        // any state is allowed for each point input, and F(x) = E(x) is optimal
        FreeSetKind::Replacer => Box::new(|_| Ok(floor)),
        FreeSetKind::SingletonIid(f) => {
            let free = IidChannel::new(f.clone(), s.n)?;
            if free.alphabet_size() != e.alphabet_size() || free.out_dim() != e.out_dim() {
                return Err(Error::ShapeMismatch(format!(
                    "channel |X|={} d={} vs free |X|={} d={}",
                    e.alphabet_size(),
                    e.out_dim(),
                    free.alphabet_size(),
                    free.out_dim()
                )));
            }
            let iid = e.iid_base().filter(|(_, n)| *n == s.n);
            Box::new(move |x| {
                let string = decode_string(x, f.alphabet_size(), s.n);
                if let Some((base, _)) = iid {
                    if let (Some(p), Some(q)) = (diagonal_of_string(base, &string), diagonal_of_string(f, &string)) {
                        return Ok(hypothesis_test_diagonal(&p, &q, eps)?.value);
                    }
                }
                Ok(hypothesis_test(&e.output_arc(x), &free.output_for(&string), eps)?.value)
            })
        }
        _ => return Err(Error::UnsupportedSetKind(format!("hypothesis testing against {}", s.kind_name()))),
    };

    let (mut best, mut arg) = (f64::NEG_INFINITY, 0);
    for x in letters {
        let v = evaluate(x)?;
        if v > best {
            best = v;
            arg = x;
        }
    }
    Ok(ChannelDivergenceResult { value: best, arg_input: ArgInput::Letter(arg), witness: None, lower_bound_only: true })
}

/// `|inf_F sup_p D − sup_p inf_F D|` with the outer supremum over
/// classical-classical inputs.
pub fn minimax_gap(e: &CqChannel, s: &FreeSetDescriptor) -> Result<f64> {
    s.check_shape(e)?;
    match &s.kind {
        FreeSetKind::SingletonIid(_) => {
            let f = s.singleton_member()?;
            let min_max = channel_divergence(DivergenceKind::Umegaki, e, &f)?.value;
            // the inner infimum is trivial, and Σ p(x) D_x is maximized at a point mass
            let per: Vec<f64> = e
                .outputs()
                .iter()
                .zip(f.outputs())
                .map(|(a, b)| divergences::rel_entropy(a, b))
                .collect::<Result<_>>()?;
            let max_min = per.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if min_max.is_infinite() && max_min.is_infinite() {
                return Ok(0.0);
            }
            Ok((min_max - max_min).abs())
        }
        FreeSetKind::Replacer => {
            let cap = free_sets::holevo_capacity(e, SET_DIVERGENCE_TOL)?;
            Ok(cap.upper - cap.lower)
        }
        _ => Err(Error::UnsupportedSetKind(format!("minimax gap against {}", s.kind_name()))),
    }
}
