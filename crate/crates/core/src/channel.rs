//! Classical-quantum channels and their Choi states.
//!
//! A c-q channel on alphabet `X` is the list of output states `ω_x`; it acts
//! on an input `ρ` as `Σ_x ⟨x|ρ|x⟩ ω_x`. Product alphabets `X^n` are indexed
//! lexicographically with the last letter running fastest, matching the
//! Kronecker layout of the output spaces.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;

/// Largest matrix dimension we are willing to materialize densely.
pub const DENSE_DIM_GUARD: usize = 4096;

/// Anything that produces an output state per classical letter.
pub trait LetterChannel {
    fn alphabet_size(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn output_arc(&self, x: usize) -> Arc<DensityMatrix>;

    /// `(base, n)` when the channel is the n-fold tensor power of `base`.
    fn iid_base(&self) -> Option<(&CqChannel, usize)> {
        None
    }
}

/// A c-q channel `x ↦ ω_x`.
///
/// Outputs are reference counted so channels with many identical outputs
/// (replacers, tensor powers of replacers) share storage.
#[derive(Debug, Clone)]
pub struct CqChannel {
    out_dim: usize,
    outputs: Vec<Arc<DensityMatrix>>,
}

impl PartialEq for CqChannel {
    fn eq(&self, other: &Self) -> bool {
        self.out_dim == other.out_dim
            && self.outputs.len() == other.outputs.len()
            && self.outputs.iter().zip(&other.outputs).all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }
}

impl CqChannel {
    pub fn new(outputs: Vec<DensityMatrix>) -> Result<Self> {
        Self::from_shared(outputs.into_iter().map(Arc::new).collect())
    }

    pub fn from_shared(outputs: Vec<Arc<DensityMatrix>>) -> Result<Self> {
        let first = outputs
            .first()
            .ok_or_else(|| Error::InvalidArgument("channel needs at least one letter".into()))?;
        let out_dim = first.dim();
        if let Some(bad) = outputs.iter().find(|o| o.dim() != out_dim) {
            return Err(Error::DimensionMismatch(format!(
                "output dimensions {} and {} in one channel",
                out_dim,
                bad.dim()
            )));
        }
        Ok(Self { out_dim, outputs })
    }

    /// Channel that outputs `state` for every letter.
    pub fn replacer(alphabet_size: usize, state: DensityMatrix) -> Self {
        let shared = Arc::new(state);
        let out_dim = shared.dim();
        Self { out_dim, outputs: vec![shared; alphabet_size.max(1)] }
    }

    /// Completely depolarizing channel `x ↦ 1/d`.
    pub fn depolarizing(alphabet_size: usize, out_dim: usize) -> Self {
        Self::replacer(alphabet_size, DensityMatrix::maximally_mixed(out_dim))
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn output(&self, x: usize) -> &DensityMatrix {
        &self.outputs[x]
    }

    pub fn outputs(&self) -> &[Arc<DensityMatrix>] {
        &self.outputs
    }

    pub fn same_shape(&self, other: &CqChannel) -> bool {
        self.alphabet_size() == other.alphabet_size() && self.out_dim == other.out_dim
    }

    pub(crate) fn check_same_shape(&self, other: &CqChannel) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "|X|={} d={} vs |X|={} d={}",
                self.alphabet_size(),
                self.out_dim,
                other.alphabet_size(),
                other.out_dim
            )))
        }
    }

    /// `Σ_x ⟨x|ρ|x⟩ ω_x` for an input on `X` alone.
    pub fn apply_classical(&self, probs: &[f64]) -> Result<DensityMatrix> {
        if probs.len() != self.alphabet_size() {
            return Err(Error::DimensionMismatch(format!(
                "distribution of length {} for alphabet {}",
                probs.len(),
                self.alphabet_size()
            )));
        }
        let mut acc = CMatrix::zeros(self.out_dim, self.out_dim);
        for (p, w) in probs.iter().zip(&self.outputs) {
            if *p != 0.0 {
                acc += w.matrix() * Complex64::new(*p, 0.0);
            }
        }
        Ok(DensityMatrix::from_trusted(acc))
    }

    /// Letterwise convex combination `a·self + b·other`, sharing storage when
    /// the combination of two shared outputs repeats.
    pub fn combine(&self, a: f64, other: &CqChannel, b: f64) -> Result<CqChannel> {
        self.check_same_shape(other)?;
        if a < 0.0 || b < 0.0 || (a + b - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights ({a}, {b}) are not convex")));
        }
        if b == 0.0 && a == 1.0 {
            return Ok(self.clone());
        }
        if a == 0.0 && b == 1.0 {
            return Ok(other.clone());
        }
        let mut memo: HashMap<(usize, usize), Arc<DensityMatrix>> = HashMap::new();
        let outputs = self
            .outputs
            .iter()
            .zip(&other.outputs)
            .map(|(u, v)| {
                let key = (Arc::as_ptr(u) as usize, Arc::as_ptr(v) as usize);
                memo.entry(key)
                    .or_insert_with(|| {
                        let m = u.matrix() * Complex64::new(a, 0.0) + v.matrix() * Complex64::new(b, 0.0);
                        Arc::new(DensityMatrix::from_trusted(linalg::hermitize(&m)))
                    })
                    .clone()
            })
            .collect();
        CqChannel::from_shared(outputs)
    }

    /// Largest letterwise max-abs deviation between two channels of equal shape.
    pub fn max_deviation(&self, other: &CqChannel) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .outputs
            .iter()
            .zip(&other.outputs)
            .map(|(a, b)| {
                if Arc::ptr_eq(a, b) {
                    0.0
                } else {
                    linalg::max_abs(&(a.matrix() - b.matrix()))
                }
            })
            .fold(0.0, f64::max))
    }
}

impl LetterChannel for CqChannel {
    fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    fn out_dim(&self) -> usize {
        self.out_dim
    }

    fn output_arc(&self, x: usize) -> Arc<DensityMatrix> {
        self.outputs[x].clone()
    }

    fn iid_base(&self) -> Option<(&CqChannel, usize)> {
        Some((self, 1))
    }
}

/// The tensor power `base^{⊗n}`, evaluated lazily letter by letter.
#[derive(Debug, Clone)]
pub struct IidChannel {
    base: CqChannel,
    n: usize,
}

impl IidChannel {
    pub fn new(base: CqChannel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs n >= 1".into()));
        }
        let dim = base.out_dim().checked_pow(n as u32);
        match dim {
            Some(d) if d <= DENSE_DIM_GUARD => Ok(Self { base, n }),
            _ => Err(Error::DimensionGuard(format!(
                "output dimension {}^{} exceeds {}",
                base.out_dim(),
                n,
                DENSE_DIM_GUARD
            ))),
        }
    }

    pub fn base(&self) -> &CqChannel {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    /// Output for an explicit letter string.
    pub fn output_for(&self, letters: &[usize]) -> DensityMatrix {
        let mut acc = self.base.output(letters[0]).matrix().clone();
        for &x in &letters[1..] {
            acc = linalg::kron(&acc, self.base.output(x).matrix());
        }
        DensityMatrix::from_trusted(acc)
    }

    /// Materializes every letter (exponential in n).
    pub fn materialize(&self) -> Result<CqChannel> {
        let mut out = self.base.clone();
        for _ in 1..self.n {
            out = tensor_channel(&out, &self.base);
        }
        Ok(out)
    }
}

impl LetterChannel for IidChannel {
    fn alphabet_size(&self) -> usize {
        self.base.alphabet_size().pow(self.n as u32)
    }

    fn out_dim(&self) -> usize {
        self.base.out_dim().pow(self.n as u32)
    }

    fn output_arc(&self, x: usize) -> Arc<DensityMatrix> {
        let letters = decode_string(x, self.base.alphabet_size(), self.n);
        Arc::new(self.output_for(&letters))
    }

    fn iid_base(&self) -> Option<(&CqChannel, usize)> {
        Some((&self.base, self.n))
    }
}

/// Splits a product-alphabet index into its letters (last letter fastest).
pub fn decode_string(mut index: usize, letters: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % letters;
        index /= letters;
    }
    out
}

pub fn encode_string(string: &[usize], letters: usize) -> usize {
    string.iter().fold(0, |acc, &x| acc * letters + x)
}

/// `a ⊗ b` on the product alphabet, `ω_{(x,y)} = ω_x ⊗ ω_y`.
pub fn tensor_channel(a: &CqChannel, b: &CqChannel) -> CqChannel {
    let mut memo: HashMap<(usize, usize), Arc<DensityMatrix>> = HashMap::new();
    let mut outputs = Vec::with_capacity(a.alphabet_size() * b.alphabet_size());
    for u in &a.outputs {
        for v in &b.outputs {
            let key = (Arc::as_ptr(u) as usize, Arc::as_ptr(v) as usize);
            let out = memo.entry(key).or_insert_with(|| Arc::new(u.tensor(v))).clone();
            outputs.push(out);
        }
    }
    CqChannel { out_dim: a.out_dim * b.out_dim, outputs }
}

/// `channel^{⊗n}` materialized.
pub fn tensor_power(channel: &CqChannel, n: usize) -> Result<CqChannel> {
    IidChannel::new(channel.clone(), n)?.materialize()
}

/// Applies `id_R ⊗ E` to a state on `R ⊗ X`.
///
/// The result is `Σ_x ρ_R^{(x)} ⊗ ω_x` where `ρ_R^{(x)} = (1 ⊗ ⟨x|) ρ (1 ⊗ |x⟩)`.
pub fn cq_apply(channel: &CqChannel, input: &DensityMatrix, ref_dim: usize) -> Result<DensityMatrix> {
    let nx = channel.alphabet_size();
    if ref_dim == 0 || input.dim() != ref_dim * nx {
        return Err(Error::DimensionMismatch(format!(
            "input dimension {} is not ref_dim {} x alphabet {}",
            input.dim(),
            ref_dim,
            nx
        )));
    }
    let da = channel.out_dim();
    let rho = input.matrix();
    let mut out = CMatrix::zeros(ref_dim * da, ref_dim * da);
    for x in 0..nx {
        let block = CMatrix::from_fn(ref_dim, ref_dim, |r, s| rho[(r * nx + x, s * nx + x)]);
        if block.iter().all(|z| *z == linalg::ZERO) {
            continue;
        }
        out += linalg::kron(&block, channel.output(x).matrix());
    }
    DensityMatrix::validate(out)
}

/// Normalized Choi state `(1/|X|) Σ_x |x⟩⟨x| ⊗ ω_x`, stored blockwise.
#[derive(Debug, Clone)]
pub struct ChoiState {
    blocks: Vec<Arc<DensityMatrix>>,
    out_dim: usize,
}

impl ChoiState {
    pub fn in_dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Unnormalized block `ω_x`; the Choi block is `ω_x / |X|`.
    pub fn block(&self, x: usize) -> &DensityMatrix {
        &self.blocks[x]
    }

    /// Weight `1/|X|` of every block.
    pub fn block_weight(&self) -> f64 {
        1.0 / self.blocks.len() as f64
    }

    /// Dense Choi matrix on `X ⊗ A`.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let nx = self.in_dim();
        let d = nx * self.out_dim;
        if d > DENSE_DIM_GUARD {
            return Err(Error::DimensionGuard(format!("Choi dimension {d} exceeds {DENSE_DIM_GUARD}")));
        }
        let w = Complex64::new(self.block_weight(), 0.0);
        let mut m = CMatrix::zeros(d, d);
        for (x, b) in self.blocks.iter().enumerate() {
            let off = x * self.out_dim;
            for i in 0..self.out_dim {
                for j in 0..self.out_dim {
                    m[(off + i, off + j)] = b.matrix()[(i, j)] * w;
                }
            }
        }
        Ok(DensityMatrix::from_trusted(m))
    }

    /// Extracts the channel back out of a dense Choi matrix.
    pub fn channel_from_dense(choi: &DensityMatrix, alphabet_size: usize) -> Result<CqChannel> {
        if alphabet_size == 0 || choi.dim() % alphabet_size != 0 {
            return Err(Error::DimensionMismatch(format!(
                "Choi dimension {} not divisible by {alphabet_size}",
                choi.dim()
            )));
        }
        let da = choi.dim() / alphabet_size;
        let m = choi.matrix();
        let outputs = (0..alphabet_size)
            .map(|x| {
                let off = x * da;
                let block = CMatrix::from_fn(da, da, |i, j| m[(off + i, off + j)]);
                DensityMatrix::validate(block * Complex64::new(alphabet_size as f64, 0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        CqChannel::new(outputs)
    }

    pub fn to_channel(&self) -> CqChannel {
        CqChannel { out_dim: self.out_dim, outputs: self.blocks.clone() }
    }
}

pub fn choi(channel: &CqChannel) -> ChoiState {
    ChoiState { blocks: channel.outputs.clone(), out_dim: channel.out_dim }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket0() -> DensityMatrix {
        DensityMatrix::basis(2, 0)
    }

    /// `x=0 ↦ |0⟩⟨0|`, `x=1 ↦ 1/2`.
    fn pure_or_mixed() -> CqChannel {
        CqChannel::new(vec![ket0(), DensityMatrix::maximally_mixed(2)]).unwrap()
    }

    #[test]
    fn constant_channel_maps_any_letter_to_its_state() {
        let e = CqChannel::replacer(2, ket0());
        let out = cq_apply(&e, &DensityMatrix::basis(2, 1), 1).unwrap();
        assert_eq!(out.matrix(), ket0().matrix());
    }

    #[test]
    fn product_input_with_reference() {
        let e = pure_or_mixed();
        let nu_r = DensityMatrix::from_diagonal(&[0.3, 0.7]).unwrap();
        for x in 0..2 {
            let input = nu_r.tensor(&DensityMatrix::basis(2, x));
            let out = cq_apply(&e, &input, 2).unwrap();
            let expected = nu_r.tensor(e.output(x));
            assert!(linalg::max_abs(&(out.matrix() - expected.matrix())) < 1e-15);
        }
    }

    #[test]
    fn depolarizing_output_ignores_input() {
        let f = CqChannel::depolarizing(2, 2);
        let psi = [
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.8),
        ];
        let ent = DensityMatrix::pure(&psi).unwrap();
        let out = cq_apply(&f, &ent, 2).unwrap();
        let marginal = DensityMatrix::from_diagonal(&[0.36, 0.64]).unwrap();
        let expected = marginal.tensor(&DensityMatrix::maximally_mixed(2));
        assert!(linalg::max_abs(&(out.matrix() - expected.matrix())) < 1e-15);
    }

    #[test]
    fn cq_apply_rejects_bad_reference_dimension() {
        let e = pure_or_mixed();
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(cq_apply(&e, &rho, 2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn choi_of_depolarizing_is_maximally_mixed() {
        let j = choi(&CqChannel::depolarizing(2, 2)).to_density().unwrap();
        let expected = DensityMatrix::maximally_mixed(4);
        assert!(linalg::max_abs(&(j.matrix() - expected.matrix())) < 1e-15);
    }

    #[test]
    fn choi_of_pure_or_mixed_channel_by_block_assembly() {
        let j = choi(&pure_or_mixed()).to_density().unwrap();
        let expected = DensityMatrix::from_diagonal(&[0.5, 0.0, 0.25, 0.25]).unwrap();
        assert!(linalg::max_abs(&(j.matrix() - expected.matrix())) < 1e-15);
        let back = ChoiState::channel_from_dense(&j, 2).unwrap();
        assert!(back.max_deviation(&pure_or_mixed()).unwrap() < 1e-12);
    }

    #[test]
    fn tensor_products_of_simple_channels() {
        let f = CqChannel::depolarizing(2, 2);
        let ff = tensor_channel(&f, &f);
        assert_eq!(ff.alphabet_size(), 4);
        for x in 0..4 {
            assert!(linalg::max_abs(&(ff.output(x).matrix() - DensityMatrix::maximally_mixed(4).matrix())) < 1e-15);
        }
        let e2 = CqChannel::replacer(2, ket0());
        let ee = tensor_channel(&e2, &e2);
        for x in 0..4 {
            assert_eq!(ee.output(x).matrix(), DensityMatrix::basis(4, 0).matrix());
        }
        let e1 = pure_or_mixed();
        let e11 = tensor_channel(&e1, &e1);
        let at01 = e11.output(encode_string(&[0, 1], 2));
        let expected = ket0().tensor(&DensityMatrix::maximally_mixed(2));
        assert!(linalg::max_abs(&(at01.matrix() - expected.matrix())) < 1e-15);
    }

    #[test]
    fn tensor_power_shares_repeated_outputs() {
        let f = CqChannel::depolarizing(2, 2);
        let f8 = tensor_power(&f, 8).unwrap();
        assert_eq!(f8.alphabet_size(), 256);
        assert!(Arc::ptr_eq(&f8.outputs()[0], &f8.outputs()[255]));
    }

    #[test]
    fn string_codec_is_lexicographic() {
        assert_eq!(decode_string(6, 2, 3), vec![1, 1, 0]);
        assert_eq!(encode_string(&[1, 1, 0], 2), 6);
        assert_eq!(decode_string(5, 3, 2), vec![1, 2]);
    }

    #[test]
    fn iid_channel_matches_materialized_power() {
        let e = pure_or_mixed();
        let lazy = IidChannel::new(e.clone(), 3).unwrap();
        let full = tensor_power(&e, 3).unwrap();
        for x in 0..8 {
            assert!(linalg::max_abs(&(lazy.output_arc(x).matrix() - full.output(x).matrix())) < 1e-15);
        }
    }
}
