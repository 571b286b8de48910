//! Permutations of channel copies and type classes of classical strings.

use std::sync::Arc;

use itertools::Itertools;
use num_complex::Complex64;

use crate::channel::{decode_string, encode_string, CqChannel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;

/// Largest copy count accepted by [`symmetrize_channel`].
pub const MAX_SYMMETRIZE_COPIES: usize = 8;

/// Guard on the number of type classes produced by [`enumerate_types`].
pub const MAX_TYPE_CLASSES: u128 = 1_000_000;

/// A permutation `π` of `n` tensor copies.
///
/// On strings it acts as `(π·x)_i = x_{π⁻¹(i)}`, i.e. the letter in slot `i`
/// moves to slot `π(i)`. The induced unitary `P(π)` does the same to basis
/// vectors of `(ℂ^d)^{⊗n}`, so `P(a)P(b) = P(a∘b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationAction {
    perm: Vec<usize>,
}

impl PermutationAction {
    /// `perm[i]` is the image of slot `i` (0-based).
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// Transposition of slots `i` and `j`.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        Self { perm }
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = PermutationAction> {
        (0..n).permutations(n).map(|perm| PermutationAction { perm })
    }

    pub fn copies(&self) -> usize {
        self.perm.len()
    }

    pub fn image(&self, slot: usize) -> usize {
        self.perm[slot]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self { perm: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PermutationAction) -> Self {
        Self { perm: other.perm.iter().map(|&p| self.perm[p]).collect() }
    }

    /// `π·x` on a string.
    pub fn act_on_string(&self, x: &[usize]) -> Vec<usize> {
        let mut out = vec![0; x.len()];
        for (i, &letter) in x.iter().enumerate() {
            out[self.perm[i]] = letter;
        }
        out
    }

    /// Index map of `P(π)` on `(ℂ^local_dim)^{⊗n}`: `P|i⟩ = |map[i]⟩`.
    pub fn index_map(&self, local_dim: usize) -> Vec<usize> {
        let n = self.copies();
        let total = local_dim.pow(n as u32);
        (0..total)
            .map(|i| encode_string(&self.act_on_string(&decode_string(i, local_dim, n)), local_dim))
            .collect()
    }

    /// Dense `P(π)`.
    pub fn unitary(&self, local_dim: usize) -> CMatrix {
        let map = self.index_map(local_dim);
        let n = map.len();
        let mut p = CMatrix::zeros(n, n);
        for (i, &j) in map.iter().enumerate() {
            p[(j, i)] = linalg::ONE;
        }
        p
    }
}

/// Per-copy shape of a channel on `X^n → A^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductShape {
    pub copies: usize,
    pub letters: usize,
    pub local_dim: usize,
}

impl ProductShape {
    pub fn check(&self, channel: &CqChannel) -> Result<()> {
        let nx = self.letters.checked_pow(self.copies as u32);
        let da = self.local_dim.checked_pow(self.copies as u32);
        if nx != Some(channel.alphabet_size()) || da != Some(channel.out_dim()) {
            return Err(Error::DimensionMismatch(format!(
                "channel |X|={} d={} is not ({}^{}, {}^{})",
                channel.alphabet_size(),
                channel.out_dim(),
                self.letters,
                self.copies,
                self.local_dim,
                self.copies
            )));
        }
        Ok(())
    }
}

/// `(π·F)(|x⟩⟨x|) = P_A(π)† F(|π·x⟩⟨π·x|) P_A(π)`.
///
/// With this convention `π₁·(π₂·F) = (π₂∘π₁)·F`.
pub fn permute_channel(pi: &PermutationAction, channel: &CqChannel, shape: ProductShape) -> Result<CqChannel> {
    shape.check(channel)?;
    if pi.copies() != shape.copies {
        return Err(Error::DimensionMismatch(format!(
            "permutation of {} copies applied to {} copies",
            pi.copies(),
            shape.copies
        )));
    }
    let out_map = pi.index_map(shape.local_dim);
    let outputs = (0..channel.alphabet_size())
        .map(|x| {
            let letters = decode_string(x, shape.letters, shape.copies);
            let src = encode_string(&pi.act_on_string(&letters), shape.letters);
            let m = linalg::conjugate_by_index_map(channel.output(src).matrix(), &out_map);
            Arc::new(DensityMatrix::from_trusted(m))
        })
        .collect();
    CqChannel::from_shared(outputs)
}

/// Orbit average `(1/n!) Σ_π π·F`.
pub fn symmetrize_channel(channel: &CqChannel, shape: ProductShape) -> Result<CqChannel> {
    shape.check(channel)?;
    if shape.copies > MAX_SYMMETRIZE_COPIES {
        return Err(Error::CombinatorialOverflow(format!(
            "symmetrizing {} copies needs {}! terms",
            shape.copies, shape.copies
        )));
    }
    let d = channel.out_dim();
    let mut acc: Vec<CMatrix> = vec![CMatrix::zeros(d, d); channel.alphabet_size()];
    let mut count = 0usize;
    for pi in PermutationAction::all(shape.copies) {
        let permuted = permute_channel(&pi, channel, shape)?;
        for (slot, out) in acc.iter_mut().zip(permuted.outputs()) {
            *slot += out.matrix();
        }
        count += 1;
    }
    let scale = Complex64::new(1.0 / count as f64, 0.0);
    let outputs = acc
        .into_iter()
        .map(|m| DensityMatrix::from_trusted(linalg::hermitize(&(m * scale))))
        .collect();
    CqChannel::new(outputs)
}

/// Composition of `n` into `letters` parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeClass {
    pub n: usize,
    pub counts: Vec<usize>,
    pub multiplicity: u128,
}

impl TypeClass {
    /// Sorted representative string, e.g. counts (2,1) ↦ [0,0,1].
    pub fn representative(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(letter, &c)| std::iter::repeat_n(letter, c))
            .collect()
    }

    /// Type of a string over an alphabet of `letters` symbols.
    pub fn of_string(x: &[usize], letters: usize) -> Vec<usize> {
        let mut counts = vec![0; letters];
        for &l in x {
            counts[l] += 1;
        }
        counts
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut total: u128 = 0;
    let mut acc: u128 = 1;
    for &c in counts {
        total += c as u128;
        acc = acc.checked_mul(binomial(total, c as u128)?)?;
    }
    Some(acc)
}

/// All type classes of strings of length `n` over `k` letters.
pub fn enumerate_types(n: usize, k: usize) -> Result<Vec<TypeClass>> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("enumerate_types needs n >= 1 and k >= 1".into()));
    }
    let count = binomial((n + k - 1) as u128, (k - 1) as u128);
    match count {
        Some(c) if c <= MAX_TYPE_CLASSES => {}
        _ => {
            return Err(Error::CombinatorialOverflow(format!(
                "C({}, {}) type classes exceed {}",
                n + k - 1,
                k - 1,
                MAX_TYPE_CLASSES
            )))
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; k];
    fill_types(n, 0, &mut counts, &mut out)?;
    Ok(out)
}

fn fill_types(remaining: usize, slot: usize, counts: &mut Vec<usize>, out: &mut Vec<TypeClass>) -> Result<()> {
    let k = counts.len();
    if slot == k - 1 {
        counts[slot] = remaining;
        let multiplicity = multinomial(counts)
            .ok_or_else(|| Error::CombinatorialOverflow("multinomial coefficient overflows u128".into()))?;
        out.push(TypeClass { n: counts.iter().sum(), counts: counts.clone(), multiplicity });
        return Ok(());
    }
    for c in (0..=remaining).rev() {
        counts[slot] = c;
        fill_types(remaining - c, slot + 1, counts, out)?;
    }
    counts[slot] = 0;
    Ok(())
}
