//! JSON file formats for states, channels, free sets and smoothing output.
//!
//! Matrices are row-major lists of `[re, im]` pairs. Nested row lists are
//! accepted on input. Floats are written in shortest round-trip form, so a
//! save/load cycle is exact.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::CqChannel;
use crate::error::{Error, Result};
use crate::free_sets::{FreeSetDescriptor, FreeSetKind, Incoherent, Ppt2x2, StateFamily};
use crate::linalg::CMatrix;
use crate::resource_ops::{SmoothedChannel, SuperchannelRecipe};
use crate::state::DensityMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

impl MatrixSpec {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut flat = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                flat.push([z.re, z.im]);
            }
        }
        MatrixSpec::Flat(flat)
    }

    pub fn to_matrix(&self, dim: usize) -> Result<CMatrix> {
        let flat: Vec<[f64; 2]> = match self {
            MatrixSpec::Flat(v) => v.clone(),
            MatrixSpec::Rows(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::Parse(format!("expected {dim} rows of {dim} entries")));
                }
                rows.concat()
            }
        };
        if flat.len() != dim * dim {
            return Err(Error::Parse(format!("expected {} entries, found {}", dim * dim, flat.len())));
        }
        if flat.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        Ok(CMatrix::from_row_iterator(dim, dim, flat.iter().map(|&[re, im]| Complex64::new(re, im))))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub alphabet_size: usize,
    pub out_dim: usize,
    pub outputs: Vec<MatrixSpec>,
}

impl ChannelSpec {
    pub fn from_channel(e: &CqChannel) -> Self {
        Self {
            alphabet_size: e.alphabet_size(),
            out_dim: e.out_dim(),
            outputs: e.outputs().iter().map(|o| MatrixSpec::from_matrix(o.matrix())).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<CqChannel> {
        if self.alphabet_size == 0 || self.out_dim == 0 {
            return Err(Error::Parse("alphabet_size and out_dim must be positive".into()));
        }
        if self.outputs.len() != self.alphabet_size {
            return Err(Error::Parse(format!(
                "alphabet_size is {} but {} outputs are listed",
                self.alphabet_size,
                self.outputs.len()
            )));
        }
        let outputs = self
            .outputs
            .iter()
            .map(|m| DensityMatrix::validate(m.to_matrix(self.out_dim)?))
            .collect::<Result<Vec<_>>>()?;
        CqChannel::new(outputs)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpec {
    pub dim: usize,
    pub matrix: MatrixSpec,
}

/// `{kind, n, params}`; `params` holds `{"channel": …}` for singleton sets
/// and `{"family": "incoherent" | "ppt2x2"}` for lifted state sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreeSetSpec {
    pub kind: String,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default)]
    pub params: Value,
}

fn one() -> usize {
    1
}

impl FreeSetSpec {
    pub fn from_descriptor(s: &FreeSetDescriptor) -> Self {
        let params = match &s.kind {
            FreeSetKind::SingletonIid(f) => serde_json::json!({ "channel": ChannelSpec::from_channel(f) }),
            FreeSetKind::LiftedStateSet(family) => serde_json::json!({ "family": family.name() }),
            _ => Value::Null,
        };
        Self { kind: s.kind_name().to_string(), n: s.n, params }
    }

    pub fn to_descriptor(&self) -> Result<FreeSetDescriptor> {
        if self.n == 0 {
            return Err(Error::Parse("free set needs n >= 1".into()));
        }
        match self.kind.as_str() {
            "singleton_iid" => {
                let spec: ChannelSpec = serde_json::from_value(self.params.get("channel").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::Parse(format!("singleton_iid params.channel: {e}")))?;
                Ok(FreeSetDescriptor::singleton_iid(spec.to_channel()?, self.n))
            }
            "replacer" => Ok(FreeSetDescriptor::replacer(self.n)),
            "ppt_output" => Ok(FreeSetDescriptor::ppt_output(self.n)),
            "lifted_state_set" => {
                let family: Arc<dyn StateFamily> = match self.params.get("family").and_then(Value::as_str) {
                    Some("incoherent") => Arc::new(Incoherent),
                    Some("ppt2x2") => Arc::new(Ppt2x2::default()),
                    other => return Err(Error::Parse(format!("unknown state family {other:?}"))),
                };
                Ok(FreeSetDescriptor::lifted(family, self.n))
            }
            other => Err(Error::Parse(format!("unknown free set kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmoothedChannelSpec {
    pub copies: usize,
    pub dmax_bound: f64,
    pub channel: ChannelSpec,
    pub projectors: Vec<MatrixSpec>,
}

impl SmoothedChannelSpec {
    pub fn from_smoothed(s: &SmoothedChannel) -> Self {
        Self {
            copies: s.copies,
            dmax_bound: s.dmax_bound,
            channel: ChannelSpec::from_channel(&s.channel),
            projectors: s.projectors.iter().map(MatrixSpec::from_matrix).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecipeSpec {
    pub test_operator: MatrixSpec,
    pub probe: usize,
    pub pass: ChannelSpec,
    pub fail: ChannelSpec,
}

impl RecipeSpec {
    pub fn from_recipe(r: &SuperchannelRecipe) -> Self {
        Self {
            test_operator: MatrixSpec::from_matrix(&r.test_operator),
            probe: r.probe,
            pass: ChannelSpec::from_channel(&r.pass),
            fail: ChannelSpec::from_channel(&r.fail),
        }
    }

    pub fn to_recipe(&self) -> Result<SuperchannelRecipe> {
        let pass = self.pass.to_channel()?;
        let fail = self.fail.to_channel()?;
        let op = self.test_operator.to_matrix(pass.out_dim())?;
        crate::resource_ops::build_superchannel(op, self.probe, pass, fail)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json(value)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn load_channel(path: &Path) -> Result<CqChannel> {
    read_json::<ChannelSpec>(path)?.to_channel()
}

pub fn save_channel(path: &Path, e: &CqChannel) -> Result<()> {
    write_json(path, &ChannelSpec::from_channel(e))
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    let spec: StateSpec = read_json(path)?;
    DensityMatrix::validate(spec.matrix.to_matrix(spec.dim)?)
}

pub fn save_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    write_json(path, &StateSpec { dim: rho.dim(), matrix: MatrixSpec::from_matrix(rho.matrix()) })
}

pub fn load_free_set(path: &Path) -> Result<FreeSetDescriptor> {
    read_json::<FreeSetSpec>(path)?.to_descriptor()
}

pub fn save_free_set(path: &Path, s: &FreeSetDescriptor) -> Result<()> {
    write_json(path, &FreeSetSpec::from_descriptor(s))
}

pub fn load_recipe(path: &Path) -> Result<SuperchannelRecipe> {
    read_json::<RecipeSpec>(path)?.to_recipe()
}

pub fn save_recipe(path: &Path, r: &SuperchannelRecipe) -> Result<()> {
    write_json(path, &RecipeSpec::from_recipe(r))
}
