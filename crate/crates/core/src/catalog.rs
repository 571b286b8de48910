//! Named channels used by the worked examples and the CLI.

use std::sync::Arc;

use crate::channel::CqChannel;
use crate::error::{Error, Result};
use crate::resource_ops::InputRelabeling;
use crate::state::DensityMatrix;

/// Largest `n` for the string-indexed example families (`2^n` letters, `2^n`-dim outputs).
pub const MAX_EXAMPLE_COPIES: usize = 10;

/// Qubit channel with outputs `|0⟩⟨0|` and `1/2`.
pub fn pure_or_mixed() -> CqChannel {
    CqChannel::new(vec![DensityMatrix::basis(2, 0), DensityMatrix::maximally_mixed(2)]).expect("qubit outputs")
}

/// Qubit channel that always outputs `|0⟩⟨0|`.
pub fn constant_zero() -> CqChannel {
    CqChannel::replacer(2, DensityMatrix::basis(2, 0))
}

pub fn depolarizing_qubit() -> CqChannel {
    CqChannel::depolarizing(2, 2)
}

fn check_copies(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_EXAMPLE_COPIES {
        return Err(Error::InvalidArgument(format!("n must lie in 1..={MAX_EXAMPLE_COPIES}, got {n}")));
    }
    Ok(1 << n)
}

/// `n` bits in, `|0…0⟩` out regardless of input.
pub fn all_zero_string(n: usize) -> Result<CqChannel> {
    let d = check_copies(n)?;
    Ok(CqChannel::replacer(d, DensityMatrix::basis(d, 0)))
}

/// Like [`all_zero_string`] except that `1…1` is sent to `|1…1⟩`.
pub fn flag_all_ones(n: usize) -> Result<CqChannel> {
    let d = check_copies(n)?;
    let zero = Arc::new(DensityMatrix::basis(d, 0));
    let mut outputs = vec![zero; d];
    outputs[d - 1] = Arc::new(DensityMatrix::basis(d, d - 1));
    CqChannel::from_shared(outputs)
}

/// Pre-processing that feeds `1…1` to the channel whatever the input.
pub fn force_all_ones(n: usize) -> Result<InputRelabeling> {
    let d = check_copies(n)?;
    Ok(InputRelabeling::constant(d, d - 1))
}
