//! Divergences, hypothesis testing and resource constructions for
//! classical-quantum channels.

pub mod catalog;
pub mod channel;
pub mod channel_divergences;
pub mod divergences;
pub mod error;
pub mod experiments;
pub mod free_sets;
pub mod hypothesis;
pub mod io;
pub mod linalg;
pub mod pinching;
pub mod random;
pub mod resource_ops;
pub mod state;
pub mod symmetry;

pub use channel::{choi, cq_apply, tensor_channel, tensor_power, ChoiState, CqChannel, IidChannel, LetterChannel};
pub use error::{Error, Result};
pub use hypothesis::{hypothesis_test, hypothesis_test_diagonal, ClassicalTestResult, TestResult};
pub use state::DensityMatrix;
