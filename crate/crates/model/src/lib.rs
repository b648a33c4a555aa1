// SPDX-License-Identifier: Apache-2.0

//! Edit prediction over path-encoded candidates.
//!
//! Every candidate edit of a fragment is an AST path; paths are embedded by
//! an LSTM over node kinds and child indices plus the two endpoint tokens.
//! The context edit's paths run through a second LSTM. A decoder LSTM then
//! points, step by step, at one candidate (or EOS) using attention over the
//! context. Gradients are derived by hand.

pub mod checkpoint;
pub mod features;
pub mod gradcheck;
pub mod net;
pub mod ops;
pub mod optim;
pub mod params;
pub mod predict;
pub mod train;
pub mod vocab;

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint};
pub use features::Features;
pub use gradcheck::{grad_check, grad_check_on, GradCheck};
pub use optim::{Optimizer, OptimizerRegistry};
pub use params::{Dims, Params};
pub use predict::{Model, ModelConfig, Prediction};
pub use train::{train, MetricLine, StopReason, TrainConfig, TrainReport};
pub use vocab::{build_vocab, Vocab};

use editpath_core::dataset::DatasetError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{0}")]
    Invalid(String),
    #[error("training diverged at step {step}: loss {loss}")]
    Divergence { step: usize, loss: f64 },
    #[error("bad checkpoint: {0}")]
    Checkpoint(String),
    #[error("example {example}: {source}")]
    Example {
        example: String,
        source: DatasetError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
