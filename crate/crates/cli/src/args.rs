// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "editpath",
    version,
    about = "Diff syntax trees into path edits and learn to predict them from context"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Syntax {
    /// `.sexp` files are s-expressions, anything else is toy source.
    Auto,
    Toy,
    Sexpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DiffFormat {
    /// Node-id edit script.
    Ops,
    /// Path-operation listing over the augmented fragment.
    Paths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScriptFormat {
    /// Path listing if any line carries an `@ s,t` suffix or material.
    Auto,
    Ops,
    Paths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    /// Path listing, directly usable by `apply`.
    Script,
    /// The edited fragment.
    Code,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the edit script turning one file into another.
    Diff {
        before: PathBuf,
        after: PathBuf,
        #[arg(long, value_enum, default_value_t = DiffFormat::Ops)]
        format: DiffFormat,
        #[arg(long, value_enum, default_value_t = Syntax::Auto)]
        syntax: Syntax,
    },
    /// Apply an edit script or path listing and print the result.
    Apply {
        before: PathBuf,
        script: PathBuf,
        #[arg(long, value_enum, default_value_t = ScriptFormat::Auto)]
        format: ScriptFormat,
        #[arg(long, value_enum, default_value_t = Syntax::Auto)]
        syntax: Syntax,
    },
    /// Turn a before/after corpus into a processed dataset.
    Ingest {
        /// Corpus root: `<project>/<pair>/{before.toy, after.toy, span.txt}`.
        #[arg(env = "EDITPATH_CORPUS")]
        corpus: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = editpath_core::dataset::DEFAULT_RADIUS)]
        radius: usize,
        #[arg(long, default_value_t = 50)]
        max_nodes: usize,
        /// Train, validation and test fractions for the project split.
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.8, 0.1, 0.1])]
        split: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Train a model on a processed dataset.
    Train(TrainArgs),
    /// Predict the edit of every example in a dataset file.
    Predict {
        checkpoint: PathBuf,
        examples: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Script)]
        emit: Emit,
        /// Only the example at this position.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Exact-match accuracy of a checkpoint on a dataset.
    Evaluate {
        checkpoint: PathBuf,
        dataset: PathBuf,
        /// Restrict to one split (train, validation, test).
        #[arg(long)]
        split: Option<String>,
    },
    /// Dataset statistics.
    Stats {
        dataset: PathBuf,
        /// Aligned table instead of key/value lines.
        #[arg(long)]
        pretty: bool,
    },
    /// Write a synthetic corpus of templated edits.
    Generate {
        #[arg(required_unless_present = "list")]
        out: Option<PathBuf>,
        /// Edit family by name; repeat for several. Defaults to all.
        #[arg(long = "family")]
        families: Vec<String>,
        /// Pairs per family.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        projects: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw identifiers from the held-out name pool.
        #[arg(long)]
        held_out: bool,
        /// List the registered families and exit.
        #[arg(long)]
        list: bool,
    },
}

/// Unset hyperparameters take the library defaults.
#[derive(Debug, Args)]
pub struct TrainArgs {
    pub dataset: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Write the per-step metrics log here.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Initialization, batching and dropout seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ignore the context paths.
    #[arg(long)]
    pub no_context: bool,
    /// Embedding width d [default: 64]
    #[arg(long)]
    pub embed_dim: Option<usize>,
    /// LSTM width h [default: 128]
    #[arg(long)]
    pub hidden_dim: Option<usize>,
    /// Learning rate [default: 0.001]
    #[arg(long)]
    pub lr: Option<f64>,
    /// Dropout rate [default: 0.25]
    #[arg(long)]
    pub dropout: Option<f64>,
    /// Examples per step [default: 32]
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Step budget [default: 5000]
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// adam or sgd [default: adam]
    #[arg(long)]
    pub optimizer: Option<String>,
    /// Steps between validation runs [default: 50]
    #[arg(long)]
    pub eval_every: Option<usize>,
    /// Validation runs without improvement before stopping [default: 20]
    #[arg(long)]
    pub patience: Option<usize>,
    /// Stop once validation exact match reaches this
    #[arg(long)]
    pub target_accuracy: Option<f64>,
    /// Subtokens rarer than this map to UNK [default: 1]
    #[arg(long)]
    pub min_frequency: Option<usize>,
    /// Decoding length cap [default: 16]
    #[arg(long)]
    pub max_decode: Option<usize>,
}
