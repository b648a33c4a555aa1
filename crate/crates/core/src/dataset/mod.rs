// SPDX-License-Identifier: Apache-2.0

//! Examples: ingestion from a before/after corpus, filtering, project-level
//! splits, statistics, persistence and the exact-match metric, plus a
//! synthetic generator of templated edits.

mod filter;
mod ingest;
mod metric;
mod record;
mod split;
mod stats;
pub mod synth;

pub use filter::{filter_example, update_pairs, DropReason, FilterConfig};
pub use ingest::{ingest_corpus, ingest_pair, read_spans, CorpusReport, Span, DEFAULT_RADIUS};
pub use metric::exact_match_accuracy;
pub use record::{read_records, write_records};
pub use split::{split_by_project, SplitSpec};
pub use stats::{compute_stats, DatasetStats};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ast::{Ast, AstError};
use crate::diff::EditScript;
use crate::paths::{
    augment, enumerate_candidates, script_to_path_ops, AugmentedAst, Candidate, ContextEdit,
    Encoding, PathError, PathOperation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, DatasetError> {
        match s {
            "train" => Ok(Split::Train),
            "validation" | "val" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            other => Err(DatasetError::Invalid(format!("unknown split `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExampleMeta {
    pub project: String,
    pub pair: String,
    pub file: String,
    pub split: Option<Split>,
}

/// One training or evaluation instance: the fragment to edit (P), the code
/// around it (C) before and after the surrounding edit, and both scripts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example {
    pub meta: ExampleMeta,
    pub p_before: Ast,
    pub p_after: Ast,
    pub c_before: Ast,
    pub c_after: Ast,
    pub gold_script: EditScript,
    pub context_script: EditScript,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: AstError },
    #[error("span {span} lies outside the file ({lines} lines)")]
    SpanOutOfRange { span: String, lines: usize },
    #[error("gold op {op} is not among the candidates")]
    Coverage { op: usize },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything the model needs from an example.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub aug: AugmentedAst,
    pub candidates: Vec<Candidate>,
    /// Candidate index of each gold op, in script order.
    pub gold: Vec<usize>,
    pub gold_ops: Vec<PathOperation>,
    /// The context edit as live paths, in script order.
    pub context: Vec<PathOperation>,
}

impl Example {
    pub fn context_edit(&self) -> ContextEdit<'_> {
        ContextEdit {
            before: &self.c_before,
            script: &self.context_script,
        }
    }

    /// P before, augmented with the context's values and subtrees.
    pub fn augmented(&self) -> Result<AugmentedAst, PathError> {
        augment(&self.p_before, Some(self.context_edit()))
    }

    pub fn context_paths(&self) -> Result<Vec<PathOperation>, PathError> {
        let caug = augment(&self.c_before, Some(self.context_edit()))?;
        script_to_path_ops(&caug, &self.context_script, Encoding::Context)
    }

    pub fn prepare(&self) -> Result<Prepared, DatasetError> {
        let aug = self.augmented()?;
        let gold_ops = script_to_path_ops(&aug, &self.gold_script, Encoding::Target)?;
        let candidates = enumerate_candidates(&aug);
        let index: HashMap<Candidate, usize> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i))
            .collect();
        let gold = gold_ops
            .iter()
            .enumerate()
            .map(|(i, op)| {
                let key = Candidate {
                    source: op.source(),
                    target: op.target(),
                    kind: op.kind,
                };
                index
                    .get(&key)
                    .copied()
                    .ok_or(DatasetError::Coverage { op: i })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Prepared {
            aug,
            candidates,
            gold,
            gold_ops,
            context: self.context_paths()?,
        })
    }
}

#[cfg(test)]
mod tests;
