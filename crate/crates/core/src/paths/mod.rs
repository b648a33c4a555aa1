// SPDX-License-Identifier: Apache-2.0

//! Edits as paths. A tree is augmented with a `Placeholder` as the leftmost
//! child of every nonterminal and with `DEL`, `UPD` and `INS` nodes under
//! the root; every edit then becomes a path from a source node to a target
//! node plus one of three operation kinds. A deletion is a move to `DEL`.

mod apply;
mod augment;
mod candidates;
mod convert;
mod listing;

pub use apply::apply_path_ops;
pub use augment::{augment, augment_with, AugmentedAst, ContextEdit, NodeRole};
pub use candidates::{candidate_admissible, enumerate_candidates, format_candidates, Candidate};
pub use convert::{is_representable, script_to_path_ops, Encoding};
pub use listing::{format_listing, parse_listing};

use std::fmt;

use thiserror::Error;

use crate::ast::{sexpr::quote, AstError, NodeId};
use crate::diff::ApplyError;

pub const PLACEHOLDER: &str = "Placeholder";
pub const DEL_NODE: &str = "DEL";
pub const UPD_NODE: &str = "UPD";
pub const INS_NODE: &str = "INS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperationKind {
    Mov,
    Upd,
    Ins,
}

impl OperationKind {
    pub const ALL: [OperationKind; 3] =
        [OperationKind::Mov, OperationKind::Upd, OperationKind::Ins];

    pub fn as_str(self) -> &'static str {
        match self {
            OperationKind::Mov => "MOV",
            OperationKind::Upd => "UPD",
            OperationKind::Ins => "INS",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for OperationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One node on a path, as seen at the time the path was taken.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathNode {
    pub id: NodeId,
    pub kind: String,
    pub child_index: usize,
    pub value: Option<String>,
}

/// An edit as a path from its source node (first) to its target node (last).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathOperation {
    pub kind: OperationKind,
    pub path: Vec<PathNode>,
}

impl PathOperation {
    pub fn source(&self) -> NodeId {
        self.path[0].id
    }

    pub fn target(&self) -> NodeId {
        self.path[self.path.len() - 1].id
    }
}

/// `MOV Name[1] -> Call[1] -> DEL[2] @ 4,9`. The suffix names the endpoint
/// ids in the augmented tree.
impl fmt::Display for PathOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for (i, n) in self.path.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { " -> " })?;
            write!(f, "{}[{}]", n.kind, n.child_index)?;
            let endpoint = i == 0 || i + 1 == self.path.len();
            if let (true, Some(v)) = (endpoint, &n.value) {
                write!(f, "={}", quote(v))?;
            }
        }
        write!(f, " @ {},{}", self.source(), self.target())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("op {op} cannot be expressed as a path: {reason}")]
    Unrepresentable { op: usize, reason: String },
    #[error("op {op}: node {node} no longer exists")]
    Stale { op: usize, node: NodeId },
    #[error("op {op}: cannot move node {node} into its own subtree")]
    MoveIntoOwnSubtree { op: usize, node: NodeId },
    #[error("op {op}: node {node} is not a terminal")]
    UpdateNonterminal { op: usize, node: NodeId },
    #[error("op {op}: node {node} is not a valid endpoint for {kind}")]
    InvalidEndpoint {
        op: usize,
        node: NodeId,
        kind: OperationKind,
    },
    #[error("invalid context script: {0}")]
    Script(#[from] ApplyError),
    #[error(transparent)]
    Tree(#[from] AstError),
}
