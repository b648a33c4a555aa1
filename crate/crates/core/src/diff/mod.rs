// SPDX-License-Identifier: Apache-2.0

//! Tree differencing: a three-phase node mapping (isomorphic anchors,
//! bottom-up containers, descendant recovery) followed by Chawathe-style
//! edit-script generation, plus the interpreter for the resulting scripts.

pub(crate) mod apply;
mod lcs;
mod mapping;
mod matching;
mod script;
mod text;
pub(crate) mod work;

pub use apply::apply_script;
pub use lcs::lcs;
pub use mapping::Mapping;
pub use matching::{
    anchors_topdown, containers_bottomup, recover_descendants, CONTAINER_THRESHOLD,
};
pub use script::generate_script;
pub use text::{parse_script, serialize_script};

use std::fmt;

use thiserror::Error;

use crate::ast::{Ast, AstError, NodeId, Tree};

/// Where a moved or inserted subtree lands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Anchor {
    /// Immediately to the right of the given node.
    After(NodeId),
    /// As the leftmost child of the given nonterminal.
    FirstChildOf(NodeId),
    /// As the leftmost top-level tree. Only needed when the roots of the two
    /// trees cannot be mapped onto each other.
    FirstRoot,
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::After(n) => write!(f, "{n}"),
            Anchor::FirstChildOf(p) => write!(f, "^{p}"),
            Anchor::FirstRoot => f.write_str("^"),
        }
    }
}

/// One edit instruction. Node ids name live nodes of the tree being edited:
/// nodes of the source tree keep their pre-order ids, and every inserted node
/// receives the next unused id (in pre-order within the inserted subtree).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EditOp {
    Mov { src: NodeId, to: Anchor },
    Del { src: NodeId },
    Upd { value: String, tgt: NodeId },
    Ins { tree: Tree, to: Anchor },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditKind {
    Mov,
    Del,
    Upd,
    Ins,
}

impl EditKind {
    pub const ALL: [EditKind; 4] = [EditKind::Mov, EditKind::Del, EditKind::Ins, EditKind::Upd];

    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::Mov => "MOV",
            EditKind::Del => "DEL",
            EditKind::Upd => "UPD",
            EditKind::Ins => "INS",
        }
    }
}

impl EditOp {
    pub fn kind(&self) -> EditKind {
        match self {
            EditOp::Mov { .. } => EditKind::Mov,
            EditOp::Del { .. } => EditKind::Del,
            EditOp::Upd { .. } => EditKind::Upd,
            EditOp::Ins { .. } => EditKind::Ins,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn new(ops: Vec<EditOp>) -> Self {
        EditScript { ops }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error("op {op}: node {node} does not exist")]
    Dangling { op: usize, node: NodeId },
    #[error("op {op}: cannot move node {node} into its own subtree")]
    MoveIntoOwnSubtree { op: usize, node: NodeId },
    #[error("op {op}: node {node} is not a terminal")]
    UpdateNonterminal { op: usize, node: NodeId },
    #[error("op {op}: node {node} is a terminal and cannot take children")]
    ChildOfTerminal { op: usize, node: NodeId },
    #[error("script leaves {0} top-level trees")]
    Forest(usize),
    #[error(transparent)]
    Tree(#[from] AstError),
}

/// Full pipeline: anchors, containers, recovery, then script generation.
pub fn diff(a: &Ast, b: &Ast) -> EditScript {
    let m = anchors_topdown(a, b);
    let m = containers_bottomup(a, b, m);
    let m = recover_descendants(a, b, m);
    generate_script(a, b, &m)
}
