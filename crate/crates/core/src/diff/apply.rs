// SPDX-License-Identifier: Apache-2.0

use super::work::{WorkError, WorkTree};
use super::{ApplyError, EditOp, EditScript};
use crate::ast::Ast;

pub(crate) fn lift(op: usize, e: WorkError) -> ApplyError {
    match e {
        WorkError::Dangling(node) => ApplyError::Dangling { op, node },
        WorkError::OwnSubtree(node) => ApplyError::MoveIntoOwnSubtree { op, node },
        WorkError::ChildOfTerminal(node) => ApplyError::ChildOfTerminal { op, node },
        WorkError::NotTerminal(node) => ApplyError::UpdateNonterminal { op, node },
    }
}

pub(crate) fn apply_op(w: &mut WorkTree, op: &EditOp) -> Result<(), WorkError> {
    match op {
        EditOp::Mov { src, to } => w.move_to(*src, to),
        EditOp::Del { src } => w.delete(*src),
        EditOp::Upd { value, tgt } => w.update(*tgt, value),
        EditOp::Ins { tree, to } => w.insert(tree, to).map(|_| ()),
    }
}

/// Runs `script` against a copy of `tree`. Fails on the first op that
/// refers to a missing node or is structurally impossible, or when the
/// result is not a single tree.
pub fn apply_script(tree: &Ast, script: &EditScript) -> Result<Ast, ApplyError> {
    let mut w = WorkTree::from_ast(tree);
    for (i, op) in script.ops.iter().enumerate() {
        apply_op(&mut w, op).map_err(|e| lift(i, e))?;
    }
    if w.roots.len() != 1 {
        return Err(ApplyError::Forest(w.roots.len()));
    }
    Ok(Ast::from_tree(&w.subtree(w.roots[0]))?)
}
