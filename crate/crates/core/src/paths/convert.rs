// SPDX-License-Identifier: Apache-2.0

use super::apply::AugWork;
use super::augment::padded_with_flags;
use super::candidates::{candidate_admissible, static_path_op};
use super::{AugmentedAst, NodeRole, OperationKind, PathError, PathOperation};
use crate::ast::NodeId;
use crate::diff::apply::{apply_op, lift};
use crate::diff::work::WorkTree;
use crate::diff::{Anchor, EditOp, EditScript};

/// How a script is turned into paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// Static paths in the augmented tree before any op runs: the form the
    /// model points to. Every op must be an admissible candidate.
    Target,
    /// Paths taken in the evolving tree, each just before its op runs (an
    /// insertion is described after it runs, as the path from `INS` to the
    /// new subtree). Used to describe the context edit.
    Context,
}

fn unrep(op: usize, reason: &str) -> PathError {
    PathError::Unrepresentable {
        op,
        reason: reason.to_string(),
    }
}

/// Converts `script` (whose ids refer to `aug.origin`) into one path
/// operation per edit op.
pub fn script_to_path_ops(
    aug: &AugmentedAst,
    script: &EditScript,
    mode: Encoding,
) -> Result<Vec<PathOperation>, PathError> {
    match mode {
        Encoding::Target => target_ops(aug, script),
        Encoding::Context => context_ops(aug, script),
    }
}

/// True when the script converts in target mode.
pub fn is_representable(aug: &AugmentedAst, script: &EditScript) -> bool {
    target_ops(aug, script).is_ok()
}

fn target_ops(aug: &AugmentedAst, script: &EditScript) -> Result<Vec<PathOperation>, PathError> {
    let origin = &aug.origin;
    let mut w = WorkTree::from_ast(origin);
    let mut out = Vec::with_capacity(script.len());
    for (i, op) in script.ops.iter().enumerate() {
        let stat = |id: NodeId| -> Result<NodeId, PathError> {
            if id.0 < origin.len() {
                Ok(aug.aug_id(id).expect("original id"))
            } else {
                Err(unrep(i, "refers to a node created by the edit"))
            }
        };
        let target = |to: &Anchor| -> Result<NodeId, PathError> {
            match *to {
                Anchor::After(u) => stat(u),
                Anchor::FirstChildOf(p) => {
                    let p = stat(p)?;
                    aug.placeholder(aug.original_id(p).unwrap())
                        .ok_or_else(|| unrep(i, "first child of a terminal"))
                }
                Anchor::FirstRoot => Err(unrep(i, "replaces the root")),
            }
        };
        let admissible = |kind, s: NodeId, t: NodeId| candidate_admissible(aug, kind, s, t);
        let (kind, s, t) = match op {
            EditOp::Mov { src, to } => (OperationKind::Mov, stat(*src)?, target(to)?),
            EditOp::Del { src } => (OperationKind::Mov, stat(*src)?, aug.del),
            EditOp::Upd { value, tgt } => {
                let t = stat(*tgt)?;
                let from_upd = aug
                    .upd_children()
                    .iter()
                    .copied()
                    .filter(|&c| aug.tree.at(c).value.as_deref() == Some(value.as_str()));
                let from_tree = origin
                    .ids()
                    .filter(|&o| {
                        w.is_live(o.0) && w.nodes[o.0].value.as_deref() == Some(value.as_str())
                    })
                    .map(|o| aug.aug_id(o).unwrap());
                let s = from_upd
                    .chain(from_tree)
                    .find(|&s| admissible(OperationKind::Upd, s, t))
                    .ok_or_else(|| unrep(i, "no node carries the new value"))?;
                (OperationKind::Upd, s, t)
            }
            EditOp::Ins { tree, to } => {
                let t = target(to)?;
                let from_ins = aug
                    .ins_children()
                    .iter()
                    .copied()
                    .filter(|&c| &aug.tree.subtree(c) == tree);
                let from_tree = origin
                    .ids()
                    .skip(1)
                    .filter(|&o| w.is_live(o.0) && &w.subtree(o.0) == tree)
                    .map(|o| aug.aug_id(o).unwrap());
                let s = from_ins
                    .chain(from_tree)
                    .find(|&s| admissible(OperationKind::Ins, s, t))
                    .ok_or_else(|| unrep(i, "inserted subtree exists nowhere"))?;
                (OperationKind::Ins, s, t)
            }
        };
        if !admissible(kind, s, t) {
            return Err(unrep(i, "not an admissible path"));
        }
        out.push(static_path_op(&aug.tree, kind, s, t));
        apply_op(&mut w, op).map_err(|e| lift(i, e))?;
    }
    Ok(out)
}

fn context_ops(aug: &AugmentedAst, script: &EditScript) -> Result<Vec<PathOperation>, PathError> {
    let origin = &aug.origin;
    let mut w = WorkTree::from_ast(origin);
    let mut a = AugWork::new(aug);
    // plain id -> augmented working id
    let mut idmap: Vec<usize> = origin.ids().map(|o| aug.aug_id(o).unwrap().0).collect();
    let mut out = Vec::with_capacity(script.len());
    for (i, op) in script.ops.iter().enumerate() {
        // validate (and advance the plain tree) first
        apply_op(&mut w, op).map_err(|e| lift(i, e))?;
        let target = |to: &Anchor| -> Result<usize, PathError> {
            match *to {
                Anchor::After(u) => Ok(idmap[u.0]),
                Anchor::FirstChildOf(p) => Ok(a.w.nodes[idmap[p.0]].children[0]),
                Anchor::FirstRoot => Err(unrep(i, "replaces the root")),
            }
        };
        let path = |a: &AugWork, kind, s: usize, t: usize| {
            a.live_path_op(kind, s, t)
                .ok_or_else(|| unrep(i, "endpoints are in different trees"))
        };
        match op {
            EditOp::Mov { src, to } => {
                let (s, t) = (idmap[src.0], target(to)?);
                out.push(path(&a, OperationKind::Mov, s, t)?);
                a.w.move_to(NodeId(s), &Anchor::After(NodeId(t)))
                    .expect("validated on the plain tree");
            }
            EditOp::Del { src } => {
                let s = idmap[src.0];
                out.push(path(&a, OperationKind::Mov, s, a.del)?);
                a.w.delete(NodeId(s)).expect("validated on the plain tree");
            }
            EditOp::Upd { value, tgt } => {
                let t = idmap[tgt.0];
                let s = aug
                    .upd_children()
                    .iter()
                    .find(|&&c| aug.tree.at(c).value.as_deref() == Some(value.as_str()))
                    .ok_or_else(|| unrep(i, "value missing from UPD"))?
                    .0;
                out.push(path(&a, OperationKind::Upd, s, t)?);
                a.w.update(NodeId(t), value)
                    .expect("validated on the plain tree");
            }
            EditOp::Ins { tree, to } => {
                let t = target(to)?;
                let (padded, flags) = padded_with_flags(tree);
                let root = a.w.next_id();
                let mut roles = Vec::with_capacity(flags.len());
                for (k, is_placeholder) in flags.into_iter().enumerate() {
                    if is_placeholder {
                        roles.push(NodeRole::Placeholder);
                    } else {
                        // plain pre-order ids skip the placeholders
                        idmap.push(root + k);
                        roles.push(NodeRole::Inserted);
                    }
                }
                debug_assert_eq!(idmap.len(), w.next_id());
                let r = a
                    .insert_tree(&padded, roles, t)
                    .expect("validated on the plain tree");
                out.push(path(&a, OperationKind::Ins, aug.ins.0, r)?);
            }
        }
    }
    Ok(out)
}
