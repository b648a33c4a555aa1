// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use super::{AugmentedAst, NodeRole, OperationKind, PathNode, PathOperation};
use crate::ast::{path_between, Ast, NodeId};

/// A candidate edit in the static augmented tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    pub source: NodeId,
    pub target: NodeId,
    pub kind: OperationKind,
}

impl Candidate {
    pub fn path_op(&self, aug: &AugmentedAst) -> PathOperation {
        static_path_op(&aug.tree, self.kind, self.source, self.target)
    }
}

pub(crate) fn static_path_op(
    t: &Ast,
    kind: OperationKind,
    s: NodeId,
    tgt: NodeId,
) -> PathOperation {
    let p = path_between(t, s, tgt).expect("endpoints belong to the tree");
    PathOperation {
        kind,
        path: p
            .nodes
            .iter()
            .map(|&id| {
                let n = t.at(id);
                PathNode {
                    id,
                    kind: n.kind.clone(),
                    child_index: n.child_index,
                    value: n.value.clone(),
                }
            })
            .collect(),
    }
}

/// The rule shared by enumeration and script conversion.
///
/// * MOV: the source is a non-root node of the original tree; the target is
///   an original node, a Placeholder or `DEL`, lies outside the source
///   subtree, is not the root, and is not the source's current left
///   neighbour (which would make the move a no-op).
/// * INS: the source is a non-root original node or the root of an `INS`
///   child; targets as for MOV except `DEL`.
/// * UPD: the source is an original terminal or an `UPD` child, the target
///   an original terminal, and their values differ.
pub fn candidate_admissible(aug: &AugmentedAst, kind: OperationKind, s: NodeId, t: NodeId) -> bool {
    let tree = &aug.tree;
    if s.0 >= tree.len() || t.0 >= tree.len() {
        return false;
    }
    let root = tree.root();
    let original = |n: NodeId| matches!(aug.role(n), NodeRole::Original(_));
    let terminal = |n: NodeId| tree.at(n).value.is_some();
    match kind {
        OperationKind::Mov => {
            original(s)
                && s != root
                && t != root
                && matches!(
                    aug.role(t),
                    NodeRole::Original(_) | NodeRole::Placeholder | NodeRole::DelHub
                )
                && !tree.is_in_subtree(t, s)
                && left_neighbour(tree, s) != Some(t)
        }
        OperationKind::Ins => {
            let source_ok = (original(s) && s != root)
                || (aug.role(s) == NodeRole::InsChild && tree.parent(s) == Some(aug.ins));
            source_ok
                && t != root
                && matches!(aug.role(t), NodeRole::Original(_) | NodeRole::Placeholder)
                && !tree.is_in_subtree(t, s)
        }
        OperationKind::Upd => {
            ((original(s) && terminal(s)) || aug.role(s) == NodeRole::UpdChild)
                && original(t)
                && terminal(t)
                && tree.at(s).value != tree.at(t).value
        }
    }
}

fn left_neighbour(t: &Ast, n: NodeId) -> Option<NodeId> {
    let p = t.parent(n)?;
    let i = t.at(n).child_index;
    (i > 0).then(|| t.children(p)[i - 1])
}

/// Every admissible candidate, ordered by source id, then target id, then
/// kind (MOV, UPD, INS). The position in the list is the candidate's index.
pub fn enumerate_candidates(aug: &AugmentedAst) -> Vec<Candidate> {
    let n = aug.tree.len();
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            for kind in OperationKind::ALL {
                if candidate_admissible(aug, kind, NodeId(s), NodeId(t)) {
                    out.push(Candidate {
                        source: NodeId(s),
                        target: NodeId(t),
                        kind,
                    });
                }
            }
        }
    }
    out
}

/// Numbered dump, one candidate per line.
pub fn format_candidates(aug: &AugmentedAst, cands: &[Candidate]) -> String {
    let mut s = String::new();
    for (i, c) in cands.iter().enumerate() {
        let _ = writeln!(s, "{i}\t{}", c.path_op(aug));
    }
    s
}
