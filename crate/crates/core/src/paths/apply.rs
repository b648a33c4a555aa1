// SPDX-License-Identifier: Apache-2.0

use super::augment::{strip_tree_work, AugmentedAst, NodeRole};
use super::{OperationKind, PathError, PathNode, PathOperation};
use crate::ast::{Ast, NodeId};
use crate::diff::work::{WorkError, WorkTree};
use crate::diff::Anchor;

/// An evolving augmented tree; roles follow copied nodes.
pub(crate) struct AugWork {
    pub w: WorkTree,
    pub roles: Vec<NodeRole>,
    pub del: usize,
}

impl AugWork {
    pub fn new(aug: &AugmentedAst) -> Self {
        AugWork {
            w: WorkTree::from_ast(&aug.tree),
            roles: aug.roles().to_vec(),
            del: aug.del.0,
        }
    }

    pub fn under_hub(&self, id: usize) -> bool {
        let mut cur = Some(id);
        while let Some(c) = cur {
            if self.roles[c].is_hub() {
                return true;
            }
            cur = self.w.nodes[c].parent;
        }
        false
    }

    pub fn is_root(&self, id: usize) -> bool {
        self.w.nodes[id].parent.is_none()
    }

    /// Copies the live subtree at `src` to just after `after`; returns the
    /// root of the copy.
    pub fn insert_copy(&mut self, src: usize, after: usize) -> Result<usize, WorkError> {
        let tree = self.w.subtree(src);
        let roles: Vec<NodeRole> = self
            .w
            .preorder_from(src)
            .iter()
            .map(|&i| self.roles[i])
            .collect();
        let root = self.w.insert(&tree, &Anchor::After(NodeId(after)))?;
        self.roles.extend(roles);
        Ok(root)
    }

    pub fn insert_tree(
        &mut self,
        tree: &crate::ast::Tree,
        roles: impl IntoIterator<Item = NodeRole>,
        after: usize,
    ) -> Result<usize, WorkError> {
        let root = self.w.insert(tree, &Anchor::After(NodeId(after)))?;
        self.roles.extend(roles);
        debug_assert_eq!(self.roles.len(), self.w.next_id());
        Ok(root)
    }

    pub fn live_path_op(&self, kind: OperationKind, s: usize, t: usize) -> Option<PathOperation> {
        let ids = self.w.path(s, t)?;
        Some(PathOperation {
            kind,
            path: ids
                .into_iter()
                .map(|id| {
                    let n = &self.w.nodes[id];
                    PathNode {
                        id: NodeId(id),
                        kind: n.kind.clone(),
                        child_index: self.w.child_index(id),
                        value: n.value.clone(),
                    }
                })
                .collect(),
        })
    }

    pub fn strip(&self) -> Result<Ast, PathError> {
        let root = self.w.roots[0];
        Ok(Ast::from_tree(&strip_tree_work(
            &self.w,
            root,
            &self.roles,
        ))?)
    }
}

/// Executes path operations against the augmented tree and returns the
/// edited tree with all augmentation removed. Endpoints are tracked by node
/// identity: an op whose endpoint was deleted by an earlier op fails.
pub fn apply_path_ops(aug: &AugmentedAst, ops: &[PathOperation]) -> Result<Ast, PathError> {
    let mut a = AugWork::new(aug);
    for (i, op) in ops.iter().enumerate() {
        let (s, t) = (op.source(), op.target());
        for n in [s, t] {
            if !a.w.is_live(n.0) {
                return Err(PathError::Stale { op: i, node: n });
            }
        }
        let invalid = |node: NodeId| PathError::InvalidEndpoint {
            op: i,
            node,
            kind: op.kind,
        };
        let lift = |e: WorkError| match e {
            WorkError::OwnSubtree(node) => PathError::MoveIntoOwnSubtree { op: i, node },
            WorkError::NotTerminal(node) => PathError::UpdateNonterminal { op: i, node },
            WorkError::Dangling(node) => PathError::Stale { op: i, node },
            WorkError::ChildOfTerminal(node) => invalid(node),
        };
        let (si, ti) = (s.0, t.0);
        let bad_target = a.is_root(ti) || (a.under_hub(ti) && ti != a.del);
        match op.kind {
            OperationKind::Mov => {
                if a.is_root(si) || a.under_hub(si) || a.roles[si] == NodeRole::Placeholder {
                    return Err(invalid(s));
                }
                if ti == a.del {
                    a.w.delete(s).map_err(lift)?;
                } else if bad_target {
                    return Err(invalid(t));
                } else {
                    a.w.move_to(s, &Anchor::After(t)).map_err(lift)?;
                }
            }
            OperationKind::Ins => {
                let from_ins = a.roles[si] == NodeRole::InsChild;
                if a.is_root(si)
                    || a.roles[si] == NodeRole::Placeholder
                    || (a.under_hub(si) && !from_ins)
                {
                    return Err(invalid(s));
                }
                if bad_target || ti == a.del {
                    return Err(invalid(t));
                }
                if a.w.is_in_subtree(ti, si) {
                    return Err(PathError::MoveIntoOwnSubtree { op: i, node: s });
                }
                a.insert_copy(si, ti).map_err(lift)?;
            }
            OperationKind::Upd => {
                let Some(v) = a.w.nodes[si].value.clone() else {
                    return Err(PathError::UpdateNonterminal { op: i, node: s });
                };
                if a.under_hub(ti) {
                    return Err(invalid(t));
                }
                a.w.update(t, &v).map_err(lift)?;
            }
        }
    }
    a.strip()
}
