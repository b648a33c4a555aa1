// SPDX-License-Identifier: Apache-2.0

use super::{PathError, DEL_NODE, INS_NODE, PLACEHOLDER, UPD_NODE};
use crate::ast::{Ast, AstError, NodeId, Tree};
use crate::diff::apply::{apply_op, lift};
use crate::diff::work::WorkTree;
use crate::diff::{EditOp, EditScript};

/// The edit that happened around the fragment: the context tree before the
/// edit and the script that transformed it.
#[derive(Clone, Copy, Debug)]
pub struct ContextEdit<'a> {
    pub before: &'a Ast,
    pub script: &'a EditScript,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeRole {
    /// A node of the original tree, with its id there.
    Original(NodeId),
    Placeholder,
    DelHub,
    UpdHub,
    InsHub,
    /// A terminal under `UPD` carrying a value introduced by the context.
    UpdChild,
    /// Any node of a subtree under `INS` copied from a context insertion.
    InsChild,
    /// A node created while edits are applied.
    Inserted,
}

impl NodeRole {
    pub fn is_hub(self) -> bool {
        matches!(self, NodeRole::DelHub | NodeRole::UpdHub | NodeRole::InsHub)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedAst {
    pub tree: Ast,
    pub origin: Ast,
    roles: Vec<NodeRole>,
    orig_to_aug: Vec<NodeId>,
    placeholders: Vec<Option<NodeId>>,
    pub del: NodeId,
    pub upd: NodeId,
    pub ins: NodeId,
}

impl AugmentedAst {
    pub fn role(&self, id: NodeId) -> NodeRole {
        self.roles[id.0]
    }

    pub fn roles(&self) -> &[NodeRole] {
        &self.roles
    }

    /// Augmented id of an original node.
    pub fn aug_id(&self, original: NodeId) -> Option<NodeId> {
        self.orig_to_aug.get(original.0).copied()
    }

    pub fn original_id(&self, id: NodeId) -> Option<NodeId> {
        match self.roles.get(id.0) {
            Some(NodeRole::Original(o)) => Some(*o),
            _ => None,
        }
    }

    /// The Placeholder child of an original nonterminal.
    pub fn placeholder(&self, original: NodeId) -> Option<NodeId> {
        self.placeholders.get(original.0).copied().flatten()
    }

    pub fn upd_children(&self) -> &[NodeId] {
        self.tree.children(self.upd)
    }

    pub fn ins_children(&self) -> &[NodeId] {
        self.tree.children(self.ins)
    }

    /// Removes all augmentation, giving back the original tree.
    pub fn strip(&self) -> Ast {
        Ast::from_tree(&strip_tree(&self.tree, self.tree.root(), &|id| {
            self.roles[id.0]
        }))
        .expect("stripping keeps trees well formed")
    }
}

pub(crate) fn strip_tree(t: &Ast, id: NodeId, role: &dyn Fn(NodeId) -> NodeRole) -> Tree {
    let n = t.at(id);
    Tree {
        kind: n.kind.clone(),
        value: n.value.clone(),
        children: n
            .children
            .iter()
            .filter(|&&c| !matches!(role(c), NodeRole::Placeholder) && !role(c).is_hub())
            .map(|&c| strip_tree(t, c, role))
            .collect(),
    }
}

/// Adds a Placeholder in front of the children of every nonterminal. The
/// flags mark, in pre-order, which nodes of the result are Placeholders.
pub(crate) fn padded_with_flags(t: &Tree) -> (Tree, Vec<bool>) {
    fn go(t: &Tree, flags: &mut Vec<bool>) -> Tree {
        flags.push(false);
        if t.is_terminal() {
            return t.clone();
        }
        flags.push(true);
        let mut children = Vec::with_capacity(t.children.len() + 1);
        children.push(Tree::node(PLACEHOLDER, Vec::new()));
        children.extend(t.children.iter().map(|c| go(c, flags)));
        Tree::node(t.kind.clone(), children)
    }
    let mut flags = Vec::with_capacity(t.size() * 2);
    let tree = go(t, &mut flags);
    (tree, flags)
}

/// Values and subtrees the context edit introduced, in script order.
fn context_material(ctx: Option<ContextEdit<'_>>) -> Result<(Vec<Tree>, Vec<Tree>), PathError> {
    let mut upd: Vec<Tree> = Vec::new();
    let mut ins: Vec<Tree> = Vec::new();
    let Some(ctx) = ctx else {
        return Ok((upd, ins));
    };
    let mut w = WorkTree::from_ast(ctx.before);
    for (i, op) in ctx.script.ops.iter().enumerate() {
        match op {
            EditOp::Upd { value, tgt } => {
                let t = w.live(*tgt).map_err(|e| lift(i, e))?;
                if !upd.iter().any(|u| u.value.as_deref() == Some(value)) {
                    upd.push(Tree::leaf(w.nodes[t].kind.clone(), value.clone()));
                }
            }
            EditOp::Ins { tree, .. } if !ins.contains(tree) => ins.push(tree.clone()),
            _ => {}
        }
        apply_op(&mut w, op).map_err(|e| lift(i, e))?;
    }
    Ok((upd, ins))
}

/// Builds the augmented tree. With a context edit, `UPD` receives one child
/// per distinct updated value and `INS` one child per distinct inserted
/// subtree.
pub fn augment(tree: &Ast, context: Option<ContextEdit<'_>>) -> Result<AugmentedAst, PathError> {
    let (upd_children, ins_children) = context_material(context)?;
    augment_with(tree, upd_children, ins_children)
}

/// Builds the augmented tree from explicit `UPD` and `INS` children. Each
/// `UPD` child must be a terminal.
pub fn augment_with(
    tree: &Ast,
    upd_children: Vec<Tree>,
    ins_children: Vec<Tree>,
) -> Result<AugmentedAst, PathError> {
    if upd_children.iter().any(|t| !t.is_terminal()) {
        return Err(PathError::Tree(AstError::Malformed(
            "UPD children must be terminals".into(),
        )));
    }
    let mut roles = Vec::new();
    let mut orig_to_aug = vec![NodeId(0); tree.len()];
    let mut placeholders = vec![None; tree.len()];

    fn build(
        t: &Ast,
        id: NodeId,
        roles: &mut Vec<NodeRole>,
        orig_to_aug: &mut [NodeId],
        placeholders: &mut [Option<NodeId>],
    ) -> Tree {
        let n = t.at(id);
        orig_to_aug[id.0] = NodeId(roles.len());
        roles.push(NodeRole::Original(id));
        if n.value.is_some() {
            return Tree {
                kind: n.kind.clone(),
                value: n.value.clone(),
                children: Vec::new(),
            };
        }
        placeholders[id.0] = Some(NodeId(roles.len()));
        roles.push(NodeRole::Placeholder);
        let mut children = vec![Tree::node(PLACEHOLDER, Vec::new())];
        for &c in &n.children {
            children.push(build(t, c, roles, orig_to_aug, placeholders));
        }
        Tree::node(n.kind.clone(), children)
    }

    let mut root = build(
        tree,
        tree.root(),
        &mut roles,
        &mut orig_to_aug,
        &mut placeholders,
    );
    if root.is_terminal() {
        return Err(PathError::Tree(AstError::Malformed(
            "cannot augment a tree whose root is a terminal".into(),
        )));
    }
    let del = NodeId(roles.len());
    roles.push(NodeRole::DelHub);
    let upd = NodeId(roles.len());
    roles.push(NodeRole::UpdHub);
    roles.extend(std::iter::repeat_n(NodeRole::UpdChild, upd_children.len()));
    let ins = NodeId(roles.len());
    roles.push(NodeRole::InsHub);
    for t in &ins_children {
        roles.extend(std::iter::repeat_n(NodeRole::InsChild, t.size()));
    }
    root.children.push(Tree::node(DEL_NODE, Vec::new()));
    root.children.push(Tree::node(UPD_NODE, upd_children));
    root.children.push(Tree::node(INS_NODE, ins_children));
    let aug = Ast::from_tree(&root)?;
    debug_assert_eq!(aug.len(), roles.len());
    Ok(AugmentedAst {
        tree: aug,
        origin: tree.clone(),
        roles,
        orig_to_aug,
        placeholders,
        del,
        upd,
        ins,
    })
}

pub(crate) fn strip_tree_work(w: &WorkTree, id: usize, roles: &[NodeRole]) -> Tree {
    let n = &w.nodes[id];
    Tree {
        kind: n.kind.clone(),
        value: n.value.clone(),
        children: n
            .children
            .iter()
            .filter(|&&c| roles[c] != NodeRole::Placeholder && !roles[c].is_hub())
            .map(|&c| strip_tree_work(w, c, roles))
            .collect(),
    }
}
