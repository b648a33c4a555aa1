// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::AstError;

/// Identifier of a node within one [`Ast`]. Ids are pre-order positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Owned recursive form of a tree. Handy for building trees by hand and for
/// carrying subtrees around (e.g. inside insert operations).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    pub kind: String,
    pub value: Option<String>,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(kind: impl Into<String>, value: impl Into<String>) -> Self {
        Tree {
            kind: kind.into(),
            value: Some(value.into()),
            children: Vec::new(),
        }
    }

    pub fn node(kind: impl Into<String>, children: Vec<Tree>) -> Self {
        Tree {
            kind: kind.into(),
            value: None,
            children,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.value.is_some()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::sexpr::write_tree(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AstNode {
    pub id: NodeId,
    pub kind: String,
    /// Token value; present exactly for terminals.
    pub value: Option<String>,
    /// Position among the parent's children; 0 for the root.
    pub child_index: usize,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

impl AstNode {
    pub fn is_terminal(&self) -> bool {
        self.value.is_some()
    }
}

/// An abstract syntax tree stored as a pre-order arena.
///
/// The layout is canonical: node `i` is the `i`-th node of a pre-order walk,
/// and the root is node 0. Two trees therefore compare equal exactly when
/// they are isomorphic (same kinds, values and child order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ast {
    nodes: Vec<AstNode>,
    sizes: Vec<usize>,
    depths: Vec<usize>,
}

impl Ast {
    pub fn from_tree(tree: &Tree) -> Result<Self, AstError> {
        let mut ast = Ast {
            nodes: Vec::with_capacity(tree.size()),
            sizes: Vec::new(),
            depths: Vec::new(),
        };
        ast.push(tree, None, 0, 0)?;
        Ok(ast)
    }

    fn push(
        &mut self,
        tree: &Tree,
        parent: Option<NodeId>,
        child_index: usize,
        depth: usize,
    ) -> Result<NodeId, AstError> {
        if tree.value.is_some() && !tree.children.is_empty() {
            return Err(AstError::Malformed(format!(
                "terminal `{}` has children",
                tree.kind
            )));
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(AstNode {
            id,
            kind: tree.kind.clone(),
            value: tree.value.clone(),
            child_index,
            parent,
            children: Vec::with_capacity(tree.children.len()),
        });
        self.sizes.push(1);
        self.depths.push(depth);
        for (i, child) in tree.children.iter().enumerate() {
            let cid = self.push(child, Some(id), i, depth + 1)?;
            self.nodes[id.0].children.push(cid);
        }
        self.sizes[id.0] = self.nodes.len() - id.0;
        Ok(id)
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: NodeId) -> Option<&AstNode> {
        self.nodes.get(id.0)
    }

    pub fn node(&self, id: NodeId) -> Result<&AstNode, AstError> {
        self.get(id).ok_or(AstError::UnknownNode(id))
    }

    /// Panicking accessor for ids known to be valid.
    pub fn at(&self, id: NodeId) -> &AstNode {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[AstNode] {
        &self.nodes
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.0].children
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depths[id.0]
    }

    /// Number of nodes in the subtree rooted at `id`.
    pub fn subtree_size(&self, id: NodeId) -> Result<usize, AstError> {
        self.sizes
            .get(id.0)
            .copied()
            .ok_or(AstError::UnknownNode(id))
    }

    /// Pre-order ids of the subtree rooted at `id` (including `id`).
    pub fn subtree_ids(&self, id: NodeId) -> impl Iterator<Item = NodeId> {
        (id.0..id.0 + self.sizes[id.0]).map(NodeId)
    }

    /// True when `node` lies in the subtree rooted at `ancestor` (inclusive).
    pub fn is_in_subtree(&self, node: NodeId, ancestor: NodeId) -> bool {
        node.0 >= ancestor.0 && node.0 < ancestor.0 + self.sizes[ancestor.0]
    }

    /// Post-order traversal of all ids.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        fn walk(ast: &Ast, id: NodeId, out: &mut Vec<NodeId>) {
            for &c in ast.children(id) {
                walk(ast, c, out);
            }
            out.push(id);
        }
        if !self.is_empty() {
            walk(self, self.root(), &mut out);
        }
        out
    }

    /// Breadth-first order of all ids.
    pub fn bfs(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        if self.is_empty() {
            return out;
        }
        out.push(self.root());
        let mut i = 0;
        while i < out.len() {
            let id = out[i];
            out.extend_from_slice(self.children(id));
            i += 1;
        }
        out
    }

    /// Height of the subtree rooted at `id`; leaves have height 1.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![1; self.len()];
        for id in self.ids().rev() {
            if let Some(p) = self.parent(id) {
                h[p.0] = h[p.0].max(h[id.0] + 1);
            }
        }
        h
    }

    pub fn subtree(&self, id: NodeId) -> Tree {
        let n = &self.nodes[id.0];
        Tree {
            kind: n.kind.clone(),
            value: n.value.clone(),
            children: n.children.iter().map(|&c| self.subtree(c)).collect(),
        }
    }

    pub fn to_tree(&self) -> Tree {
        self.subtree(self.root())
    }

    /// Structural equality of two subtrees, possibly from different trees.
    pub fn isomorphic(&self, a: NodeId, other: &Ast, b: NodeId) -> bool {
        let size = self.sizes[a.0];
        if size != other.sizes[b.0] {
            return false;
        }
        (0..size).all(|k| {
            let x = &self.nodes[a.0 + k];
            let y = &other.nodes[b.0 + k];
            x.kind == y.kind
                && x.value == y.value
                && x.children.len() == y.children.len()
                && (k == 0 || x.child_index == y.child_index)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Ast {
        // 7 nodes: r(a(x y) b(z) w)
        Ast::from_tree(&Tree::node(
            "r",
            vec![
                Tree::node("a", vec![Tree::leaf("t", "x"), Tree::leaf("t", "y")]),
                Tree::node("b", vec![Tree::leaf("t", "z")]),
                Tree::leaf("t", "w"),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn preorder_layout_and_child_indices() {
        let ast = sample();
        assert_eq!(ast.len(), 7);
        let kinds: Vec<_> = ast.nodes().iter().map(|n| n.kind.as_str()).collect();
        assert_eq!(kinds, ["r", "a", "t", "t", "b", "t", "t"]);
        for n in ast.nodes() {
            if let Some(p) = n.parent {
                assert_eq!(ast.children(p)[n.child_index], n.id);
            } else {
                assert_eq!(n.child_index, 0);
            }
        }
    }

    #[test]
    fn subtree_sizes() {
        let ast = sample();
        assert_eq!(ast.subtree_size(NodeId(0)).unwrap(), 7);
        assert_eq!(ast.subtree_size(NodeId(2)).unwrap(), 1);
        assert_eq!(ast.subtree_size(NodeId(1)).unwrap(), 3);
        assert!(matches!(
            ast.subtree_size(NodeId(99)),
            Err(AstError::UnknownNode(NodeId(99)))
        ));
    }

    #[test]
    fn terminal_with_children_is_rejected() {
        let bad = Tree {
            kind: "t".into(),
            value: Some("v".into()),
            children: vec![Tree::leaf("t", "x")],
        };
        assert!(Ast::from_tree(&bad).is_err());
    }

    #[test]
    fn isomorphism_ignores_position() {
        let a = sample();
        let b = Ast::from_tree(&Tree::node("q", vec![a.subtree(NodeId(4))])).unwrap();
        assert!(a.isomorphic(NodeId(4), &b, NodeId(1)));
        assert!(!a.isomorphic(NodeId(1), &b, NodeId(1)));
    }

    #[test]
    fn orders() {
        let ast = sample();
        let post: Vec<usize> = ast.post_order().iter().map(|i| i.0).collect();
        assert_eq!(post, [2, 3, 1, 5, 4, 6, 0]);
        let bfs: Vec<usize> = ast.bfs().iter().map(|i| i.0).collect();
        assert_eq!(bfs, [0, 1, 4, 6, 2, 3, 5]);
        assert_eq!(ast.heights()[0], 3);
    }
}
