// SPDX-License-Identifier: Apache-2.0

use super::{Ast, AstError, NodeId};

/// A sequence of nodes where each consecutive pair is a parent/child pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AstPath {
    pub nodes: Vec<NodeId>,
}

impl AstPath {
    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths are never empty")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Checks the parent/child condition for every consecutive pair and that
    /// no node repeats.
    pub fn is_valid_in(&self, ast: &Ast) -> bool {
        if self.nodes.is_empty() || self.nodes.iter().any(|&n| ast.get(n).is_none()) {
            return false;
        }
        let linked = self
            .nodes
            .windows(2)
            .all(|w| ast.parent(w[0]) == Some(w[1]) || ast.parent(w[1]) == Some(w[0]));
        let mut seen = self.nodes.clone();
        seen.sort();
        seen.dedup();
        linked && seen.len() == self.nodes.len()
    }
}

/// The unique simple path from `a` up to the lowest common ancestor and down
/// to `b`.
pub fn path_between(ast: &Ast, a: NodeId, b: NodeId) -> Result<AstPath, AstError> {
    ast.node(a)?;
    ast.node(b)?;
    let mut up = vec![a];
    let mut down = vec![b];
    let (mut x, mut y) = (a, b);
    while ast.depth(x) > ast.depth(y) {
        x = ast.parent(x).expect("deeper node has a parent");
        up.push(x);
    }
    while ast.depth(y) > ast.depth(x) {
        y = ast.parent(y).expect("deeper node has a parent");
        down.push(y);
    }
    while x != y {
        x = ast
            .parent(x)
            .expect("distinct nodes at equal depth are not roots");
        y = ast
            .parent(y)
            .expect("distinct nodes at equal depth are not roots");
        up.push(x);
        down.push(y);
    }
    // `x == y` is the LCA, present at the end of both halves.
    down.pop();
    up.extend(down.into_iter().rev());
    Ok(AstPath { nodes: up })
}
