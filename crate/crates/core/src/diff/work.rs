// SPDX-License-Identifier: Apache-2.0

//! A mutable tree with stable node identities, shared by the script
//! interpreter, the script generator and the path-operation interpreter.

use super::Anchor;
use crate::ast::{Ast, NodeId, Tree};

#[derive(Clone, Debug)]
pub(crate) struct WorkNode {
    pub kind: String,
    pub value: Option<String>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WorkError {
    Dangling(NodeId),
    OwnSubtree(NodeId),
    ChildOfTerminal(NodeId),
    NotTerminal(NodeId),
}

/// Top-level trees hang off an implicit virtual root (`roots`).
#[derive(Clone, Debug)]
pub(crate) struct WorkTree {
    pub nodes: Vec<WorkNode>,
    pub roots: Vec<usize>,
}

impl WorkTree {
    pub fn from_ast(ast: &Ast) -> Self {
        let nodes = ast
            .nodes()
            .iter()
            .map(|n| WorkNode {
                kind: n.kind.clone(),
                value: n.value.clone(),
                parent: n.parent.map(|p| p.0),
                children: n.children.iter().map(|c| c.0).collect(),
                alive: true,
            })
            .collect();
        let roots = if ast.is_empty() { vec![] } else { vec![0] };
        WorkTree { nodes, roots }
    }

    /// The id the next inserted node will receive.
    pub fn next_id(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_live(&self, id: usize) -> bool {
        self.nodes.get(id).is_some_and(|n| n.alive)
    }

    pub fn live(&self, id: NodeId) -> Result<usize, WorkError> {
        if self.is_live(id.0) {
            Ok(id.0)
        } else {
            Err(WorkError::Dangling(id))
        }
    }

    pub fn siblings(&self, parent: Option<usize>) -> &[usize] {
        match parent {
            Some(p) => &self.nodes[p].children,
            None => &self.roots,
        }
    }

    fn siblings_mut(&mut self, parent: Option<usize>) -> &mut Vec<usize> {
        match parent {
            Some(p) => &mut self.nodes[p].children,
            None => &mut self.roots,
        }
    }

    pub fn position(&self, id: usize) -> usize {
        self.siblings(self.nodes[id].parent)
            .iter()
            .position(|&c| c == id)
            .expect("live node is listed by its parent")
    }

    /// True when `node` lies in the subtree of `ancestor` (inclusive).
    pub fn is_in_subtree(&self, node: usize, ancestor: usize) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    /// Resolves an anchor to (parent, index) in the current tree.
    pub fn resolve(&self, anchor: &Anchor) -> Result<(Option<usize>, usize), WorkError> {
        match *anchor {
            Anchor::After(u) => {
                let u = self.live(u)?;
                Ok((self.nodes[u].parent, self.position(u) + 1))
            }
            Anchor::FirstChildOf(p) => {
                let pi = self.live(p)?;
                if self.nodes[pi].value.is_some() {
                    return Err(WorkError::ChildOfTerminal(p));
                }
                Ok((Some(pi), 0))
            }
            Anchor::FirstRoot => Ok((None, 0)),
        }
    }

    fn anchor_node(anchor: &Anchor) -> Option<usize> {
        match *anchor {
            Anchor::After(u) | Anchor::FirstChildOf(u) => Some(u.0),
            Anchor::FirstRoot => None,
        }
    }

    fn attach(&mut self, id: usize, parent: Option<usize>, index: usize) {
        self.nodes[id].parent = parent;
        self.siblings_mut(parent).insert(index, id);
    }

    fn detach(&mut self, id: usize) {
        let parent = self.nodes[id].parent;
        let pos = self.position(id);
        self.siblings_mut(parent).remove(pos);
        self.nodes[id].parent = None;
    }

    /// Inserts a copy of `tree`; returns the id of its root. Fresh ids are
    /// allocated in pre-order.
    pub fn insert(&mut self, tree: &Tree, anchor: &Anchor) -> Result<usize, WorkError> {
        let (parent, index) = self.resolve(anchor)?;
        let root = self.alloc(tree, parent);
        self.siblings_mut(parent).insert(index, root);
        Ok(root)
    }

    fn alloc(&mut self, tree: &Tree, parent: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(WorkNode {
            kind: tree.kind.clone(),
            value: tree.value.clone(),
            parent,
            children: Vec::with_capacity(tree.children.len()),
            alive: true,
        });
        for c in &tree.children {
            let cid = self.alloc(c, Some(id));
            self.nodes[id].children.push(cid);
        }
        id
    }

    pub fn move_to(&mut self, src: NodeId, anchor: &Anchor) -> Result<(), WorkError> {
        let s = self.live(src)?;
        if let Some(u) = Self::anchor_node(anchor) {
            self.live(NodeId(u))?;
            if self.is_in_subtree(u, s) {
                return Err(WorkError::OwnSubtree(src));
            }
        }
        // validate before mutating
        self.resolve(anchor)?;
        self.detach(s);
        let (parent, index) = self.resolve(anchor)?;
        self.attach(s, parent, index);
        Ok(())
    }

    pub fn delete(&mut self, src: NodeId) -> Result<(), WorkError> {
        let s = self.live(src)?;
        self.detach(s);
        for id in self.preorder_from(s) {
            self.nodes[id].alive = false;
        }
        Ok(())
    }

    pub fn update(&mut self, tgt: NodeId, value: &str) -> Result<(), WorkError> {
        let t = self.live(tgt)?;
        match &mut self.nodes[t].value {
            Some(v) => {
                *v = value.to_string();
                Ok(())
            }
            None => Err(WorkError::NotTerminal(tgt)),
        }
    }

    pub fn preorder_from(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    /// Post-order over every top-level tree, left to right.
    pub fn post_order(&self) -> Vec<usize> {
        fn walk(w: &WorkTree, id: usize, out: &mut Vec<usize>) {
            for &c in &w.nodes[id].children {
                walk(w, c, out);
            }
            out.push(id);
        }
        let mut out = Vec::new();
        for &r in &self.roots {
            walk(self, r, &mut out);
        }
        out
    }

    pub fn subtree(&self, id: usize) -> Tree {
        let n = &self.nodes[id];
        Tree {
            kind: n.kind.clone(),
            value: n.value.clone(),
            children: n.children.iter().map(|&c| self.subtree(c)).collect(),
        }
    }
}

impl WorkTree {
    /// Child position used in paths: position among siblings, 0 for roots.
    pub fn child_index(&self, id: usize) -> usize {
        match self.nodes[id].parent {
            Some(_) => self.position(id),
            None => 0,
        }
    }

    /// The unique path from `a` to `b` through their lowest common ancestor.
    /// None if they sit in different top-level trees.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let chain = |mut n: usize| {
            let mut v = vec![n];
            while let Some(p) = self.nodes[n].parent {
                v.push(p);
                n = p;
            }
            v
        };
        let (ca, cb) = (chain(a), chain(b));
        if ca.last() != cb.last() {
            return None;
        }
        let (mut i, mut j) = (ca.len(), cb.len());
        while i > 0 && j > 0 && ca[i - 1] == cb[j - 1] {
            i -= 1;
            j -= 1;
        }
        let mut out: Vec<usize> = ca[..=i].to_vec();
        out.extend(cb[..j].iter().rev());
        Some(out)
    }
}
