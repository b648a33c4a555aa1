// SPDX-License-Identifier: Apache-2.0

//! Edit-script generation from a mapping, after Chawathe et al.: a
//! breadth-first pass over the target tree emits updates, inserts and moves,
//! aligns children with a longest common subsequence, and finally deletes
//! what is left unmapped.

use super::work::WorkTree;
use super::{lcs, Anchor, EditOp, EditScript, Mapping};
use crate::ast::{Ast, NodeId, Tree};

struct Gen<'a> {
    b: &'a Ast,
    w: WorkTree,
    b2w: Vec<Option<usize>>,
    w2b: Vec<Option<usize>>,
    in_order_b: Vec<bool>,
    in_order_w: Vec<bool>,
    ops: Vec<EditOp>,
}

impl Gen<'_> {
    fn alloc_w(&mut self, upto: usize) {
        self.w2b.resize(upto, None);
        self.in_order_w.resize(upto, false);
    }

    fn find_pos(&self, x: NodeId) -> Anchor {
        let Some(y) = self.b.parent(x) else {
            return Anchor::FirstRoot;
        };
        let sibs = self.b.children(y);
        let i = self.b.at(x).child_index;
        for &v in sibs[..i].iter().rev() {
            if self.in_order_b[v.0] {
                return Anchor::After(NodeId(self.b2w[v.0].expect("in-order nodes are mapped")));
            }
        }
        Anchor::FirstChildOf(NodeId(self.b2w[y.0].expect("parents are visited first")))
    }

    fn mov(&mut self, wx: usize, x: NodeId) {
        let to = self.find_pos(x);
        self.w
            .move_to(NodeId(wx), &to)
            .expect("generated move is valid");
        self.ops.push(EditOp::Mov {
            src: NodeId(wx),
            to,
        });
        self.in_order_b[x.0] = true;
        self.in_order_w[wx] = true;
    }

    fn align_children(&mut self, wx: usize, x: NodeId) {
        let b = self.b;
        let wc = self.w.nodes[wx].children.clone();
        for &c in &wc {
            self.in_order_w[c] = false;
        }
        for &c in b.children(x) {
            self.in_order_b[c.0] = false;
        }
        let s1: Vec<usize> = wc
            .iter()
            .copied()
            .filter(|&c| self.w2b[c].is_some_and(|bc| b.parent(NodeId(bc)) == Some(x)))
            .collect();
        let s2: Vec<NodeId> = b
            .children(x)
            .iter()
            .copied()
            .filter(|&c| self.b2w[c.0].is_some_and(|p| self.w.nodes[p].parent == Some(wx)))
            .collect();
        for (i, j) in lcs(&s1, &s2, |&p, &q| self.w2b[p] == Some(q.0)) {
            self.in_order_w[s1[i]] = true;
            self.in_order_b[s2[j].0] = true;
        }
        for q in s2 {
            if !self.in_order_b[q.0] {
                let p = self.b2w[q.0].unwrap();
                self.mov(p, q);
            }
        }
    }
}

/// Produces a script that turns `a` into a tree isomorphic to `b`, using
/// `m` to decide which nodes are kept.
pub fn generate_script(a: &Ast, b: &Ast, m: &Mapping) -> EditScript {
    let mut g = Gen {
        b,
        w: WorkTree::from_ast(a),
        b2w: b.ids().map(|y| m.partner_of_b(y).map(|x| x.0)).collect(),
        w2b: a.ids().map(|x| m.partner_of_a(x).map(|y| y.0)).collect(),
        in_order_b: vec![false; b.len()],
        in_order_w: vec![false; a.len()],
        ops: Vec::new(),
    };
    let mut has_mapped = vec![false; b.len()];
    for y in b.ids().rev() {
        has_mapped[y.0] = g.b2w[y.0].is_some() || b.children(y).iter().any(|c| has_mapped[c.0]);
    }

    for x in b.bfs() {
        let z = b
            .parent(x)
            .map(|y| g.b2w[y.0].expect("parents are visited first"));
        let wx = match g.b2w[x.0] {
            None => {
                let to = g.find_pos(x);
                let whole = !has_mapped[x.0];
                let tree = if whole {
                    b.subtree(x)
                } else {
                    let n = b.at(x);
                    Tree {
                        kind: n.kind.clone(),
                        value: n.value.clone(),
                        children: Vec::new(),
                    }
                };
                let root = g.w.insert(&tree, &to).expect("generated insert is valid");
                g.alloc_w(g.w.next_id());
                let ids: Vec<NodeId> = if whole {
                    b.subtree_ids(x).collect()
                } else {
                    vec![x]
                };
                for (k, bid) in ids.into_iter().enumerate() {
                    g.b2w[bid.0] = Some(root + k);
                    g.w2b[root + k] = Some(bid.0);
                    g.in_order_b[bid.0] = true;
                    g.in_order_w[root + k] = true;
                }
                g.ops.push(EditOp::Ins { tree, to });
                root
            }
            Some(wx) => {
                if g.w.nodes[wx].value != b.at(x).value {
                    let value = b
                        .at(x)
                        .value
                        .clone()
                        .expect("mapped nodes agree on terminality");
                    g.w.update(NodeId(wx), &value)
                        .expect("update target is a terminal");
                    g.ops.push(EditOp::Upd {
                        value,
                        tgt: NodeId(wx),
                    });
                }
                if g.w.nodes[wx].parent != z {
                    g.mov(wx, x);
                }
                wx
            }
        };
        if !b.children(x).is_empty() {
            g.align_children(wx, x);
        }
    }

    let order = g.w.post_order();
    for id in order {
        let unmapped = g.w2b[id].is_none();
        let parent_kept = g.w.nodes[id].parent.is_none_or(|p| g.w2b[p].is_some());
        if unmapped && parent_kept && g.w.is_live(id) {
            g.w.delete(NodeId(id)).expect("delete target is live");
            g.ops.push(EditOp::Del { src: NodeId(id) });
        }
    }
    EditScript::new(g.ops)
}
