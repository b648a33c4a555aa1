// SPDX-License-Identifier: Apache-2.0

use crate::ast::{Ast, NodeId};

/// A partial one-to-one correspondence between the nodes of two trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mapping {
    a_to_b: Vec<Option<NodeId>>,
    b_to_a: Vec<Option<NodeId>>,
}

impl Mapping {
    pub fn new(a_len: usize, b_len: usize) -> Self {
        Mapping {
            a_to_b: vec![None; a_len],
            b_to_a: vec![None; b_len],
        }
    }

    pub fn for_trees(a: &Ast, b: &Ast) -> Self {
        Mapping::new(a.len(), b.len())
    }

    /// Adds the pair; returns false (and leaves the mapping unchanged) if
    /// either side is already mapped.
    pub fn insert(&mut self, a: NodeId, b: NodeId) -> bool {
        if self.a_to_b[a.0].is_some() || self.b_to_a[b.0].is_some() {
            return false;
        }
        self.a_to_b[a.0] = Some(b);
        self.b_to_a[b.0] = Some(a);
        true
    }

    pub fn partner_of_a(&self, a: NodeId) -> Option<NodeId> {
        self.a_to_b.get(a.0).copied().flatten()
    }

    pub fn partner_of_b(&self, b: NodeId) -> Option<NodeId> {
        self.b_to_a.get(b.0).copied().flatten()
    }

    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        self.partner_of_a(a) == Some(b)
    }

    pub fn len(&self) -> usize {
        self.a_to_b.iter().filter(|x| x.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pairs ordered by the `a` side.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.a_to_b
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.map(|b| (NodeId(i), b)))
    }

    pub fn is_superset_of(&self, other: &Mapping) -> bool {
        other.pairs().all(|(a, b)| self.contains(a, b))
    }

    /// Every pair joins nodes of the same kind.
    pub fn respects_kinds(&self, a: &Ast, b: &Ast) -> bool {
        self.pairs().all(|(x, y)| a.at(x).kind == b.at(y).kind)
    }
}
