// SPDX-License-Identifier: Apache-2.0

//! The three mapping phases.

use std::collections::{HashMap, VecDeque};

use super::{lcs, Mapping};
use crate::ast::{Ast, NodeId};

/// Minimum share of mapped descendants for a container match.
pub const CONTAINER_THRESHOLD: f64 = 0.5;

/// Isomorphism classes shared across both trees: two subtrees get the same
/// class exactly when they are isomorphic.
fn iso_classes(a: &Ast, b: &Ast) -> (Vec<usize>, Vec<usize>) {
    let mut table: HashMap<(String, Option<String>, Vec<usize>), usize> = HashMap::new();
    let mut classify = |t: &Ast| {
        let mut cls = vec![0; t.len()];
        for id in t.ids().rev() {
            let n = t.at(id);
            let key = (
                n.kind.clone(),
                n.value.clone(),
                n.children.iter().map(|c| cls[c.0]).collect(),
            );
            let next = table.len();
            cls[id.0] = *table.entry(key).or_insert(next);
        }
        cls
    };
    let ca = classify(a);
    let cb = classify(b);
    (ca, cb)
}

/// Nodes may be paired when they share a kind and are both terminals or
/// both nonterminals.
fn compatible(a: &Ast, x: NodeId, b: &Ast, y: NodeId) -> bool {
    let (p, q) = (a.at(x), b.at(y));
    p.kind == q.kind && p.value.is_some() == q.value.is_some()
}

fn map_subtree(m: &mut Mapping, a: &Ast, x: NodeId, y: NodeId) {
    let size = a.subtree_size(x).expect("valid id");
    for k in 0..size {
        m.insert(NodeId(x.0 + k), NodeId(y.0 + k));
    }
}

/// Phase one: greedily maps the largest isomorphic subtrees, descending
/// from the roots one height level at a time. When a subtree has several
/// isomorphic partners, pairs whose parents have the same kind and whose
/// child positions agree are preferred, then pairs at similar relative
/// positions.
pub fn anchors_topdown(a: &Ast, b: &Ast) -> Mapping {
    let mut m = Mapping::for_trees(a, b);
    if a.is_empty() || b.is_empty() {
        return m;
    }
    let (ca, cb) = iso_classes(a, b);
    let (ha, hb) = (a.heights(), b.heights());
    let mut la = vec![a.root()];
    let mut lb = vec![b.root()];

    fn open(list: &mut Vec<NodeId>, heights: &[usize], h: usize) -> Vec<NodeId> {
        let mut taken: Vec<NodeId> = list.iter().copied().filter(|x| heights[x.0] == h).collect();
        list.retain(|x| heights[x.0] != h);
        taken.sort();
        taken
    }

    while let (Some(pa), Some(pb)) = (
        la.iter().map(|x| ha[x.0]).max(),
        lb.iter().map(|y| hb[y.0]).max(),
    ) {
        if pa > pb {
            for x in open(&mut la, &ha, pa) {
                la.extend_from_slice(a.children(x));
            }
            continue;
        }
        if pb > pa {
            for y in open(&mut lb, &hb, pb) {
                lb.extend_from_slice(b.children(y));
            }
            continue;
        }
        let xs = open(&mut la, &ha, pa);
        let ys = open(&mut lb, &hb, pb);

        let mut cands: Vec<(NodeId, NodeId)> = Vec::new();
        for &x in &xs {
            for &y in &ys {
                if ca[x.0] == cb[y.0] {
                    cands.push((x, y));
                }
            }
        }
        let mut count_x: HashMap<NodeId, usize> = HashMap::new();
        let mut count_y: HashMap<NodeId, usize> = HashMap::new();
        for &(x, y) in &cands {
            *count_x.entry(x).or_default() += 1;
            *count_y.entry(y).or_default() += 1;
        }
        let (unique, mut ambiguous): (Vec<_>, Vec<_>) = cands
            .into_iter()
            .partition(|(x, y)| count_x[x] == 1 && count_y[y] == 1);
        for (x, y) in unique {
            map_subtree(&mut m, a, x, y);
        }
        ambiguous.sort_by_key(|&(x, y)| {
            let same_parent_kind = match (a.parent(x), b.parent(y)) {
                (Some(p), Some(q)) => a.at(p).kind == b.at(q).kind,
                (None, None) => true,
                _ => false,
            };
            let same_index = a.at(x).child_index == b.at(y).child_index;
            let drift = (x.0 * b.len()).abs_diff(y.0 * a.len());
            (!same_parent_kind, !same_index, drift, x, y)
        });
        for (x, y) in ambiguous {
            if m.partner_of_a(x).is_none() && m.partner_of_b(y).is_none() {
                map_subtree(&mut m, a, x, y);
            }
        }
        for x in xs {
            if m.partner_of_a(x).is_none() {
                la.extend_from_slice(a.children(x));
            }
        }
        for y in ys {
            if m.partner_of_b(y).is_none() {
                lb.extend_from_slice(b.children(y));
            }
        }
    }
    m
}

/// Phase two: in post-order, maps each unmapped nonterminal of `a` to the
/// same-kind unmapped node of `b` sharing the largest fraction of mapped
/// descendants, provided the fraction reaches [`CONTAINER_THRESHOLD`]. The
/// roots are mapped whenever their kinds agree.
pub fn containers_bottomup(a: &Ast, b: &Ast, mut m: Mapping) -> Mapping {
    if a.is_empty() || b.is_empty() {
        return m;
    }
    for t1 in a.post_order() {
        if m.partner_of_a(t1).is_some() || a.children(t1).is_empty() {
            continue;
        }
        let kind = &a.at(t1).kind;
        let mut cands: Vec<NodeId> = Vec::new();
        for d in a.subtree_ids(t1).skip(1) {
            let Some(mut y) = m.partner_of_a(d) else {
                continue;
            };
            while let Some(p) = b.parent(y) {
                y = p;
                if &b.at(y).kind == kind
                    && b.at(y).value.is_none()
                    && m.partner_of_b(y).is_none()
                    && !cands.contains(&y)
                {
                    cands.push(y);
                }
            }
        }
        let desc1 = a.subtree_size(t1).unwrap() - 1;
        let mut best: Option<((f64, usize), NodeId)> = None;
        for t2 in cands {
            let desc2 = b.subtree_size(t2).unwrap() - 1;
            let shared = a
                .subtree_ids(t1)
                .skip(1)
                .filter(|&d| {
                    m.partner_of_a(d)
                        .is_some_and(|y| y != t2 && b.is_in_subtree(y, t2))
                })
                .count();
            let sim = shared as f64 / desc1.max(desc2) as f64;
            let drift = (t1.0 * b.len()).abs_diff(t2.0 * a.len());
            let better = match best {
                None => true,
                Some(((s, d), id)) => sim > s || (sim == s && (drift, t2) < (d, id)),
            };
            if better {
                best = Some(((sim, drift), t2));
            }
        }
        if let Some(((sim, _), t2)) = best {
            if sim >= CONTAINER_THRESHOLD {
                m.insert(t1, t2);
            }
        }
    }
    let (ra, rb) = (a.root(), b.root());
    if m.partner_of_a(ra).is_none() && m.partner_of_b(rb).is_none() && compatible(a, ra, b, rb) {
        m.insert(ra, rb);
    }
    m
}

fn nearest_mapped_ancestor(t: &Ast, id: NodeId, mapped: impl Fn(NodeId) -> bool) -> Option<NodeId> {
    let mut cur = t.parent(id);
    while let Some(p) = cur {
        if mapped(p) {
            return Some(p);
        }
        cur = t.parent(p);
    }
    None
}

/// Phase three: for every mapped pair, aligns unmapped children (first
/// isomorphic subtrees, then same-kind nodes, both by longest common
/// subsequence) and then greedily pairs any remaining same-kind nodes whose
/// nearest mapped ancestors are the pair itself. On return the mapping is
/// maximal in that sense: no mapped pair leaves two such same-kind nodes
/// unmapped.
pub fn recover_descendants(a: &Ast, b: &Ast, mut m: Mapping) -> Mapping {
    let mut work: VecDeque<(NodeId, NodeId)> = m.pairs().collect();
    while let Some((t1, t2)) = work.pop_front() {
        if a.children(t1).is_empty() || b.children(t2).is_empty() {
            continue;
        }
        let unmapped_children = |m: &Mapping| {
            let c1: Vec<NodeId> = a
                .children(t1)
                .iter()
                .copied()
                .filter(|&c| m.partner_of_a(c).is_none())
                .collect();
            let c2: Vec<NodeId> = b
                .children(t2)
                .iter()
                .copied()
                .filter(|&c| m.partner_of_b(c).is_none())
                .collect();
            (c1, c2)
        };
        let (c1, c2) = unmapped_children(&m);
        for (i, j) in lcs(&c1, &c2, |&x, &y| a.isomorphic(x, b, y)) {
            map_subtree(&mut m, a, c1[i], c2[j]);
        }
        let (c1, c2) = unmapped_children(&m);
        for (i, j) in lcs(&c1, &c2, |&x, &y| compatible(a, x, b, y)) {
            m.insert(c1[i], c2[j]);
            work.push_back((c1[i], c2[j]));
        }
        for d1 in a.subtree_ids(t1).skip(1) {
            if m.partner_of_a(d1).is_some()
                || nearest_mapped_ancestor(a, d1, |p| m.partner_of_a(p).is_some()) != Some(t1)
            {
                continue;
            }
            let n1 = a.at(d1);
            let mut best = None;
            for d2 in b.subtree_ids(t2).skip(1) {
                let n2 = b.at(d2);
                if m.partner_of_b(d2).is_some()
                    || !compatible(a, d1, b, d2)
                    || nearest_mapped_ancestor(b, d2, |q| m.partner_of_b(q).is_some()) != Some(t2)
                {
                    continue;
                }
                if n2.value == n1.value {
                    best = Some(d2);
                    break;
                }
                best.get_or_insert(d2);
            }
            if let Some(d2) = best {
                m.insert(d1, d2);
                work.push_back((d1, d2));
            }
        }
    }
    m
}
