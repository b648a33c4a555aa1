// SPDX-License-Identifier: Apache-2.0

//! Numeric view of one example: vocabulary ids, the LSTM states needed to
//! encode every candidate and context path, and gold class indices.

use std::collections::HashMap;

use editpath_core::ast::{path_between, NodeId};
use editpath_core::dataset::Prepared;
use editpath_core::paths::{AugmentedAst, Candidate, OperationKind, PathOperation};

use crate::vocab::Vocab;

/// How a path endpoint is embedded: its value's subtokens when it has a
/// non-empty value, otherwise its kind and child index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Node(usize),
    Value(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathSpec {
    /// State holding the LSTM output after the path's last node.
    pub last: usize,
    pub first_endpoint: usize,
    pub last_endpoint: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Features {
    /// `(kind id, child index id)` per input row.
    pub inputs: Vec<(usize, usize)>,
    /// Input row per LSTM state.
    pub state_input: Vec<usize>,
    /// Predecessor state; None for the first node of a path.
    pub state_pred: Vec<Option<usize>>,
    /// States sorted by position along their path; `layers[k]` is the range
    /// of states at position k.
    pub layers: Vec<(usize, usize)>,
    pub endpoints: Vec<Endpoint>,
    /// Distinct fragment paths first, then the context paths in order.
    pub paths: Vec<PathSpec>,
    pub n_pairs: usize,
    /// Path index and kind of every candidate, in candidate order.
    pub classes: Vec<(usize, OperationKind)>,
    /// Gold candidate indices; empty when unknown.
    pub gold: Vec<usize>,
}

impl Features {
    pub fn n_context(&self) -> usize {
        self.paths.len() - self.n_pairs
    }

    /// Number of classes including EOS.
    pub fn n_classes(&self) -> usize {
        self.classes.len() + 1
    }

    pub fn eos(&self) -> usize {
        self.classes.len()
    }

    pub fn from_prepared(vocab: &Vocab, p: &Prepared) -> Self {
        Features::new(vocab, &p.aug, &p.candidates, &p.context, p.gold.clone())
    }

    pub fn new(
        vocab: &Vocab,
        aug: &AugmentedAst,
        candidates: &[Candidate],
        context: &[PathOperation],
        gold: Vec<usize>,
    ) -> Self {
        let tree = &aug.tree;
        let mut inputs = Vec::with_capacity(tree.len());
        let mut endpoints = Vec::with_capacity(tree.len());
        for (i, n) in tree.nodes().iter().enumerate() {
            inputs.push((vocab.kind_id(&n.kind), vocab.index_id(n.child_index)));
            endpoints.push(endpoint(vocab, n.value.as_deref(), i));
        }

        // (input row, pred, depth) before sorting by depth
        let mut raw: Vec<(usize, Option<usize>, usize)> = Vec::new();
        let mut raw_paths: Vec<(usize, usize, usize)> = Vec::new();
        let mut pair_index: HashMap<(NodeId, NodeId), usize> = HashMap::new();
        let mut tries: HashMap<NodeId, HashMap<NodeId, usize>> = HashMap::new();
        let mut classes = Vec::with_capacity(candidates.len());
        for c in candidates {
            let key = (c.source, c.target);
            let idx = match pair_index.get(&key) {
                Some(&i) => i,
                None => {
                    let trie = tries.entry(c.source).or_default();
                    let nodes = path_between(tree, c.source, c.target)
                        .expect("candidate endpoints are in the tree")
                        .nodes;
                    let mut prev = None;
                    for (k, n) in nodes.iter().enumerate() {
                        let st = *trie.entry(*n).or_insert_with(|| {
                            raw.push((n.0, prev, k));
                            raw.len() - 1
                        });
                        prev = Some(st);
                    }
                    raw_paths.push((prev.unwrap(), c.source.0, c.target.0));
                    pair_index.insert(key, raw_paths.len() - 1);
                    raw_paths.len() - 1
                }
            };
            classes.push((idx, c.kind));
        }
        let n_pairs = raw_paths.len();
        for op in context {
            let mut prev = None;
            let mut first_ep = 0;
            let mut last_ep = 0;
            for (k, n) in op.path.iter().enumerate() {
                let row = inputs.len();
                inputs.push((vocab.kind_id(&n.kind), vocab.index_id(n.child_index)));
                raw.push((row, prev, k));
                prev = Some(raw.len() - 1);
                if k == 0 || k + 1 == op.path.len() {
                    endpoints.push(endpoint(vocab, n.value.as_deref(), row));
                    if k == 0 {
                        first_ep = endpoints.len() - 1;
                    }
                    last_ep = endpoints.len() - 1;
                }
            }
            raw_paths.push((prev.expect("paths are never empty"), first_ep, last_ep));
        }

        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| raw[i].2);
        let mut new_id = vec![0; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let state_input = order.iter().map(|&o| raw[o].0).collect();
        let state_pred = order.iter().map(|&o| raw[o].1.map(|p| new_id[p])).collect();
        let mut layers: Vec<(usize, usize)> = Vec::new();
        for (new, &old) in order.iter().enumerate() {
            let depth = raw[old].2;
            if depth == layers.len() {
                layers.push((new, new + 1));
            } else {
                layers[depth].1 = new + 1;
            }
        }
        let paths = raw_paths
            .into_iter()
            .map(|(last, a, b)| PathSpec {
                last: new_id[last],
                first_endpoint: a,
                last_endpoint: b,
            })
            .collect();
        Features {
            inputs,
            state_input,
            state_pred,
            layers,
            endpoints,
            paths,
            n_pairs,
            classes,
            gold,
        }
    }
}

fn endpoint(vocab: &Vocab, value: Option<&str>, row: usize) -> Endpoint {
    match value.and_then(|v| vocab.value_ids(v)) {
        Some(ids) => Endpoint::Value(ids),
        None => Endpoint::Node(row),
    }
}
