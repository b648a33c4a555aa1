// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fmt;

use super::Example;
use crate::ast::Ast;
use crate::diff::apply::apply_op;
use crate::diff::work::WorkTree;
use crate::diff::{EditKind, EditOp, EditScript};
use crate::paths::is_representable;

/// Why an example was left out. Checked in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DropReason {
    /// The fragment has more nodes than allowed.
    Size,
    /// The fragment does not change.
    Empty,
    /// The fragment's edit only deletes.
    DeleteOnly,
    /// Both edits only update values, and every update in the fragment also
    /// happens in the context.
    Rename,
    /// The edit needs code that exists neither in the fragment nor in the
    /// context edit.
    Unrepresentable,
}

impl DropReason {
    pub const ALL: [DropReason; 5] = [
        DropReason::Size,
        DropReason::Empty,
        DropReason::DeleteOnly,
        DropReason::Rename,
        DropReason::Unrepresentable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::Size => "size",
            DropReason::Empty => "empty",
            DropReason::DeleteOnly => "del-only",
            DropReason::Rename => "rename",
            DropReason::Unrepresentable => "unrepresentable",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterConfig {
    pub max_nodes: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { max_nodes: 50 }
    }
}

/// `(old value, new value)` for each update, in script order.
pub fn update_pairs(before: &Ast, script: &EditScript) -> Vec<(String, String)> {
    let mut w = WorkTree::from_ast(before);
    let mut out = Vec::new();
    for op in &script.ops {
        if let EditOp::Upd { value, tgt } = op {
            if let Some(old) = w.nodes.get(tgt.0).and_then(|n| n.value.clone()) {
                out.push((old, value.clone()));
            }
        }
        if apply_op(&mut w, op).is_err() {
            break;
        }
    }
    out
}

fn only(script: &EditScript, kind: EditKind) -> bool {
    !script.is_empty() && script.ops.iter().all(|op| op.kind() == kind)
}

/// `None` keeps the example.
pub fn filter_example(e: &Example, cfg: &FilterConfig) -> Option<DropReason> {
    if e.p_before.len() > cfg.max_nodes {
        return Some(DropReason::Size);
    }
    if e.gold_script.is_empty() {
        return Some(DropReason::Empty);
    }
    if only(&e.gold_script, EditKind::Del) {
        return Some(DropReason::DeleteOnly);
    }
    if only(&e.gold_script, EditKind::Upd) && only(&e.context_script, EditKind::Upd) {
        let mut budget: HashMap<(String, String), usize> = HashMap::new();
        for pair in update_pairs(&e.c_before, &e.context_script) {
            *budget.entry(pair).or_default() += 1;
        }
        let contained = update_pairs(&e.p_before, &e.gold_script)
            .into_iter()
            .all(|pair| match budget.get_mut(&pair) {
                Some(n) if *n > 0 => {
                    *n -= 1;
                    true
                }
                _ => false,
            });
        if contained {
            return Some(DropReason::Rename);
        }
    }
    let representable = e
        .augmented()
        .is_ok_and(|aug| is_representable(&aug, &e.gold_script));
    if !representable {
        return Some(DropReason::Unrepresentable);
    }
    None
}
