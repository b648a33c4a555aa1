// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;

use super::{DatasetError, Example, Split};
use crate::diff::apply::apply_op;
use crate::diff::work::WorkTree;
use crate::diff::{EditKind, EditOp};
use crate::paths::enumerate_candidates;

/// Summary of a set of examples.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetStats {
    pub projects: usize,
    pub examples: usize,
    /// Train, validation, test.
    pub per_split: [usize; 3],
    pub unassigned: usize,
    pub avg_paths: f64,
    pub avg_ops: f64,
    /// Share of MOV, DEL, INS and UPD among all ops (percent).
    pub kind_percent: [f64; 4],
    pub avg_moved_size: f64,
    pub avg_deleted_size: f64,
    pub avg_inserted_size: f64,
}

fn mean(sum: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        sum as f64 / n as f64
    }
}

/// Subtree sizes are measured on the tree as it is when the op runs.
pub fn compute_stats(examples: &[Example]) -> Result<DatasetStats, DatasetError> {
    if examples.is_empty() {
        return Err(DatasetError::Invalid("no examples".into()));
    }
    let projects: BTreeSet<&str> = examples.iter().map(|e| e.meta.project.as_str()).collect();
    let mut per_split = [0; 3];
    let mut unassigned = 0;
    let mut paths = 0;
    let mut ops = 0;
    let mut kinds = [0usize; 4];
    let mut sizes = [0usize; 4];
    for e in examples {
        match e.meta.split {
            Some(s) => per_split[Split::ALL.iter().position(|x| *x == s).unwrap()] += 1,
            None => unassigned += 1,
        }
        paths += enumerate_candidates(&e.augmented()?).len();
        ops += e.gold_script.len();
        let mut w = WorkTree::from_ast(&e.p_before);
        for (i, op) in e.gold_script.ops.iter().enumerate() {
            let k = EditKind::ALL.iter().position(|k| *k == op.kind()).unwrap();
            kinds[k] += 1;
            sizes[k] += match op {
                EditOp::Mov { src, .. } | EditOp::Del { src } => {
                    w.live(*src).map(|s| w.preorder_from(s).len()).unwrap_or(0)
                }
                EditOp::Ins { tree, .. } => tree.size(),
                EditOp::Upd { .. } => 1,
            };
            apply_op(&mut w, op).map_err(|err| {
                DatasetError::Invalid(format!(
                    "{}/{}: gold op {i}: {}",
                    e.meta.project,
                    e.meta.pair,
                    crate::diff::apply::lift(i, err)
                ))
            })?;
        }
    }
    let n = examples.len();
    let total: usize = kinds.iter().sum();
    let pct = |k: usize| {
        if total == 0 {
            0.0
        } else {
            100.0 * kinds[k] as f64 / total as f64
        }
    };
    let at = |k: EditKind| EditKind::ALL.iter().position(|x| *x == k).unwrap();
    let (m, d, ins, u) = (
        at(EditKind::Mov),
        at(EditKind::Del),
        at(EditKind::Ins),
        at(EditKind::Upd),
    );
    Ok(DatasetStats {
        projects: projects.len(),
        examples: n,
        per_split,
        unassigned,
        avg_paths: mean(paths, n),
        avg_ops: mean(ops, n),
        kind_percent: [pct(m), pct(d), pct(ins), pct(u)],
        avg_moved_size: mean(sizes[m], kinds[m]),
        avg_deleted_size: mean(sizes[d], kinds[d]),
        avg_inserted_size: mean(sizes[ins], kinds[ins]),
    })
}

impl DatasetStats {
    /// `(row name, value)` in display order.
    pub fn rows(&self) -> Vec<(&'static str, String)> {
        let f = |v: f64| format!("{v:.2}");
        vec![
            ("# projects", self.projects.to_string()),
            ("# examples", self.examples.to_string()),
            ("# train examples", self.per_split[0].to_string()),
            ("# validation examples", self.per_split[1].to_string()),
            ("# test examples", self.per_split[2].to_string()),
            ("# unassigned examples", self.unassigned.to_string()),
            ("Avg. number of paths", f(self.avg_paths)),
            ("Avg. number of edit operations", f(self.avg_ops)),
            ("MOV %", f(self.kind_percent[0])),
            ("DEL %", f(self.kind_percent[1])),
            ("INS %", f(self.kind_percent[2])),
            ("UPD %", f(self.kind_percent[3])),
            ("Avg. size of moved subtrees", f(self.avg_moved_size)),
            ("Avg. size of deleted subtrees", f(self.avg_deleted_size)),
            ("Avg. size of inserted subtrees", f(self.avg_inserted_size)),
        ]
    }
}

/// One aligned `name  value` line per row.
impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.rows();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<width$}  {v}")?;
        }
        Ok(())
    }
}
