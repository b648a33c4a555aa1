// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::synth::{synthesize, FamilyRegistry, NamePool};
use super::*;
use crate::diff::apply::apply_op;
use crate::diff::work::WorkTree;
use crate::diff::EditOp;

#[test]
fn moved_size_is_mean_source_subtree_size() {
    let reg = FamilyRegistry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = FilterConfig::default();
    let mut all = Vec::new();
    for f in reg.learnable() {
        let ex = synthesize(f, 6, 3, &NamePool::train(), &mut rng).unwrap();
        all.extend(ex.into_iter().filter(|e| filter_example(e, &cfg).is_none()));
    }
    let mut sizes = Vec::new();
    for e in &all {
        let mut w = WorkTree::from_ast(&e.p_before);
        for op in &e.gold_script.ops {
            if let EditOp::Mov { src, .. } = op {
                sizes.push(w.preorder_from(w.live(*src).unwrap()).len());
            }
            apply_op(&mut w, op).unwrap();
        }
    }
    assert!(!sizes.is_empty());
    let s = compute_stats(&all).unwrap();
    let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
    assert!((s.avg_moved_size - mean).abs() < 1e-12);
}
