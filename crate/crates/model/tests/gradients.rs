// SPDX-License-Identifier: Apache-2.0

mod common;

use editpath_core::paths::OperationKind;
use editpath_model::gradcheck::{grad_check, grad_check_on, relative_error};
use editpath_model::params::{Dims, T};
use editpath_model::{build_vocab, Features, Model, ModelConfig};

fn small_model(seed: u64, use_context: bool) -> (Model, Vec<Features>) {
    let ex = common::examples(seed, 5);
    let vocab = build_vocab(&ex, 1).unwrap();
    let cfg = ModelConfig {
        dims: Dims { d: 8, h: 8 },
        use_context,
        max_decode: 16,
    };
    let m = Model::new(cfg, vocab, seed);
    let fs = ex.iter().map(|e| m.featurize(e).unwrap().1).collect();
    (m, fs)
}

#[test]
fn full_model_gradients_match_central_differences() {
    for use_context in [true, false] {
        let (m, fs) = small_model(3, use_context);
        for (i, f) in fs.iter().enumerate() {
            let r = grad_check(&m.params, f, use_context, 1e-4, 200, i as u64);
            let worst = r
                .coords
                .iter()
                .max_by(|a, b| {
                    let ea = relative_error(a.2, a.3);
                    let eb = relative_error(b.2, b.3);
                    ea.total_cmp(&eb)
                })
                .unwrap();
            assert!(
                r.max_relative_error < 1e-4,
                "example {i}: {} worst {worst:?}",
                r.max_relative_error
            );
            eprintln!(
                "context={use_context} example={i} max_rel={:e}",
                r.max_relative_error
            );
            let nonzero = r.coords.iter().filter(|c| c.2.abs() > 1e-6).count();
            assert!(nonzero > 50, "{nonzero}");
        }
    }
}

#[test]
fn output_layer_gradients_are_exact() {
    // the scores are linear in these tensors; below 1e-3 the loss's
    // rounding error dominates the difference quotient
    let (m, fs) = small_model(4, true);
    let params = common::random_params(m.params.layout.clone(), 4, 0.5);
    let mut large = 0;
    for (i, f) in fs.iter().enumerate() {
        let r = grad_check_on(&params, f, true, 1e-4, 100, i as u64, &[T::Eos, T::PointW]);
        for &(name, idx, a, n) in r.coords.iter().filter(|c| c.3.abs() > 1e-3) {
            let e = relative_error(a, n);
            assert!(e < 1e-7, "example {i}: {name}[{idx}] {a} {n} {e}");
            large += 1;
        }
    }
    assert!(large >= 100, "{large}");
}

#[test]
fn unused_tensors_have_zero_gradient() {
    let (m, _) = small_model(5, true);
    let ex = common::examples(5, 5);
    let prep = ex[0].prepare().unwrap();
    // drop the UPD candidates, keeping the gold ones
    let keep: Vec<usize> = (0..prep.candidates.len())
        .filter(|&i| prep.candidates[i].kind != OperationKind::Upd || prep.gold.contains(&i))
        .collect();
    assert!(keep
        .iter()
        .all(|&i| prep.candidates[i].kind != OperationKind::Upd));
    let cands: Vec<_> = keep.iter().map(|&i| prep.candidates[i]).collect();
    let gold = prep
        .gold
        .iter()
        .map(|g| keep.iter().position(|k| k == g).unwrap())
        .collect();
    let f = Features::new(&m.vocab, &prep.aug, &cands, &prep.context, gold);
    let r = grad_check_on(&m.params, &f, true, 1e-4, 40, 0, &[T::ProjUpd]);
    assert!(
        r.coords.iter().all(|c| c.2 == 0.0 && c.3.abs() < 1e-12),
        "{:?}",
        r.coords
    );

    let full = m.features(&prep);
    let r = grad_check_on(
        &m.params,
        &full,
        false,
        1e-4,
        60,
        0,
        &[T::CtxW, T::CtxB, T::AttnW],
    );
    assert!(r.coords.iter().all(|c| c.2 == 0.0 && c.3 == 0.0));
}
