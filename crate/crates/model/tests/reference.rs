// SPDX-License-Identifier: Apache-2.0

//! The building blocks against hand-computed values and scalar oracles, and
//! the batched pass against their composition.

mod common;

use std::collections::HashMap;

use ndarray::{Array1, Array2};

use editpath_core::ast::split_subtokens;
use editpath_core::paths::{OperationKind, PathNode};
use editpath_model::net::{encode, forward, Masks};
use editpath_model::ops::{
    attend, encode_candidates, encode_context, encode_node, encode_path, encode_value, point, query,
};
use editpath_model::params::{Dims, T};
use editpath_model::predict::layout_for;
use editpath_model::{build_vocab, Features, Model, ModelConfig, Params, Vocab};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn setup(seed: u64, dims: Dims, scale: f64) -> (Vocab, Params) {
    let ex = common::examples(seed, 4);
    let vocab = build_vocab(&ex, 1).unwrap();
    let p = common::random_params(layout_for(dims, &vocab), seed, scale);
    (vocab, p)
}

fn node(kind: &str, child_index: usize, value: Option<&str>) -> PathNode {
    PathNode {
        id: editpath_core::ast::NodeId(0),
        kind: kind.into(),
        child_index,
        value: value.map(String::from),
    }
}

fn softmax_oracle(s: &[f64]) -> Vec<f64> {
    let e: Vec<f64> = s.iter().map(|x| x.exp()).collect();
    let z: f64 = e.iter().sum();
    e.iter().map(|x| x / z).collect()
}

fn matvec(m: ndarray::ArrayView2<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[[r, c]] * v[c]).sum())
        .collect()
}

#[test]
fn encode_node_zero_rows_give_zero() {
    let (vocab, mut p) = setup(1, Dims { d: 6, h: 5 }, 0.5);
    let (k, i) = (vocab.kind_id("Call"), vocab.index_id(2));
    p.view_mut(T::EmbKind).row_mut(k).fill(0.0);
    p.view_mut(T::EmbIndex).row_mut(i).fill(0.0);
    assert!(encode_node(&p, &vocab, "Call", 2).iter().all(|&x| x == 0.0));
}

#[test]
fn encode_node_is_componentwise_sum() {
    let (vocab, p) = setup(2, Dims { d: 6, h: 5 }, 0.5);
    let got = encode_node(&p, &vocab, "Name", 1);
    let ek = p.view(T::EmbKind);
    let ei = p.view(T::EmbIndex);
    for c in 0..6 {
        assert_eq!(got[c], ei[[1, c]] + ek[[vocab.kind_id("Name"), c]]);
    }
}

#[test]
fn encode_node_clamps_large_child_index() {
    let (vocab, p) = setup(3, Dims { d: 4, h: 4 }, 0.5);
    let cap = vocab.max_child_index;
    assert_eq!(
        encode_node(&p, &vocab, "Arg", cap + 40),
        encode_node(&p, &vocab, "Arg", cap)
    );
    assert_ne!(
        encode_node(&p, &vocab, "Arg", cap),
        encode_node(&p, &vocab, "Arg", cap - 1)
    );
}

#[test]
fn encode_value_single_subtoken_is_its_row() {
    let (vocab, p) = setup(4, Dims { d: 4, h: 4 }, 0.5);
    let id = vocab.subtoken_id("value");
    assert!(id > 1);
    assert_eq!(
        encode_value(&p, &vocab, "value").unwrap(),
        p.view(T::EmbSub).row(id).to_owned()
    );
}

#[test]
fn encode_value_sums_camel_case_subtokens() {
    let vocab = Vocab::new(
        vec![],
        3,
        vec!["<pad>".into(), "<unk>".into(), "string".into(), "to".into()],
    );
    let layout = layout_for(Dims { d: 5, h: 3 }, &vocab);
    let p = common::random_params(layout, 5, 0.5);
    let es = p.view(T::EmbSub);
    let want = &es.row(vocab.subtoken_id("to")) + &es.row(vocab.subtoken_id("string"));
    assert_eq!(encode_value(&p, &vocab, "toString").unwrap(), want);
}

#[test]
fn encode_value_out_of_vocabulary_is_unk_times_count() {
    let (vocab, p) = setup(6, Dims { d: 4, h: 4 }, 0.5);
    let value = "zorpQuux_9";
    let n = split_subtokens(value).unwrap().len();
    assert_eq!(n, 3);
    let unk = p.view(T::EmbSub).row(1).to_owned();
    let got = encode_value(&p, &vocab, value).unwrap();
    assert!(close(
        got.as_slice().unwrap(),
        (&unk * n as f64).as_slice().unwrap(),
        1e-15
    ));
    assert!(encode_value(&p, &vocab, "").is_err());
}

#[test]
fn encode_path_zero_params_give_zero() {
    let (vocab, mut p) = setup(7, Dims { d: 4, h: 3 }, 0.5);
    p.fill(0.0);
    let path = vec![
        node("Name", 0, Some("x")),
        node("Arg", 1, None),
        node("ArgList", 2, None),
    ];
    assert!(encode_path(&p, &vocab, &path)
        .unwrap()
        .iter()
        .all(|&x| x == 0.0));
}

#[test]
fn encode_path_length_one_and_empty() {
    let (vocab, p) = setup(8, Dims { d: 4, h: 3 }, 0.5);
    let z = encode_path(&p, &vocab, &[node("Name", 0, Some("count"))]).unwrap();
    assert_eq!(z.len(), 3);
    assert!(z.iter().all(|x| x.is_finite()));
    assert!(encode_path(&p, &vocab, &[]).is_err());
}

#[test]
fn encode_path_matches_scalar_lstm() {
    let dims = Dims { d: 5, h: 4 };
    let (vocab, p) = setup(9, dims, 0.6);
    let path = vec![
        node("Name", 0, Some("getValue")),
        node("Arg", 1, None),
        node("ArgList", 1, None),
        node("Call", 0, None),
        node("Placeholder", 0, None),
    ];
    let xs: Vec<Vec<f64>> = path
        .iter()
        .map(|n| {
            let (k, i) = (vocab.kind_id(&n.kind), vocab.index_id(n.child_index));
            (0..5)
                .map(|c| p.view(T::EmbKind)[[k, c]] + p.view(T::EmbIndex)[[i, c]])
                .collect()
        })
        .collect();
    let w = p.view(T::PathW).to_owned();
    let b = p.vector(T::PathB).to_vec();
    let (hs, _) = common::lstm_oracle(&w, &b, &xs, &[0.0; 4], &[0.0; 4]);
    let first: Vec<f64> = ["get", "value"].iter().fold(vec![0.0; 5], |acc, s| {
        let r = p.view(T::EmbSub).row(vocab.subtoken_id(s)).to_vec();
        acc.iter().zip(&r).map(|(a, b)| a + b).collect()
    });
    let mut r = hs.last().unwrap().clone();
    r.extend(&first);
    r.extend(&xs[4]);
    let want: Vec<f64> = matvec(p.view(T::ProjPath), &r)
        .iter()
        .map(|x| x.tanh())
        .collect();
    let got = encode_path(&p, &vocab, &path).unwrap();
    assert!(
        close(got.as_slice().unwrap(), &want, 1e-9),
        "{got:?} {want:?}"
    );
}

#[test]
fn encode_context_shapes_order_and_zero() {
    let (_, mut p) = setup(10, Dims { d: 4, h: 3 }, 0.6);
    let one = Array2::from_shape_vec((1, 3), vec![0.1, -0.2, 0.3]).unwrap();
    assert_eq!(encode_context(&p, one.view(), true).unwrap().nrows(), 1);
    let two = Array2::from_shape_vec((2, 3), vec![0.1, -0.2, 0.3, 0.5, 0.4, -0.6]).unwrap();
    let swapped = Array2::from_shape_vec((2, 3), vec![0.5, 0.4, -0.6, 0.1, -0.2, 0.3]).unwrap();
    let a = encode_context(&p, two.view(), true).unwrap();
    let b = encode_context(&p, swapped.view(), true).unwrap();
    assert_ne!(a.row(1), b.row(1));
    assert!(encode_context(&p, Array2::zeros((0, 3)).view(), true).is_err());
    assert_eq!(
        encode_context(&p, Array2::zeros((0, 3)).view(), false)
            .unwrap()
            .nrows(),
        0
    );
    assert_eq!(encode_context(&p, two.view(), false).unwrap().nrows(), 0);
    p.fill(0.0);
    assert!(encode_context(&p, two.view(), true)
        .unwrap()
        .iter()
        .all(|&x| x == 0.0));
}

#[test]
fn encode_candidates_identity_counting_and_oracle() {
    let (_, mut p) = setup(11, Dims { d: 4, h: 3 }, 0.6);
    let z = Array1::from(vec![0.3, -0.1, 0.7]);
    let cands = [
        (z.view(), OperationKind::Mov),
        (z.view(), OperationKind::Upd),
        (z.view(), OperationKind::Ins),
    ];
    let zop = encode_candidates(&p, &cands).unwrap();
    assert_eq!(zop.nrows(), 4);
    assert_eq!(zop.row(3), p.vector(T::Eos));
    for (i, t) in [T::ProjMov, T::ProjUpd, T::ProjIns].into_iter().enumerate() {
        let m = p.view(t);
        let want: Vec<f64> = (0..3)
            .map(|c| (0..3).map(|r| z[r] * m[[r, c]]).sum())
            .collect();
        assert!(close(zop.row(i).as_slice().unwrap(), &want, 1e-9));
    }
    for t in [T::ProjMov, T::ProjUpd, T::ProjIns] {
        let mut m = p.view_mut(t);
        m.fill(0.0);
        m.diag_mut().fill(1.0);
    }
    let zop = encode_candidates(&p, &cands).unwrap();
    for i in 0..3 {
        assert_eq!(zop.row(i), z);
    }
    assert!(encode_candidates(&p, &[]).is_err());
}

#[test]
fn attend_examples() {
    let (_, p) = setup(12, Dims { d: 4, h: 3 }, 0.6);
    let h = Array1::from(vec![0.2, -0.4, 0.9]);
    let one = Array2::from_shape_vec((1, 3), vec![0.1, 0.5, -0.3]).unwrap();
    let (a, c) = attend(&p, one.view(), h.view());
    assert_eq!(a, vec![1.0]);
    assert_eq!(c, one.row(0));
    let same = Array2::from_shape_vec((2, 3), vec![0.1, 0.5, -0.3, 0.1, 0.5, -0.3]).unwrap();
    assert_eq!(attend(&p, same.view(), h.view()).0, vec![0.5, 0.5]);
    let zc = Array2::from_shape_vec(
        (3, 3),
        vec![0.1, 0.5, -0.3, -0.7, 0.2, 0.4, 0.9, -0.8, 0.05],
    )
    .unwrap();
    let v = matvec(p.view(T::AttnW), h.as_slice().unwrap());
    let scores: Vec<f64> = (0..3)
        .map(|i| (0..3).map(|k| zc[[i, k]] * v[k]).sum())
        .collect();
    let alpha = softmax_oracle(&scores);
    let want: Vec<f64> = (0..3)
        .map(|k| (0..3).map(|i| alpha[i] * zc[[i, k]]).sum())
        .collect();
    let (a, c) = attend(&p, zc.view(), h.view());
    assert!(close(&a, &alpha, 1e-9));
    assert!(close(c.as_slice().unwrap(), &want, 1e-9));
    let (a, c) = attend(&p, Array2::zeros((0, 3)).view(), h.view());
    assert!(a.is_empty());
    assert_eq!(c, h);
}

#[test]
fn point_examples() {
    let (_, p) = setup(13, Dims { d: 4, h: 3 }, 0.6);
    let q = Array1::from(vec![0.3, 0.8, -0.5]);
    let single = Array2::from_shape_vec((1, 3), vec![1.0, 2.0, 3.0]).unwrap();
    assert_eq!(point(&p, single.view(), q.view()), vec![1.0]);
    let dup =
        Array2::from_shape_vec((3, 3), vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0, -1.0, 0.0, 0.5]).unwrap();
    let d = point(&p, dup.view(), q.view());
    assert_eq!(d[0], d[1]);
    let w = matvec(p.view(T::PointW), q.as_slice().unwrap());
    let scores: Vec<f64> = (0..3)
        .map(|i| (0..3).map(|k| dup[[i, k]] * w[k]).sum())
        .collect();
    assert!(close(&d, &softmax_oracle(&scores), 1e-9));
}

/// Forward pass rebuilt from the single-vector functions and the scalar
/// LSTM oracle. Returns the per-step distributions and the loss.
fn reference_forward(
    p: &Params,
    vocab: &Vocab,
    e: &editpath_core::dataset::Example,
    use_context: bool,
) -> (Vec<Vec<f64>>, f64) {
    let prep = e.prepare().unwrap();
    let h = p.layout.dims.h;
    let mut pair_z: HashMap<(usize, usize), Array1<f64>> = HashMap::new();
    let mut pair_order = Vec::new();
    let mut cands = Vec::new();
    for c in &prep.candidates {
        let key = (c.source.0, c.target.0);
        if let std::collections::hash_map::Entry::Vacant(e) = pair_z.entry(key) {
            let z = encode_path(p, vocab, &c.path_op(&prep.aug).path).unwrap();
            e.insert(z);
            pair_order.push(key);
        }
        cands.push((key, c.kind));
    }
    let views: Vec<_> = cands
        .iter()
        .map(|(k, kind)| (pair_z[k].view(), *kind))
        .collect();
    let zop = encode_candidates(p, &views).unwrap();
    let zc = if use_context {
        let mut rows = Array2::zeros((prep.context.len(), h));
        for (i, op) in prep.context.iter().enumerate() {
            rows.row_mut(i)
                .assign(&encode_path(p, vocab, &op.path).unwrap());
        }
        encode_context(p, rows.view(), true).unwrap()
    } else {
        Array2::zeros((0, h))
    };
    let mut h0 = Array1::zeros(h);
    for k in &pair_order {
        h0 += &pair_z[k];
    }
    for r in zc.rows() {
        h0 += &r;
    }
    h0 /= (pair_order.len() + zc.nrows()) as f64;

    let w = p.view(T::DecW).to_owned();
    let b = p.vector(T::DecB).to_vec();
    let mut targets = prep.gold.clone();
    targets.push(prep.candidates.len());
    let (mut hs, mut cs) = (h0.to_vec(), vec![0.0; h]);
    let mut dists = Vec::new();
    let mut loss = 0.0;
    for t in 0..targets.len() {
        let x = if t == 0 {
            p.vector(T::Start).to_vec()
        } else {
            zop.row(targets[t - 1]).to_vec()
        };
        let (out, c) = common::lstm_oracle(&w, &b, &[x], &hs, &cs);
        hs = out[0].clone();
        cs = c;
        let ht = Array1::from(hs.clone());
        let (_, ctx) = attend(p, zc.view(), ht.view());
        let q = query(p, ctx.view(), ht.view());
        let d = point(p, zop.view(), q.view());
        loss -= d[targets[t]].ln();
        dists.push(d);
    }
    (dists, loss / targets.len() as f64)
}

#[test]
fn batched_forward_matches_reference_composition() {
    let ex = common::examples(21, 10);
    let vocab = build_vocab(&ex[..5], 1).unwrap();
    for use_context in [true, false] {
        for (i, e) in ex.iter().enumerate() {
            let p =
                common::random_params(layout_for(Dims { d: 6, h: 5 }, &vocab), 100 + i as u64, 0.4);
            let (want, want_loss) = reference_forward(&p, &vocab, e, use_context);
            let f = Features::from_prepared(&vocab, &e.prepare().unwrap());
            let fw = forward(&p, &f, use_context, &Masks::default());
            assert_eq!(fw.steps.len(), want.len());
            for (s, w) in fw.steps.iter().zip(&want) {
                assert!(close(&s.probs, w, 1e-9));
            }
            assert!(
                (fw.loss - want_loss).abs() < 1e-9,
                "{} {}",
                fw.loss,
                want_loss
            );
        }
    }
}

#[test]
fn zero_op_gold_targets_eos_only() {
    let e = common::example_from("f(a, b);", "f(a, b);", "g(a, b);", "g(b, a);");
    let vocab = build_vocab(std::slice::from_ref(&e), 1).unwrap();
    let p = common::random_params(layout_for(Dims { d: 4, h: 4 }, &vocab), 3, 0.3);
    let f = Features::from_prepared(&vocab, &e.prepare().unwrap());
    assert!(f.gold.is_empty());
    let fw = forward(&p, &f, true, &Masks::default());
    assert_eq!(fw.targets, vec![f.eos()]);
    assert_eq!(fw.steps.len(), 1);
}

#[test]
fn loss_uniform_is_log_k_and_one_hot_is_zero() {
    let ex = common::examples(31, 3);
    let vocab = build_vocab(&ex, 1).unwrap();
    let dims = Dims { d: 4, h: 4 };
    let mut p = Params::zeros(layout_for(dims, &vocab));
    for e in &ex {
        let f = Features::from_prepared(&vocab, &e.prepare().unwrap());
        let fw = forward(&p, &f, true, &Masks::default());
        let k = f.n_classes() as f64;
        assert!((fw.loss - k.ln()).abs() < 1e-12, "{} {}", fw.loss, k.ln());
    }

    // open every decoder gate so h_t > 0, pass h_t through the query, and
    // give EOS a large score
    let h = dims.h;
    for (g, v) in [(0, 50.0), (2, 50.0), (3, 50.0)] {
        for k in 0..h {
            p.vector_mut(T::DecB)[g * h + k] = v;
        }
    }
    for k in 0..h {
        p.view_mut(T::QueryW)[[k, h + k]] = 50.0;
        p.view_mut(T::PointW)[[k, k]] = 1.0;
        p.vector_mut(T::Eos)[k] = 100.0;
    }
    let e = common::example_from("f(a, b);", "f(a, b);", "g(a, b);", "g(b, a);");
    let f = Features::new(
        &vocab,
        &e.prepare().unwrap().aug,
        &e.prepare().unwrap().candidates,
        &[],
        vec![],
    );
    let fw = forward(&p, &f, true, &Masks::default());
    assert!(fw.loss < 1e-12, "{}", fw.loss);
}

#[test]
fn encoded_h0_is_mean_of_pairs_and_context() {
    let ex = common::examples(41, 2);
    let vocab = build_vocab(&ex, 1).unwrap();
    let m = Model::new(
        ModelConfig {
            dims: Dims { d: 6, h: 5 },
            ..ModelConfig::default()
        },
        vocab,
        1,
    );
    let (_, f) = m.featurize(&ex[0]).unwrap();
    let e = encode(&m.params, &f, true, &Masks::default());
    let mut want = Array1::<f64>::zeros(5);
    for i in 0..f.n_pairs {
        want += &e.z.row(i);
    }
    for r in e.zc.rows() {
        want += &r;
    }
    want /= (f.n_pairs + e.zc.nrows()) as f64;
    assert!(close(
        e.h0.as_slice().unwrap(),
        want.as_slice().unwrap(),
        1e-12
    ));
}
