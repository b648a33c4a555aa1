// SPDX-License-Identifier: Apache-2.0

//! The model's building blocks one at a time, on single vectors. Training
//! uses the batched pass in [`crate::net`]; these are its reference.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};

use editpath_core::paths::{OperationKind, PathNode};

use crate::net::{lstm_cell, softmax};
use crate::params::{Params, T};
use crate::vocab::Vocab;
use crate::ModelError;

/// `E_index[i] + E_kind[k]`, with unknown kinds and large indices mapped
/// as the vocabulary does.
pub fn encode_node(p: &Params, vocab: &Vocab, kind: &str, child_index: usize) -> Array1<f64> {
    &p.view(T::EmbIndex).row(vocab.index_id(child_index))
        + &p.view(T::EmbKind).row(vocab.kind_id(kind))
}

/// Sum of the value's subtoken embeddings.
pub fn encode_value(p: &Params, vocab: &Vocab, value: &str) -> Result<Array1<f64>, ModelError> {
    let ids = vocab
        .value_ids(value)
        .ok_or_else(|| ModelError::Invalid("cannot encode an empty value".into()))?;
    let es = p.view(T::EmbSub);
    let mut out = Array1::zeros(es.ncols());
    for id in ids {
        out += &es.row(id);
    }
    Ok(out)
}

fn encode_endpoint(p: &Params, vocab: &Vocab, n: &PathNode) -> Array1<f64> {
    match n.value.as_deref().map(|v| encode_value(p, vocab, v)) {
        Some(Ok(v)) => v,
        _ => encode_node(p, vocab, &n.kind, n.child_index),
    }
}

/// LSTM over the path's nodes, then `tanh(W [h_last; first; last])` where
/// an endpoint is its value's encoding when it has one, else its node
/// encoding.
pub fn encode_path(
    p: &Params,
    vocab: &Vocab,
    path: &[PathNode],
) -> Result<Array1<f64>, ModelError> {
    if path.is_empty() {
        return Err(ModelError::Invalid("cannot encode an empty path".into()));
    }
    let h = p.layout.dims.h;
    let (w, b) = (p.view(T::PathW), p.vector(T::PathB));
    let (mut hs, mut cs) = (Array1::zeros(h), Array1::zeros(h));
    for n in path {
        let x = encode_node(p, vocab, &n.kind, n.child_index);
        let cell = lstm_cell(w, b, x.view(), hs.view(), cs.view());
        hs = cell.h;
        cs = cell.c;
    }
    let first = encode_endpoint(p, vocab, &path[0]);
    let last = encode_endpoint(p, vocab, &path[path.len() - 1]);
    let r = ndarray::concatenate![ndarray::Axis(0), hs, first, last];
    Ok(p.view(T::ProjPath).dot(&r).mapv(f64::tanh))
}

/// Context LSTM outputs, one row per encoded context path, in order.
/// Without context the result is empty; with context an empty input is an
/// error.
pub fn encode_context(
    p: &Params,
    paths: ArrayView2<f64>,
    use_context: bool,
) -> Result<Array2<f64>, ModelError> {
    let h = p.layout.dims.h;
    if !use_context {
        return Ok(Array2::zeros((0, h)));
    }
    if paths.nrows() == 0 {
        return Err(ModelError::Invalid("empty context".into()));
    }
    let (w, b) = (p.view(T::CtxW), p.vector(T::CtxB));
    let mut out = Array2::zeros((paths.nrows(), h));
    let (mut hs, mut cs) = (Array1::zeros(h), Array1::zeros(h));
    for (j, z) in paths.rows().into_iter().enumerate() {
        let cell = lstm_cell(w, b, z, hs.view(), cs.view());
        out.row_mut(j).assign(&cell.h);
        hs = cell.h;
        cs = cell.c;
    }
    Ok(out)
}

/// Class vectors `z W_kind` for each `(path encoding, kind)` candidate, then
/// the EOS vector.
pub fn encode_candidates(
    p: &Params,
    candidates: &[(ArrayView1<f64>, OperationKind)],
) -> Result<Array2<f64>, ModelError> {
    if candidates.is_empty() {
        return Err(ModelError::Invalid("no candidates".into()));
    }
    let h = p.layout.dims.h;
    let mut out = Array2::zeros((candidates.len() + 1, h));
    for (i, (z, kind)) in candidates.iter().enumerate() {
        let w = match kind {
            OperationKind::Mov => p.view(T::ProjMov),
            OperationKind::Upd => p.view(T::ProjUpd),
            OperationKind::Ins => p.view(T::ProjIns),
        };
        out.row_mut(i).assign(&z.dot(&w));
    }
    out.row_mut(candidates.len()).assign(&p.vector(T::Eos));
    Ok(out)
}

/// Attention weights `softmax(Z_C W_a h_t)` and the weighted sum of the
/// rows of `zc`. Without context rows the weights are empty and the context
/// vector is `h_t`.
pub fn attend(p: &Params, zc: ArrayView2<f64>, h_t: ArrayView1<f64>) -> (Vec<f64>, Array1<f64>) {
    if zc.nrows() == 0 {
        return (Vec::new(), h_t.to_owned());
    }
    let scores = zc.dot(&p.view(T::AttnW).dot(&h_t));
    let alpha = softmax(scores.as_slice().unwrap());
    let mut c = Array1::zeros(zc.ncols());
    for (a, z) in alpha.iter().zip(zc.rows()) {
        c.scaled_add(*a, &z);
    }
    (alpha, c)
}

/// The pointing query `tanh(W_q [c_t; h_t])`.
pub fn query(p: &Params, c_t: ArrayView1<f64>, h_t: ArrayView1<f64>) -> Array1<f64> {
    let u = ndarray::concatenate![ndarray::Axis(0), c_t, h_t];
    p.view(T::QueryW).dot(&u).mapv(f64::tanh)
}

/// `softmax(Z_Op W_p q)`.
pub fn point(p: &Params, zop: ArrayView2<f64>, q: ArrayView1<f64>) -> Vec<f64> {
    let scores = zop.dot(&p.view(T::PointW).dot(&q));
    softmax(scores.as_slice().unwrap())
}

/// Splits `[i f g o]` gate rows of an LSTM weight matrix (for tests and
/// inspection).
pub fn gate_block(w: ArrayView2<f64>, gate: usize) -> ArrayView2<f64> {
    let h = w.nrows() / 4;
    w.slice_move(s![gate * h..(gate + 1) * h, ..])
}
