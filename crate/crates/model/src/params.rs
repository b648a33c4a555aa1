// SPDX-License-Identifier: Apache-2.0

use ndarray::{ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Embedding and hidden sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub d: usize,
    pub h: usize,
}

impl Default for Dims {
    fn default() -> Self {
        Dims { d: 64, h: 128 }
    }
}

/// Every parameter tensor. Vectors are stored as one-row matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum T {
    EmbKind,
    EmbIndex,
    EmbSub,
    PathW,
    PathB,
    CtxW,
    CtxB,
    DecW,
    DecB,
    ProjPath,
    ProjMov,
    ProjUpd,
    ProjIns,
    AttnW,
    PointW,
    QueryW,
    Eos,
    Start,
}

impl T {
    pub const ALL: [T; 18] = [
        T::EmbKind,
        T::EmbIndex,
        T::EmbSub,
        T::PathW,
        T::PathB,
        T::CtxW,
        T::CtxB,
        T::DecW,
        T::DecB,
        T::ProjPath,
        T::ProjMov,
        T::ProjUpd,
        T::ProjIns,
        T::AttnW,
        T::PointW,
        T::QueryW,
        T::Eos,
        T::Start,
    ];

    pub fn name(self) -> &'static str {
        match self {
            T::EmbKind => "embed.kind",
            T::EmbIndex => "embed.child_index",
            T::EmbSub => "embed.subtoken",
            T::PathW => "path_lstm.w",
            T::PathB => "path_lstm.b",
            T::CtxW => "context_lstm.w",
            T::CtxB => "context_lstm.b",
            T::DecW => "decoder_lstm.w",
            T::DecB => "decoder_lstm.b",
            T::ProjPath => "proj.path",
            T::ProjMov => "proj.mov",
            T::ProjUpd => "proj.upd",
            T::ProjIns => "proj.ins",
            T::AttnW => "attention.w",
            T::PointW => "pointer.w",
            T::QueryW => "query.w",
            T::Eos => "eos",
            T::Start => "start",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub offset: usize,
}

/// Offsets of each tensor within the flat buffer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub dims: Dims,
    pub entries: Vec<Entry>,
    pub total: usize,
}

impl Layout {
    pub fn new(dims: Dims, n_kinds: usize, n_indices: usize, n_subtokens: usize) -> Self {
        let Dims { d, h } = dims;
        let mut entries = Vec::new();
        let mut offset = 0;
        for t in T::ALL {
            let (rows, cols) = match t {
                T::EmbKind => (n_kinds, d),
                T::EmbIndex => (n_indices, d),
                T::EmbSub => (n_subtokens, d),
                T::PathW => (4 * h, d + h),
                T::CtxW | T::DecW => (4 * h, 2 * h),
                T::PathB | T::CtxB | T::DecB => (1, 4 * h),
                T::ProjPath => (h, h + 2 * d),
                T::ProjMov | T::ProjUpd | T::ProjIns | T::AttnW | T::PointW => (h, h),
                T::QueryW => (h, 2 * h),
                T::Eos | T::Start => (1, h),
            };
            entries.push(Entry {
                name: t.name().to_string(),
                rows,
                cols,
                offset,
            });
            offset += rows * cols;
        }
        Layout {
            dims,
            entries,
            total: offset,
        }
    }

    pub fn entry(&self, t: T) -> &Entry {
        &self.entries[t as usize]
    }

    fn range(&self, t: T) -> (std::ops::Range<usize>, (usize, usize)) {
        let e = self.entry(t);
        (e.offset..e.offset + e.rows * e.cols, (e.rows, e.cols))
    }
}

/// A flat buffer of all tensors; used for parameters, gradients and
/// optimizer moments alike.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub layout: Layout,
    pub data: Vec<f64>,
}

impl Params {
    pub fn zeros(layout: Layout) -> Self {
        Params {
            data: vec![0.0; layout.total],
            layout,
        }
    }

    /// Embeddings and the two learned vectors uniform in (-0.05, 0.05);
    /// matrices uniform in ±1/sqrt(fan-in); biases zero except the LSTM
    /// forget gates, which start at 1.
    pub fn init(layout: Layout, rng: &mut ChaCha8Rng) -> Self {
        let mut p = Params::zeros(layout);
        let h = p.layout.dims.h;
        for t in T::ALL {
            let (range, (_, cols)) = p.layout.range(t);
            let slice = &mut p.data[range];
            match t {
                T::PathB | T::CtxB | T::DecB => {
                    for x in &mut slice[h..2 * h] {
                        *x = 1.0;
                    }
                }
                T::EmbKind | T::EmbIndex | T::EmbSub | T::Eos | T::Start => {
                    for x in slice {
                        *x = rng.gen_range(-0.05..0.05);
                    }
                }
                _ => {
                    let a = 1.0 / (cols as f64).sqrt();
                    for x in slice {
                        *x = rng.gen_range(-a..a);
                    }
                }
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn view(&self, t: T) -> ArrayView2<'_, f64> {
        let (range, shape) = self.layout.range(t);
        ArrayView2::from_shape(shape, &self.data[range]).expect("layout matches buffer")
    }

    pub fn view_mut(&mut self, t: T) -> ArrayViewMut2<'_, f64> {
        let (range, shape) = self.layout.range(t);
        ArrayViewMut2::from_shape(shape, &mut self.data[range]).expect("layout matches buffer")
    }

    pub fn vector(&self, t: T) -> ArrayView1<'_, f64> {
        let (range, _) = self.layout.range(t);
        ArrayView1::from(&self.data[range])
    }

    pub fn vector_mut(&mut self, t: T) -> ArrayViewMut1<'_, f64> {
        let (range, _) = self.layout.range(t);
        ArrayViewMut1::from(&mut self.data[range])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }
}
