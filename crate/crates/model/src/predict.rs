// SPDX-License-Identifier: Apache-2.0

use ndarray::Array1;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use editpath_core::dataset::{Example, Prepared};
use editpath_core::paths::PathOperation;

use crate::features::Features;
use crate::net::{decode_step, encode, forward, Masks};
use crate::params::{Dims, Layout, Params, T};
use crate::vocab::Vocab;
use crate::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub dims: Dims,
    pub use_context: bool,
    /// Greedy decoding stops after this many ops if EOS never wins.
    pub max_decode: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            dims: Dims::default(),
            use_context: true,
            max_decode: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub config: ModelConfig,
    pub vocab: Vocab,
    pub params: Params,
}

/// Greedy decoding result.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    /// Chosen candidate indices, EOS excluded.
    pub classes: Vec<usize>,
    /// Whether decoding stopped on EOS rather than the length cap.
    pub ended: bool,
    /// The distribution at each emitted step, including the EOS step.
    pub distributions: Vec<Vec<f64>>,
}

impl Prediction {
    pub fn ops(&self, prepared: &Prepared) -> Vec<PathOperation> {
        self.classes
            .iter()
            .map(|&i| prepared.candidates[i].path_op(&prepared.aug))
            .collect()
    }
}

/// Index of the largest entry; the first one on ties.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

pub fn layout_for(dims: Dims, vocab: &Vocab) -> Layout {
    Layout::new(
        dims,
        vocab.n_kinds(),
        vocab.n_indices(),
        vocab.n_subtokens(),
    )
}

impl Model {
    pub fn new(config: ModelConfig, vocab: Vocab, seed: u64) -> Self {
        let layout = layout_for(config.dims, &vocab);
        let params = Params::init(layout, &mut ChaCha8Rng::seed_from_u64(seed));
        Model {
            config,
            vocab,
            params,
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    pub fn features(&self, prepared: &Prepared) -> Features {
        Features::from_prepared(&self.vocab, prepared)
    }

    /// Prepares an example and extracts its features.
    pub fn featurize(&self, e: &Example) -> Result<(Prepared, Features), ModelError> {
        let p = e.prepare().map_err(|source| ModelError::Example {
            example: format!("{}/{}", e.meta.project, e.meta.pair),
            source,
        })?;
        let f = self.features(&p);
        Ok((p, f))
    }

    /// Teacher-forced loss without dropout.
    pub fn loss(&self, f: &Features) -> f64 {
        forward(&self.params, f, self.config.use_context, &Masks::default()).loss
    }

    pub fn predict(&self, f: &Features) -> Prediction {
        let p = &self.params;
        let e = encode(p, f, self.config.use_context, &Masks::default());
        let eos = f.eos();
        let mut hp = e.h0.clone();
        let mut cp = Array1::zeros(p.layout.dims.h);
        let mut input = p.vector(T::Start).to_owned();
        let mut out = Prediction {
            classes: Vec::new(),
            ended: false,
            distributions: Vec::new(),
        };
        while out.classes.len() < self.config.max_decode {
            let st = decode_step(p, &e, input.view(), hp.view(), cp.view());
            let k = argmax(&st.probs);
            out.distributions.push(st.probs.clone());
            if k == eos {
                out.ended = true;
                break;
            }
            out.classes.push(k);
            input = e.zop.row(k).to_owned();
            hp = st.cell_h();
            cp = st.cell_c();
        }
        out
    }
}
