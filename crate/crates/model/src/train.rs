// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use editpath_core::dataset::Example;

use crate::features::Features;
use crate::net::{backward, forward, Masks};
use crate::optim::OptimizerRegistry;
use crate::params::{Dims, Params};
use crate::predict::{Model, ModelConfig};
use crate::vocab::build_vocab;
use crate::ModelError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub dims: Dims,
    pub learning_rate: f64,
    pub dropout: f64,
    pub batch_size: usize,
    pub max_steps: usize,
    pub seed: u64,
    /// Gold previous ops are fed to the decoder during training. Only
    /// `true` is supported.
    pub teacher_forcing: bool,
    pub use_context: bool,
    pub optimizer: String,
    /// Validation exact match is measured every this many steps.
    pub eval_every: usize,
    /// Evaluations without improvement before stopping.
    pub patience: usize,
    /// Stop as soon as validation exact match reaches this value.
    pub target_accuracy: Option<f64>,
    pub min_frequency: usize,
    pub max_decode: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dims: Dims::default(),
            learning_rate: 1e-3,
            dropout: 0.25,
            batch_size: 32,
            max_steps: 5000,
            seed: 0,
            teacher_forcing: true,
            use_context: true,
            optimizer: "adam".into(),
            eval_every: 50,
            patience: 20,
            target_accuracy: None,
            min_frequency: 1,
            max_decode: 16,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Invalid(m.into()));
        if !(0.0..1.0).contains(&self.dropout) {
            return bad("dropout must be in [0, 1)");
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be finite and non-negative");
        }
        if self.batch_size == 0 || self.eval_every == 0 {
            return bad("batch size and evaluation interval must be positive");
        }
        if self.dims.d == 0 || self.dims.h == 0 {
            return bad("dimensions must be positive");
        }
        if !self.teacher_forcing {
            return bad("training without teacher forcing is not supported");
        }
        Ok(())
    }
}

/// One line of the metrics log.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricLine {
    pub step: usize,
    /// Mean training loss over the step's batch.
    pub loss: f64,
    /// Most recent validation exact match.
    pub val_acc: f64,
}

impl fmt::Display for MetricLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} loss={:.9} val_acc={:.6}",
            self.step, self.loss, self.val_acc
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxSteps,
    Target,
    Patience,
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    pub log: Vec<MetricLine>,
    pub best_step: usize,
    pub best_val_acc: f64,
    pub steps: usize,
    pub stopped: StopReason,
}

/// Exact match of greedy predictions against the gold sequences.
pub fn accuracy(model: &Model, data: &[Features]) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let hits = data
        .iter()
        .filter(|f| {
            let p = model.predict(f);
            p.ended && p.classes == f.gold
        })
        .count();
    hits as f64 / data.len() as f64
}

fn featurize(model: &Model, data: &[Example]) -> Result<Vec<Features>, ModelError> {
    data.iter()
        .map(|e| model.featurize(e).map(|(_, f)| f))
        .collect()
}

/// Trains on `train_set`, early-stopping on `validation` exact match, and
/// returns the parameters of the best evaluation. `on_line` sees every
/// metrics line as it is produced.
pub fn train(
    train_set: &[Example],
    validation: &[Example],
    cfg: &TrainConfig,
    on_line: &mut dyn FnMut(&MetricLine),
) -> Result<(Model, TrainReport), ModelError> {
    cfg.validate()?;
    if train_set.is_empty() || validation.is_empty() {
        return Err(ModelError::Invalid(
            "training and validation sets must be non-empty".into(),
        ));
    }
    let vocab = build_vocab(train_set, cfg.min_frequency)?;
    let mc = ModelConfig {
        dims: cfg.dims,
        use_context: cfg.use_context,
        max_decode: cfg.max_decode,
    };
    let mut model = Model::new(mc, vocab, cfg.seed);
    let tr = featurize(&model, train_set)?;
    let va = featurize(&model, validation)?;
    let mut optim = OptimizerRegistry::default()
        .build(&cfg.optimizer, cfg.learning_rate, &model.params.layout)
        .ok_or_else(|| ModelError::Invalid(format!("unknown optimizer `{}`", cfg.optimizer)))?;
    let mut order_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0001);
    let mut drop_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0002);
    let h = cfg.dims.h;

    let mut val_acc = accuracy(&model, &va);
    let mut best = (0, val_acc, model.params.clone());
    let mut since_best = 0;
    let mut log = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    let mut cursor = 0;
    let mut grads = Params::zeros(model.params.layout.clone());
    let mut stopped = StopReason::MaxSteps;
    let mut steps = 0;
    if cfg.target_accuracy.is_some_and(|t| val_acc >= t) {
        stopped = StopReason::Target;
    }
    while stopped == StopReason::MaxSteps && steps < cfg.max_steps {
        steps += 1;
        grads.fill(0.0);
        let b = cfg.batch_size.min(tr.len());
        let mut loss = 0.0;
        for _ in 0..b {
            if cursor == order.len() {
                order = (0..tr.len()).collect();
                order.shuffle(&mut order_rng);
                cursor = 0;
            }
            let f = &tr[order[cursor]];
            cursor += 1;
            let masks = Masks::sample(
                &mut drop_rng,
                cfg.dropout,
                f.n_context(),
                f.gold.len() + 1,
                h,
            );
            let fw = forward(&model.params, f, cfg.use_context, &masks);
            if !fw.loss.is_finite() {
                return Err(ModelError::Divergence {
                    step: steps,
                    loss: fw.loss,
                });
            }
            loss += fw.loss / b as f64;
            backward(&model.params, f, &fw, &masks, 1.0 / b as f64, &mut grads);
        }
        optim.step(&mut model.params, &grads);
        if !model.params.is_finite() {
            return Err(ModelError::Divergence { step: steps, loss });
        }
        if steps % cfg.eval_every == 0 || steps == cfg.max_steps {
            val_acc = accuracy(&model, &va);
            // ties move the snapshot forward but do not reset patience
            if val_acc > best.1 {
                since_best = 0;
            } else {
                since_best += 1;
            }
            if val_acc >= best.1 {
                best = (steps, val_acc, model.params.clone());
            }
            if cfg.target_accuracy.is_some_and(|t| val_acc >= t) {
                stopped = StopReason::Target;
            } else if since_best >= cfg.patience {
                stopped = StopReason::Patience;
            }
        }
        let line = MetricLine {
            step: steps,
            loss,
            val_acc,
        };
        on_line(&line);
        log.push(line);
    }
    let (best_step, best_val_acc, params) = best;
    model.params = params;
    Ok((
        model,
        TrainReport {
            log,
            best_step,
            best_val_acc,
            steps,
            stopped,
        },
    ))
}
