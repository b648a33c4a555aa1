// SPDX-License-Identifier: Apache-2.0

use crate::params::{Layout, Params};

pub trait Optimizer {
    fn name(&self) -> &'static str;
    /// Moves `params` against `grads`.
    fn step(&mut self, params: &mut Params, grads: &Params);
}

pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(lr: f64, layout: &Layout) -> Self {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; layout.total],
            v: vec![0.0; layout.total],
            t: 0,
        }
    }
}

impl Optimizer for Adam {
    fn name(&self) -> &'static str {
        "adam"
    }

    fn step(&mut self, params: &mut Params, grads: &Params) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for i in 0..params.data.len() {
            let g = grads.data[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params.data[i] -= self.lr * mh / (vh.sqrt() + self.eps);
        }
    }
}

pub struct Sgd {
    lr: f64,
}

impl Optimizer for Sgd {
    fn name(&self) -> &'static str {
        "sgd"
    }

    fn step(&mut self, params: &mut Params, grads: &Params) {
        for (p, g) in params.data.iter_mut().zip(&grads.data) {
            *p -= self.lr * g;
        }
    }
}

type Builder = fn(f64, &Layout) -> Box<dyn Optimizer>;

/// Optimizers by name.
pub struct OptimizerRegistry {
    builders: Vec<(&'static str, Builder)>,
}

impl Default for OptimizerRegistry {
    fn default() -> Self {
        let mut r = OptimizerRegistry {
            builders: Vec::new(),
        };
        r.register("adam", |lr, layout| Box::new(Adam::new(lr, layout)));
        r.register("sgd", |lr, _| Box::new(Sgd { lr }));
        r
    }
}

impl OptimizerRegistry {
    pub fn register(&mut self, name: &'static str, build: Builder) {
        self.builders.retain(|(n, _)| *n != name);
        self.builders.push((name, build));
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.iter().map(|(n, _)| *n).collect()
    }

    pub fn build(&self, name: &str, lr: f64, layout: &Layout) -> Option<Box<dyn Optimizer>> {
        self.builders
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, b)| b(lr, layout))
    }
}
