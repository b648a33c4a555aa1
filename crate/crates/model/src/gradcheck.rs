// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::features::Features;
use crate::net::{backward, forward, Masks};
use crate::params::{Params, T};

/// Gradients smaller than this are compared absolutely rather than
/// relatively.
pub const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct GradCheck {
    pub max_relative_error: f64,
    /// `(tensor, flat index, analytic, numeric)` per sampled coordinate.
    pub coords: Vec<(&'static str, usize, f64, f64)>,
}

pub fn relative_error(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(RELATIVE_FLOOR)
}

/// Compares the analytic gradient of the loss on `f` with central
/// differences at `samples` coordinates, cycling through the tensors and
/// picking a random coordinate in each. Dropout is off.
pub fn grad_check(
    params: &Params,
    f: &Features,
    use_context: bool,
    eps: f64,
    samples: usize,
    seed: u64,
) -> GradCheck {
    grad_check_on(params, f, use_context, eps, samples, seed, &T::ALL)
}

/// As [`grad_check`], sampling only from `tensors`.
pub fn grad_check_on(
    params: &Params,
    f: &Features,
    use_context: bool,
    eps: f64,
    samples: usize,
    seed: u64,
    tensors: &[T],
) -> GradCheck {
    let masks = Masks::default();
    let fw = forward(params, f, use_context, &masks);
    let mut g = Params::zeros(params.layout.clone());
    backward(params, f, &fw, &masks, 1.0, &mut g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = params.clone();
    let mut coords = Vec::with_capacity(samples);
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let t = tensors[k % tensors.len()];
        let e = params.layout.entry(t);
        let i = e.offset + rng.gen_range(0..e.rows * e.cols);
        let orig = p.data[i];
        p.data[i] = orig + eps;
        let up = forward(&p, f, use_context, &masks).loss;
        p.data[i] = orig - eps;
        let down = forward(&p, f, use_context, &masks).loss;
        p.data[i] = orig;
        let numeric = (up - down) / (2.0 * eps);
        worst = worst.max(relative_error(g.data[i], numeric));
        coords.push((t.name(), i, g.data[i], numeric));
    }
    GradCheck {
        max_relative_error: worst,
        coords,
    }
}
