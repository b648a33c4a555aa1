// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use editpath_core::dataset::synth::{synthesize, FamilyRegistry, NamePool};
use editpath_core::dataset::{filter_example, Example, FilterConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Kept examples of the learnable families, round-robin.
pub fn examples(seed: u64, n: usize) -> Vec<Example> {
    examples_of(
        &FamilyRegistry::default().names()[..5],
        seed,
        n,
        &NamePool::train(),
    )
}

pub fn examples_of(families: &[&str], seed: u64, n: usize, pool: &NamePool) -> Vec<Example> {
    let reg = FamilyRegistry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = FilterConfig::default();
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < n {
        let f = reg.get(families[k % families.len()]).unwrap();
        k += 1;
        let e = synthesize(f, 1, 1, pool, &mut rng).unwrap().pop().unwrap();
        if filter_example(&e, &cfg).is_none() {
            out.push(e);
        }
    }
    out
}

/// An example from four demo-language sources; scripts are diffed.
pub fn example_from(p_before: &str, p_after: &str, c_before: &str, c_after: &str) -> Example {
    use editpath_core::ast::parse_toy;
    use editpath_core::dataset::ExampleMeta;
    use editpath_core::diff::diff;
    let (pb, pa) = (parse_toy(p_before).unwrap(), parse_toy(p_after).unwrap());
    let (cb, ca) = (parse_toy(c_before).unwrap(), parse_toy(c_after).unwrap());
    Example {
        meta: ExampleMeta {
            project: "p".into(),
            pair: "x".into(),
            ..ExampleMeta::default()
        },
        gold_script: diff(&pb, &pa),
        context_script: diff(&cb, &ca),
        p_before: pb,
        p_after: pa,
        c_before: cb,
        c_after: ca,
    }
}

/// Every parameter drawn from U(-scale, scale).
pub fn random_params(
    layout: editpath_model::params::Layout,
    seed: u64,
    scale: f64,
) -> editpath_model::Params {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = editpath_model::Params::zeros(layout);
    for x in &mut p.data {
        *x = rng.gen_range(-scale..scale);
    }
    p
}

fn sig(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Scalar-loop LSTM over `xs` from zero state. `w` has `4h` rows laid out
/// as gates `[i f g o]` and columns `[x | h]`. Returns every hidden state
/// and the last cell.
pub fn lstm_oracle(
    w: &ndarray::Array2<f64>,
    b: &[f64],
    xs: &[Vec<f64>],
    h0: &[f64],
    c0: &[f64],
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let h = b.len() / 4;
    let mut hs = h0.to_vec();
    let mut cs = c0.to_vec();
    let mut out = Vec::new();
    for x in xs {
        let nin = x.len();
        let mut a = vec![0.0; 4 * h];
        for r in 0..4 * h {
            let mut acc = b[r];
            for k in 0..nin {
                acc += w[[r, k]] * x[k];
            }
            for k in 0..h {
                acc += w[[r, nin + k]] * hs[k];
            }
            a[r] = acc;
        }
        let mut nh = vec![0.0; h];
        for k in 0..h {
            let i = sig(a[k]);
            let f = sig(a[h + k]);
            let g = a[2 * h + k].tanh();
            let o = sig(a[3 * h + k]);
            cs[k] = f * cs[k] + i * g;
            nh[k] = o * cs[k].tanh();
        }
        hs = nh;
        out.push(hs.clone());
    }
    (out, cs)
}
