// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DatasetError, Example, Split};

/// Project-level assignment to train, validation and test.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitSpec {
    pub assignment: BTreeMap<String, Split>,
}

impl SplitSpec {
    pub fn get(&self, project: &str) -> Option<Split> {
        self.assignment.get(project).copied()
    }

    pub fn projects(&self, split: Split) -> Vec<&str> {
        self.assignment
            .iter()
            .filter(|(_, s)| **s == split)
            .map(|(p, _)| p.as_str())
            .collect()
    }

    /// Stamps every example with its project's split.
    pub fn apply(&self, examples: &mut [Example]) {
        for e in examples {
            e.meta.split = self.get(&e.meta.project);
        }
    }
}

/// Assigns whole projects to splits so that each split's share of examples
/// approximates `fractions` (train, validation, test). Every split with a
/// positive fraction receives at least one project.
pub fn split_by_project(
    examples: &[Example],
    fractions: [f64; 3],
    seed: u64,
) -> Result<SplitSpec, DatasetError> {
    if fractions.iter().any(|f| !f.is_finite() || *f < 0.0) || fractions.iter().sum::<f64>() <= 0.0
    {
        return Err(DatasetError::Invalid(format!(
            "bad split fractions {fractions:?}"
        )));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for e in examples {
        *counts.entry(e.meta.project.as_str()).or_default() += 1;
    }
    let needed = fractions.iter().filter(|f| **f > 0.0).count();
    if counts.len() < needed {
        return Err(DatasetError::Invalid(format!(
            "need at least {needed} projects to split, found {}",
            counts.len()
        )));
    }
    let mut projects: Vec<(&str, usize)> = counts.into_iter().collect();
    projects.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let total: f64 = examples.len() as f64;
    let sum: f64 = fractions.iter().sum();
    let target: Vec<f64> = fractions.iter().map(|f| f / sum * total).collect();
    let mut mass = [0.0f64; 3];
    let mut spec = SplitSpec::default();
    let mut rest = projects.into_iter();
    for (i, split) in Split::ALL.iter().enumerate() {
        if fractions[i] > 0.0 {
            let (p, n) = rest.next().expect("one project per used split");
            spec.assignment.insert(p.to_string(), *split);
            mass[i] += n as f64;
        }
    }
    for (p, n) in rest {
        let i = (0..3)
            .filter(|&i| fractions[i] > 0.0)
            .max_by(|&a, &b| {
                (target[a] - mass[a])
                    .total_cmp(&(target[b] - mass[b]))
                    .then(b.cmp(&a))
            })
            .expect("some positive fraction");
        spec.assignment.insert(p.to_string(), Split::ALL[i]);
        mass[i] += n as f64;
    }
    Ok(spec)
}
