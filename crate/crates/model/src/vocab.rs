// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet, HashMap};

use editpath_core::ast::{split_subtokens, Ast};
use editpath_core::dataset::Example;
use editpath_core::paths::{DEL_NODE, INS_NODE, PLACEHOLDER, UPD_NODE};
use serde::{Deserialize, Serialize};

use crate::ModelError;

pub const PAD: &str = "<pad>";
pub const UNK: &str = "<unk>";

/// Largest child index with its own embedding row; larger indices share it.
pub const MAX_CHILD_INDEX: usize = 31;

/// Token tables. Lookups never fail: unknown kinds and subtokens map to
/// the UNK row, child indices are clamped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "VocabData", into = "VocabData")]
pub struct Vocab {
    pub kinds: Vec<String>,
    pub max_child_index: usize,
    pub subtokens: Vec<String>,
    kind_ids: HashMap<String, usize>,
    subtoken_ids: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct VocabData {
    kinds: Vec<String>,
    max_child_index: usize,
    subtokens: Vec<String>,
}

impl From<VocabData> for Vocab {
    fn from(d: VocabData) -> Self {
        Vocab::new(d.kinds, d.max_child_index, d.subtokens)
    }
}

impl From<Vocab> for VocabData {
    fn from(v: Vocab) -> Self {
        VocabData {
            kinds: v.kinds,
            max_child_index: v.max_child_index,
            subtokens: v.subtokens,
        }
    }
}

fn index_of(v: &[String]) -> HashMap<String, usize> {
    v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
}

impl Vocab {
    pub fn new(kinds: Vec<String>, max_child_index: usize, subtokens: Vec<String>) -> Self {
        Vocab {
            kind_ids: index_of(&kinds),
            subtoken_ids: index_of(&subtokens),
            kinds,
            max_child_index,
            subtokens,
        }
    }

    pub fn kind_id(&self, kind: &str) -> usize {
        self.kind_ids.get(kind).copied().unwrap_or(1)
    }

    pub fn index_id(&self, child_index: usize) -> usize {
        child_index.min(self.max_child_index)
    }

    pub fn subtoken_id(&self, s: &str) -> usize {
        self.subtoken_ids.get(s).copied().unwrap_or(1)
    }

    /// Subtoken rows of a value; None for the empty value.
    pub fn value_ids(&self, value: &str) -> Option<Vec<usize>> {
        let subs = split_subtokens(value).ok()?;
        Some(subs.iter().map(|s| self.subtoken_id(s)).collect())
    }

    pub fn n_kinds(&self) -> usize {
        self.kinds.len()
    }

    pub fn n_indices(&self) -> usize {
        self.max_child_index + 1
    }

    pub fn n_subtokens(&self) -> usize {
        self.subtokens.len()
    }
}

fn collect(t: &Ast, kinds: &mut BTreeSet<String>, counts: &mut BTreeMap<String, usize>) {
    for n in t.nodes() {
        kinds.insert(n.kind.clone());
        if let Some(v) = &n.value {
            for s in split_subtokens(v).unwrap_or_default() {
                *counts.entry(s).or_default() += 1;
            }
        }
    }
}

/// Kinds and subtokens seen in the fragment and context trees of the
/// training set. Subtokens seen fewer than `min_frequency` times are left
/// out (and so read as UNK).
pub fn build_vocab(train: &[Example], min_frequency: usize) -> Result<Vocab, ModelError> {
    if train.is_empty() {
        return Err(ModelError::Invalid(
            "cannot build a vocabulary from no examples".into(),
        ));
    }
    let mut kinds = BTreeSet::new();
    let mut counts = BTreeMap::new();
    for e in train {
        collect(&e.p_before, &mut kinds, &mut counts);
        collect(&e.c_before, &mut kinds, &mut counts);
        collect(&e.c_after, &mut kinds, &mut counts);
    }
    let mut all_kinds: Vec<String> = [PAD, UNK, PLACEHOLDER, DEL_NODE, UPD_NODE, INS_NODE]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in kinds {
        if !all_kinds.contains(&k) {
            all_kinds.push(k);
        }
    }
    let mut subtokens = vec![PAD.to_string(), UNK.to_string()];
    subtokens.extend(
        counts
            .into_iter()
            .filter(|(_, n)| *n >= min_frequency.max(1))
            .map(|(s, _)| s),
    );
    Ok(Vocab::new(all_kinds, MAX_CHILD_INDEX, subtokens))
}
