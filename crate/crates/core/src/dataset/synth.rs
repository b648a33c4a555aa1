// SPDX-License-Identifier: Apache-2.0

//! Templated edit families over the demo language. Each instance pairs an
//! edit of the surrounding code with a structurally identical edit of the
//! fragment, so the context shows what the fragment's edit should be.
//!
//! Families are trait objects in a [`FamilyRegistry`] and are looked up by
//! name. Besides the learnable families there are probes that each trip one
//! filter rule.

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::filter::DropReason;
use super::ingest::{ingest_pair, Span, DEFAULT_RADIUS};
use super::{DatasetError, Example, ExampleMeta};

/// Identifier source. The train and held-out pools share no subtokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamePool {
    words: Vec<&'static str>,
}

const TRAIN_WORDS: &[&str] = &[
    "get", "set", "value", "item", "count", "list", "node", "data", "user", "file", "name",
    "index", "result", "buffer", "config", "total", "key", "map", "size", "text",
];

const HELD_OUT_WORDS: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "zeta", "theta", "lambda", "rho",
    "tau", "iota", "upsilon", "chi", "psi",
];

impl NamePool {
    pub fn train() -> Self {
        NamePool {
            words: TRAIN_WORDS.to_vec(),
        }
    }

    pub fn held_out() -> Self {
        NamePool {
            words: HELD_OUT_WORDS.to_vec(),
        }
    }

    pub fn words(&self) -> &[&'static str] {
        &self.words
    }

    /// A camelCase identifier of one or two words.
    pub fn name(&self, rng: &mut ChaCha8Rng) -> String {
        let first = self.words.choose(rng).unwrap().to_string();
        if rng.gen_bool(0.5) {
            let second = self.words.choose(rng).unwrap();
            let mut cs = second.chars();
            let head = cs.next().unwrap().to_ascii_uppercase();
            format!("{first}{head}{}", cs.as_str())
        } else {
            first
        }
    }

    /// `k` pairwise distinct identifiers.
    pub fn distinct(&self, rng: &mut ChaCha8Rng, k: usize) -> Vec<String> {
        let mut out: Vec<String> = Vec::with_capacity(k);
        while out.len() < k {
            let n = self.name(rng);
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }
}

/// Source lines of one instance, one statement per line. The context lines
/// precede the fragment in the generated file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instance {
    pub context_before: Vec<String>,
    pub context_after: Vec<String>,
    pub fragment_before: Vec<String>,
    pub fragment_after: Vec<String>,
}

pub trait EditFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// The filter rule every instance should trip, or None if instances are
    /// kept.
    fn expected_drop(&self) -> Option<DropReason>;
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance;
}

fn call(f: &str, args: &[String]) -> String {
    format!("{f}({});", args.join(", "))
}

struct SwapArgs;

impl EditFamily for SwapArgs {
    fn name(&self) -> &'static str {
        "swap-args"
    }
    fn description(&self) -> &'static str {
        "swap two arguments of a call, as already done to another call of the same function"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        None
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let n = rng.gen_range(2..=3);
        let i = rng.gen_range(0..n - 1);
        let v = names.distinct(rng, 1 + 2 * n);
        let (f, ctx, frag) = (&v[0], &v[1..=n], &v[n + 1..]);
        let swapped = |a: &[String]| {
            let mut a = a.to_vec();
            a.swap(i, i + 1);
            a
        };
        Instance {
            context_before: vec![call(f, ctx)],
            context_after: vec![call(f, &swapped(ctx))],
            fragment_before: vec![call(f, frag)],
            fragment_after: vec![call(f, &swapped(frag))],
        }
    }
}

struct AddArg;

impl EditFamily for AddArg {
    fn name(&self) -> &'static str {
        "add-arg"
    }
    fn description(&self) -> &'static str {
        "append the argument that the context appended to the same function"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        None
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 4);
        let extra = if rng.gen_bool(0.5) {
            v[3].clone()
        } else {
            rng.gen_range(0..10).to_string()
        };
        let with = |a: &str| vec![a.to_string(), extra.clone()];
        Instance {
            context_before: vec![call(&v[0], &[v[1].clone()])],
            context_after: vec![call(&v[0], &with(&v[1]))],
            fragment_before: vec![call(&v[0], &[v[2].clone()])],
            fragment_after: vec![call(&v[0], &with(&v[2]))],
        }
    }
}

struct FoldWhere;

impl EditFamily for FoldWhere {
    fn name(&self) -> &'static str {
        "fold-where"
    }
    fn description(&self) -> &'static str {
        "fold a filtering call into the call that consumes it: s.where(p).first() becomes s.first(p)"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        None
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 6);
        let before = |r: &str, s: &str, p: &str| format!("{r} = {s}.where({p}).first();");
        let after = |r: &str, s: &str, p: &str| format!("{r} = {s}.first({p});");
        Instance {
            context_before: vec![before(&v[0], &v[1], &v[2])],
            context_after: vec![after(&v[0], &v[1], &v[2])],
            fragment_before: vec![before(&v[3], &v[4], &v[5])],
            fragment_after: vec![after(&v[3], &v[4], &v[5])],
        }
    }
}

struct RenameSwap;

impl EditFamily for RenameSwap {
    fn name(&self) -> &'static str {
        "rename-swap"
    }
    fn description(&self) -> &'static str {
        "the context renames a function; the fragment renames it and swaps its two arguments"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        None
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 5);
        let (old, new) = (&v[0], &v[1]);
        Instance {
            context_before: vec![call(old, &[v[2].clone()])],
            context_after: vec![call(new, &[v[2].clone()])],
            fragment_before: vec![call(old, &[v[3].clone(), v[4].clone()])],
            fragment_after: vec![call(new, &[v[4].clone(), v[3].clone()])],
        }
    }
}

struct UnwrapCall;

impl EditFamily for UnwrapCall {
    fn name(&self) -> &'static str {
        "unwrap-call"
    }
    fn description(&self) -> &'static str {
        "drop a wrapping call around an assigned value, as the context did"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        None
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 5);
        let w = &v[0];
        Instance {
            context_before: vec![format!("{} = {w}({});", v[1], v[2])],
            context_after: vec![format!("{} = {};", v[1], v[2])],
            fragment_before: vec![format!("{} = {w}({});", v[3], v[4])],
            fragment_after: vec![format!("{} = {};", v[3], v[4])],
        }
    }
}

struct DeleteOnly;

impl EditFamily for DeleteOnly {
    fn name(&self) -> &'static str {
        "delete-only"
    }
    fn description(&self) -> &'static str {
        "probe: the fragment only loses a statement"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        Some(DropReason::DeleteOnly)
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 5);
        let keep = call(&v[0], &[v[1].clone()]);
        Instance {
            context_before: vec![call(&v[2], &[v[3].clone()])],
            context_after: vec![call(&v[2], &[v[4].clone()])],
            fragment_before: vec![keep.clone(), format!("{} = {};", v[1], v[3])],
            fragment_after: vec![keep],
        }
    }
}

struct RenameOnly;

impl EditFamily for RenameOnly {
    fn name(&self) -> &'static str {
        "rename-only"
    }
    fn description(&self) -> &'static str {
        "probe: the fragment repeats a rename already made in the context"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        Some(DropReason::Rename)
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 4);
        Instance {
            context_before: vec![call(&v[0], &[v[2].clone()])],
            context_after: vec![call(&v[1], &[v[2].clone()])],
            fragment_before: vec![call(&v[0], &[v[3].clone()])],
            fragment_after: vec![call(&v[1], &[v[3].clone()])],
        }
    }
}

struct Oversize;

impl EditFamily for Oversize {
    fn name(&self) -> &'static str {
        "oversize"
    }
    fn description(&self) -> &'static str {
        "probe: an argument swap inside a call too large to keep"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        Some(DropReason::Size)
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let f = names.name(rng);
        // 5 + 2 * 24 = 53 nodes
        let args: Vec<String> = (0..24).map(|i| format!("{}{i}", names.name(rng))).collect();
        let mut swapped = args.clone();
        swapped.swap(0, 1);
        Instance {
            context_before: vec![call(&f, &args[..2])],
            context_after: vec![call(&f, &[args[1].clone(), args[0].clone()])],
            fragment_before: vec![call(&f, &args)],
            fragment_after: vec![call(&f, &swapped)],
        }
    }
}

struct FreshInsert;

impl EditFamily for FreshInsert {
    fn name(&self) -> &'static str {
        "fresh-insert"
    }
    fn description(&self) -> &'static str {
        "probe: the fragment gains an argument seen nowhere else"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        Some(DropReason::Unrepresentable)
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 4);
        let ctx = call(&v[2], &[v[1].clone()]);
        Instance {
            context_before: vec![ctx.clone()],
            context_after: vec![ctx],
            fragment_before: vec![call(&v[0], &[v[1].clone()])],
            fragment_after: vec![call(&v[0], &[v[1].clone(), format!("{}Fresh", v[3])])],
        }
    }
}

struct Unchanged;

impl EditFamily for Unchanged {
    fn name(&self) -> &'static str {
        "empty"
    }
    fn description(&self) -> &'static str {
        "probe: the context changes but the fragment does not"
    }
    fn expected_drop(&self) -> Option<DropReason> {
        Some(DropReason::Empty)
    }
    fn instance(&self, rng: &mut ChaCha8Rng, names: &NamePool) -> Instance {
        let v = names.distinct(rng, 5);
        let frag = call(&v[3], &[v[4].clone()]);
        Instance {
            context_before: vec![call(&v[0], &[v[1].clone(), v[2].clone()])],
            context_after: vec![call(&v[0], &[v[2].clone(), v[1].clone()])],
            fragment_before: vec![frag.clone()],
            fragment_after: vec![frag],
        }
    }
}

/// Families by name, in registration order.
pub struct FamilyRegistry {
    families: Vec<Box<dyn EditFamily>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut r = FamilyRegistry::empty();
        r.register(Box::new(SwapArgs));
        r.register(Box::new(AddArg));
        r.register(Box::new(FoldWhere));
        r.register(Box::new(RenameSwap));
        r.register(Box::new(UnwrapCall));
        r.register(Box::new(DeleteOnly));
        r.register(Box::new(RenameOnly));
        r.register(Box::new(Oversize));
        r.register(Box::new(FreshInsert));
        r.register(Box::new(Unchanged));
        r
    }
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            families: Vec::new(),
        }
    }

    /// Replaces any family registered under the same name.
    pub fn register(&mut self, family: Box<dyn EditFamily>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn EditFamily> {
        self.families
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    /// Families whose instances survive filtering.
    pub fn learnable(&self) -> Vec<&dyn EditFamily> {
        self.families
            .iter()
            .filter(|f| f.expected_drop().is_none())
            .map(|f| f.as_ref())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn EditFamily> {
        self.families.iter().map(|f| f.as_ref())
    }
}

fn filler(rng: &mut ChaCha8Rng, names: &NamePool) -> String {
    let v = names.distinct(rng, 2);
    if rng.gen_bool(0.5) {
        format!("{} = {};", v[0], v[1])
    } else {
        call(&v[0], &[v[1].clone()])
    }
}

/// Lays an instance out as a before/after file pair: a few unchanged
/// statements, the context, the fragment, a few more unchanged statements.
/// Everything lies within [`DEFAULT_RADIUS`] lines of the fragment.
pub fn generate_pair(
    instance: &Instance,
    rng: &mut ChaCha8Rng,
    names: &NamePool,
) -> (String, String, Span) {
    let above: Vec<String> = (0..rng.gen_range(0..=2))
        .map(|_| filler(rng, names))
        .collect();
    let middle: Vec<String> = (0..rng.gen_range(0..=1))
        .map(|_| filler(rng, names))
        .collect();
    let below: Vec<String> = (0..rng.gen_range(0..=2))
        .map(|_| filler(rng, names))
        .collect();
    let layout = |ctx: &[String], frag: &[String]| {
        let start = above.len() + ctx.len() + middle.len() + 1;
        let file: Vec<&String> = above
            .iter()
            .chain(ctx)
            .chain(&middle)
            .chain(frag)
            .chain(&below)
            .collect();
        let mut text = String::new();
        for l in file {
            text.push_str(l);
            text.push('\n');
        }
        (text, (start, start + frag.len() - 1))
    };
    let (before, rb) = layout(&instance.context_before, &instance.fragment_before);
    let (after, ra) = layout(&instance.context_after, &instance.fragment_after);
    (
        before,
        after,
        Span {
            before: rb,
            after: ra,
        },
    )
}

/// One generated pair on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub project: String,
    pub pair: String,
    pub family: &'static str,
}

/// Writes `<dir>/<project>/<pair>/{before.toy, after.toy, span.txt}` for
/// `count` instances of each family, spread round-robin over `projects`
/// projects.
pub fn write_corpus(
    dir: &Path,
    plan: &[(&dyn EditFamily, usize)],
    projects: usize,
    names: &NamePool,
    rng: &mut ChaCha8Rng,
) -> io::Result<Vec<CorpusEntry>> {
    let projects = projects.max(1);
    let mut out = Vec::new();
    let mut k = 0;
    for (family, count) in plan {
        for _ in 0..*count {
            let inst = family.instance(rng, names);
            let (before, after, span) = generate_pair(&inst, rng, names);
            let project = format!("project{:02}", k % projects);
            let pair = format!("pair{k:05}");
            let pdir = dir.join(&project).join(&pair);
            fs::create_dir_all(&pdir)?;
            fs::write(pdir.join("before.toy"), before)?;
            fs::write(pdir.join("after.toy"), after)?;
            fs::write(pdir.join("span.txt"), format!("{span}\n"))?;
            out.push(CorpusEntry {
                project,
                pair,
                family: family.name(),
            });
            k += 1;
        }
    }
    Ok(out)
}

/// `n` unfiltered examples of one family, built in memory. Projects are
/// named `<family>-<i mod projects>`.
pub fn synthesize(
    family: &dyn EditFamily,
    n: usize,
    projects: usize,
    names: &NamePool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Example>, DatasetError> {
    (0..n)
        .map(|i| {
            let inst = family.instance(rng, names);
            let (before, after, span) = generate_pair(&inst, rng, names);
            let mut e = ingest_pair(&before, &after, span, DEFAULT_RADIUS)?;
            e.meta = ExampleMeta {
                project: format!("{}-{}", family.name(), i % projects.max(1)),
                pair: format!("pair{i:05}"),
                file: "before.toy".into(),
                split: None,
            };
            Ok(e)
        })
        .collect()
}
