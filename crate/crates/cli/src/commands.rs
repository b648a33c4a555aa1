// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use editpath_core::ast::{parse_interchange, parse_toy, pretty_print, serialize_interchange, Ast};
use editpath_core::dataset::synth::{write_corpus, EditFamily, FamilyRegistry, NamePool};
use editpath_core::dataset::{
    compute_stats, exact_match_accuracy, ingest_corpus, read_records, split_by_project,
    write_records, Example, FilterConfig, Split,
};
use editpath_core::diff::{apply_script, diff, parse_script, serialize_script};
use editpath_core::paths::{
    apply_path_ops, augment, format_listing, parse_listing, script_to_path_ops, ContextEdit,
    Encoding,
};
use editpath_model::{
    load_checkpoint, save_checkpoint, train, Dims, Model, StopReason, TrainConfig,
};

use crate::args::{DiffFormat, Emit, ScriptFormat, Syntax, TrainArgs};
use crate::error::{CliError, CliResult, DataContext};

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).data(format!("cannot read {}", path.display()))
}

fn resolve(syntax: Syntax, path: &Path) -> Syntax {
    match syntax {
        Syntax::Auto => match path.extension().and_then(|e| e.to_str()) {
            Some("sexp" | "sexpr") => Syntax::Sexpr,
            _ => Syntax::Toy,
        },
        s => s,
    }
}

fn read_tree(path: &Path, syntax: Syntax) -> CliResult<(Ast, Syntax)> {
    let text = read_text(path)?;
    let syntax = resolve(syntax, path);
    let ast = match syntax {
        Syntax::Sexpr => parse_interchange(&text, None),
        _ => parse_toy(&text),
    }
    .data(path.display())?;
    Ok((ast, syntax))
}

fn render(ast: &Ast, syntax: Syntax) -> String {
    let text = match syntax {
        Syntax::Sexpr => None,
        _ => pretty_print(ast).ok(),
    };
    match text {
        Some(t) if t.ends_with('\n') || t.is_empty() => t,
        Some(t) => t + "\n",
        None => serialize_interchange(ast) + "\n",
    }
}

pub fn diff_cmd(
    before: &Path,
    after: &Path,
    format: DiffFormat,
    syntax: Syntax,
) -> CliResult<String> {
    let (a, _) = read_tree(before, syntax)?;
    let (b, _) = read_tree(after, syntax)?;
    let script = diff(&a, &b);
    match format {
        DiffFormat::Ops => Ok(serialize_script(&script)),
        DiffFormat::Paths => {
            let ctx = ContextEdit {
                before: &a,
                script: &script,
            };
            let aug = augment(&a, Some(ctx)).data("cannot augment the before tree")?;
            let ops = script_to_path_ops(&aug, &script, Encoding::Target)
                .data("the edit has no path form")?;
            Ok(format_listing(&aug, &ops))
        }
    }
}

fn looks_like_listing(text: &str) -> bool {
    text.lines().map(str::trim).any(|l| {
        l.starts_with("upd ")
            || l.starts_with("ins ")
            || l.rsplit_once(" @ ")
                .is_some_and(|(_, ids)| ids.contains(','))
    })
}

pub fn apply_cmd(
    before: &Path,
    script: &Path,
    format: ScriptFormat,
    syntax: Syntax,
) -> CliResult<String> {
    let (a, syntax) = read_tree(before, syntax)?;
    let text = read_text(script)?;
    let paths = match format {
        ScriptFormat::Auto => looks_like_listing(&text),
        f => f == ScriptFormat::Paths,
    };
    let out = if paths {
        let (aug, ops) = parse_listing(&a, &text).data(script.display())?;
        apply_path_ops(&aug, &ops).data("cannot apply the listing")?
    } else {
        let s = parse_script(&text).data(script.display())?;
        apply_script(&a, &s).data("cannot apply the script")?
    };
    Ok(render(&out, syntax))
}

pub fn ingest_cmd(
    corpus: &Path,
    out: &Path,
    radius: usize,
    max_nodes: usize,
    split: &[f64],
    seed: u64,
) -> CliResult<String> {
    let fractions: [f64; 3] = split
        .try_into()
        .map_err(|_| CliError::usage("--split takes three fractions"))?;
    let report = ingest_corpus(corpus, radius, &FilterConfig { max_nodes })
        .data(format!("cannot ingest {}", corpus.display()))?;
    let mut kept = report.kept.clone();
    if !kept.is_empty() {
        match split_by_project(&kept, fractions, seed) {
            Ok(spec) => spec.apply(&mut kept),
            Err(e) => eprintln!("warning: examples left unassigned: {e}"),
        }
    }
    fs::write(
        out,
        write_records(&kept).data("cannot serialize the dataset")?,
    )
    .data(format!("cannot write {}", out.display()))?;
    for (id, msg) in &report.failures {
        eprintln!("warning: {id}: {msg}");
    }
    let mut s = String::new();
    let pairs = report.kept.len() + report.dropped.len();
    let _ = writeln!(s, "examples={pairs}");
    let _ = writeln!(s, "kept={}", kept.len());
    let _ = writeln!(s, "dropped={}", report.dropped.len());
    for (reason, n) in report.drop_counts() {
        let _ = writeln!(s, "dropped.{}={n}", reason.as_str());
    }
    let _ = writeln!(s, "failures={}", report.failures.len());
    for split in Split::ALL {
        let n = kept.iter().filter(|e| e.meta.split == Some(split)).count();
        let _ = writeln!(s, "split.{split}={n}");
    }
    Ok(s)
}

fn load(path: &Path) -> CliResult<Model> {
    load_checkpoint(path).map_err(|e| CliError::from(e).context(path.display()))
}

fn read_dataset(path: &Path) -> CliResult<Vec<Example>> {
    read_records(&read_text(path)?).data(path.display())
}

pub fn train_config(a: &TrainArgs) -> TrainConfig {
    let d = TrainConfig::default();
    TrainConfig {
        dims: Dims {
            d: a.embed_dim.unwrap_or(d.dims.d),
            h: a.hidden_dim.unwrap_or(d.dims.h),
        },
        learning_rate: a.lr.unwrap_or(d.learning_rate),
        dropout: a.dropout.unwrap_or(d.dropout),
        batch_size: a.batch_size.unwrap_or(d.batch_size),
        max_steps: a.max_steps.unwrap_or(d.max_steps),
        seed: a.seed.unwrap_or(d.seed),
        use_context: !a.no_context,
        optimizer: a.optimizer.clone().unwrap_or(d.optimizer.clone()),
        eval_every: a.eval_every.unwrap_or(d.eval_every),
        patience: a.patience.unwrap_or(d.patience),
        target_accuracy: a.target_accuracy.or(d.target_accuracy),
        min_frequency: a.min_frequency.unwrap_or(d.min_frequency),
        max_decode: a.max_decode.unwrap_or(d.max_decode),
        ..d
    }
}

pub fn train_cmd(a: &TrainArgs) -> CliResult<String> {
    let cfg = train_config(a);
    let data = read_dataset(&a.dataset)?;
    let (mut tr, mut va) = (Vec::new(), Vec::new());
    for e in data {
        match e.meta.split {
            Some(Split::Validation) => va.push(e),
            Some(Split::Test) => {}
            _ => tr.push(e),
        }
    }
    if tr.is_empty() {
        return Err(CliError::data("the dataset has no training examples"));
    }
    if va.is_empty() {
        eprintln!("note: no validation examples; validating on the training set");
        va = tr.clone();
    }
    let mut log = String::new();
    let (model, report) = train(&tr, &va, &cfg, &mut |l| {
        let _ = writeln!(log, "{l}");
    })?;
    save_checkpoint(&model, &a.out).map_err(|e| CliError::from(e).context(a.out.display()))?;
    if let Some(m) = &a.metrics {
        fs::write(m, &log).data(format!("cannot write {}", m.display()))?;
    }
    let stopped = match report.stopped {
        StopReason::MaxSteps => "max-steps",
        StopReason::Target => "target",
        StopReason::Patience => "patience",
    };
    let mut s = String::new();
    let _ = writeln!(s, "train_examples={}", tr.len());
    let _ = writeln!(s, "validation_examples={}", va.len());
    let _ = writeln!(s, "parameters={}", model.parameter_count());
    let _ = writeln!(s, "steps={}", report.steps);
    let _ = writeln!(s, "stopped={stopped}");
    let _ = writeln!(s, "best_step={}", report.best_step);
    let _ = writeln!(s, "best_val_acc={:.6}", report.best_val_acc);
    Ok(s)
}

pub fn predict_cmd(
    checkpoint: &Path,
    examples: &Path,
    emit: Emit,
    index: Option<usize>,
) -> CliResult<String> {
    let model = load(checkpoint)?;
    let data = read_dataset(examples)?;
    let chosen: Vec<&Example> = match index {
        Some(i) => vec![data
            .get(i)
            .ok_or_else(|| CliError::usage(format!("no example at index {i}")))?],
        None => data.iter().collect(),
    };
    if chosen.is_empty() {
        return Err(CliError::data("no examples to predict"));
    }
    let mut s = String::new();
    let mut failed = 0;
    for e in chosen {
        let (prep, f) = model.featurize(e)?;
        let pred = model.predict(&f);
        let ops = pred.ops(&prep);
        let id = format!("{}/{}", e.meta.project, e.meta.pair);
        let _ = writeln!(s, "# example={id} ops={} ended={}", ops.len(), pred.ended);
        match emit {
            Emit::Script => s.push_str(&format_listing(&prep.aug, &ops)),
            Emit::Code => match apply_path_ops(&prep.aug, &ops) {
                Ok(t) => s.push_str(&render(&t, Syntax::Toy)),
                Err(err) => {
                    eprintln!("error: {id}: prediction does not apply: {err}");
                    failed += 1;
                }
            },
        }
    }
    if failed > 0 {
        print!("{s}");
        return Err(CliError::data(format!(
            "{failed} predictions did not apply"
        )));
    }
    Ok(s)
}

pub fn evaluate_cmd(checkpoint: &Path, dataset: &Path, split: Option<&str>) -> CliResult<String> {
    let model = load(checkpoint)?;
    let split = split
        .map(str::parse::<Split>)
        .transpose()
        .map_err(CliError::usage)?;
    let data: Vec<Example> = read_dataset(dataset)?
        .into_iter()
        .filter(|e| split.is_none() || e.meta.split == split)
        .collect();
    if data.is_empty() {
        return Err(CliError::data("no examples in the selected split"));
    }
    let (mut preds, mut golds) = (Vec::new(), Vec::new());
    for e in &data {
        let (prep, f) = model.featurize(e)?;
        preds.push(model.predict(&f).ops(&prep));
        golds.push(prep.gold_ops);
    }
    let acc = exact_match_accuracy(&preds, &golds).data("cannot score")?;
    let hits = (acc * data.len() as f64).round() as usize;
    let mut s = String::new();
    let _ = writeln!(s, "split={}", split.map_or("all", |s| s.as_str()));
    let _ = writeln!(s, "examples={}", data.len());
    let _ = writeln!(s, "correct={hits}");
    let _ = writeln!(s, "exact_match={acc:.6}");
    Ok(s)
}

pub fn stats_cmd(dataset: &Path, pretty: bool) -> CliResult<String> {
    let data = read_dataset(dataset)?;
    let stats = compute_stats(&data).data("cannot compute statistics")?;
    if pretty {
        return Ok(stats.to_string());
    }
    let mut s = String::new();
    for (k, v) in stats.rows() {
        let key: String = k
            .trim_start_matches("# ")
            .replace(" %", "_percent")
            .replace("Avg.", "avg")
            .to_lowercase()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join("_");
        let _ = writeln!(s, "{key}={v}");
    }
    Ok(s)
}

pub fn generate_cmd(
    out: Option<&Path>,
    families: &[String],
    count: usize,
    projects: usize,
    seed: u64,
    held_out: bool,
    list: bool,
) -> CliResult<String> {
    let reg = FamilyRegistry::default();
    let mut s = String::new();
    if list {
        for f in reg.iter() {
            let kept = f.expected_drop().map_or("kept", |r| r.as_str());
            let _ = writeln!(s, "{}\t{kept}\t{}", f.name(), f.description());
        }
        return Ok(s);
    }
    let out = out.ok_or_else(|| CliError::usage("an output directory is required"))?;
    let chosen: Vec<&dyn EditFamily> = if families.is_empty() {
        reg.iter().collect()
    } else {
        families
            .iter()
            .map(|n| {
                reg.get(n).ok_or_else(|| {
                    CliError::usage(format!(
                        "unknown family `{n}` (known: {})",
                        reg.names().join(", ")
                    ))
                })
            })
            .collect::<CliResult<_>>()?
    };
    let plan: Vec<(&dyn EditFamily, usize)> = chosen.iter().map(|&f| (f, count)).collect();
    let names = if held_out {
        NamePool::held_out()
    } else {
        NamePool::train()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = write_corpus(out, &plan, projects, &names, &mut rng)
        .data(format!("cannot write {}", out.display()))?;
    let _ = writeln!(s, "pairs={}", entries.len());
    for f in &chosen {
        let n = entries.iter().filter(|e| e.family == f.name()).count();
        let _ = writeln!(s, "family.{}={n}", f.name());
    }
    Ok(s)
}
