// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use editpath_core::ast::{parse_interchange, pretty_print, Ast};
use editpath_core::dataset::synth::{synthesize, FamilyRegistry, NamePool};
use editpath_core::dataset::{
    compute_stats, exact_match_accuracy, filter_example, read_records, write_records, Example,
    FilterConfig, Split,
};
use editpath_core::gen::{mutate, random_tree};
use editpath_core::paths::format_listing;
use editpath_model::load_checkpoint;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_editpath"));
    cmd.args(args).env_remove("EDITPATH_CORPUS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let o = cmd.output().unwrap();
    Out {
        code: o.status.code().unwrap(),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Out {
    run_env(args, &[])
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    o.stdout
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no `{key}` in {out}"))
}

fn dataset(dir: &Path, name: &str, examples: &[Example]) -> PathBuf {
    write(dir, name, &write_records(examples).unwrap())
}

fn swap_examples(seed: u64, n: usize) -> Vec<Example> {
    let reg = FamilyRegistry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ex = synthesize(
        reg.get("swap-args").unwrap(),
        n,
        2,
        &NamePool::train(),
        &mut rng,
    )
    .unwrap();
    for e in &mut ex {
        e.meta.split = Some(Split::Train);
    }
    ex
}

#[test]
fn identical_files_diff_to_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toy", "f(a, b);\nx = 1;\n");
    for format in ["ops", "paths"] {
        let o = run(&["diff", p(&a), p(&a), "--format", format]);
        assert_eq!((o.code, o.stdout.as_str()), (0, ""));
    }
}

#[test]
fn sibling_swap_is_one_move() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.sexp", r#"(A (B (c "1")) (C) (D))"#);
    let b = write(dir.path(), "b.sexp", r#"(A (B (c "1")) (D) (C))"#);
    let out = ok(&["diff", p(&a), p(&b)]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("MOV "), "{out}");
    let paths = ok(&["diff", p(&a), p(&b), "--format", "paths"]);
    assert_eq!(paths.lines().count(), 1);
    assert!(paths.starts_with("MOV "), "{paths}");
}

#[test]
fn update_fixture_introduces_value() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.sexp", r#"(A (B (C "x")) (D "y"))"#);
    let s = write(dir.path(), "s.txt", "UPD \"Z\" 2\n");
    let out = ok(&["apply", p(&a), p(&s)]);
    assert_eq!(out, "(A (B (C \"Z\")) (D \"y\"))\n");
}

#[test]
fn empty_script_echoes_input_canonically() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toy", "f( a,b ) ;\n  x=1;\n");
    let s = write(dir.path(), "s.txt", "");
    assert_eq!(ok(&["apply", p(&a), p(&s)]), "f(a, b);\nx = 1;\n");
    let t = write(dir.path(), "t.sexp", "(A   (b \"1\")\n)");
    assert_eq!(ok(&["apply", p(&t), p(&s)]), "(A (b \"1\"))\n");
}

#[test]
fn diff_and_apply_round_trip_on_random_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut ops_checked, mut paths_checked) = (0, 0);
    while ops_checked < 100 {
        let a = Ast::from_tree(&random_tree(&mut rng, 25)).unwrap();
        if a.at(a.root()).value.is_some() {
            continue;
        }
        let edits = rng.gen_range(0..4);
        let b = Ast::from_tree(&mutate(&mut rng, &a.to_tree(), edits)).unwrap();
        let fa = write(dir.path(), "a.sexp", &a.to_tree().to_string());
        let fb = write(dir.path(), "b.sexp", &b.to_tree().to_string());
        let want = format!("{}\n", b.to_tree());

        let script = write(dir.path(), "s.txt", &ok(&["diff", p(&fa), p(&fb)]));
        let back = parse_interchange(&ok(&["apply", p(&fa), p(&script)]), None).unwrap();
        assert!(back.isomorphic(back.root(), &b, b.root()));
        ops_checked += 1;

        let o = run(&["diff", p(&fa), p(&fb), "--format", "paths"]);
        if o.code == 2 {
            assert!(o.stderr.contains("no path form"), "{}", o.stderr);
            continue;
        }
        assert_eq!(o.code, 0, "{}", o.stderr);
        let listing = write(dir.path(), "l.txt", &o.stdout);
        assert_eq!(ok(&["apply", p(&fa), p(&listing)]), want);
        paths_checked += 1;
    }
    assert!(paths_checked >= 60, "{paths_checked}");
}

#[test]
fn invalid_scripts_and_inputs_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.sexp", r#"(A (b "1"))"#);
    let bad = write(dir.path(), "bad.txt", "MOV 7 ^0\n");
    let junk = write(dir.path(), "junk.txt", "FROB 1\n");
    let broken = write(dir.path(), "broken.sexp", "(A (b \"1\"");
    for args in [
        vec!["apply", p(&a), p(&bad)],
        vec!["apply", p(&a), p(&junk)],
        vec!["diff", p(&broken), p(&a)],
        vec!["diff", p(&a), "/nonexistent.toy"],
    ] {
        let o = run(&args);
        assert_eq!(o.code, 2, "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(o.stderr.starts_with("error: "), "{}", o.stderr);
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec!["diff", "only-one"],
        vec!["diff", "a", "b", "--format", "tree"],
        vec!["generate", "/tmp/x", "--family", "no-such-family"],
    ] {
        assert_eq!(run(&args).code, 1, "{args:?}");
    }
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn ingest_matches_oracle_and_reports_every_reason() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let gen = ok(&["generate", p(&corpus), "--count", "10", "--seed", "3"]);
    assert_eq!(value(&gen, "pairs"), "100");
    let out = dir.path().join("data.txt");
    let report = ok(&["ingest", p(&corpus), "--out", p(&out)]);

    let reg = FamilyRegistry::default();
    let expect_kept = 10 * reg.learnable().len();
    assert_eq!(value(&report, "kept"), expect_kept.to_string());
    assert_eq!(value(&report, "examples"), "100");
    for f in reg.iter() {
        if let Some(r) = f.expected_drop() {
            assert_eq!(value(&report, &format!("dropped.{}", r.as_str())), "10");
        }
    }
    assert_eq!(value(&report, "failures"), "0");

    let kept = read_records(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(kept.len(), expect_kept);
    assert!(kept
        .iter()
        .all(|e| filter_example(e, &FilterConfig::default()).is_none()));
    let splits: usize = Split::ALL
        .iter()
        .map(|s| {
            value(&report, &format!("split.{s}"))
                .parse::<usize>()
                .unwrap()
        })
        .sum();
    assert_eq!(splits, expect_kept);
    assert_eq!(ok(&["ingest", p(&corpus), "--out", p(&out)]), report);
}

#[test]
fn ingest_reads_corpus_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    ok(&[
        "generate",
        p(&corpus),
        "--count",
        "2",
        "--family",
        "swap-args",
    ]);
    let out = dir.path().join("data.txt");
    let o = run_env(
        &["ingest", "--out", p(&out)],
        &[("EDITPATH_CORPUS", p(&corpus))],
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(value(&o.stdout, "kept"), "2");
    assert_eq!(value(&o.stdout, "split.train"), "0");
    assert!(o.stderr.contains("unassigned"), "{}", o.stderr);
    assert_eq!(run(&["ingest", "--out", p(&out)]).code, 1);
}

#[test]
fn empty_corpus_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = dir.path().join("data.txt");
    assert_eq!(run(&["ingest", p(&empty), "--out", p(&out)]).code, 2);
}

#[test]
fn unreadable_pairs_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    ok(&[
        "generate",
        p(&corpus),
        "--count",
        "3",
        "--family",
        "swap-args",
    ]);
    let broken = corpus.join("project00").join("pair00000");
    fs::write(broken.join("after.toy"), "f(((;\n").unwrap();
    let out = dir.path().join("data.txt");
    let o = run(&["ingest", p(&corpus), "--out", p(&out)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(value(&o.stdout, "failures"), "1");
    assert_eq!(value(&o.stdout, "kept"), "2");
    assert!(o.stderr.contains("project00/pair00000"), "{}", o.stderr);
}

fn small_train<'a>(data: &'a str, ckpt: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "train",
        data,
        "--out",
        ckpt,
        "--embed-dim",
        "16",
        "--hidden-dim",
        "24",
        "--batch-size",
        "8",
    ];
    v.extend_from_slice(extra);
    v
}

#[test]
fn training_is_repeatable_and_writes_loadable_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path(), "d.txt", &swap_examples(11, 6));
    let data = p(&data).to_string();
    let mut logs = Vec::new();
    let mut stdouts = Vec::new();
    for i in 0..2 {
        let ckpt = dir.path().join(format!("m{i}.ckpt"));
        let log = dir.path().join(format!("log{i}.txt"));
        let out = ok(&small_train(
            &data,
            p(&ckpt),
            &["--max-steps", "12", "--seed", "4", "--metrics", p(&log)],
        ));
        assert_eq!(value(&out, "steps"), "12");
        load_checkpoint(&ckpt).unwrap();
        logs.push(fs::read_to_string(&log).unwrap());
        stdouts.push((out, fs::read(&ckpt).unwrap()));
    }
    assert_eq!(logs[0].lines().count(), 12);
    assert!(logs[0].starts_with("step=1 loss="));
    assert_eq!(logs[0], logs[1]);
    assert_eq!(stdouts[0], stdouts[1]);

    let other = dir.path().join("other.txt");
    let ckpt = dir.path().join("m.ckpt");
    ok(&small_train(
        &data,
        p(&ckpt),
        &["--max-steps", "12", "--seed", "5", "--metrics", p(&other)],
    ));
    assert_ne!(fs::read_to_string(&other).unwrap(), logs[0]);
}

#[test]
fn training_failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path(), "d.txt", &swap_examples(12, 3));
    let ckpt = dir.path().join("m.ckpt");
    let diverge = run(&small_train(
        p(&data),
        p(&ckpt),
        &["--lr", "1e300", "--max-steps", "20"],
    ));
    assert_eq!(diverge.code, 3);
    assert!(diverge.stderr.contains("diverged"), "{}", diverge.stderr);
    assert!(!ckpt.exists());
    assert_eq!(
        run(&small_train(p(&data), p(&ckpt), &["--dropout", "1.5"])).code,
        1
    );
    assert_eq!(
        run(&small_train(p(&data), p(&ckpt), &["--optimizer", "lbfgs"])).code,
        1
    );
    let none = dataset(dir.path(), "none.txt", &[]);
    assert_eq!(run(&small_train(p(&none), p(&ckpt), &[])).code, 2);
}

#[test]
fn memorized_example_predicts_gold_and_evaluates_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let ex = swap_examples(13, 2);
    let data = dataset(dir.path(), "d.txt", &ex);
    let ckpt = dir.path().join("m.ckpt");
    let out = ok(&small_train(
        p(&data),
        p(&ckpt),
        &[
            "--max-steps",
            "400",
            "--eval-every",
            "10",
            "--target-accuracy",
            "1.0",
            "--dropout",
            "0",
            "--lr",
            "0.01",
        ],
    ));
    assert_eq!(value(&out, "best_val_acc"), "1.000000", "{out}");

    let script = ok(&["predict", p(&ckpt), p(&data), "--index", "1"]);
    let prep = ex[1].prepare().unwrap();
    let want = format_listing(&prep.aug, &prep.gold_ops);
    let body: String = script
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(body, want);
    assert!(script.starts_with("# example="));
    assert!(script.lines().next().unwrap().ends_with("ended=true"));

    let code = ok(&[
        "predict",
        p(&ckpt),
        p(&data),
        "--index",
        "1",
        "--emit",
        "code",
    ]);
    let code: String = code.lines().skip(1).map(|l| format!("{l}\n")).collect();
    assert_eq!(code, pretty_print(&ex[1].p_after).unwrap());

    let fragment = write(dir.path(), "p.sexp", &ex[1].p_before.to_tree().to_string());
    let listing = write(dir.path(), "l.txt", &script);
    let applied = parse_interchange(&ok(&["apply", p(&fragment), p(&listing)]), None).unwrap();
    let pa = &ex[1].p_after;
    assert!(applied.isomorphic(applied.root(), pa, pa.root()));

    let eval = ok(&["evaluate", p(&ckpt), p(&data)]);
    assert_eq!(value(&eval, "exact_match"), "1.000000");
    assert_eq!(value(&eval, "examples"), "2");
    assert_eq!(ok(&["evaluate", p(&ckpt), p(&data)]), eval);
}

#[test]
fn evaluation_agrees_with_library_metric() {
    let dir = tempfile::tempdir().unwrap();
    let mut ex = swap_examples(14, 12);
    for (i, e) in ex.iter_mut().enumerate() {
        e.meta.split = Some(if i < 8 { Split::Train } else { Split::Test });
    }
    let data = dataset(dir.path(), "d.txt", &ex);
    let ckpt = dir.path().join("m.ckpt");
    ok(&small_train(
        p(&data),
        p(&ckpt),
        &["--max-steps", "60", "--lr", "0.01"],
    ));
    let model = load_checkpoint(&ckpt).unwrap();
    let (mut preds, mut golds) = (Vec::new(), Vec::new());
    for e in ex.iter().filter(|e| e.meta.split == Some(Split::Test)) {
        let (prep, f) = model.featurize(e).unwrap();
        preds.push(model.predict(&f).ops(&prep));
        golds.push(prep.gold_ops);
    }
    let want = exact_match_accuracy(&preds, &golds).unwrap();
    let eval = ok(&["evaluate", p(&ckpt), p(&data), "--split", "test"]);
    assert_eq!(value(&eval, "examples"), "4");
    assert_eq!(value(&eval, "exact_match"), format!("{want:.6}"));

    let empty = run(&["evaluate", p(&ckpt), p(&data), "--split", "validation"]);
    assert_eq!(empty.code, 2);
    assert_eq!(
        run(&["evaluate", p(&ckpt), p(&data), "--split", "dev"]).code,
        1
    );
}

#[test]
fn missing_checkpoint_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dataset(dir.path(), "d.txt", &swap_examples(15, 1));
    let missing = dir.path().join("none.ckpt");
    for cmd in ["predict", "evaluate"] {
        let o = run(&[cmd, p(&missing), p(&data)]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("none.ckpt"), "{}", o.stderr);
    }
    let garbage = write(dir.path(), "garbage.ckpt", "not a checkpoint");
    assert_eq!(run(&["predict", p(&garbage), p(&data)]).code, 2);
}

#[test]
fn stats_match_library_and_ignore_order() {
    let dir = tempfile::tempdir().unwrap();
    let reg = FamilyRegistry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut ex = Vec::new();
    for f in reg.learnable() {
        ex.extend(synthesize(f, 4, 3, &NamePool::train(), &mut rng).unwrap());
    }
    let data = dataset(dir.path(), "d.txt", &ex);
    let out = ok(&["stats", p(&data)]);
    let pretty = ok(&["stats", p(&data), "--pretty"]);
    let stats = compute_stats(&ex).unwrap();
    assert_eq!(pretty, stats.to_string());
    let rows = stats.rows();
    assert_eq!(out.lines().count(), rows.len());
    for (line, (_, v)) in out.lines().zip(&rows) {
        assert_eq!(line.split_once('=').unwrap().1, v);
        assert!(!line.contains(' '), "{line}");
    }
    assert_eq!(value(&out, "examples"), ex.len().to_string());
    let pct: f64 = ["mov", "del", "ins", "upd"]
        .iter()
        .map(|k| value(&out, &format!("{k}_percent")).parse::<f64>().unwrap())
        .sum();
    assert!((pct - 100.0).abs() <= 0.1, "{pct}");

    ex.shuffle(&mut rng);
    let shuffled = dataset(dir.path(), "s.txt", &ex);
    assert_eq!(ok(&["stats", p(&shuffled)]), out);

    let one = dataset(dir.path(), "one.txt", &ex[..1]);
    let single = ok(&["stats", p(&one)]);
    assert_eq!(value(&single, "examples"), "1");
    assert_eq!(value(&single, "projects"), "1");
    assert_eq!(value(&single, "unassigned_examples"), "1");
    let ops = ex[0].gold_script.len() as f64;
    assert_eq!(
        value(&single, "avg_number_of_edit_operations"),
        format!("{ops:.2}")
    );
}

#[test]
fn generation_is_deterministic_and_selectable() {
    let dir = tempfile::tempdir().unwrap();
    let list = ok(&["generate", "--list"]);
    let names: Vec<&str> = list
        .lines()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(names, FamilyRegistry::default().names());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = |d: &PathBuf| {
        vec![
            "generate".to_string(),
            p(d).to_string(),
            "--family".into(),
            "add-arg".into(),
            "--family".into(),
            "oversize".into(),
            "--count".into(),
            "3".into(),
            "--held-out".into(),
        ]
    };
    let run_args = |d: &PathBuf| {
        let v = args(d);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let out = run_args(&a);
    assert_eq!(out, "pairs=6\nfamily.add-arg=3\nfamily.oversize=3\n");
    assert_eq!(run_args(&b), out);
    let pair = Path::new("project01").join("pair00001");
    for f in ["before.toy", "after.toy", "span.txt"] {
        assert_eq!(
            fs::read(a.join(&pair).join(f)).unwrap(),
            fs::read(b.join(&pair).join(f)).unwrap()
        );
    }
}

#[test]
fn train_help_states_library_defaults() {
    let help = ok(&["train", "--help"]);
    let d = editpath_model::TrainConfig::default();
    for (flag, v) in [
        ("--seed", d.seed.to_string()),
        ("--embed-dim", d.dims.d.to_string()),
        ("--hidden-dim", d.dims.h.to_string()),
        ("--lr", d.learning_rate.to_string()),
        ("--dropout", d.dropout.to_string()),
        ("--batch-size", d.batch_size.to_string()),
        ("--max-steps", d.max_steps.to_string()),
        ("--optimizer", d.optimizer.clone()),
        ("--eval-every", d.eval_every.to_string()),
        ("--patience", d.patience.to_string()),
        ("--min-frequency", d.min_frequency.to_string()),
        ("--max-decode", d.max_decode.to_string()),
    ] {
        let block: String = help
            .lines()
            .skip_while(|l| !l.trim_start().starts_with(&format!("{flag} ")))
            .enumerate()
            .take_while(|(i, l)| *i == 0 || !l.trim_start().starts_with('-'))
            .map(|(_, l)| l.trim())
            .collect::<Vec<_>>()
            .join(" ");
        assert!(
            block.ends_with(&format!("[default: {v}]")),
            "{flag}: {block}"
        );
    }
}
