// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::filter::{filter_example, DropReason, FilterConfig};
use super::{DatasetError, Example, ExampleMeta};
use crate::ast::{parse_toy_statements, Ast, ToyStatement, Tree};
use crate::diff::diff;

/// Lines of context taken above and below the edited fragment.
pub const DEFAULT_RADIUS: usize = 10;

/// Changed line ranges (1-based, inclusive) in the before and after files.
/// A range whose end is one less than its start is empty: nothing on that
/// side, as for a pure insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub before: (usize, usize),
    pub after: (usize, usize),
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "before={}-{} after={}-{}",
            self.before.0, self.before.1, self.after.0, self.after.1
        )
    }
}

impl FromStr for Span {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, DatasetError> {
        let bad = || DatasetError::Invalid(format!("malformed span `{s}`"));
        let mut before = None;
        let mut after = None;
        for part in s.split_whitespace() {
            let (key, range) = part.split_once('=').ok_or_else(bad)?;
            let (a, b) = range.split_once('-').ok_or_else(bad)?;
            let r = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            match key {
                "before" => before = Some(r),
                "after" => after = Some(r),
                _ => return Err(bad()),
            }
        }
        let (before, after) = (before.ok_or_else(bad)?, after.ok_or_else(bad)?);
        for (a, b) in [before, after] {
            if a == 0 || b + 1 < a {
                return Err(bad());
            }
        }
        Ok(Span { before, after })
    }
}

/// One span per non-blank line.
pub fn read_spans(text: &str) -> Result<Vec<Span>, DatasetError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

fn intersects(s: &ToyStatement, lo: usize, hi: usize) -> bool {
    lo <= hi && s.first_line <= hi && s.last_line >= lo
}

/// Splits a file's statements into the fragment (those touching `range`)
/// and the context (those touching the `radius` lines on either side).
fn carve(
    stmts: &[ToyStatement],
    range: (usize, usize),
    radius: usize,
    lines: usize,
) -> Result<(Tree, Tree), String> {
    let (a, b) = range;
    if a > lines + 1 || (b >= a && b > lines) {
        return Err(format!("{a}-{b}"));
    }
    let mut p = Vec::new();
    let mut c = Vec::new();
    for s in stmts {
        if intersects(s, a, b) {
            p.push(s.tree.clone());
        } else if intersects(s, a.saturating_sub(radius).max(1), a.saturating_sub(1))
            || intersects(s, b + 1, b + radius)
        {
            c.push(s.tree.clone());
        }
    }
    Ok((Tree::node("Unit", p), Tree::node("Unit", c)))
}

fn line_count(text: &str) -> usize {
    text.lines().count()
}

/// Builds an example from one before/after file pair and a changed span.
pub fn ingest_pair(
    before: &str,
    after: &str,
    span: Span,
    radius: usize,
) -> Result<Example, DatasetError> {
    let parse = |text: &str, path: &str| {
        parse_toy_statements(text).map_err(|source| DatasetError::Parse {
            path: path.to_string(),
            source,
        })
    };
    let sb = parse(before, "before")?;
    let sa = parse(after, "after")?;
    let out_of_range = |lines| DatasetError::SpanOutOfRange {
        span: span.to_string(),
        lines,
    };
    let (pb, cb) = carve(&sb, span.before, radius, line_count(before))
        .map_err(|_| out_of_range(line_count(before)))?;
    let (pa, ca) = carve(&sa, span.after, radius, line_count(after))
        .map_err(|_| out_of_range(line_count(after)))?;
    let build = |t: &Tree| Ast::from_tree(t).expect("parsed statements are well formed");
    let (p_before, p_after, c_before, c_after) = (build(&pb), build(&pa), build(&cb), build(&ca));
    Ok(Example {
        meta: ExampleMeta::default(),
        gold_script: diff(&p_before, &p_after),
        context_script: diff(&c_before, &c_after),
        p_before,
        p_after,
        c_before,
        c_after,
    })
}

/// Outcome of ingesting a corpus directory.
#[derive(Debug, Default)]
pub struct CorpusReport {
    pub kept: Vec<Example>,
    /// `(example id, reason)` for filtered examples.
    pub dropped: Vec<(String, DropReason)>,
    /// `(pair id, message)` for pairs that could not be read or parsed.
    pub failures: Vec<(String, String)>,
}

impl CorpusReport {
    pub fn drop_counts(&self) -> Vec<(DropReason, usize)> {
        DropReason::ALL
            .iter()
            .map(|&r| (r, self.dropped.iter().filter(|(_, d)| *d == r).count()))
            .collect()
    }
}

fn sorted_dirs(dir: &Path) -> Result<Vec<(String, std::path::PathBuf)>, DatasetError> {
    let mut v: Vec<(String, std::path::PathBuf)> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), e.path()))
        .collect();
    v.sort();
    Ok(v)
}

/// Reads `<dir>/<project>/<pair>/{before.toy, after.toy, span.txt}`. Pairs
/// that fail to parse are reported, not fatal.
pub fn ingest_corpus(
    dir: &Path,
    radius: usize,
    filter: &FilterConfig,
) -> Result<CorpusReport, DatasetError> {
    let mut report = CorpusReport::default();
    let mut pairs = 0;
    for (project, pdir) in sorted_dirs(dir)? {
        for (pair, dir) in sorted_dirs(&pdir)? {
            pairs += 1;
            let id = format!("{project}/{pair}");
            let read = |name: &str| fs::read_to_string(dir.join(name));
            let (before, after, spans) =
                match (read("before.toy"), read("after.toy"), read("span.txt")) {
                    (Ok(b), Ok(a), Ok(s)) => (b, a, s),
                    (b, a, s) => {
                        let e = [b.err(), a.err(), s.err()]
                            .into_iter()
                            .flatten()
                            .next()
                            .unwrap();
                        report.failures.push((id, e.to_string()));
                        continue;
                    }
                };
            let spans = match read_spans(&spans) {
                Ok(s) if !s.is_empty() => s,
                Ok(_) => {
                    report.failures.push((id, "span.txt lists no spans".into()));
                    continue;
                }
                Err(e) => {
                    report.failures.push((id, e.to_string()));
                    continue;
                }
            };
            let many = spans.len() > 1;
            for (k, span) in spans.into_iter().enumerate() {
                let pair_id = if many {
                    format!("{pair}#{k}")
                } else {
                    pair.clone()
                };
                let eid = format!("{project}/{pair_id}");
                match ingest_pair(&before, &after, span, radius) {
                    Ok(mut e) => {
                        e.meta = ExampleMeta {
                            project: project.clone(),
                            pair: pair_id,
                            file: "before.toy".into(),
                            split: None,
                        };
                        match filter_example(&e, filter) {
                            None => report.kept.push(e),
                            Some(r) => report.dropped.push((eid, r)),
                        }
                    }
                    Err(err) => report.failures.push((eid, err.to_string())),
                }
            }
        }
    }
    if pairs == 0 {
        return Err(DatasetError::Invalid(format!(
            "no pairs under {}",
            dir.display()
        )));
    }
    Ok(report)
}
