// SPDX-License-Identifier: Apache-2.0

//! Processed-dataset text format, one record per example:
//!
//! ```text
//! #example project=<p> pair=<id> file=<f> split=<train|validation|test|->
//! p_before: <s-expression>
//! p_after: <s-expression>
//! c_before: <s-expression>
//! c_after: <s-expression>
//! p_script: <n>
//!   <op>            (n lines)
//! c_script: <m>
//!   <op>            (m lines)
//! gold: <n>
//!   <path op>       (n lines)
//! context: <m>
//!   <path op>       (m lines)
//! ```
//!
//! Records are separated by a blank line. The path-op sections are derived
//! from the scripts; reading recomputes them and rejects records whose text
//! disagrees.

use std::fmt::Write;

use super::{DatasetError, Example, ExampleMeta};
use crate::ast::{parse_interchange, serialize_interchange, Ast};
use crate::diff::{parse_script, serialize_script, EditScript};
use crate::paths::{script_to_path_ops, Encoding, PathOperation};

fn path_lines(e: &Example) -> Result<(Vec<PathOperation>, Vec<PathOperation>), DatasetError> {
    let gold = script_to_path_ops(&e.augmented()?, &e.gold_script, Encoding::Target)?;
    Ok((gold, e.context_paths()?))
}

fn check_meta(v: &str) -> Result<&str, DatasetError> {
    if v.is_empty() || v.contains(char::is_whitespace) {
        return Err(DatasetError::Invalid(format!(
            "metadata value `{v}` must be non-empty without whitespace"
        )));
    }
    Ok(v)
}

pub fn write_records(examples: &[Example]) -> Result<String, DatasetError> {
    let mut out = String::new();
    for (i, e) in examples.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let m = &e.meta;
        let split = m.split.map_or("-", |s| s.as_str());
        let _ = writeln!(
            out,
            "#example project={} pair={} file={} split={split}",
            check_meta(&m.project)?,
            check_meta(&m.pair)?,
            check_meta(&m.file)?
        );
        for (k, t) in [
            ("p_before", &e.p_before),
            ("p_after", &e.p_after),
            ("c_before", &e.c_before),
            ("c_after", &e.c_after),
        ] {
            let _ = writeln!(out, "{k}: {}", serialize_interchange(t));
        }
        for (k, s) in [
            ("p_script", &e.gold_script),
            ("c_script", &e.context_script),
        ] {
            let _ = writeln!(out, "{k}: {}", s.len());
            for line in serialize_script(s).lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        let (gold, context) = path_lines(e)?;
        for (k, ops) in [("gold", &gold), ("context", &context)] {
            let _ = writeln!(out, "{k}: {}", ops.len());
            for op in ops {
                let _ = writeln!(out, "  {op}");
            }
        }
    }
    Ok(out)
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn bad(&self, msg: impl std::fmt::Display) -> DatasetError {
        DatasetError::Invalid(format!(
            "line {}: {msg}",
            self.pos.min(self.lines.len()).max(1)
        ))
    }

    fn next(&mut self) -> Result<&'a str, DatasetError> {
        let l = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.bad("unexpected end of input"))?;
        self.pos += 1;
        Ok(l)
    }

    fn field(&mut self, key: &str) -> Result<&'a str, DatasetError> {
        let l = self.next()?;
        l.strip_prefix(key)
            .and_then(|r| r.strip_prefix(": "))
            .ok_or_else(|| self.bad(format!("expected `{key}: ...`")))
    }

    fn tree(&mut self, key: &str) -> Result<Ast, DatasetError> {
        let text = self.field(key)?;
        parse_interchange(text, None).map_err(|e| self.bad(e))
    }

    fn block(&mut self, key: &str) -> Result<Vec<&'a str>, DatasetError> {
        let n: usize = self
            .field(key)?
            .parse()
            .map_err(|_| self.bad("expected a count"))?;
        (0..n)
            .map(|_| {
                let l = self.next()?;
                l.strip_prefix("  ")
                    .ok_or_else(|| self.bad("expected an indented line"))
            })
            .collect()
    }

    fn script(&mut self, key: &str) -> Result<EditScript, DatasetError> {
        let body = self.block(key)?.join("\n");
        parse_script(&body).map_err(|e| self.bad(e))
    }
}

fn parse_header(line: &str) -> Option<ExampleMeta> {
    let rest = line.strip_prefix("#example ")?;
    let mut meta = ExampleMeta::default();
    for part in rest.split_whitespace() {
        let (k, v) = part.split_once('=')?;
        match k {
            "project" => meta.project = v.to_string(),
            "pair" => meta.pair = v.to_string(),
            "file" => meta.file = v.to_string(),
            "split" if v == "-" => meta.split = None,
            "split" => meta.split = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    Some(meta)
}

pub fn read_records(text: &str) -> Result<Vec<Example>, DatasetError> {
    let mut r = Lines {
        lines: text.lines().collect(),
        pos: 0,
    };
    let mut out = Vec::new();
    while r.pos < r.lines.len() {
        let line = r.next()?;
        if line.trim().is_empty() {
            continue;
        }
        let meta = parse_header(line).ok_or_else(|| r.bad("expected `#example` header"))?;
        let e = Example {
            meta,
            p_before: r.tree("p_before")?,
            p_after: r.tree("p_after")?,
            c_before: r.tree("c_before")?,
            c_after: r.tree("c_after")?,
            gold_script: r.script("p_script")?,
            context_script: r.script("c_script")?,
        };
        let gold = r.block("gold")?;
        let context = r.block("context")?;
        let (g, c) = path_lines(&e).map_err(|err| r.bad(err))?;
        let render = |ops: &[PathOperation]| ops.iter().map(|o| o.to_string()).collect::<Vec<_>>();
        if render(&g) != gold || render(&c) != context {
            return Err(r.bad(format!(
                "path ops of {}/{} disagree with its scripts",
                e.meta.project, e.meta.pair
            )));
        }
        out.push(e);
    }
    Ok(out)
}
