// SPDX-License-Identifier: Apache-2.0

//! Line-oriented script format:
//!
//! ```text
//! MOV <src> <anchor>
//! UPD "<value>" <tgt>
//! INS <s-expression> <anchor>
//! DEL <src>
//! ```
//!
//! An anchor `<id>` places the node right after `<id>`, `^<id>` makes it the
//! first child of `<id>`, and a bare `^` makes it the first top-level tree.

use std::fmt::Write;

use super::{Anchor, EditOp, EditScript};
use crate::ast::sexpr::{parse_interchange_prefix, quote, unquote_prefix};
use crate::ast::{AstError, NodeId};

pub fn serialize_script(script: &EditScript) -> String {
    let mut out = String::new();
    for op in &script.ops {
        let _ = match op {
            EditOp::Mov { src, to } => writeln!(out, "MOV {src} {to}"),
            EditOp::Del { src } => writeln!(out, "DEL {src}"),
            EditOp::Upd { value, tgt } => writeln!(out, "UPD {} {tgt}", quote(value)),
            EditOp::Ins { tree, to } => writeln!(out, "INS {tree} {to}"),
        };
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> AstError {
    AstError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize, column: usize) -> Result<NodeId, AstError> {
    tok.parse::<usize>()
        .map(NodeId)
        .map_err(|_| syntax(line, column, format!("expected node id, found `{tok}`")))
}

fn parse_anchor(tok: &str, line: usize, column: usize) -> Result<Anchor, AstError> {
    match tok.strip_prefix('^') {
        Some("") => Ok(Anchor::FirstRoot),
        Some(rest) => Ok(Anchor::FirstChildOf(parse_id(rest, line, column + 1)?)),
        None => Ok(Anchor::After(parse_id(tok, line, column)?)),
    }
}

/// Parses the textual form. Blank lines and lines starting with `#` are
/// ignored.
pub fn parse_script(text: &str) -> Result<EditScript, AstError> {
    let mut ops = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - trimmed.len();
        ops.push(parse_op(trimmed, line, indent)?);
    }
    Ok(EditScript::new(ops))
}

/// Parses a single op line; `offset` is the byte column of `text` within its
/// line (for error positions).
pub(crate) fn parse_op(text: &str, line: usize, offset: usize) -> Result<EditOp, AstError> {
    let text = text.trim_end();
    let (head, rest) = text.split_once(' ').unwrap_or((text, ""));
    let rest_col = offset + head.len() + 2;
    let words = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
    let exact = |ws: &[String], n: usize| {
        if ws.len() == n {
            Ok(())
        } else {
            Err(syntax(
                line,
                rest_col,
                format!("`{head}` expects {n} operand(s)"),
            ))
        }
    };
    match head {
        "MOV" => {
            let ws = words(rest);
            exact(&ws, 2)?;
            Ok(EditOp::Mov {
                src: parse_id(&ws[0], line, rest_col)?,
                to: parse_anchor(&ws[1], line, rest_col + ws[0].len() + 1)?,
            })
        }
        "DEL" => {
            let ws = words(rest);
            exact(&ws, 1)?;
            Ok(EditOp::Del {
                src: parse_id(&ws[0], line, rest_col)?,
            })
        }
        "UPD" => {
            let body = rest.trim_start();
            let col = rest_col + rest.len() - body.len();
            let (value, used) = unquote_prefix(body).map_err(|e| relocate(e, line, col))?;
            let ws = words(&body[used..]);
            exact(&ws, 1)?;
            Ok(EditOp::Upd {
                value,
                tgt: parse_id(&ws[0], line, col + used + 1)?,
            })
        }
        "INS" => {
            let body = rest.trim_start();
            let col = rest_col + rest.len() - body.len();
            let (tree, used) =
                parse_interchange_prefix(body).map_err(|e| relocate(e, line, col))?;
            let ws = words(&body[used..]);
            exact(&ws, 1)?;
            Ok(EditOp::Ins {
                tree,
                to: parse_anchor(&ws[0], line, col + used + 1)?,
            })
        }
        other => Err(syntax(
            line,
            offset + 1,
            format!("unknown operation `{other}`"),
        )),
    }
}

/// Shifts an error reported by a single-line sub-parser onto the enclosing line.
fn relocate(e: AstError, line: usize, col: usize) -> AstError {
    match e {
        AstError::Syntax {
            line: 1,
            column,
            message,
        } => syntax(line, col + column - 1, message),
        other => other,
    }
}
