// SPDX-License-Identifier: Apache-2.0

//! Self-contained text form of target-encoded path operations:
//!
//! ```text
//! upd <s-expression>      (one line per UPD child, in order)
//! ins <s-expression>      (one line per INS child, in order)
//! <path op>               (one line per op, as displayed)
//! ```
//!
//! The material lines rebuild the augmented tree of the fragment; each op
//! line is checked against the static path between its endpoints.

use std::fmt::Write;

use super::candidates::static_path_op;
use super::{augment_with, AugmentedAst, OperationKind, PathError, PathOperation};
use crate::ast::sexpr::parse_interchange_prefix;
use crate::ast::{Ast, AstError, NodeId};

pub fn format_listing(aug: &AugmentedAst, ops: &[PathOperation]) -> String {
    let mut out = String::new();
    for (tag, ids) in [("upd", aug.upd_children()), ("ins", aug.ins_children())] {
        for &c in ids {
            let _ = writeln!(out, "{tag} {}", aug.tree.subtree(c));
        }
    }
    for op in ops {
        let _ = writeln!(out, "{op}");
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> PathError {
    PathError::Tree(AstError::Syntax {
        line,
        column: 1,
        message: message.into(),
    })
}

fn parse_kind(tok: &str) -> Option<OperationKind> {
    OperationKind::ALL.into_iter().find(|k| k.as_str() == tok)
}

/// Parses a listing for the fragment `tree`. Blank lines and lines starting
/// with `#` are ignored.
pub fn parse_listing(
    tree: &Ast,
    text: &str,
) -> Result<(AugmentedAst, Vec<PathOperation>), PathError> {
    let mut upd = Vec::new();
    let mut ins = Vec::new();
    let mut op_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
        match head {
            "upd" | "ins" => {
                if !op_lines.is_empty() {
                    return Err(syntax(ln, "material must precede the operations"));
                }
                let (t, used) = parse_interchange_prefix(rest).map_err(|e| match e {
                    AstError::Syntax { message, .. } => syntax(ln, message),
                    other => PathError::Tree(other),
                })?;
                if !rest[used..].trim().is_empty() {
                    return Err(syntax(ln, "trailing text after tree"));
                }
                if head == "upd" { &mut upd } else { &mut ins }.push(t);
            }
            _ => {
                let kind = parse_kind(head)
                    .ok_or_else(|| syntax(ln, format!("unknown operation `{head}`")))?;
                op_lines.push((ln, kind, line));
            }
        }
    }
    let aug = augment_with(tree, upd, ins)?;
    let mut ops = Vec::with_capacity(op_lines.len());
    for (ln, kind, line) in op_lines {
        let ids = line
            .rsplit_once(" @ ")
            .and_then(|(_, ids)| ids.split_once(','))
            .and_then(|(s, t)| Some((s.parse().ok()?, t.parse().ok()?)))
            .ok_or_else(|| syntax(ln, "expected `@ <source>,<target>` suffix"))?;
        let (s, t): (usize, usize) = ids;
        if s >= aug.tree.len() || t >= aug.tree.len() {
            return Err(syntax(ln, format!("endpoint {s},{t} outside the tree")));
        }
        let op = static_path_op(&aug.tree, kind, NodeId(s), NodeId(t));
        if op.to_string() != line {
            return Err(syntax(
                ln,
                format!("path does not match the tree: expected `{op}`"),
            ));
        }
        ops.push(op);
    }
    Ok((aug, ops))
}
