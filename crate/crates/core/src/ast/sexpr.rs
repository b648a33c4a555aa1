// SPDX-License-Identifier: Apache-2.0

//! Canonical s-expression interchange format.
//!
//! ```text
//! document := node
//! node     := "(" KIND (STRING | node*) ")"
//! KIND     := [A-Za-z][A-Za-z0-9_]*
//! STRING   := '"' (char | '\"' | '\\')* '"'
//! ```
//!
//! Whitespace (including newlines) is insignificant outside strings. The
//! canonical form separates tokens by a single space: `(call (name "f") (args))`.

use std::fmt;

use super::{Ast, AstError, GrammarVocab, Tree};

pub fn parse_interchange(text: &str, vocab: Option<&GrammarVocab>) -> Result<Ast, AstError> {
    let mut p = Parser::new(text, vocab);
    p.skip_ws();
    let tree = p.node()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("trailing input after document"));
    }
    Ast::from_tree(&tree)
}

/// Parses one node at the start of `text` and returns it with the byte offset
/// just past its closing parenthesis.
pub fn parse_interchange_prefix(text: &str) -> Result<(Tree, usize), AstError> {
    let mut p = Parser::new(text, None);
    p.skip_ws();
    let tree = p.node()?;
    Ok((tree, p.pos))
}

pub fn serialize_interchange(tree: &Ast) -> String {
    tree.to_tree().to_string()
}

pub(crate) fn write_tree(tree: &Tree, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "({}", tree.kind)?;
    if let Some(v) = &tree.value {
        f.write_str(" ")?;
        write_string(v, f)?;
    }
    for c in &tree.children {
        f.write_str(" ")?;
        write_tree(c, f)?;
    }
    f.write_str(")")
}

pub(crate) fn write_string(v: &str, f: &mut impl fmt::Write) -> fmt::Result {
    f.write_char('"')?;
    for c in v.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

/// Quotes `v` the same way the interchange format does.
pub fn quote(v: &str) -> String {
    let mut s = String::with_capacity(v.len() + 2);
    write_string(v, &mut s).expect("writing to a String cannot fail");
    s
}

/// Parses a quoted string at the start of `text`; returns the unescaped
/// value and the number of bytes consumed.
pub fn unquote_prefix(text: &str) -> Result<(String, usize), AstError> {
    let mut p = Parser::new(text, None);
    let s = p.string()?;
    Ok((s, p.pos))
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    vocab: Option<&'a GrammarVocab>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vocab: Option<&'a GrammarVocab>) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
            vocab,
        }
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.text[..pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error(&self, message: &str) -> AstError {
        let (line, column) = self.line_col(self.pos);
        AstError::Syntax {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len()
            && matches!(self.src[self.pos], b' ' | b'\t' | b'\n' | b'\r')
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<Tree, AstError> {
        if self.peek() != Some(b'(') {
            return Err(self.error("expected `(`"));
        }
        self.pos += 1;
        self.skip_ws();
        let kind_pos = self.pos;
        let kind = self.kind()?;
        if let Some(v) = self.vocab {
            if !v.contains(&kind) {
                let (line, column) = self.line_col(kind_pos);
                return Err(AstError::UnknownKind { kind, line, column });
            }
        }
        self.skip_ws();
        let mut tree = Tree::node(kind, Vec::new());
        match self.peek() {
            Some(b'"') => {
                tree.value = Some(self.string()?);
                self.skip_ws();
            }
            _ => {
                while self.peek() == Some(b'(') {
                    tree.children.push(self.node()?);
                    self.skip_ws();
                }
            }
        }
        match self.peek() {
            Some(b')') => {
                self.pos += 1;
                Ok(tree)
            }
            None => Err(self.error("unbalanced parenthesis: unexpected end of input")),
            Some(_) => Err(self.error("expected `)`")),
        }
    }

    fn kind(&mut self) -> Result<String, AstError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            None => return Err(self.error("unbalanced parenthesis: unexpected end of input")),
            _ => return Err(self.error("expected node kind")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn string(&mut self) -> Result<String, AstError> {
        if self.peek() != Some(b'"') {
            return Err(self.error("expected string"));
        }
        self.pos += 1;
        let mut out = String::new();
        loop {
            let rest = &self.text[self.pos..];
            let Some(c) = rest.chars().next() else {
                return Err(self.error("unterminated string"));
            };
            self.pos += c.len_utf8();
            match c {
                '"' => return Ok(out),
                '\\' => match self.peek() {
                    Some(b'"') => {
                        out.push('"');
                        self.pos += 1;
                    }
                    Some(b'\\') => {
                        out.push('\\');
                        self.pos += 1;
                    }
                    _ => return Err(self.error("invalid escape sequence")),
                },
                c => out.push(c),
            }
        }
    }
}
