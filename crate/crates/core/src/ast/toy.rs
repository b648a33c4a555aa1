// SPDX-License-Identifier: Apache-2.0

//! A small demo language used to build example corpora.
//!
//! ```text
//! unit  := stmt*
//! stmt  := "return" expr? ";"
//!        | "if" "(" expr ")" block ("else" block)?
//!        | expr "=" expr ";"
//!        | expr ";"
//! block := "{" stmt* "}"
//! expr  := binary expression over || && == != < > <= >= + - * / %
//!          with postfix member access `.name` and calls `(args)`
//! ```
//!
//! Every literal is a single terminal. Statement-level expressions are
//! wrapped in an `Expr` node, calls are `Call(callee, ArgList(Arg(e)*))` and
//! member access is `Navigation(object, Name)`.

use super::{Ast, AstError, Tree};

/// A top-level statement with the 1-based source lines it spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyStatement {
    pub tree: Tree,
    pub first_line: usize,
    pub last_line: usize,
}

pub fn parse_toy(source: &str) -> Result<Ast, AstError> {
    let stmts = parse_toy_statements(source)?;
    Ast::from_tree(&Tree::node(
        "Unit",
        stmts.into_iter().map(|s| s.tree).collect(),
    ))
}

pub fn parse_toy_statements(source: &str) -> Result<Vec<ToyStatement>, AstError> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut out = Vec::new();
    while !p.at_end() {
        let first_line = p.tokens[p.pos].line;
        let tree = p.statement()?;
        let last_line = p.tokens[p.pos - 1].line;
        out.push(ToyStatement {
            tree,
            first_line,
            last_line,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Punct(&'static str),
    Keyword(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const PUNCT: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "(", ")", "{", "}", ",", ";", ".", "=", "<", ">", "+", "-",
    "*", "/", "%",
];
const KEYWORDS: &[&str] = &["return", "if", "else"];

fn lex(src: &str) -> Result<Vec<Token>, AstError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: &str| AstError::Syntax {
        line,
        column,
        message: message.to_string(),
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let start = i;
        let tok = if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word),
            }
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            Tok::Number(chars[start..i].iter().collect())
        } else if c == '"' {
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(err(start_line, start_col, "unterminated string literal"))
                    }
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => match chars.get(i + 1) {
                        Some(&e @ ('"' | '\\')) => {
                            s.push(e);
                            i += 2;
                        }
                        _ => return Err(err(line, col + (i - start), "invalid escape sequence")),
                    },
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            Tok::Str(s)
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    i += p.chars().count();
                    Tok::Punct(p)
                }
                None => return Err(err(line, col, &format!("unexpected character `{c}`"))),
            }
        };
        col += i - start;
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

const BINARY_LEVELS: &[&[&str]] = &[
    &["||"],
    &["&&"],
    &["==", "!="],
    &["<", ">", "<=", ">="],
    &["+", "-"],
    &["*", "/", "%"],
];

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn error(&self, message: &str) -> AstError {
        let (line, column) = match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => self
                .tokens
                .last()
                .map_or((1, 1), |t| (t.line, t.column + 1)),
        };
        AstError::Syntax {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), AstError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{p}`")))
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Keyword(q)) if *q == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn statement(&mut self) -> Result<Tree, AstError> {
        if self.eat_keyword("return") {
            if self.eat_punct(";") {
                return Ok(Tree::node("Return", vec![]));
            }
            let e = self.expr()?;
            self.expect_punct(";")?;
            return Ok(Tree::node("Return", vec![e]));
        }
        if self.eat_keyword("if") {
            self.expect_punct("(")?;
            let cond = self.expr()?;
            self.expect_punct(")")?;
            let then = self.block()?;
            let mut children = vec![cond, then];
            if self.eat_keyword("else") {
                children.push(self.block()?);
            }
            return Ok(Tree::node("If", children));
        }
        let e = self.expr()?;
        if self.eat_punct("=") {
            if !matches!(e.kind.as_str(), "Name" | "Navigation") {
                return Err(self.error("assignment target must be a name or member access"));
            }
            let v = self.expr()?;
            self.expect_punct(";")?;
            return Ok(Tree::node("Assign", vec![e, v]));
        }
        self.expect_punct(";")?;
        Ok(Tree::node("Expr", vec![e]))
    }

    fn block(&mut self) -> Result<Tree, AstError> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.eat_punct("}") {
            if self.at_end() {
                return Err(self.error("expected `}`"));
            }
            stmts.push(self.statement()?);
        }
        Ok(Tree::node("Block", stmts))
    }

    fn expr(&mut self) -> Result<Tree, AstError> {
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> Result<Tree, AstError> {
        if level == BINARY_LEVELS.len() {
            return self.postfix();
        }
        let mut lhs = self.binary(level + 1)?;
        loop {
            let op = match self.peek() {
                Some(Tok::Punct(p)) if BINARY_LEVELS[level].contains(p) => *p,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            lhs = Tree::node("Binary", vec![lhs, Tree::leaf("Op", op), rhs]);
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Tree, AstError> {
        let mut e = self.primary()?;
        loop {
            if self.eat_punct(".") {
                match self.peek().cloned() {
                    Some(Tok::Ident(name)) => {
                        self.pos += 1;
                        e = Tree::node("Navigation", vec![e, Tree::leaf("Name", name)]);
                    }
                    _ => return Err(self.error("expected member name after `.`")),
                }
            } else if self.eat_punct("(") {
                let mut args = Vec::new();
                if !self.eat_punct(")") {
                    loop {
                        args.push(Tree::node("Arg", vec![self.expr()?]));
                        if self.eat_punct(")") {
                            break;
                        }
                        self.expect_punct(",")?;
                    }
                }
                e = Tree::node("Call", vec![e, Tree::node("ArgList", args)]);
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<Tree, AstError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Tree::leaf("Name", v))
            }
            Some(Tok::Number(v)) => {
                self.pos += 1;
                Ok(Tree::leaf("Number", v))
            }
            Some(Tok::Str(v)) => {
                self.pos += 1;
                Ok(Tree::leaf("String", v))
            }
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            _ => Err(self.error("expected expression")),
        }
    }
}

/// Renders a `Unit` tree back to demo-language source, one top-level
/// statement per line (blocks span several lines).
pub fn pretty_print(ast: &Ast) -> Result<String, AstError> {
    let tree = ast.to_tree();
    if tree.kind != "Unit" {
        return Err(AstError::Malformed(format!(
            "expected Unit root, found {}",
            tree.kind
        )));
    }
    let mut out = String::new();
    for s in &tree.children {
        print_stmt(s, 0, &mut out)?;
    }
    Ok(out)
}

fn malformed(t: &Tree) -> AstError {
    AstError::Malformed(format!("unexpected `{}` node", t.kind))
}

fn print_stmt(t: &Tree, indent: usize, out: &mut String) -> Result<(), AstError> {
    let pad = " ".repeat(indent);
    match (t.kind.as_str(), t.children.as_slice()) {
        ("Return", []) => out.push_str(&format!("{pad}return;\n")),
        ("Return", [e]) => out.push_str(&format!("{pad}return {};\n", print_expr(e)?)),
        ("Expr", [e]) => out.push_str(&format!("{pad}{};\n", print_expr(e)?)),
        ("Assign", [target, e]) if matches!(target.kind.as_str(), "Name" | "Navigation") => out
            .push_str(&format!(
                "{pad}{} = {};\n",
                print_expr(target)?,
                print_expr(e)?
            )),
        ("If", [c, then, rest @ ..]) if rest.len() <= 1 => {
            out.push_str(&format!("{pad}if ({}) ", print_expr(c)?));
            print_block(then, indent, out)?;
            if let Some(els) = rest.first() {
                out.push_str(" else ");
                print_block(els, indent, out)?;
            }
            out.push('\n');
        }
        _ => return Err(malformed(t)),
    }
    Ok(())
}

fn print_block(t: &Tree, indent: usize, out: &mut String) -> Result<(), AstError> {
    if t.kind != "Block" {
        return Err(malformed(t));
    }
    out.push_str("{\n");
    for s in &t.children {
        print_stmt(s, indent + 4, out)?;
    }
    out.push_str(&" ".repeat(indent));
    out.push('}');
    Ok(())
}

fn print_operand(t: &Tree) -> Result<String, AstError> {
    let s = print_expr(t)?;
    Ok(if t.kind == "Binary" {
        format!("({s})")
    } else {
        s
    })
}

fn print_expr(t: &Tree) -> Result<String, AstError> {
    match (t.kind.as_str(), &t.value, t.children.as_slice()) {
        ("Name" | "Number", Some(v), []) => Ok(v.clone()),
        ("String", Some(v), []) => Ok(super::sexpr::quote(v)),
        ("Binary", None, [l, op, r]) if op.kind == "Op" && op.value.is_some() => Ok(format!(
            "{} {} {}",
            print_operand(l)?,
            op.value.as_deref().unwrap_or_default(),
            print_operand(r)?
        )),
        ("Navigation", None, [obj, field]) if field.kind == "Name" && field.value.is_some() => {
            Ok(format!(
                "{}.{}",
                print_operand(obj)?,
                field.value.as_deref().unwrap_or_default()
            ))
        }
        ("Call", None, [callee, args]) if args.kind == "ArgList" => {
            let mut parts = Vec::with_capacity(args.children.len());
            for a in &args.children {
                match (a.kind.as_str(), a.children.as_slice()) {
                    ("Arg", [e]) => parts.push(print_expr(e)?),
                    _ => return Err(malformed(a)),
                }
            }
            Ok(format!("{}({})", print_operand(callee)?, parts.join(", ")))
        }
        _ => Err(malformed(t)),
    }
}
