// SPDX-License-Identifier: Apache-2.0

//! Abstract syntax trees, paths between their nodes, and the two concrete
//! syntaxes used to read and write them: a canonical s-expression
//! interchange format and a small demo language.

mod path;
pub mod sexpr;
mod subtoken;
pub mod toy;
mod tree;
mod vocab;

pub use path::{path_between, AstPath};
pub use sexpr::{parse_interchange, parse_interchange_prefix, serialize_interchange};
pub use subtoken::split_subtokens;
pub use toy::{parse_toy, parse_toy_statements, pretty_print, ToyStatement};
pub use tree::{Ast, AstNode, NodeId, Tree};
pub use vocab::{GrammarVocab, MAX_GRAMMAR_SYMBOLS, TOY_KINDS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AstError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown node kind `{kind}` at {line}:{column}")]
    UnknownKind {
        kind: String,
        line: usize,
        column: usize,
    },
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("empty token value")]
    EmptyValue,
    #[error("malformed tree: {0}")]
    Malformed(String),
}
