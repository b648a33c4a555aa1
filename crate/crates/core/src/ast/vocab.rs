// SPDX-License-Identifier: Apache-2.0

/// Closed set of node-kind symbols for a grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarVocab {
    symbols: Vec<String>,
    pub max_child_index: usize,
}

/// Node kinds produced by the demo-language parser.
pub const TOY_KINDS: &[&str] = &[
    "Unit",
    "Expr",
    "Assign",
    "Return",
    "If",
    "Block",
    "Call",
    "ArgList",
    "Arg",
    "Navigation",
    "Binary",
    "Name",
    "Number",
    "String",
    "Op",
];

/// Largest grammar the embedding tables are sized for.
pub const MAX_GRAMMAR_SYMBOLS: usize = 88;

impl GrammarVocab {
    /// Builds a vocabulary, dropping duplicate symbols (first occurrence wins).
    pub fn new(symbols: Vec<String>, max_child_index: usize) -> Self {
        let mut out: Vec<String> = Vec::with_capacity(symbols.len());
        for s in symbols {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        GrammarVocab {
            symbols: out,
            max_child_index,
        }
    }

    pub fn toy() -> Self {
        GrammarVocab::new(TOY_KINDS.iter().map(|s| s.to_string()).collect(), 31)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn contains(&self, kind: &str) -> bool {
        self.symbols.iter().any(|s| s == kind)
    }

    pub fn index_of(&self, kind: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == kind)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_grammar_fits_embedding_budget() {
        let v = GrammarVocab::toy();
        assert!(v.len() <= MAX_GRAMMAR_SYMBOLS);
        assert_eq!(v.len(), TOY_KINDS.len());
        assert_eq!(v.index_of("Call"), Some(6));
    }

    #[test]
    fn duplicates_are_dropped() {
        let v = GrammarVocab::new(vec!["a".into(), "b".into(), "a".into()], 4);
        assert_eq!(v.symbols(), ["a", "b"]);
    }
}
