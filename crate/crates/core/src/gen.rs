// SPDX-License-Identifier: Apache-2.0

//! Random tree generators used by property tests and the synthetic corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::Tree;

const INNER_KINDS: &[&str] = &["A", "B", "C", "D", "E"];
const LEAF_KINDS: &[&str] = &["x", "y", "z"];
const VALUES: &[&str] = &["a", "b", "c", "d", "e", "f"];

/// A random generic tree with between 1 and `max_nodes` nodes. The root is
/// always a nonterminal of kind `R` unless `max_nodes == 1`.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> Tree {
    let target = rng.gen_range(1..=max_nodes.max(1));
    if target == 1 {
        return random_leaf(rng);
    }
    let mut budget = target - 1;
    let mut root = Tree::node("R", Vec::new());
    grow(rng, &mut root, &mut budget, 0);
    root
}

fn random_leaf<R: Rng>(rng: &mut R) -> Tree {
    Tree::leaf(
        *LEAF_KINDS.choose(rng).unwrap(),
        *VALUES.choose(rng).unwrap(),
    )
}

fn grow<R: Rng>(rng: &mut R, node: &mut Tree, budget: &mut usize, depth: usize) {
    let fanout = rng.gen_range(1..=4);
    for _ in 0..fanout {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        let inner = depth < 6 && *budget > 0 && rng.gen_bool(0.45);
        if inner {
            let mut child = Tree::node(*INNER_KINDS.choose(rng).unwrap(), Vec::new());
            grow(rng, &mut child, budget, depth + 1);
            node.children.push(child);
        } else if rng.gen_bool(0.1) {
            // childless nonterminal
            node.children
                .push(Tree::node(*INNER_KINDS.choose(rng).unwrap(), Vec::new()));
        } else {
            node.children.push(random_leaf(rng));
        }
    }
    if depth == 0 {
        while *budget > 0 {
            *budget -= 1;
            node.children.push(random_leaf(rng));
        }
    }
}

/// Pre-order addresses: the child-index route from the root to each node.
fn addresses(tree: &Tree) -> Vec<Vec<usize>> {
    fn walk(t: &Tree, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (i, c) in t.children.iter().enumerate() {
            cur.push(i);
            walk(c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(tree, &mut Vec::new(), &mut out);
    out
}

fn at_mut<'a>(tree: &'a mut Tree, addr: &[usize]) -> &'a mut Tree {
    addr.iter().fold(tree, |t, &i| &mut t.children[i])
}

/// Applies `edits` random structural edits (relabel, delete, move, insert,
/// swap) to a copy of `tree`. The root is never removed.
pub fn mutate<R: Rng>(rng: &mut R, tree: &Tree, edits: usize) -> Tree {
    let mut t = tree.clone();
    for _ in 0..edits {
        let addrs = addresses(&t);
        let pick = rng.gen_range(0..addrs.len());
        let addr = addrs[pick].clone();
        match rng.gen_range(0..5) {
            0 => {
                let n = at_mut(&mut t, &addr);
                if n.is_terminal() {
                    n.value = Some(VALUES.choose(rng).unwrap().to_string());
                } else if !addr.is_empty() {
                    n.kind = INNER_KINDS.choose(rng).unwrap().to_string();
                }
            }
            1 if !addr.is_empty() => {
                let (last, parent) = addr.split_last().unwrap();
                at_mut(&mut t, parent).children.remove(*last);
            }
            2 if !addr.is_empty() => {
                let (last, parent) = addr.split_last().unwrap();
                let moved = at_mut(&mut t, parent).children.remove(*last);
                let hosts: Vec<Vec<usize>> = addresses(&t)
                    .into_iter()
                    .filter(|a| !at_mut(&mut t, a).is_terminal())
                    .collect();
                let host = hosts.choose(rng).unwrap().clone();
                let h = at_mut(&mut t, &host);
                let pos = rng.gen_range(0..=h.children.len());
                h.children.insert(pos, moved);
            }
            3 => {
                let n = at_mut(&mut t, &addr);
                if !n.is_terminal() {
                    let pos = rng.gen_range(0..=n.children.len());
                    let fresh = if rng.gen_bool(0.7) {
                        random_leaf(rng)
                    } else {
                        Tree::node(
                            *INNER_KINDS.choose(rng).unwrap(),
                            vec![random_leaf(rng), random_leaf(rng)],
                        )
                    };
                    n.children.insert(pos, fresh);
                }
            }
            _ => {
                let n = at_mut(&mut t, &addr);
                if n.children.len() >= 2 {
                    let i = rng.gen_range(0..n.children.len());
                    let j = rng.gen_range(0..n.children.len());
                    n.children.swap(i, j);
                }
            }
        }
    }
    t
}

const TOY_NAMES: &[&str] = &["a", "b", "count", "getValue", "x1", "item_list", "Foo"];

/// A random program in the demo language, as a `Unit` tree.
pub fn random_toy_unit<R: Rng>(rng: &mut R, max_statements: usize) -> Tree {
    let n = rng.gen_range(0..=max_statements);
    Tree::node("Unit", (0..n).map(|_| toy_stmt(rng, 2)).collect())
}

fn toy_stmt<R: Rng>(rng: &mut R, depth: usize) -> Tree {
    match rng.gen_range(0..if depth > 0 { 5 } else { 4 }) {
        0 => {
            if rng.gen_bool(0.2) {
                Tree::node("Return", vec![])
            } else {
                Tree::node("Return", vec![toy_expr(rng, 2)])
            }
        }
        1 => {
            let target = if rng.gen_bool(0.7) {
                toy_name(rng)
            } else {
                Tree::node("Navigation", vec![toy_expr(rng, 1), toy_name(rng)])
            };
            Tree::node("Assign", vec![target, toy_expr(rng, 2)])
        }
        2 | 3 => Tree::node("Expr", vec![toy_expr(rng, 2)]),
        _ => {
            let block = |rng: &mut R| {
                let k = rng.gen_range(0..3);
                Tree::node("Block", (0..k).map(|_| toy_stmt(rng, depth - 1)).collect())
            };
            let mut ch = vec![toy_expr(rng, 1), block(rng)];
            if rng.gen_bool(0.5) {
                ch.push(block(rng));
            }
            Tree::node("If", ch)
        }
    }
}

fn toy_name<R: Rng>(rng: &mut R) -> Tree {
    Tree::leaf("Name", *TOY_NAMES.choose(rng).unwrap())
}

fn toy_expr<R: Rng>(rng: &mut R, depth: usize) -> Tree {
    let choice = if depth == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..6)
    };
    match choice {
        0 => toy_name(rng),
        1 => Tree::leaf("Number", rng.gen_range(0..100).to_string()),
        2 => Tree::leaf(
            "String",
            *["s", "with \"quote\"", "a\\b", ""].choose(rng).unwrap(),
        ),
        3 => {
            let op = *["+", "-", "*", "==", "<", "&&"].choose(rng).unwrap();
            Tree::node(
                "Binary",
                vec![
                    toy_expr(rng, depth - 1),
                    Tree::leaf("Op", op),
                    toy_expr(rng, depth - 1),
                ],
            )
        }
        4 => Tree::node("Navigation", vec![toy_expr(rng, depth - 1), toy_name(rng)]),
        _ => {
            let k = rng.gen_range(0..3);
            let args = (0..k)
                .map(|_| Tree::node("Arg", vec![toy_expr(rng, depth - 1)]))
                .collect();
            Tree::node(
                "Call",
                vec![toy_expr(rng, depth - 1), Tree::node("ArgList", args)],
            )
        }
    }
}
