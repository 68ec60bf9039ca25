//! Human-readable and DOT renderings of solutions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use corec::solver::{Classification, Decomposed};
use corec::{RationalTree, Step, BOTTOM, BOTTOM_ASCII};

fn label(l: &str) -> &str {
    if l == BOTTOM {
        BOTTOM_ASCII
    } else {
        l
    }
}

/// Closed μ-term for a rational tree, e.g. `mu s0. sigma(s0, y)`. States are
/// bound only where a cycle returns to them; shared acyclic states are
/// printed once per occurrence, so the output is capped at `max_nodes`
/// printed nodes (`None` when exceeded).
pub fn mu_term(t: &RationalTree, max_nodes: u64) -> Option<String> {
    struct Ctx<'a> {
        t: &'a RationalTree,
        on_path: Vec<bool>,
        bound: Vec<bool>,
        printed: u64,
        max: u64,
    }
    fn go(cx: &mut Ctx, s: usize) -> Option<String> {
        cx.printed += 1;
        if cx.printed > cx.max {
            return None;
        }
        if cx.on_path[s] {
            cx.bound[s] = true;
            return Some(format!("s{s}"));
        }
        match cx.t.step(s) {
            Step::Leaf(l) => Some(label(l).to_string()),
            Step::Op { symbol, children } => {
                cx.on_path[s] = true;
                let args = children.iter().map(|&c| go(cx, c)).collect::<Option<Vec<_>>>();
                cx.on_path[s] = false;
                let body = format!("{symbol}({})", args?.join(", "));
                if cx.bound[s] {
                    cx.bound[s] = false;
                    Some(format!("mu s{s}. {body}"))
                } else {
                    Some(body)
                }
            }
        }
    }
    let n = t.state_count();
    let mut cx = Ctx {
        t,
        on_path: vec![false; n],
        bound: vec![false; n],
        printed: 0,
        max: max_nodes,
    };
    go(&mut cx, t.root())
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One digraph with a cluster per named tree.
pub fn dot(trees: &BTreeMap<String, RationalTree>) -> String {
    let mut out = String::from("digraph solution {\n  rankdir=TB;\n  node [shape=circle];\n");
    for (name, t) in trees {
        let id = |s: usize| quote(&format!("{name}/s{s}"));
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{name}")));
        let _ = writeln!(out, "    label={};", quote(name));
        for (s, step) in t.steps().iter().enumerate() {
            match step {
                Step::Leaf(l) => {
                    let _ = writeln!(out, "    {} [label={}, shape=box];", id(s), quote(label(l)));
                }
                Step::Op { symbol, .. } => {
                    let _ = writeln!(out, "    {} [label={}];", id(s), quote(symbol));
                }
            }
        }
        let _ = writeln!(out, "  }}");
        let entry = quote(&format!("{name}:"));
        let _ = writeln!(out, "  {entry} [label={}, shape=plaintext];", quote(name));
        let _ = writeln!(out, "  {entry} -> {};", id(t.root()));
        for (s, step) in t.steps().iter().enumerate() {
            for (i, &c) in step.children().iter().enumerate() {
                let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", id(s), id(c), i + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// `x : finite word "a b" leaf y` or `x : stream c (a b)^w`.
pub fn decomposed_line(name: &str, d: &Decomposed) -> String {
    match d {
        Decomposed::Finite { word, leaf } => format!("{name} : finite word \"{}\" leaf {leaf}", word.join(" ")),
        Decomposed::Infinite(l) => format!("{name} : stream {l}"),
    }
}

pub fn classification(c: &Classification) -> String {
    let mut out = String::new();
    for (i, layer) in c.layers.iter().enumerate() {
        let _ = writeln!(out, "layer {} : {}", i + 1, layer.join(" "));
    }
    let _ = writeln!(out, "infinite : {}", c.infinite.join(" "));
    out
}
