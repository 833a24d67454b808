//! Graphviz output for the complex `K` and the edge map `g`.

use std::fmt::Write;

use tilecoh_core::complex::Node;
use tilecoh_core::CohomologyResult;

use crate::report::Labels;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

/// `K`: letter edges `entry(a) → exit(a)` drawn solid, transition edges thin,
/// eventual-range edges bold.
pub fn complex_dot(res: &CohomologyResult) -> String {
    let labels = Labels::new(&res.substitution);
    let complex = &res.complex;
    let range = &res.dynamics.range;
    let mut out = String::new();
    writeln!(out, "digraph K {{").unwrap();
    writeln!(out, "    rankdir=LR;").unwrap();
    writeln!(out, "    node [shape=circle, fontsize=10];").unwrap();
    for a in 0..res.substitution.alphabet_size() {
        for node in [Node::Entry(a), Node::Exit(a)] {
            let id = labels.node(node);
            writeln!(out, "    {} [label={}];", quote(&id), quote(&id)).unwrap();
        }
    }
    for (from, to) in complex.letter_edges() {
        let Node::Exit(a) = to else { unreachable!() };
        writeln!(
            out,
            "    {} -> {} [style=solid, label={}];",
            quote(&labels.node(from)),
            quote(&labels.node(to)),
            quote(res.substitution.symbol(a))
        )
        .unwrap();
    }
    for e in 0..complex.edges().len() {
        let (from, to) = complex.endpoints(e);
        let style = if range.contains(e) {
            "style=bold"
        } else {
            "penwidth=0.5"
        };
        writeln!(
            out,
            "    {} -> {} [{style}, label={}];",
            quote(&labels.node(from)),
            quote(&labels.node(to)),
            quote(&labels.edge(complex, e))
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Functional graph of `g` on transition edges; eventual-range edges bold.
pub fn map_dot(res: &CohomologyResult) -> String {
    let labels = Labels::new(&res.substitution);
    let complex = &res.complex;
    let range = &res.dynamics.range;
    let mut out = String::new();
    writeln!(out, "digraph g {{").unwrap();
    writeln!(out, "    node [shape=box, fontsize=10];").unwrap();
    for e in 0..complex.edges().len() {
        let id = labels.edge(complex, e);
        if range.contains(e) {
            writeln!(out, "    {} [style=bold];", quote(&id)).unwrap();
        } else {
            writeln!(out, "    {};", quote(&id)).unwrap();
        }
    }
    for (e, &img) in res.dynamics.map.images().iter().enumerate() {
        writeln!(
            out,
            "    {} -> {};",
            quote(&labels.edge(complex, e)),
            quote(&labels.edge(complex, img))
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
