//! DOT (Graphviz) export for the three model kinds. Committed states
//! render as boxes, plain states as ellipses; deadlocked global states
//! as doubly-peripheried boxes.

use std::fmt::Write;

use crate::compose::{GlobalStateGraph, Network};
use crate::model::{EditAutomaton, IoAutomaton, Polarity};

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn header(out: &mut String, name: &str) {
    writeln!(out, "digraph {} {{", quoted(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __start [shape=point, label=\"\"];").unwrap();
}

pub fn export_dot_edit(e: &EditAutomaton) -> String {
    let mut out = String::new();
    header(&mut out, &e.name);
    for s in &e.states {
        writeln!(out, "  {} [shape=ellipse];", quoted(s)).unwrap();
    }
    writeln!(out, "  __start -> {};", quoted(&e.initial)).unwrap();
    for t in &e.transitions {
        let emit = t
            .emit
            .0
            .iter()
            .map(|a| a.name().to_owned())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quoted(&t.from),
            quoted(&t.to),
            quoted(&format!("{} / [{}]", t.on, emit))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn export_dot_io(m: &IoAutomaton) -> String {
    let mut out = String::new();
    header(&mut out, &m.name);
    for s in &m.states {
        let shape = if s.committed { "box" } else { "ellipse" };
        writeln!(out, "  {} [shape={shape}];", quoted(&s.id)).unwrap();
    }
    writeln!(out, "  __start -> {};", quoted(&m.states[m.start].id)).unwrap();
    for t in &m.transitions {
        let mark = match t.polarity {
            Polarity::Input => "?",
            Polarity::Output => "!",
            Polarity::Internal => "",
        };
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quoted(&m.states[t.from].id),
            quoted(&m.states[t.to].id),
            quoted(&format!("{}{mark}", t.action))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn export_dot_global(g: &GlobalStateGraph, net: &Network) -> String {
    let mut out = String::new();
    header(&mut out, "global");
    for (i, node) in g.nodes.iter().enumerate() {
        let label = quoted(&net.describe(node));
        if g.out[i].is_empty() {
            writeln!(out, "  n{i} [shape=box, peripheries=2, label={label}];").unwrap();
        } else {
            writeln!(out, "  n{i} [shape=ellipse, label={label}];").unwrap();
        }
    }
    writeln!(out, "  __start -> n{};", g.initial).unwrap();
    for (from, label, to) in &g.edges {
        writeln!(out, "  n{from} -> n{to} [label={}];", quoted(label.name())).unwrap();
    }
    out.push_str("}\n");
    out
}
