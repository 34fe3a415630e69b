//! Canonical pretty-printer. `parse_document(print_document(doc))`
//! structurally equals `doc`.

use std::fmt::Write;

use super::{Decl, LtsDecl, ModelDocument, NetworkDecl, PolicyDecl};
use crate::edit2io::CompletionPolicy;
use crate::model::{CtlFormula, EditAutomaton};

pub fn print_document(doc: &ModelDocument) -> String {
    let mut out = String::new();
    for (i, decl) in doc.declarations.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match decl {
            Decl::Edit(e) => print_edit(&mut out, e),
            Decl::Lts(l) => print_lts(&mut out, l),
            Decl::Policy(p) => print_policy(&mut out, p),
            Decl::Network(n) => print_network(&mut out, n),
        }
    }
    out
}

fn comma_list<S: AsRef<str>>(items: impl IntoIterator<Item = S>) -> String {
    items
        .into_iter()
        .map(|s| s.as_ref().to_owned())
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_edit(out: &mut String, e: &EditAutomaton) {
    writeln!(out, "edit_automaton {} {{", e.name).unwrap();
    writeln!(out, "  alphabet {};", comma_list(e.alphabet.iter().map(|a| a.name()))).unwrap();
    writeln!(out, "  initial {};", e.initial).unwrap();
    writeln!(out, "  states {};", comma_list(e.states.iter().map(String::as_str))).unwrap();
    for t in &e.transitions {
        writeln!(
            out,
            "  trans {} -> {} on {} emit [{}];",
            t.from,
            t.to,
            t.on,
            comma_list(t.emit.0.iter().map(|a| a.name()))
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
}

fn print_lts(out: &mut String, l: &LtsDecl) {
    writeln!(out, "lts {} {{", l.name).unwrap();
    writeln!(out, "  initial {};", l.initial).unwrap();
    writeln!(out, "  states {};", comma_list(l.states.iter().map(String::as_str))).unwrap();
    for (from, on, to) in &l.transitions {
        writeln!(out, "  trans {from} -> {to} on {on};").unwrap();
    }
    writeln!(out, "}}").unwrap();
}

fn print_policy(out: &mut String, p: &PolicyDecl) {
    writeln!(out, "policy {} = {};", p.name, print_formula(&p.formula)).unwrap();
}

fn print_network(out: &mut String, n: &NetworkDecl) {
    writeln!(out, "network {} {{", n.name).unwrap();
    writeln!(out, "  enforcers {};", n.enforcers.join(" ")).unwrap();
    writeln!(out, "  app {};", n.app).unwrap();
    writeln!(out, "  resource {};", n.resources.join(" ")).unwrap();
    for (action, component) in &n.targets {
        writeln!(out, "  target {action} -> {component};").unwrap();
    }
    let completion = match n.completion {
        CompletionPolicy::Identity => "identity",
        CompletionPolicy::Strict => "strict",
    };
    writeln!(out, "  completion {completion};").unwrap();
    writeln!(out, "}}").unwrap();
}

/// Binding strength, loosest first: `=>` < `||` < `&&` < unary.
fn level(f: &CtlFormula) -> u8 {
    use CtlFormula::*;
    match f {
        Implies(_, _) => 0,
        Or(_, _) => 1,
        And(_, _) => 2,
        _ => 3,
    }
}

/// Canonical policy text; children are parenthesized exactly when they
/// bind more loosely than their context requires.
pub fn print_formula(f: &CtlFormula) -> String {
    use CtlFormula::*;
    let child = |g: &CtlFormula, min: u8| {
        let s = print_formula(g);
        if level(g) < min {
            format!("({s})")
        } else {
            s
        }
    };
    match f {
        True => "true".into(),
        False => "false".into(),
        Deadlock => "deadlock".into(),
        Atom(a) => format!("act({a})"),
        Not(p) => format!("!{}", child(p, 3)),
        And(p, q) => format!("{} && {}", child(p, 3), child(q, 3)),
        Or(p, q) => format!("{} || {}", child(p, 2), child(q, 2)),
        // right-associative: a nested implication on the left must keep
        // its parentheses, on the right it may not
        Implies(p, q) => format!("{} => {}", child(p, 1), child(q, 0)),
        Ax(p) => format!("AX {}", child(p, 3)),
        Ex(p) => format!("EX {}", child(p, 3)),
        Af(p) => format!("AF {}", child(p, 3)),
        Ef(p) => format!("EF {}", child(p, 3)),
        Ag(p) => format!("AG {}", child(p, 3)),
        Eg(p) => format!("EG {}", child(p, 3)),
        Au(p, q) => format!("A[ {} U {} ]", print_formula(p), print_formula(q)),
        Eu(p, q) => format!("E[ {} U {} ]", print_formula(p), print_formula(q)),
        Aw(p, q) => format!("A[ {} W {} ]", print_formula(p), print_formula(q)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_policy;

    fn round(src: &str) -> String {
        print_formula(&parse_policy(src).unwrap())
    }

    #[test]
    fn formula_round_trip_is_stable() {
        for src in [
            "AG (act(create) => AX A[ !act(onStop) W act(release) ])",
            "act(a) => act(b) => act(c)",
            "(act(a) => act(b)) => act(c)",
            "!(act(a) && act(b)) || true",
            "E[ true U deadlock ]",
            "AF (act(a) || EG !act(b))",
        ] {
            let once = round(src);
            let twice = round(&once);
            assert_eq!(once, twice, "printer not canonical for {src}");
            assert_eq!(
                parse_policy(src).unwrap(),
                parse_policy(&once).unwrap(),
                "round trip changed the AST for {src}"
            );
        }
    }

    #[test]
    fn parens_only_where_needed() {
        assert_eq!(round("act(a) => (act(b) => act(c))"), "act(a) => act(b) => act(c)");
        assert_eq!(round("(act(a) => act(b)) => act(c)"), "(act(a) => act(b)) => act(c)");
        assert_eq!(round("!(act(a))"), "!act(a)");
    }
}
