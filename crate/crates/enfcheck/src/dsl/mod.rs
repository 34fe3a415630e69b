//! The textual model language (`.enf` files) and every serialization
//! the tool emits: canonical pretty-printing, JSON reports, DOT export.
//!
//! A document is an ordered list of declarations:
//!
//! ```text
//! edit_automaton EA_p1 {
//!   alphabet create, onCreate, onStop, release;
//!   initial 0;
//!   states 0, 1, 2;
//!   trans 0 -> 1 on onCreate emit [onCreate];
//! }
//!
//! lts app {
//!   initial destroyed;
//!   states created, destroyed;
//!   trans destroyed -> created on onCreate;
//! }
//!
//! policy p1 = AG (act(create) => AX A[ !act(onStop) W act(release) ]);
//!
//! network main {
//!   enforcers EA_p1;
//!   app app;
//!   resource MediaPlayer;
//!   target create -> MediaPlayer;
//!   completion identity;
//! }
//! ```
//!
//! Comments run from `//` to end of line. Policies are written over
//! bare action names; the network's `target` map supplies the component
//! each atom is delivered to.

mod dot;
mod lex;
mod parse;
mod print;
mod report;

pub use dot::{export_dot_edit, export_dot_global, export_dot_io};
pub use parse::{parse_document, parse_policy};
pub use print::print_document;
pub use report::emit_report_json;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::compose::TargetMap;
use crate::edit2io::CompletionPolicy;
use crate::model::{Action, CtlFormula, EditAutomaton, IoAutomaton, IoState, IoTransition, Polarity, Policy};

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("{pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: duplicate {kind} name `{name}`")]
    DuplicateName { pos: Pos, kind: &'static str, name: String },
    #[error("{pos}: unresolved reference `{name}`")]
    Unresolved { pos: Pos, name: String },
    #[error("policy `{policy}`: atom `{atom}` is not routed by the network's target map")]
    UnboundAtom { policy: String, atom: String },
}

impl DslError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        DslError::Syntax { pos, msg: msg.into() }
    }
}

/// A framework model declaration: a deterministic, input-only labeled
/// transition system (app lifecycle or resource protocol).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsDecl {
    pub name: String,
    pub initial: String,
    pub states: Vec<String>,
    /// (from, on, to)
    pub transitions: Vec<(String, Action, String)>,
}

impl LtsDecl {
    /// The input-only I/O automaton this LTS denotes.
    pub fn to_io(&self) -> IoAutomaton {
        let index: BTreeMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        IoAutomaton {
            name: self.name.clone(),
            states: self.states.iter().map(|s| IoState::plain(s)).collect(),
            start: index[self.initial.as_str()],
            inputs: self.transitions.iter().map(|(_, a, _)| a.clone()).collect(),
            outputs: Default::default(),
            internals: Default::default(),
            transitions: self
                .transitions
                .iter()
                .map(|(f, a, t)| IoTransition {
                    from: index[f.as_str()],
                    action: a.clone(),
                    polarity: Polarity::Input,
                    to: index[t.as_str()],
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyDecl {
    pub name: String,
    pub formula: CtlFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkDecl {
    pub name: String,
    pub enforcers: Vec<String>,
    pub app: String,
    pub resources: Vec<String>,
    pub targets: TargetMap,
    pub completion: CompletionPolicy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Edit(EditAutomaton),
    Lts(LtsDecl),
    Policy(PolicyDecl),
    Network(NetworkDecl),
}

/// A parsed `.enf` document: declarations in source order, with all
/// cross-references already resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelDocument {
    pub declarations: Vec<Decl>,
}

impl ModelDocument {
    pub fn edit_automata(&self) -> impl Iterator<Item = &EditAutomaton> {
        self.declarations.iter().filter_map(|d| match d {
            Decl::Edit(e) => Some(e),
            _ => None,
        })
    }

    pub fn ltss(&self) -> impl Iterator<Item = &LtsDecl> {
        self.declarations.iter().filter_map(|d| match d {
            Decl::Lts(l) => Some(l),
            _ => None,
        })
    }

    pub fn policies(&self) -> impl Iterator<Item = &PolicyDecl> {
        self.declarations.iter().filter_map(|d| match d {
            Decl::Policy(p) => Some(p),
            _ => None,
        })
    }

    pub fn networks(&self) -> impl Iterator<Item = &NetworkDecl> {
        self.declarations.iter().filter_map(|d| match d {
            Decl::Network(n) => Some(n),
            _ => None,
        })
    }

    pub fn edit_automaton(&self, name: &str) -> Option<&EditAutomaton> {
        self.edit_automata().find(|e| e.name == name)
    }

    pub fn lts(&self, name: &str) -> Option<&LtsDecl> {
        self.ltss().find(|l| l.name == name)
    }

    pub fn network(&self, name: &str) -> Option<&NetworkDecl> {
        self.networks().find(|n| n.name == name)
    }

    /// Framework model list for a network, app first, in declaration
    /// order of the network's resource list.
    pub fn frameworks_for(&self, net: &NetworkDecl) -> Vec<(String, IoAutomaton)> {
        let mut out = vec![(net.app.clone(), self.lts(&net.app).expect("resolved").to_io())];
        for r in &net.resources {
            out.push((r.clone(), self.lts(r).expect("resolved").to_io()));
        }
        out
    }

    /// Enforcer list for a network, in the network's declaration order.
    pub fn enforcers_for(&self, net: &NetworkDecl) -> Vec<EditAutomaton> {
        net.enforcers
            .iter()
            .map(|e| self.edit_automaton(e).expect("resolved").clone())
            .collect()
    }

    /// Binds every policy of the document against a network's target
    /// map, producing checkable [`Policy`] values.
    pub fn bind_policies(&self, net: &NetworkDecl) -> Result<Vec<Policy>, DslError> {
        self.policies()
            .map(|p| {
                let mut bindings = BTreeMap::new();
                for atom in p.formula.atoms() {
                    let action = Action::new(atom.clone());
                    let target =
                        net.targets
                            .get(&action)
                            .cloned()
                            .ok_or_else(|| DslError::UnboundAtom {
                                policy: p.name.clone(),
                                atom: atom.clone(),
                            })?;
                    bindings.insert(atom, (action, target));
                }
                Ok(Policy {
                    name: p.name.clone(),
                    formula: p.formula.clone(),
                    bindings,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"
// Fig. 1 enforcer and the models it runs against.
edit_automaton EA_p1 {
  alphabet create, onCreate, onStop, release;
  initial 0;
  states 0, 1, 2;
  trans 0 -> 1 on onCreate emit [onCreate];
  trans 1 -> 0 on onStop emit [onStop];
  trans 1 -> 2 on create emit [create];
  trans 2 -> 0 on onStop emit [release, onStop];
  trans 2 -> 1 on release emit [release];
}

lts app {
  initial destroyed;
  states created, destroyed;
  trans destroyed -> created on onCreate;
  trans created -> destroyed on onStop;
}

lts MediaPlayer {
  initial idle;
  states created, idle;
  trans idle -> created on create;
  trans created -> idle on release;
}

policy p1 = AG (act(create) => AX A[ !act(onStop) W act(release) ]);

network main {
  enforcers EA_p1;
  app app;
  resource MediaPlayer;
  target onCreate -> app;
  target onStop -> app;
  target create -> MediaPlayer;
  target release -> MediaPlayer;
  completion identity;
}
"#;

    #[test]
    fn document_round_trips_through_the_printer() {
        let doc = parse_document(DOC).unwrap();
        let printed = print_document(&doc);
        let again = parse_document(&printed).unwrap();
        assert_eq!(doc, again);
        assert_eq!(printed, print_document(&again));
    }

    #[test]
    fn ea_p1_source_matches_the_fixture() {
        let doc = parse_document(DOC).unwrap();
        let ea = doc.edit_automaton("EA_p1").unwrap();
        assert_eq!(ea.states.len(), 3);
        assert_eq!(ea.transitions.len(), 5);
        let ins = ea
            .transitions
            .iter()
            .find(|t| t.from == "2" && t.on.name() == "onStop")
            .unwrap();
        assert_eq!(ins.emit.len(), 2);
    }

    #[test]
    fn policy_binding_follows_the_target_map() {
        let doc = parse_document(DOC).unwrap();
        let net = doc.network("main").unwrap();
        let pols = doc.bind_policies(net).unwrap();
        assert_eq!(pols.len(), 1);
        assert_eq!(
            pols[0].bindings["create"],
            (Action::new("create"), "MediaPlayer".to_string())
        );
        assert_eq!(
            pols[0].bindings["onStop"],
            (Action::new("onStop"), "app".to_string())
        );
    }

    #[test]
    fn unrouted_atom_is_a_binding_error() {
        let mut doc = parse_document(DOC).unwrap();
        let formula = CtlFormula::Atom("start".into());
        doc.declarations.push(Decl::Policy(PolicyDecl {
            name: "bad".into(),
            formula,
        }));
        let net = doc.network("main").unwrap().clone();
        assert!(matches!(
            doc.bind_policies(&net),
            Err(DslError::UnboundAtom { .. })
        ));
    }

    #[test]
    fn lts_denotes_an_input_only_automaton() {
        let doc = parse_document(DOC).unwrap();
        let io = doc.lts("MediaPlayer").unwrap().to_io();
        assert_eq!(io.states.len(), 2);
        assert!(io.outputs.is_empty());
        assert_eq!(io.start, 1, "initial `idle` is second in the state list");
    }
}
