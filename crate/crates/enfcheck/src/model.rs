//! Domain types shared across the analysis pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// An observable program action, identified by name.
///
/// Actions carry no payload; two actions are equal iff their names are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(pub String);

impl Action {
    pub fn new(name: impl Into<String>) -> Self {
        Action(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The suffixed channel name used after network renaming,
    /// e.g. `onCreate` delivered to `app` becomes `onCreate-app`.
    pub fn suffixed(&self, component: &str) -> Action {
        Action(format!("{}-{}", self.0, component))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Action {
    fn from(s: &str) -> Self {
        Action(s.to_owned())
    }
}

/// A finite ordered sequence of actions. May be empty (the empty
/// execution). Indexing is 1-based to match the usual sequence notation.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(pub Vec<Action>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Trace(names.iter().map(|n| Action::new(n.as_ref())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based indexing; panics if `i` is out of range.
    pub fn at(&self, i: usize) -> &Action {
        assert!(i >= 1 && i <= self.0.len(), "trace index {i} out of range");
        &self.0[i - 1]
    }

    /// Prefix up to and including position `i` (0 gives the empty trace).
    pub fn prefix(&self, i: usize) -> Trace {
        Trace(self.0[..i.min(self.0.len())].to_vec())
    }

    /// Suffix starting after position `i`.
    pub fn suffix_after(&self, i: usize) -> Trace {
        Trace(self.0[i.min(self.0.len())..].to_vec())
    }

    pub fn push(&mut self, a: Action) {
        self.0.push(a);
    }

    pub fn extend(&mut self, other: &Trace) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn iter(&self) -> impl Iterator<Item = &Action> {
        self.0.iter()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let names: Vec<&str> = self.0.iter().map(|a| a.name()).collect();
        f.write_str(&names.join(";"))
    }
}

/// A single transition of an edit automaton: accepting `on` in state
/// `from` moves to `to` and emits the sequence `emit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditTransition {
    pub from: String,
    pub on: Action,
    pub to: String,
    pub emit: Trace,
}

/// An edit automaton: a deterministic machine transforming executions
/// by suppressing accepted actions or inserting emitted sequences.
///
/// The transition function is partial; pairs not listed are left to a
/// completion policy downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditAutomaton {
    pub name: String,
    pub alphabet: BTreeSet<Action>,
    pub states: BTreeSet<String>,
    pub initial: String,
    pub transitions: Vec<EditTransition>,
}

impl EditAutomaton {
    /// Looks up the (unique, once validated) transition for a state/action pair.
    pub fn step(&self, state: &str, action: &Action) -> Option<&EditTransition> {
        self.transitions
            .iter()
            .find(|t| t.from == state && &t.on == action)
    }
}

/// Structural violations reported by [`validate_edit`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("nondeterminism: two transitions from state `{state}` on `{action}`")]
    Nondeterminism { state: String, action: Action },
    #[error("alphabet: action `{action}` used in {role} is not in the alphabet")]
    Alphabet { action: Action, role: String },
    #[error("reference: state `{state}` is not declared")]
    DanglingState { state: String },
    #[error("empty action name")]
    EmptyActionName,
}

/// Checks every structural invariant of an edit automaton and returns
/// the full list of violations (empty means valid).
pub fn validate_edit(ea: &EditAutomaton) -> Result<(), Vec<EditError>> {
    let mut errors = Vec::new();
    if !ea.states.contains(&ea.initial) {
        errors.push(EditError::DanglingState {
            state: ea.initial.clone(),
        });
    }
    for a in &ea.alphabet {
        if a.name().is_empty() {
            errors.push(EditError::EmptyActionName);
        }
    }
    let mut seen: BTreeSet<(&str, &Action)> = BTreeSet::new();
    for t in &ea.transitions {
        if !seen.insert((t.from.as_str(), &t.on)) {
            errors.push(EditError::Nondeterminism {
                state: t.from.clone(),
                action: t.on.clone(),
            });
        }
        for (state, _) in [(&t.from, "source"), (&t.to, "target")] {
            if !ea.states.contains(state) {
                errors.push(EditError::DanglingState {
                    state: state.clone(),
                });
            }
        }
        if !ea.alphabet.contains(&t.on) {
            errors.push(EditError::Alphabet {
                action: t.on.clone(),
                role: "an input".into(),
            });
        }
        for a in t.emit.iter() {
            if !ea.alphabet.contains(a) {
                errors.push(EditError::Alphabet {
                    action: a.clone(),
                    role: "an emission".into(),
                });
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Polarity of an I/O automaton action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Input,
    Output,
    Internal,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Input => "?",
            Polarity::Output => "!",
            Polarity::Internal => "",
        })
    }
}

/// A state of an I/O automaton.
///
/// States produced by the edit-automaton transformation carry either a
/// bare origin (a state of the source automaton) or, for committed
/// emission states, the input that opened the emission, the pending
/// sequence, and the 1-based index of the next action to emit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IoState {
    pub id: String,
    pub committed: bool,
    pub emission: Option<Emission>,
}

/// Emission bookkeeping attached to a committed state: `pending[index]`
/// is the next action to emit; after `pending[|pending|]` the automaton
/// lands in `target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Emission {
    pub input: Action,
    pub pending: Trace,
    pub index: usize,
    pub target: String,
}

impl IoState {
    pub fn plain(id: impl Into<String>) -> Self {
        IoState {
            id: id.into(),
            committed: false,
            emission: None,
        }
    }
}

/// An I/O automaton transition over a signed action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IoTransition {
    pub from: usize,
    pub action: Action,
    pub polarity: Polarity,
    pub to: usize,
}

/// An input/output labeled machine. Transitions refer to states by
/// index into `states`; the signature partitions the action set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoAutomaton {
    pub name: String,
    pub states: Vec<IoState>,
    pub start: usize,
    pub inputs: BTreeSet<Action>,
    pub outputs: BTreeSet<Action>,
    pub internals: BTreeSet<Action>,
    pub transitions: Vec<IoTransition>,
}

impl IoAutomaton {
    pub fn state(&self, i: usize) -> &IoState {
        &self.states[i]
    }

    pub fn transitions_from(&self, from: usize) -> impl Iterator<Item = &IoTransition> {
        self.transitions.iter().filter(move |t| t.from == from)
    }

    /// The unique successor on a signed action, if any.
    pub fn step(&self, from: usize, action: &Action, polarity: Polarity) -> Option<usize> {
        self.transitions
            .iter()
            .find(|t| t.from == from && &t.action == action && t.polarity == polarity)
            .map(|t| t.to)
    }

    pub fn committed_count(&self) -> usize {
        self.states.iter().filter(|s| s.committed).count()
    }

    /// Keeps the transition list sorted so iteration order is stable
    /// regardless of construction order.
    pub fn sort_transitions(&mut self) {
        let ids: Vec<String> = self.states.iter().map(|s| s.id.clone()).collect();
        self.transitions.sort_by(|a, b| {
            (&ids[a.from], &a.action, a.polarity, &ids[a.to]).cmp(&(
                &ids[b.from],
                &b.action,
                b.polarity,
                &ids[b.to],
            ))
        });
    }
}

/// Returns the declared alphabet of a model, polarity stripped.
pub fn alphabet_of_edit(ea: &EditAutomaton) -> BTreeSet<Action> {
    ea.alphabet.clone()
}

/// Returns the unsigned action set of an I/O automaton.
pub fn alphabet_of_io(ioa: &IoAutomaton) -> BTreeSet<Action> {
    let mut set = ioa.inputs.clone();
    set.extend(ioa.outputs.iter().cloned());
    set.extend(ioa.internals.iter().cloned());
    set
}

/// Pairwise-shared actions: the union over pairs of automata of the
/// intersection of their alphabets.
pub fn shared_alphabet(alphabets: &[BTreeSet<Action>]) -> BTreeSet<Action> {
    let mut shared = BTreeSet::new();
    for (i, a) in alphabets.iter().enumerate() {
        for b in alphabets.iter().skip(i + 1) {
            shared.extend(a.intersection(b).cloned());
        }
    }
    shared
}

/// A policy over executions: a CTL formula whose atoms name base
/// actions, plus the routing that resolves each atom to the delivered
/// (suffixed) action it observes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    pub name: String,
    pub formula: CtlFormula,
    /// atom (base action name) -> (base action, target component id)
    pub bindings: BTreeMap<String, (Action, String)>,
}

/// CTL formulas over action-occurrence atoms.
///
/// `Atom` holds a base action name (resolved through policy bindings);
/// `Deadlock` is the reserved proposition labeling stuck states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CtlFormula {
    True,
    False,
    Atom(String),
    Deadlock,
    Not(Box<CtlFormula>),
    And(Box<CtlFormula>, Box<CtlFormula>),
    Or(Box<CtlFormula>, Box<CtlFormula>),
    Implies(Box<CtlFormula>, Box<CtlFormula>),
    Ax(Box<CtlFormula>),
    Ex(Box<CtlFormula>),
    Af(Box<CtlFormula>),
    Ef(Box<CtlFormula>),
    Ag(Box<CtlFormula>),
    Eg(Box<CtlFormula>),
    /// A[p U q]
    Au(Box<CtlFormula>, Box<CtlFormula>),
    /// E[p U q]
    Eu(Box<CtlFormula>, Box<CtlFormula>),
    /// A[p W q] (weak until: no obligation that q ever holds)
    Aw(Box<CtlFormula>, Box<CtlFormula>),
}

impl CtlFormula {
    pub fn not(f: CtlFormula) -> CtlFormula {
        CtlFormula::Not(Box::new(f))
    }

    pub fn implies(p: CtlFormula, q: CtlFormula) -> CtlFormula {
        CtlFormula::Implies(Box::new(p), Box::new(q))
    }

    pub fn ag(f: CtlFormula) -> CtlFormula {
        CtlFormula::Ag(Box::new(f))
    }

    pub fn ax(f: CtlFormula) -> CtlFormula {
        CtlFormula::Ax(Box::new(f))
    }

    pub fn aw(p: CtlFormula, q: CtlFormula) -> CtlFormula {
        CtlFormula::Aw(Box::new(p), Box::new(q))
    }

    /// All atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        use CtlFormula::*;
        match self {
            True | False | Deadlock => {}
            Atom(a) => {
                out.insert(a.clone());
            }
            Not(f) | Ax(f) | Ex(f) | Af(f) | Ef(f) | Ag(f) | Eg(f) => f.collect_atoms(out),
            And(p, q) | Or(p, q) | Implies(p, q) | Au(p, q) | Eu(p, q) | Aw(p, q) => {
                p.collect_atoms(out);
                q.collect_atoms(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::ea_p1;

    #[test]
    fn ea_p1_is_valid() {
        assert_eq!(validate_edit(&ea_p1()), Ok(()));
    }

    #[test]
    fn duplicate_transition_is_nondeterminism() {
        let mut ea = ea_p1();
        ea.transitions.push(EditTransition {
            from: "0".into(),
            on: "onCreate".into(),
            to: "0".into(),
            emit: Trace::empty(),
        });
        let errs = validate_edit(&ea).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, EditError::Nondeterminism { state, action }
                if state == "0" && action.name() == "onCreate")));
    }

    #[test]
    fn foreign_emission_is_alphabet_error() {
        let mut ea = ea_p1();
        ea.transitions[0].emit = Trace::from_names(&["x"]);
        let errs = validate_edit(&ea).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, EditError::Alphabet { action, .. } if action.name() == "x")));
    }

    #[test]
    fn dangling_state_is_reported() {
        let mut ea = ea_p1();
        ea.transitions[0].to = "9".into();
        let errs = validate_edit(&ea).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, EditError::DanglingState { state } if state == "9")));
    }

    #[test]
    fn alphabet_of_ea_p1() {
        let expect: BTreeSet<Action> = ["create", "onCreate", "onStop", "release"]
            .iter()
            .map(|s| Action::new(*s))
            .collect();
        assert_eq!(alphabet_of_edit(&ea_p1()), expect);
    }

    #[test]
    fn shared_alphabet_pairs() {
        let a: BTreeSet<Action> = ["onCreate", "onStop", "create", "release"]
            .iter()
            .map(|s| Action::new(*s))
            .collect();
        let b: BTreeSet<Action> = ["onCreate", "onStop", "start", "stop"]
            .iter()
            .map(|s| Action::new(*s))
            .collect();
        let shared = shared_alphabet(&[a.clone(), b]);
        let expect: BTreeSet<Action> = ["onCreate", "onStop"]
            .iter()
            .map(|s| Action::new(*s))
            .collect();
        assert_eq!(shared, expect);
        assert!(shared_alphabet(&[a]).is_empty());
    }

    #[test]
    fn trace_prefix_suffix_reconstitute() {
        let t = Trace::from_names(&["a", "b", "c"]);
        for i in 0..=t.len() {
            let mut rebuilt = t.prefix(i);
            rebuilt.extend(&t.suffix_after(i));
            assert_eq!(rebuilt, t);
        }
    }
}
