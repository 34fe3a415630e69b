//! Interference decision: CTL checking and deadlock detection on the
//! explored global state graph.
//!
//! Policies speak about action occurrences, so the graph is recast as a
//! Kripke structure whose nodes are (state, incoming delivered action)
//! pairs. Deadlock nodes are given a self-loop and the reserved
//! `deadlock` proposition to keep the transition relation total.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::time::Instant;

use thiserror::Error;

use crate::compose::{explore, ExploreError, GlobalStateGraph, Network};
use crate::model::{Action, CtlFormula, Policy, Trace};

/// A node of the Kripke structure: a graph node together with the
/// label it was entered by (`None` for the initial node).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeNode {
    pub graph_node: usize,
    pub incoming: Option<Action>,
    pub deadlock: bool,
}

#[derive(Debug, Clone)]
pub struct KripkeStructure {
    pub nodes: Vec<KripkeNode>,
    pub initial: usize,
    /// outgoing adjacency; total by construction
    pub out: Vec<Vec<usize>>,
}

impl KripkeStructure {
    pub fn holds_atom(&self, node: usize, action: &Action) -> bool {
        self.nodes[node].incoming.as_ref() == Some(action)
    }
}

/// Action-as-state encoding of the explored graph.
pub fn kripke_from_graph(g: &GlobalStateGraph) -> KripkeStructure {
    let mut nodes = vec![KripkeNode {
        graph_node: g.initial,
        incoming: None,
        deadlock: g.out[g.initial].is_empty(),
    }];
    let mut index: HashMap<(usize, Action), usize> = HashMap::new();
    for (_, label, target) in &g.edges {
        let key = (*target, label.clone());
        if !index.contains_key(&key) {
            index.insert(key, nodes.len());
            nodes.push(KripkeNode {
                graph_node: *target,
                incoming: Some(label.clone()),
                deadlock: g.out[*target].is_empty(),
            });
        }
    }
    let mut out = vec![Vec::new(); nodes.len()];
    for (i, node) in nodes.iter().enumerate() {
        if node.deadlock {
            out[i].push(i);
            continue;
        }
        for (label, target) in &g.out[node.graph_node] {
            out[i].push(index[&(*target, label.clone())]);
        }
    }
    KripkeStructure {
        nodes,
        initial: 0,
        out,
    }
}

#[derive(Debug, Clone, Error)]
pub enum CheckError {
    #[error("policy `{policy}`: atom `{atom}` has no action binding")]
    UnresolvedAtom { policy: String, atom: String },
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

/// Substitutes base-action atoms with their delivered (suffixed) names.
fn resolve_atoms(
    f: &CtlFormula,
    policy: &str,
    bindings: &BTreeMap<String, (Action, String)>,
) -> Result<CtlFormula, CheckError> {
    use CtlFormula::*;
    let rec = |g: &CtlFormula| resolve_atoms(g, policy, bindings);
    Ok(match f {
        True => True,
        False => False,
        Deadlock => Deadlock,
        Atom(a) => {
            let (base, target) = bindings.get(a).ok_or_else(|| CheckError::UnresolvedAtom {
                policy: policy.into(),
                atom: a.clone(),
            })?;
            Atom(base.suffixed(target).0)
        }
        Not(p) => Not(Box::new(rec(p)?)),
        And(p, q) => And(Box::new(rec(p)?), Box::new(rec(q)?)),
        Or(p, q) => Or(Box::new(rec(p)?), Box::new(rec(q)?)),
        Implies(p, q) => Implies(Box::new(rec(p)?), Box::new(rec(q)?)),
        Ax(p) => Ax(Box::new(rec(p)?)),
        Ex(p) => Ex(Box::new(rec(p)?)),
        Af(p) => Af(Box::new(rec(p)?)),
        Ef(p) => Ef(Box::new(rec(p)?)),
        Ag(p) => Ag(Box::new(rec(p)?)),
        Eg(p) => Eg(Box::new(rec(p)?)),
        Au(p, q) => Au(Box::new(rec(p)?), Box::new(rec(q)?)),
        Eu(p, q) => Eu(Box::new(rec(p)?), Box::new(rec(q)?)),
        Aw(p, q) => Aw(Box::new(rec(p)?), Box::new(rec(q)?)),
    })
}

/// Labeling-based CTL evaluator over the adequate set {EX, EU, EG}.
/// All other operators are rewritten through the standard dualities.
pub struct CtlChecker<'a> {
    k: &'a KripkeStructure,
    memo: HashMap<CtlFormula, Vec<bool>>,
}

impl<'a> CtlChecker<'a> {
    pub fn new(k: &'a KripkeStructure) -> Self {
        CtlChecker {
            k,
            memo: HashMap::new(),
        }
    }

    /// Satisfaction set of `f` (atoms must already be resolved).
    pub fn sat(&mut self, f: &CtlFormula) -> Vec<bool> {
        if let Some(s) = self.memo.get(f) {
            return s.clone();
        }
        use CtlFormula::*;
        let n = self.k.nodes.len();
        let set = match f {
            True => vec![true; n],
            False => vec![false; n],
            Deadlock => (0..n).map(|i| self.k.nodes[i].deadlock).collect(),
            Atom(a) => {
                let a = Action::new(a.clone());
                (0..n).map(|i| self.k.holds_atom(i, &a)).collect()
            }
            Not(p) => self.sat(p).iter().map(|b| !b).collect(),
            And(p, q) => {
                let (sp, sq) = (self.sat(p), self.sat(q));
                (0..n).map(|i| sp[i] && sq[i]).collect()
            }
            Or(p, q) => {
                let (sp, sq) = (self.sat(p), self.sat(q));
                (0..n).map(|i| sp[i] || sq[i]).collect()
            }
            Implies(p, q) => {
                // p => q  ≡  ¬p ∨ q
                let (sp, sq) = (self.sat(p), self.sat(q));
                (0..n).map(|i| !sp[i] || sq[i]).collect()
            }
            Ex(p) => {
                let sp = self.sat(p);
                (0..n)
                    .map(|i| self.k.out[i].iter().any(|&s| sp[s]))
                    .collect()
            }
            Eu(p, q) => {
                let (sp, sq) = (self.sat(p), self.sat(q));
                least_fixpoint(self.k, &sp, &sq)
            }
            Eg(p) => {
                let sp = self.sat(p);
                greatest_fixpoint(self.k, &sp)
            }
            // AX p ≡ ¬EX ¬p
            Ax(p) => {
                let r = Ex(Box::new(Not(p.clone())));
                self.sat(&Not(Box::new(r)))
            }
            // EF p ≡ E[true U p]
            Ef(p) => self.sat(&Eu(Box::new(True), p.clone())),
            // AG p ≡ ¬EF ¬p
            Ag(p) => {
                let r = Ef(Box::new(Not(p.clone())));
                self.sat(&Not(Box::new(r)))
            }
            // AF p ≡ ¬EG ¬p
            Af(p) => {
                let r = Eg(Box::new(Not(p.clone())));
                self.sat(&Not(Box::new(r)))
            }
            // A[p U q] ≡ ¬(E[¬q U (¬p ∧ ¬q)] ∨ EG ¬q)
            Au(p, q) => {
                let nq = Not(q.clone());
                let both = And(Box::new(Not(p.clone())), Box::new(Not(q.clone())));
                let eu = Eu(Box::new(nq.clone()), Box::new(both));
                let eg = Eg(Box::new(nq));
                self.sat(&Not(Box::new(Or(Box::new(eu), Box::new(eg)))))
            }
            // A[p W q] ≡ ¬E[¬q U (¬p ∧ ¬q)]
            Aw(p, q) => {
                let both = And(Box::new(Not(p.clone())), Box::new(Not(q.clone())));
                let eu = Eu(Box::new(Not(q.clone())), Box::new(both));
                self.sat(&Not(Box::new(eu)))
            }
        };
        self.memo.insert(f.clone(), set.clone());
        set
    }
}

/// sat(E[p U q]) by iteration to the least fixpoint.
fn least_fixpoint(k: &KripkeStructure, p: &[bool], q: &[bool]) -> Vec<bool> {
    let mut sat = q.to_vec();
    loop {
        let mut changed = false;
        for i in 0..sat.len() {
            if !sat[i] && p[i] && k.out[i].iter().any(|&s| sat[s]) {
                sat[i] = true;
                changed = true;
            }
        }
        if !changed {
            return sat;
        }
    }
}

/// sat(EG p) by iteration to the greatest fixpoint.
fn greatest_fixpoint(k: &KripkeStructure, p: &[bool]) -> Vec<bool> {
    let mut sat = p.to_vec();
    loop {
        let mut changed = false;
        for i in 0..sat.len() {
            if sat[i] && !k.out[i].iter().any(|&s| sat[s]) {
                sat[i] = false;
                changed = true;
            }
        }
        if !changed {
            return sat;
        }
    }
}

/// Verdict of a single policy check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyVerdict {
    pub name: String,
    pub holds: bool,
    pub counterexample: Option<Trace>,
}

/// Checks a resolved CTL formula at the initial node and, when it fails,
/// produces a counterexample trace of delivered actions.
pub fn check_ctl(k: &KripkeStructure, name: &str, resolved: &CtlFormula) -> PolicyVerdict {
    let mut checker = CtlChecker::new(k);
    let sat = checker.sat(resolved);
    if sat[k.initial] {
        return PolicyVerdict {
            name: name.into(),
            holds: true,
            counterexample: None,
        };
    }
    let trace = violation_path(k, &mut checker, k.initial, resolved);
    PolicyVerdict {
        name: name.into(),
        holds: false,
        counterexample: Some(Trace(trace)),
    }
}

/// BFS-shortest path (by edge count, ties broken by adjacency order)
/// from `from` to the nearest node where `pred` holds. Returns the node
/// and the incoming labels along the path.
fn shortest_to(
    k: &KripkeStructure,
    from: usize,
    pred: &[bool],
) -> Option<(usize, Vec<Action>)> {
    let mut parent: Vec<Option<usize>> = vec![None; k.nodes.len()];
    let mut seen = vec![false; k.nodes.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(cur) = queue.pop_front() {
        if pred[cur] {
            let mut labels = Vec::new();
            let mut at = cur;
            while at != from {
                labels.push(k.nodes[at].incoming.clone().expect("non-initial node"));
                at = parent[at].unwrap();
            }
            labels.reverse();
            return Some((cur, labels));
        }
        for &next in &k.out[cur] {
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some(cur);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Like `shortest_to` but restricted to paths whose intermediate nodes
/// satisfy `within` (used for until witnesses).
fn shortest_within(
    k: &KripkeStructure,
    from: usize,
    within: &[bool],
    pred: &[bool],
) -> Option<(usize, Vec<Action>)> {
    let mut parent: Vec<Option<usize>> = vec![None; k.nodes.len()];
    let mut seen = vec![false; k.nodes.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(cur) = queue.pop_front() {
        if pred[cur] {
            let mut labels = Vec::new();
            let mut at = cur;
            while at != from {
                labels.push(k.nodes[at].incoming.clone().expect("non-initial node"));
                at = parent[at].unwrap();
            }
            labels.reverse();
            return Some((cur, labels));
        }
        if !within[cur] {
            continue;
        }
        for &next in &k.out[cur] {
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some(cur);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Extends a violation at `node` into a readable path: for AG formulas
/// the shortest path to a node falsifying the operand, then recursively
/// into the nested obligation (implication, AX, until) so the trace
/// shows the offending continuation.
fn violation_path(
    k: &KripkeStructure,
    checker: &mut CtlChecker,
    node: usize,
    f: &CtlFormula,
) -> Vec<Action> {
    use CtlFormula::*;
    match f {
        Ag(p) => {
            let violates: Vec<bool> = checker.sat(p).iter().map(|b| !b).collect();
            match shortest_to(k, node, &violates) {
                Some((hit, mut labels)) => {
                    labels.extend(violation_path(k, checker, hit, p));
                    labels
                }
                None => Vec::new(),
            }
        }
        Implies(p, q) => {
            // violated implication: p holds here, q fails here
            let _ = checker.sat(p);
            violation_path(k, checker, node, q)
        }
        Ax(p) => {
            let sp = checker.sat(p);
            for &next in &k.out[node] {
                if !sp[next] {
                    let mut labels =
                        vec![k.nodes[next].incoming.clone().unwrap_or(Action::new("·"))];
                    labels.extend(violation_path(k, checker, next, p));
                    return labels;
                }
            }
            Vec::new()
        }
        Aw(p, q) | Au(p, q) => {
            // a weak-until violation is witnessed by a ¬q path to a
            // (¬p ∧ ¬q) node
            let sp = checker.sat(p);
            let sq = checker.sat(q);
            let within: Vec<bool> = sq.iter().map(|b| !b).collect();
            let pred: Vec<bool> = (0..k.nodes.len()).map(|i| !sp[i] && !sq[i]).collect();
            shortest_within(k, node, &within, &pred)
                .map(|(_, labels)| labels)
                .unwrap_or_default()
        }
        And(p, q) => {
            if !checker.sat(p)[node] {
                violation_path(k, checker, node, p)
            } else {
                violation_path(k, checker, node, q)
            }
        }
        Not(_) | Atom(_) | True | False | Deadlock => Vec::new(),
        _ => Vec::new(),
    }
}

/// Deadlock finding: a stuck global state plus its shortest witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeadlockFinding {
    pub node: usize,
    pub trace: Trace,
}

/// All zero-out-degree nodes with BFS-shortest witness traces.
pub fn find_deadlocks(g: &GlobalStateGraph) -> Vec<DeadlockFinding> {
    if g.deadlocks.is_empty() {
        return Vec::new();
    }
    let mut parent: Vec<Option<(usize, Action)>> = vec![None; g.nodes.len()];
    let mut seen = vec![false; g.nodes.len()];
    seen[g.initial] = true;
    let mut queue = VecDeque::from([g.initial]);
    while let Some(cur) = queue.pop_front() {
        for (label, next) in &g.out[cur] {
            if !seen[*next] {
                seen[*next] = true;
                parent[*next] = Some((cur, label.clone()));
                queue.push_back(*next);
            }
        }
    }
    g.deadlocks
        .iter()
        .map(|&d| {
            let mut labels = Vec::new();
            let mut at = d;
            while let Some((prev, label)) = &parent[at] {
                labels.push(label.clone());
                at = *prev;
            }
            labels.reverse();
            DeadlockFinding {
                node: d,
                trace: Trace(labels),
            }
        })
        .collect()
}

/// Exploration and checking statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub states: usize,
    pub edges: usize,
    pub runtime_ms: u128,
}

/// The analysis result: per-policy verdicts, deadlock findings, and the
/// overall interference verdict.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub policies: Vec<PolicyVerdict>,
    pub deadlocks: Vec<DeadlockFinding>,
    pub interference: bool,
    pub stats: Stats,
}

/// Runs the full interference check: explores the network, checks every
/// policy, and collects deadlocks. Interference is reported iff some
/// policy is violated or some deadlock exists.
pub fn verify(
    net: &Network,
    policies: &[Policy],
    max_states: usize,
) -> Result<VerificationReport, CheckError> {
    let started = Instant::now();
    let graph = explore(net, max_states)?;
    let report = verify_on_graph(&graph, policies, started)?;
    Ok(report)
}

/// Checking half of [`verify`], reusable when the graph is already
/// explored.
pub fn verify_on_graph(
    graph: &GlobalStateGraph,
    policies: &[Policy],
    started: Instant,
) -> Result<VerificationReport, CheckError> {
    let kripke = kripke_from_graph(graph);
    let mut verdicts = Vec::new();
    for p in policies {
        let resolved = resolve_atoms(&p.formula, &p.name, &p.bindings)?;
        verdicts.push(check_ctl(&kripke, &p.name, &resolved));
    }
    let deadlocks = find_deadlocks(graph);
    let interference = deadlocks.is_empty() == false || verdicts.iter().any(|v| !v.holds);
    Ok(VerificationReport {
        interference,
        policies: verdicts,
        deadlocks,
        stats: Stats {
            states: graph.nodes.len(),
            edges: graph.edges.len(),
            runtime_ms: started.elapsed().as_millis(),
        },
    })
}
