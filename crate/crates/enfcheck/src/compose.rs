//! Composite enforcer construction, network assembly, and reachable
//! global state graph exploration.
//!
//! The composite enforcer is a CSP-style product: a shared input fires
//! jointly in every component that declares it, outputs are emitted
//! jointly by every component whose pending emission is that action,
//! and everything else interleaves. A committed component that will
//! emit an action later in its pending chain holds that action back,
//! so a shared re-inserted callback is emitted exactly once, after
//! every participant has flushed the emissions that precede it.
//! Committed product states restrict enabled moves to those with a
//! committed participant.
//!
//! The verification network wires a single-state environment to the
//! composite on `-env` channels and the composite to each framework
//! model on `-<id>` channels. An environment emission that opens a
//! committed emission region is enabled only if the region can run to
//! completion in at least one interleaving; a region entered that way
//! can still strand on a refused delivery, which is exactly the
//! deadlock the analysis reports.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::edit2io::{transform, CompletionPolicy};
use crate::model::{
    alphabet_of_io, validate_edit, Action, EditAutomaton, EditError, IoAutomaton, IoState,
    IoTransition, Polarity,
};

/// Routing of base actions to the framework component that receives
/// them after enforcement.
pub type TargetMap = BTreeMap<Action, String>;

/// Component id reserved for the environment.
pub const ENV_COMPONENT: &str = "env";

#[derive(Debug, Clone, Error)]
pub enum ComposeError {
    #[error("invalid enforcer `{name}`: {first}")]
    InvalidEnforcer {
        name: String,
        first: EditError,
        all: Vec<EditError>,
    },
    #[error("polarity clash on shared action `{0}`")]
    PolarityClash(Action),
    #[error("no target mapping for action `{0}`")]
    Routing(Action),
    #[error("output `{action}` has no receiving component `{target}`")]
    Wiring { action: Action, target: String },
    #[error("framework model `{0}` contains committed states")]
    CommittedFramework(String),
    #[error("environment alphabet is empty: nothing to verify")]
    EmptyAlphabet,
    #[error("component id `{0}` is reserved or duplicated")]
    BadComponentId(String),
    #[error("action or component name `{0}` may not contain `-`")]
    DashInName(String),
}

fn product_id(ids: &[&str]) -> String {
    ids.join("|")
}

/// CSP-like product of enforcer I/O automata. States are tuples of
/// component states restricted to reachability; a product state is
/// committed iff any constituent is.
pub fn compose_enforcers(ioas: &[IoAutomaton]) -> Result<IoAutomaton, ComposeError> {
    assert!(!ioas.is_empty(), "compose_enforcers needs a component");
    let alphabets: Vec<BTreeSet<Action>> = ioas.iter().map(alphabet_of_io).collect();
    let shared = crate::model::shared_alphabet(&alphabets);
    for a in &shared {
        let declaring: Vec<&IoAutomaton> = ioas
            .iter()
            .enumerate()
            .filter(|(i, _)| alphabets[*i].contains(a))
            .map(|(_, m)| m)
            .collect();
        let some_input_only = declaring
            .iter()
            .any(|m| m.inputs.contains(a) && !m.outputs.contains(a));
        let some_output_only = declaring
            .iter()
            .any(|m| !m.inputs.contains(a) && m.outputs.contains(a));
        if some_input_only && some_output_only {
            return Err(ComposeError::PolarityClash(a.clone()));
        }
    }

    let input_union: BTreeSet<Action> = ioas.iter().flat_map(|m| m.inputs.clone()).collect();
    let output_union: BTreeSet<Action> = ioas.iter().flat_map(|m| m.outputs.clone()).collect();

    let start: Vec<usize> = ioas.iter().map(|m| m.start).collect();
    let mut states: Vec<IoState> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut transitions: Vec<IoTransition> = Vec::new();

    let intern = |tuple: Vec<usize>,
                  states: &mut Vec<IoState>,
                  index: &mut HashMap<Vec<usize>, usize>,
                  tuples: &mut Vec<Vec<usize>>|
     -> (usize, bool) {
        if let Some(&i) = index.get(&tuple) {
            return (i, false);
        }
        let ids: Vec<&str> = tuple
            .iter()
            .enumerate()
            .map(|(c, &s)| ioas[c].states[s].id.as_str())
            .collect();
        let committed = tuple
            .iter()
            .enumerate()
            .any(|(c, &s)| ioas[c].states[s].committed);
        let i = states.len();
        states.push(IoState {
            id: product_id(&ids),
            committed,
            emission: None,
        });
        index.insert(tuple.clone(), i);
        tuples.push(tuple);
        (i, true)
    };

    let (root, _) = intern(start, &mut states, &mut index, &mut tuples);
    let mut queue = VecDeque::from([root]);
    let mut seen_edges: BTreeSet<(usize, Action, Polarity, usize)> = BTreeSet::new();
    while let Some(cur) = queue.pop_front() {
        let tuple = tuples[cur].clone();
        let committed_here: Vec<usize> = (0..ioas.len())
            .filter(|&c| ioas[c].states[tuple[c]].committed)
            .collect();
        let mut moves: Vec<(Action, Polarity, Vec<usize>, Vec<usize>)> = Vec::new();

        // Joint inputs: every component declaring the action must accept.
        for a in &input_union {
            let declaring: Vec<usize> = (0..ioas.len())
                .filter(|&c| alphabets[c].contains(a))
                .collect();
            let targets: Option<Vec<(usize, usize)>> = declaring
                .iter()
                .map(|&c| ioas[c].step(tuple[c], a, Polarity::Input).map(|s| (c, s)))
                .collect();
            if let Some(ts) = targets {
                let mut next = tuple.clone();
                for (c, s) in &ts {
                    next[*c] = *s;
                }
                moves.push((
                    a.clone(),
                    Polarity::Input,
                    ts.iter().map(|(c, _)| *c).collect(),
                    next,
                ));
            }
        }

        // Joint outputs: every component ready to emit the action emits
        // it simultaneously; one copy is produced. A committed component
        // that still has the action later in its pending emission chain
        // holds the action back until it is ready, so shared trailing
        // emissions (typically the re-inserted callback) synchronize.
        for a in &output_union {
            let emitters: Vec<(usize, usize)> = (0..ioas.len())
                .filter_map(|c| ioas[c].step(tuple[c], a, Polarity::Output).map(|s| (c, s)))
                .collect();
            let held_back = (0..ioas.len()).any(|c| {
                if emitters.iter().any(|(e, _)| *e == c) {
                    return false;
                }
                match &ioas[c].states[tuple[c]].emission {
                    Some(e) => (e.index..=e.pending.len()).any(|i| e.pending.at(i) == a),
                    None => false,
                }
            });
            if held_back {
                continue;
            }
            if !emitters.is_empty() {
                let mut next = tuple.clone();
                for (c, s) in &emitters {
                    next[*c] = *s;
                }
                moves.push((
                    a.clone(),
                    Polarity::Output,
                    emitters.iter().map(|(c, _)| *c).collect(),
                    next,
                ));
            }
        }

        for (a, pol, participants, next) in moves {
            // committed-priority: when some constituent is committed,
            // only moves involving a committed constituent fire
            if !committed_here.is_empty() && !participants.iter().any(|c| committed_here.contains(c))
            {
                continue;
            }
            let (target, is_new) = intern(next, &mut states, &mut index, &mut tuples);
            if is_new {
                queue.push_back(target);
            }
            if seen_edges.insert((cur, a.clone(), pol, target)) {
                transitions.push(IoTransition {
                    from: cur,
                    action: a,
                    polarity: pol,
                    to: target,
                });
            }
        }
    }

    let names: Vec<&str> = ioas.iter().map(|m| m.name.as_str()).collect();
    let mut composite = IoAutomaton {
        name: names.join("+"),
        states,
        start: root,
        inputs: input_union,
        outputs: output_union,
        internals: Default::default(),
        transitions,
    };
    composite.sort_transitions();
    Ok(composite)
}

/// Renames a composite for network wiring: inputs become `a-env`,
/// outputs become `a-<target>` per the routing map.
pub fn rename_for_network(
    composite: &IoAutomaton,
    targets: &TargetMap,
) -> Result<IoAutomaton, ComposeError> {
    let mut out = composite.clone();
    for a in composite.outputs.iter() {
        if !targets.contains_key(a) {
            return Err(ComposeError::Routing(a.clone()));
        }
    }
    out.inputs = composite
        .inputs
        .iter()
        .map(|a| a.suffixed(ENV_COMPONENT))
        .collect();
    out.outputs = composite
        .outputs
        .iter()
        .map(|a| a.suffixed(&targets[a]))
        .collect();
    for t in &mut out.transitions {
        t.action = match t.polarity {
            Polarity::Input => t.action.suffixed(ENV_COMPONENT),
            Polarity::Output => t.action.suffixed(&targets[&t.action]),
            Polarity::Internal => t.action.clone(),
        };
    }
    out.sort_transitions();
    Ok(out)
}

/// Single-state generator emitting `a-env!` for every base action.
pub fn synthesize_environment(alphabet: &BTreeSet<Action>) -> Result<IoAutomaton, ComposeError> {
    if alphabet.is_empty() {
        return Err(ComposeError::EmptyAlphabet);
    }
    let outputs: BTreeSet<Action> = alphabet.iter().map(|a| a.suffixed(ENV_COMPONENT)).collect();
    let transitions = outputs
        .iter()
        .map(|a| IoTransition {
            from: 0,
            action: a.clone(),
            polarity: Polarity::Output,
            to: 0,
        })
        .collect();
    Ok(IoAutomaton {
        name: ENV_COMPONENT.into(),
        states: vec![IoState::plain(ENV_COMPONENT)],
        start: 0,
        inputs: Default::default(),
        outputs,
        internals: Default::default(),
        transitions,
    })
}

/// A binary synchronization channel: the suffixed action, who sends,
/// and who receives. Component indices follow the global state layout
/// (0 = environment, 1 = composite, 2.. = framework models).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub action: Action,
    pub sender: usize,
    pub receiver: usize,
}

/// The assembled verification network.
#[derive(Debug, Clone)]
pub struct Network {
    pub environment: IoAutomaton,
    pub composite: IoAutomaton,
    pub frameworks: Vec<(String, IoAutomaton)>,
    pub channels: Vec<Channel>,
    pub base_alphabet: BTreeSet<Action>,
    pub targets: TargetMap,
    /// receiver framework index (into `frameworks`) per composite output
    receivers: BTreeMap<Action, usize>,
}

/// A global state: local state per component, in the layout
/// `[environment, composite, framework...]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalState(pub Vec<usize>);

impl Network {
    pub fn initial_state(&self) -> GlobalState {
        let mut v = vec![self.environment.start, self.composite.start];
        v.extend(self.frameworks.iter().map(|(_, m)| m.start));
        GlobalState(v)
    }

    pub fn component_count(&self) -> usize {
        2 + self.frameworks.len()
    }

    /// True iff any component's local state is committed (only the
    /// composite ever is).
    pub fn is_committed(&self, g: &GlobalState) -> bool {
        self.composite.states[g.0[1]].committed
    }

    /// Human-readable form of a global state.
    pub fn describe(&self, g: &GlobalState) -> String {
        let mut parts = vec![self.composite.states[g.0[1]].id.clone()];
        for (i, (id, m)) in self.frameworks.iter().enumerate() {
            parts.push(format!("{}={}", id, m.states[g.0[2 + i]].id));
        }
        parts.join(" ; ")
    }

    /// Emission moves of the composite: its output delivered to the
    /// receiving framework model, which must accept it.
    fn delivery_moves(&self, g: &GlobalState) -> Vec<(Action, GlobalState)> {
        let mut out = Vec::new();
        for t in self.composite.transitions_from(g.0[1]) {
            if t.polarity != Polarity::Output {
                continue;
            }
            let fw = self.receivers[&t.action];
            if let Some(next_fw) =
                self.frameworks[fw]
                    .1
                    .step(g.0[2 + fw], &t.action, Polarity::Input)
            {
                let mut next = g.clone();
                next.0[1] = t.to;
                next.0[2 + fw] = next_fw;
                out.push((t.action.clone(), next));
            }
        }
        out
    }

    /// Whether the committed emission region around `g` can reach a
    /// non-committed composite state in some interleaving.
    fn region_completes(&self, g: &GlobalState) -> bool {
        let mut seen = BTreeSet::from([g.clone()]);
        let mut queue = VecDeque::from([g.clone()]);
        while let Some(cur) = queue.pop_front() {
            if !self.is_committed(&cur) {
                return true;
            }
            for (_, next) in self.delivery_moves(&cur) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        false
    }

    /// Enabled global transitions, in deterministic (label-sorted)
    /// order. Environment emissions that open an emission region the
    /// region cannot complete are not enabled.
    pub fn successors(&self, g: &GlobalState) -> Vec<(Action, GlobalState)> {
        let mut out = self.delivery_moves(g);
        if !self.is_committed(g) {
            for t in self.environment.transitions_from(g.0[0]) {
                if let Some(next_comp) = self.composite.step(g.0[1], &t.action, Polarity::Input) {
                    let mut next = g.clone();
                    next.0[0] = t.to;
                    next.0[1] = next_comp;
                    if self.composite.states[next_comp].committed && !self.region_completes(&next)
                    {
                        continue;
                    }
                    out.push((t.action.clone(), next));
                }
            }
        }
        out.sort();
        out
    }
}

/// Assembles the verification network: transforms and composes the
/// enforcers, extends the composite with forwarder pairs for
/// unmonitored framework actions, applies the renaming scheme, and
/// synthesizes the environment.
pub fn build_network(
    enforcers: &[EditAutomaton],
    frameworks: &[(String, IoAutomaton)],
    targets: &TargetMap,
    completion: CompletionPolicy,
) -> Result<Network, ComposeError> {
    let mut ids = BTreeSet::from([ENV_COMPONENT.to_string()]);
    for (id, m) in frameworks {
        if !ids.insert(id.clone()) {
            return Err(ComposeError::BadComponentId(id.clone()));
        }
        if id.contains('-') {
            return Err(ComposeError::DashInName(id.clone()));
        }
        if m.states.iter().any(|s| s.committed) {
            return Err(ComposeError::CommittedFramework(id.clone()));
        }
    }

    let mut base: BTreeSet<Action> = frameworks
        .iter()
        .flat_map(|(_, m)| alphabet_of_io(m))
        .collect();
    for ea in enforcers {
        if let Err(errs) = validate_edit(ea) {
            return Err(ComposeError::InvalidEnforcer {
                name: ea.name.clone(),
                first: errs[0].clone(),
                all: errs,
            });
        }
        base.extend(ea.alphabet.iter().cloned());
    }
    for a in &base {
        if a.name().contains('-') {
            return Err(ComposeError::DashInName(a.name().into()));
        }
    }

    let mut composite = if enforcers.is_empty() {
        IoAutomaton {
            name: "forwarder".into(),
            states: vec![IoState::plain("fwd")],
            start: 0,
            inputs: Default::default(),
            outputs: Default::default(),
            internals: Default::default(),
            transitions: Vec::new(),
        }
    } else {
        let parts: Vec<IoAutomaton> = enforcers
            .iter()
            .map(|ea| transform(ea, completion).automaton)
            .collect();
        compose_enforcers(&parts)?
    };

    // Unmonitored actions flow through synthesized pass-through pairs,
    // keeping all communication mediated by the composite.
    let unmonitored: Vec<Action> = base
        .iter()
        .filter(|a| !composite.inputs.contains(a))
        .cloned()
        .collect();
    if !unmonitored.is_empty() {
        let plain: Vec<usize> = composite
            .states
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.committed)
            .map(|(i, _)| i)
            .collect();
        for a in &unmonitored {
            composite.inputs.insert(a.clone());
            composite.outputs.insert(a.clone());
            for &s in &plain {
                let idx = composite.states.len();
                composite.states.push(IoState {
                    id: format!("({},{},fwd)", composite.states[s].id, a),
                    committed: true,
                    emission: None,
                });
                composite.transitions.push(IoTransition {
                    from: s,
                    action: a.clone(),
                    polarity: Polarity::Input,
                    to: idx,
                });
                composite.transitions.push(IoTransition {
                    from: idx,
                    action: a.clone(),
                    polarity: Polarity::Output,
                    to: s,
                });
            }
        }
        composite.sort_transitions();
    }

    // Routing must cover every composite output, and each routed output
    // must have a framework that declares the action.
    let fw_index: BTreeMap<&str, usize> = frameworks
        .iter()
        .enumerate()
        .map(|(i, (id, _))| (id.as_str(), i))
        .collect();
    let mut receivers: BTreeMap<Action, usize> = BTreeMap::new();
    for a in &composite.outputs {
        let target = targets.get(a).ok_or_else(|| ComposeError::Routing(a.clone()))?;
        let &fw = fw_index.get(target.as_str()).ok_or_else(|| ComposeError::Wiring {
            action: a.clone(),
            target: target.clone(),
        })?;
        if !alphabet_of_io(&frameworks[fw].1).contains(a) {
            return Err(ComposeError::Wiring {
                action: a.clone(),
                target: target.clone(),
            });
        }
        receivers.insert(a.suffixed(target), fw);
    }

    let environment = synthesize_environment(&base)?;
    let renamed_composite = rename_for_network(&composite, targets)?;
    let renamed_frameworks: Vec<(String, IoAutomaton)> = frameworks
        .iter()
        .map(|(id, m)| {
            let mut r = m.clone();
            r.inputs = m.inputs.iter().map(|a| a.suffixed(id)).collect();
            for t in &mut r.transitions {
                t.action = t.action.suffixed(id);
            }
            r.sort_transitions();
            (id.clone(), r)
        })
        .collect();

    let mut channels: Vec<Channel> = environment
        .outputs
        .iter()
        .map(|a| Channel {
            action: a.clone(),
            sender: 0,
            receiver: 1,
        })
        .collect();
    for (a, &fw) in &receivers {
        channels.push(Channel {
            action: a.clone(),
            sender: 1,
            receiver: 2 + fw,
        });
    }

    Ok(Network {
        environment,
        composite: renamed_composite,
        frameworks: renamed_frameworks,
        channels,
        base_alphabet: base,
        targets: targets.clone(),
        receivers,
    })
}

#[derive(Debug, Clone, Error)]
pub enum ExploreError {
    #[error("state bound exceeded: {explored} states explored, {frontier} on the frontier")]
    BoundExceeded { explored: usize, frontier: usize },
}

/// Default exploration bound; desk-scale models stay far below it.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// The reachable global state graph of a network.
#[derive(Debug, Clone)]
pub struct GlobalStateGraph {
    pub nodes: Vec<GlobalState>,
    pub initial: usize,
    pub edges: Vec<(usize, Action, usize)>,
    /// outgoing adjacency in edge order
    pub out: Vec<Vec<(Action, usize)>>,
    pub deadlocks: Vec<usize>,
}

/// Deterministic BFS over the network's global behavior.
pub fn explore(net: &Network, max_states: usize) -> Result<GlobalStateGraph, ExploreError> {
    let mut nodes: Vec<GlobalState> = vec![net.initial_state()];
    let mut index: HashMap<GlobalState, usize> = HashMap::from([(nodes[0].clone(), 0)]);
    let mut out: Vec<Vec<(Action, usize)>> = vec![Vec::new()];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        let succs = net.successors(&nodes[cur]);
        for (label, next) in succs {
            let target = match index.get(&next) {
                Some(&i) => i,
                None => {
                    let i = nodes.len();
                    if i >= max_states {
                        return Err(ExploreError::BoundExceeded {
                            explored: nodes.len(),
                            frontier: queue.len() + 1,
                        });
                    }
                    nodes.push(next.clone());
                    out.push(Vec::new());
                    index.insert(next, i);
                    queue.push_back(i);
                    i
                }
            };
            out[cur].push((label.clone(), target));
            edges.push((cur, label, target));
        }
    }
    let deadlocks = (0..nodes.len()).filter(|&i| out[i].is_empty()).collect();
    Ok(GlobalStateGraph {
        nodes,
        initial: 0,
        edges,
        out,
        deadlocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ea_p1, ea_p2};

    fn strict_ioas() -> (IoAutomaton, IoAutomaton) {
        (
            transform(&ea_p1(), CompletionPolicy::Strict).automaton,
            transform(&ea_p2(), CompletionPolicy::Strict).automaton,
        )
    }

    #[test]
    fn singleton_composite_is_isomorphic_wrap() {
        let (p1, _) = strict_ioas();
        let c = compose_enforcers(std::slice::from_ref(&p1)).unwrap();
        assert_eq!(c.states.len(), p1.states.len());
        assert_eq!(c.transitions.len(), p1.transitions.len());
        assert_eq!(c.committed_count(), p1.committed_count());
    }

    #[test]
    fn fig6_interleaving_orders() {
        let (p1, p2) = strict_ioas();
        let c = compose_enforcers(&[p1, p2]).unwrap();
        let joint = c
            .states
            .iter()
            .position(|s| s.id == "2|2")
            .expect("product state 2|2 reachable");
        let after = c
            .step(joint, &Action::new("onStop"), Polarity::Input)
            .expect("joint onStop accepted");
        assert!(c.state(after).committed);
        // both emission orders reach 0|0 and emit onStop exactly once
        let release = Action::new("release");
        let stop = Action::new("stop");
        let onstop = Action::new("onStop");
        for order in [[&release, &stop], [&stop, &release]] {
            let mut at = after;
            let mut emitted = Vec::new();
            for a in order {
                at = c
                    .step(at, a, Polarity::Output)
                    .unwrap_or_else(|| panic!("order {a} blocked"));
                emitted.push(a.clone());
            }
            let end = c.step(at, &onstop, Polarity::Output).expect("joint onStop!");
            assert_eq!(c.state(end).id, "0|0");
            // no second onStop edge anywhere along the way
            assert!(c.step(end, &onstop, Polarity::Output).is_none());
        }
    }

    #[test]
    fn disjoint_alphabets_have_no_joint_transitions() {
        let mk = |name: &str, a: &str| {
            let ea = EditAutomaton {
                name: name.into(),
                alphabet: [Action::new(a)].into_iter().collect(),
                states: ["0".into(), "1".into()].into_iter().collect(),
                initial: "0".into(),
                transitions: vec![crate::model::EditTransition {
                    from: "0".into(),
                    on: a.into(),
                    to: "1".into(),
                    emit: crate::model::Trace::from_names(&[a]),
                }],
            };
            transform(&ea, CompletionPolicy::Strict).automaton
        };
        let c = compose_enforcers(&[mk("A", "a"), mk("B", "b")]).unwrap();
        // brute-force product bound: reachable states never exceed the
        // full cartesian product
        assert!(c.states.len() <= 3 * 3);
        for t in &c.transitions {
            // no shared actions, so every move is a single component's
            assert!(t.action == Action::new("a") || t.action == Action::new("b"));
        }
    }

    #[test]
    fn renaming_follows_the_target_map() {
        let (p1, _) = strict_ioas();
        let mut targets = TargetMap::new();
        for a in ["onCreate", "onStop"] {
            targets.insert(Action::new(a), "app".into());
        }
        for a in ["create", "release"] {
            targets.insert(Action::new(a), "MediaPlayer".into());
        }
        let r = rename_for_network(&p1, &targets).unwrap();
        assert!(r.inputs.contains(&Action::new("onCreate-env")));
        assert!(r.outputs.contains(&Action::new("onCreate-app")));
        assert!(r.outputs.contains(&Action::new("release-MediaPlayer")));
    }

    #[test]
    fn renaming_missing_target_is_routing_error() {
        let (p1, _) = strict_ioas();
        let targets = TargetMap::new();
        assert!(matches!(
            rename_for_network(&p1, &targets),
            Err(ComposeError::Routing(_))
        ));
    }

    #[test]
    fn environment_is_one_state_of_self_loops() {
        let alphabet: BTreeSet<Action> =
            ["onCreate", "onStop", "create", "release", "start", "stop"]
                .iter()
                .map(|s| Action::new(*s))
                .collect();
        let env = synthesize_environment(&alphabet).unwrap();
        assert_eq!(env.states.len(), 1);
        assert_eq!(env.transitions.len(), 6);
        assert!(env.transitions.iter().all(|t| t.from == 0 && t.to == 0));
        assert!(matches!(
            synthesize_environment(&BTreeSet::new()),
            Err(ComposeError::EmptyAlphabet)
        ));
    }
}
