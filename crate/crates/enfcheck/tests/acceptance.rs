//! End-to-end acceptance checks. Each test prints a single PASS line
//! so the suite doubles as a checklist.

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use enfcheck::catalog::{self, Verdict};
use enfcheck::compose::{build_network, compose_enforcers, explore, GlobalStateGraph};
use enfcheck::dsl::parse_document;
use enfcheck::edit2io::{check_transform_equivalence, transform, CompletionPolicy, TraceVerdict};
use enfcheck::mcheck::{verify, CtlChecker, KripkeNode, KripkeStructure};
use enfcheck::model::{Action, CtlFormula, Polarity, Trace};
use enfcheck::simulate::{run_network_random, WalkOutcome};

const FIXTURE: &str = include_str!("../data/mediaplayer.enf");

fn fixture_network(name: &str) -> (enfcheck::Network, Vec<enfcheck::model::Policy>) {
    let doc = parse_document(FIXTURE).expect("fixture parses");
    let decl = doc.network(name).expect("network declared").clone();
    let net = build_network(
        &doc.enforcers_for(&decl),
        &doc.frameworks_for(&decl),
        &decl.targets,
        decl.completion,
    )
    .expect("fixture network builds");
    let policies = doc.bind_policies(&decl).expect("policies bind");
    (net, policies)
}

/// Follows edge labels from the initial node; panics if a label is not
/// enabled.
fn follow(graph: &GlobalStateGraph, labels: &[&str]) -> usize {
    let mut at = graph.initial;
    for l in labels {
        let action = Action::new(*l);
        at = graph.out[at]
            .iter()
            .find(|(a, _)| *a == action)
            .unwrap_or_else(|| panic!("label {l} not enabled"))
            .1;
    }
    at
}

#[test]
fn criterion1_mediaplayer_interference() {
    let started = Instant::now();
    let (net, policies) = fixture_network("pair");
    let graph = explore(&net, 100_000).unwrap();
    let report = verify(&net, &policies, 100_000).unwrap();
    assert!(report.interference, "pair network must interfere");
    assert!(
        !report.deadlocks.is_empty(),
        "interference must come with a deadlock"
    );
    let release = Action::new("release-MediaPlayer");
    let witness = report
        .deadlocks
        .iter()
        .find(|d| d.trace.0.last() == Some(&release))
        .expect("a witness ending with release delivered to the player");
    // at the stuck state the composite still owes the player a stop,
    // which the protocol refuses
    let node = &graph.nodes[witness.node];
    assert!(net.is_committed(node), "stuck inside the emission region");
    assert!(graph.out[witness.node].is_empty());
    assert!(graph.nodes.len() < 500, "graph has {} nodes", graph.nodes.len());
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!(
        "PASS criterion 1: MediaPlayer pair interferes via deadlock ({} nodes, witness `{}`, {elapsed:?})",
        graph.nodes.len(),
        witness.trace
    );
}

#[test]
fn criterion2_individual_correctness() {
    let started = Instant::now();
    let mut checked = 0;
    for case in catalog::list_cases() {
        for i in 0..case.templates.len() {
            let report = case
                .verify_subset(&[i], 1_000_000)
                .unwrap_or_else(|e| panic!("{} #{i}: {e}", case.api));
            assert_eq!(report.policies.len(), 1);
            assert!(
                report.policies[0].holds,
                "{} #{i} ({}): policy violated: {:?}",
                case.api,
                case.templates[i],
                report.policies[0].counterexample
            );
            assert!(
                report.deadlocks.is_empty(),
                "{} #{i} ({}): deadlock {:?}",
                case.api,
                case.templates[i],
                report.deadlocks[0].trace
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 25);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!("PASS criterion 2: 25/25 single-enforcer networks correct and deadlock-free ({elapsed:?})");
}

#[test]
fn criterion3_table1_reproduction() {
    let started = Instant::now();
    let rows = catalog::run_table1(1_000_000);
    assert_eq!(rows.len(), 10);
    let mut yes = 0;
    for row in &rows {
        let actual = row
            .actual
            .as_ref()
            .unwrap_or_else(|e| panic!("{} inconclusive: {e}", row.api));
        assert_eq!(
            *actual, row.expected,
            "{}: expected {}, got {}",
            row.api, row.expected, actual
        );
        if *actual == Verdict::Yes {
            yes += 1;
        }
    }
    assert_eq!(yes, 5);
    let pair = catalog::camera_compatible_pair(1_000_000).unwrap();
    assert!(
        !pair.interference,
        "Camera lock/unlock and face-detection enforcers must be compatible"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("PASS criterion 3: Table reproduced 10/10 rows, 5 interferences, Camera #1+#3 compatible ({elapsed:?})");
}

#[test]
fn criterion4_transformation_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x45514956);
    let mut total = 0;
    for case in catalog::list_cases() {
        for t in &case.templates {
            let ea = catalog::generate_enforcer(t);
            let alphabet: Vec<Action> = ea.alphabet.iter().cloned().collect();
            for &completion in &[CompletionPolicy::Identity, CompletionPolicy::Strict] {
                let ioa = transform(&ea, completion).automaton;
                let inputs: Vec<Trace> = (0..500)
                    .map(|_| {
                        let len = rng.gen_range(0..=20);
                        Trace(
                            (0..len)
                                .map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone())
                                .collect(),
                        )
                    })
                    .collect();
                for v in check_transform_equivalence(&ea, &ioa, &inputs, completion) {
                    assert_eq!(v, TraceVerdict::Ok, "{}: {v:?}", ea.name);
                    total += 1;
                }
            }
        }
    }
    assert_eq!(total, 25 * 1000);
    println!("PASS criterion 4: interpreter/IOA agreement on {total} random traces");
}

#[test]
fn criterion5_committed_structure_counts() {
    let doc = parse_document(FIXTURE).unwrap();
    for name in ["EA_p1", "EA_p2"] {
        let ea = doc.edit_automaton(name).unwrap();
        let ioa = transform(ea, CompletionPolicy::Strict).automaton;
        assert_eq!(ioa.states.len(), 9, "{name} states");
        assert_eq!(ioa.committed_count(), 6, "{name} committed");
        assert_eq!(ioa.transitions.len(), 11, "{name} transitions");
        for (i, s) in ioa.states.iter().enumerate() {
            if s.committed {
                let outputs = ioa
                    .transitions_from(i)
                    .filter(|t| t.polarity == Polarity::Output)
                    .count();
                let inputs = ioa
                    .transitions_from(i)
                    .filter(|t| t.polarity == Polarity::Input)
                    .count();
                assert_eq!((outputs, inputs), (1, 0), "{name} state {}", s.id);
            }
        }
    }
    println!("PASS criterion 5: strict transforms are 9 states / 6 committed / 11 transitions with single-output committed states");
}

#[test]
fn criterion6_interleaving_orders() {
    let doc = parse_document(FIXTURE).unwrap();
    let p1 = transform(doc.edit_automaton("EA_p1").unwrap(), CompletionPolicy::Strict).automaton;
    let p2 = transform(doc.edit_automaton("EA_p2").unwrap(), CompletionPolicy::Strict).automaton;
    let c = compose_enforcers(&[p1, p2]).unwrap();

    // composite level: both orders live, final onStop single and joint
    let joint = c.states.iter().position(|s| s.id == "2|2").unwrap();
    let after = c
        .step(joint, &Action::new("onStop"), Polarity::Input)
        .expect("joint onStop accepted");
    let release = Action::new("release");
    let stop = Action::new("stop");
    let on_stop = Action::new("onStop");
    for order in [[&release, &stop], [&stop, &release]] {
        let mut at = after;
        for a in order {
            at = c
                .step(at, a, Polarity::Output)
                .unwrap_or_else(|| panic!("{a} blocked in composite"));
        }
        let end = c
            .step(at, &on_stop, Polarity::Output)
            .expect("single synchronized onStop!");
        assert_eq!(c.state(end).id, "0|0");
        assert!(!c.state(end).committed);
    }
    // the early lone onStop! is held back until both chains are flushed
    assert!(c.step(after, &on_stop, Polarity::Output).is_none());

    // global level: exactly one order deadlocks
    let (net, _) = fixture_network("pair");
    let graph = explore(&net, 100_000).unwrap();
    let fork = follow(
        &graph,
        &[
            "onCreate-env",
            "onCreate-app",
            "create-env",
            "create-MediaPlayer",
            "onPause-env",
            "onPause-app",
            "start-env",
            "start-MediaPlayer",
            "onStop-env",
        ],
    );
    let mut labels: Vec<String> = graph.out[fork].iter().map(|(a, _)| a.0.clone()).collect();
    labels.sort();
    assert_eq!(labels, ["release-MediaPlayer", "stop-MediaPlayer"]);
    let after_release = follow_from(&graph, fork, &["release-MediaPlayer"]);
    assert!(
        graph.out[after_release].is_empty(),
        "release-first order must be stuck"
    );
    let after_stop = follow_from(
        &graph,
        fork,
        &["stop-MediaPlayer", "release-MediaPlayer", "onStop-app"],
    );
    assert!(
        !graph.out[after_stop].is_empty(),
        "stop-first order completes the region"
    );
    println!("PASS criterion 6: both emission orders reachable, single joint onStop, exactly one order deadlocks");
}

fn follow_from(graph: &GlobalStateGraph, mut at: usize, labels: &[&str]) -> usize {
    for l in labels {
        let action = Action::new(*l);
        at = graph.out[at]
            .iter()
            .find(|(a, _)| *a == action)
            .unwrap_or_else(|| panic!("label {l} not enabled"))
            .1;
    }
    at
}

// ---- criterion 7: brute-force CTL oracle -------------------------------

/// Direct fixpoint evaluator over the defining equations of each
/// operator, sharing no code with the checker's adequate-set rewriting.
fn oracle(k: &KripkeStructure, f: &CtlFormula) -> Vec<bool> {
    use CtlFormula::*;
    let n = k.nodes.len();
    let all = |p: &[bool], i: usize| k.out[i].iter().all(|&s| p[s]);
    let some = |p: &[bool], i: usize| k.out[i].iter().any(|&s| p[s]);
    let lfp = |base: Box<dyn Fn(usize, &[bool]) -> bool>| {
        let mut x = vec![false; n];
        loop {
            let next: Vec<bool> = (0..n).map(|i| x[i] || base(i, &x)).collect();
            if next == x {
                return x;
            }
            x = next;
        }
    };
    let gfp = |keep: Box<dyn Fn(usize, &[bool]) -> bool>| {
        let mut x = vec![true; n];
        loop {
            let next: Vec<bool> = (0..n).map(|i| x[i] && keep(i, &x)).collect();
            if next == x {
                return x;
            }
            x = next;
        }
    };
    match f {
        True => vec![true; n],
        False => vec![false; n],
        Deadlock => (0..n).map(|i| k.nodes[i].deadlock).collect(),
        Atom(a) => {
            let a = Action::new(a.clone());
            (0..n).map(|i| k.holds_atom(i, &a)).collect()
        }
        Not(p) => oracle(k, p).iter().map(|b| !b).collect(),
        And(p, q) => {
            let (sp, sq) = (oracle(k, p), oracle(k, q));
            (0..n).map(|i| sp[i] && sq[i]).collect()
        }
        Or(p, q) => {
            let (sp, sq) = (oracle(k, p), oracle(k, q));
            (0..n).map(|i| sp[i] || sq[i]).collect()
        }
        Implies(p, q) => {
            let (sp, sq) = (oracle(k, p), oracle(k, q));
            (0..n).map(|i| !sp[i] || sq[i]).collect()
        }
        Ex(p) => {
            let sp = oracle(k, p);
            (0..n).map(|i| some(&sp, i)).collect()
        }
        Ax(p) => {
            let sp = oracle(k, p);
            (0..n).map(|i| all(&sp, i)).collect()
        }
        Ef(p) => {
            let sp = oracle(k, p);
            lfp(Box::new(move |i, x| sp[i] || some(x, i)))
        }
        Af(p) => {
            let sp = oracle(k, p);
            lfp(Box::new(move |i, x| sp[i] || all(x, i)))
        }
        Eg(p) => {
            let sp = oracle(k, p);
            gfp(Box::new(move |i, x| sp[i] && some(x, i)))
        }
        Ag(p) => {
            let sp = oracle(k, p);
            gfp(Box::new(move |i, x| sp[i] && all(x, i)))
        }
        Eu(p, q) => {
            let (sp, sq) = (oracle(k, p), oracle(k, q));
            lfp(Box::new(move |i, x| sq[i] || (sp[i] && some(x, i))))
        }
        Au(p, q) => {
            let (sp, sq) = (oracle(k, p), oracle(k, q));
            lfp(Box::new(move |i, x| sq[i] || (sp[i] && all(x, i))))
        }
        Aw(p, q) => {
            let (sp, sq) = (oracle(k, p), oracle(k, q));
            gfp(Box::new(move |i, x| sq[i] || (sp[i] && all(x, i))))
        }
    }
}

fn random_kripke(rng: &mut ChaCha8Rng) -> KripkeStructure {
    let actions = ["a", "b", "c"];
    let n = rng.gen_range(2..=12);
    let nodes: Vec<KripkeNode> = (0..n)
        .map(|i| KripkeNode {
            graph_node: i,
            incoming: if i == 0 {
                None
            } else {
                Some(Action::new(actions[rng.gen_range(0..actions.len())]))
            },
            deadlock: rng.gen_bool(0.15),
        })
        .collect();
    let out: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if nodes[i].deadlock {
                vec![i]
            } else {
                let degree = rng.gen_range(1..=3);
                (0..degree).map(|_| rng.gen_range(0..n)).collect()
            }
        })
        .collect();
    KripkeStructure {
        nodes,
        initial: 0,
        out,
    }
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> CtlFormula {
    use CtlFormula::*;
    let actions = ["a", "b", "c"];
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => True,
            1 => False,
            2 => Deadlock,
            _ => Atom(actions[rng.gen_range(0..actions.len())].into()),
        };
    }
    let op = rng.gen_range(0..13);
    let mut sub = || Box::new(random_formula(rng, depth - 1));
    match op {
        0 => Not(sub()),
        1 => And(sub(), sub()),
        2 => Or(sub(), sub()),
        3 => Implies(sub(), sub()),
        4 => Ax(sub()),
        5 => Ex(sub()),
        6 => Af(sub()),
        7 => Ef(sub()),
        8 => Ag(sub()),
        9 => Eg(sub()),
        10 => Au(sub(), sub()),
        11 => Eu(sub(), sub()),
        _ => Aw(sub(), sub()),
    }
}

#[test]
fn criterion7_checker_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x43544C);
    let mut compared = 0;
    for _ in 0..200 {
        let k = random_kripke(&mut rng);
        let mut checker = CtlChecker::new(&k);
        for _ in 0..8 {
            let f = random_formula(&mut rng, 3);
            let got = checker.sat(&f);
            let want = oracle(&k, &f);
            assert_eq!(got, want, "disagreement on {f:?}");
            compared += 1;
        }
    }
    assert_eq!(compared, 1600);
    println!("PASS criterion 7: checker matches the brute-force oracle on {compared} formula evaluations over 200 structures");
}

#[test]
fn criterion8_simulation_soundness() {
    let cases = catalog::list_cases();
    let mp = cases.iter().find(|c| c.api == "MediaPlayer").unwrap();
    let mp_net = mp.network(&[0, 1, 2]).unwrap();
    let mut targets: Vec<(String, enfcheck::Network)> = vec![
        ("catalog MediaPlayer".into(), mp_net),
    ];
    for name in ["pair", "single_p1", "unmonitored"] {
        targets.push((format!("fixture {name}"), fixture_network(name).0));
    }
    for (name, net) in &targets {
        let graph = explore(net, 1_000_000).unwrap();
        let known: HashSet<_> = graph.nodes.iter().cloned().collect();
        let stuck: HashSet<_> = graph
            .deadlocks
            .iter()
            .map(|&i| graph.nodes[i].clone())
            .collect();
        for seed in 0..1000u64 {
            let walk = run_network_random(net, seed, 60);
            for s in &walk.states {
                assert!(known.contains(s), "{name}, seed {seed}: unexplored state");
            }
            if walk.outcome == WalkOutcome::Deadlocked {
                assert!(
                    stuck.contains(walk.states.last().unwrap()),
                    "{name}, seed {seed}: deadlock not in the explored deadlock set"
                );
            }
        }
    }
    println!("PASS criterion 8: 1000 seeded walks per network stay inside the explored graph and deadlock set");
}
