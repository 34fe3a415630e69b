//! Transformation of an edit automaton into an I/O automaton with
//! committed emission states.
//!
//! Each insertion transition of the source automaton becomes a linear
//! chain: an input transition into a committed state followed by one
//! output transition per emitted action. Suppressions map to a single
//! input transition. Committed intermediate states are identified by
//! (source state, accepted action, 1-based index of the next emission).

use std::collections::BTreeMap;

use crate::model::{
    Action, EditAutomaton, Emission, IoAutomaton, IoState, IoTransition, Polarity, Trace,
};
use crate::simulate::{run_edit, EditRun};

/// How to complete the partial transition function when building an
/// input-enabled I/O automaton.
///
/// `Identity` adds a transparent pass-through pair for every undefined
/// (state, action); `Strict` adds nothing, so the result is generally
/// not input-enabled and a warning is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompletionPolicy {
    #[default]
    Identity,
    Strict,
}

/// Transformation output: the automaton plus any warnings.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub automaton: IoAutomaton,
    pub warnings: Vec<String>,
}

fn committed_id(origin: &str, input: &Action, index: usize) -> String {
    format!("({origin},{input},{index})")
}

/// Builds the I/O automaton for `ea`. The precondition is a validated
/// automaton; see [`crate::model::validate_edit`].
pub fn transform(ea: &EditAutomaton, policy: CompletionPolicy) -> Transformed {
    let mut states: Vec<IoState> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut add_state = |states: &mut Vec<IoState>, s: IoState| -> usize {
        let i = states.len();
        index.insert(s.id.clone(), i);
        states.push(s);
        i
    };

    for q in &ea.states {
        add_state(&mut states, IoState::plain(q.clone()));
    }

    let mut transitions: Vec<IoTransition> = Vec::new();
    let chain = |states: &mut Vec<IoState>,
                     transitions: &mut Vec<IoTransition>,
                     from: usize,
                     input: &Action,
                     pending: &Trace,
                     to: usize| {
        let origin = states[from].id.clone();
        let target = states[to].id.clone();
        let mut prev = from;
        for i in 1..=pending.len() {
            let s = IoState {
                id: committed_id(&origin, input, i),
                committed: true,
                emission: Some(Emission {
                    input: input.clone(),
                    pending: pending.clone(),
                    index: i,
                    target: target.clone(),
                }),
            };
            let idx = states.len();
            states.push(s);
            transitions.push(IoTransition {
                from: prev,
                action: if i == 1 {
                    input.clone()
                } else {
                    pending.at(i - 1).clone()
                },
                polarity: if i == 1 {
                    Polarity::Input
                } else {
                    Polarity::Output
                },
                to: idx,
            });
            prev = idx;
        }
        transitions.push(IoTransition {
            from: prev,
            action: pending.at(pending.len()).clone(),
            polarity: Polarity::Output,
            to,
        });
    };

    for t in &ea.transitions {
        let from = index[&t.from];
        let to = index[&t.to];
        if t.emit.is_empty() {
            // suppression: the accepted action vanishes
            transitions.push(IoTransition {
                from,
                action: t.on.clone(),
                polarity: Polarity::Input,
                to,
            });
        } else {
            chain(&mut states, &mut transitions, from, &t.on, &t.emit, to);
        }
    }

    let mut warnings = Vec::new();
    match policy {
        CompletionPolicy::Identity => {
            for q in &ea.states {
                let qi = index[q];
                for a in &ea.alphabet {
                    if ea.step(q, a).is_none() {
                        let pending = Trace(vec![a.clone()]);
                        chain(&mut states, &mut transitions, qi, a, &pending, qi);
                    }
                }
            }
        }
        CompletionPolicy::Strict => {
            let incomplete = ea
                .states
                .iter()
                .any(|q| ea.alphabet.iter().any(|a| ea.step(q, a).is_none()));
            if incomplete {
                warnings.push(format!(
                    "automaton `{}` is not input-enabled under strict completion",
                    ea.name
                ));
            }
        }
    }

    let mut automaton = IoAutomaton {
        name: ea.name.clone(),
        states,
        start: index[&ea.initial],
        inputs: ea.alphabet.clone(),
        outputs: ea.alphabet.clone(),
        internals: Default::default(),
        transitions,
    };
    automaton.sort_transitions();
    Transformed {
        automaton,
        warnings,
    }
}

/// Per-trace verdict of [`check_transform_equivalence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceVerdict {
    Ok,
    Mismatch { detail: String },
}

/// Drives `ioa` on an input trace: feed each action as an input, then
/// follow the committed chain collecting the emitted outputs.
pub fn drive_io(ioa: &IoAutomaton, input: &Trace, completion: CompletionPolicy) -> EditRun {
    let mut state = ioa.start;
    let mut output = Trace::empty();
    for (i, a) in input.iter().enumerate() {
        match ioa.step(state, a, Polarity::Input) {
            Some(next) => {
                state = next;
                while ioa.state(state).committed {
                    let t = ioa
                        .transitions_from(state)
                        .find(|t| t.polarity == Polarity::Output)
                        .expect("committed state must have an outgoing output");
                    output.push(t.action.clone());
                    state = t.to;
                }
            }
            None => match completion {
                CompletionPolicy::Identity => output.push(a.clone()),
                CompletionPolicy::Strict => {
                    return EditRun {
                        output,
                        final_state: ioa.state(state).id.clone(),
                        rejected_at: Some(i + 1),
                    }
                }
            },
        }
    }
    EditRun {
        output,
        final_state: ioa.state(state).id.clone(),
        rejected_at: None,
    }
}

/// Checks, per input trace, that the edit-automaton interpreter and the
/// driven I/O automaton produce the same output and land on
/// corresponding states.
pub fn check_transform_equivalence(
    ea: &EditAutomaton,
    ioa: &IoAutomaton,
    inputs: &[Trace],
    completion: CompletionPolicy,
) -> Vec<TraceVerdict> {
    inputs
        .iter()
        .map(|input| {
            let edit = run_edit(ea, input, completion);
            let io = drive_io(ioa, input, completion);
            if edit.output == io.output
                && edit.final_state == io.final_state
                && edit.rejected_at == io.rejected_at
            {
                TraceVerdict::Ok
            } else {
                TraceVerdict::Mismatch {
                    detail: format!(
                        "input {input}: edit gave {} (state {}), io gave {} (state {})",
                        edit.output, edit.final_state, io.output, io.final_state
                    ),
                }
            }
        })
        .collect()
}
