//! Reference interpreter for edit automata and a seed-deterministic
//! random walker over networks. Both exist to cross-check the
//! transformation and the explorer, so they deliberately share no code
//! with those modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compose::{GlobalState, Network};
use crate::edit2io::CompletionPolicy;
use crate::model::{EditAutomaton, Trace};

/// Result of folding an edit automaton over an input trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditRun {
    pub output: Trace,
    pub final_state: String,
    /// 1-based index of the first rejected input under strict
    /// completion; `None` means the whole trace was consumed.
    pub rejected_at: Option<usize>,
}

/// Folds the transition function over `input`. A defined transition
/// appends its emission and moves; an undefined pair passes the action
/// through under identity completion, or stops the run under strict.
pub fn run_edit(ea: &EditAutomaton, input: &Trace, completion: CompletionPolicy) -> EditRun {
    let mut state = ea.initial.clone();
    let mut output = Trace::empty();
    for (i, a) in input.iter().enumerate() {
        match ea.step(&state, a) {
            Some(t) => {
                output.extend(&t.emit);
                state = t.to.clone();
            }
            None => match completion {
                CompletionPolicy::Identity => output.push(a.clone()),
                CompletionPolicy::Strict => {
                    return EditRun {
                        output,
                        final_state: state,
                        rejected_at: Some(i + 1),
                    }
                }
            },
        }
    }
    EditRun {
        output,
        final_state: state,
        rejected_at: None,
    }
}

/// Outcome of a random walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkOutcome {
    Running,
    Deadlocked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub trace: Trace,
    pub outcome: WalkOutcome,
    pub states: Vec<GlobalState>,
}

/// Uniform random walk over enabled global transitions. The generator
/// is ChaCha8 seeded from `seed`, so identical arguments give identical
/// walks; successor lists are visited in the explorer's deterministic
/// order.
pub fn run_network_random(net: &Network, seed: u64, max_steps: usize) -> Walk {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = net.initial_state();
    let mut states = vec![state.clone()];
    let mut trace = Trace::empty();
    for _ in 0..max_steps {
        let succs = net.successors(&state);
        if succs.is_empty() {
            return Walk {
                trace,
                outcome: WalkOutcome::Deadlocked,
                states,
            };
        }
        let (label, next) = succs[rng.gen_range(0..succs.len())].clone();
        trace.push(label);
        states.push(next.clone());
        state = next;
    }
    Walk {
        trace,
        outcome: WalkOutcome::Running,
        states,
    }
}
