//! Hand-built automata from the MediaPlayer running example, used by
//! unit tests across modules.

use crate::model::{Action, EditAutomaton, EditTransition, Trace};

fn trans(from: &str, on: &str, to: &str, emit: &[&str]) -> EditTransition {
    EditTransition {
        from: from.into(),
        on: on.into(),
        to: to.into(),
        emit: Trace::from_names(emit),
    }
}

/// Enforcer for Policy 1: release the MediaPlayer before the activity stops.
pub fn ea_p1() -> EditAutomaton {
    EditAutomaton {
        name: "EA_p1".into(),
        alphabet: ["onCreate", "onStop", "create", "release"]
            .iter()
            .map(|s| Action::new(*s))
            .collect(),
        states: ["0", "1", "2"].iter().map(|s| s.to_string()).collect(),
        initial: "0".into(),
        transitions: vec![
            trans("0", "onCreate", "1", &["onCreate"]),
            trans("1", "onStop", "0", &["onStop"]),
            trans("1", "create", "2", &["create"]),
            trans("2", "onStop", "0", &["release", "onStop"]),
            trans("2", "release", "1", &["release"]),
        ],
    }
}

/// Enforcer for Policy 2: stop the MediaPlayer before the activity stops.
pub fn ea_p2() -> EditAutomaton {
    EditAutomaton {
        name: "EA_p2".into(),
        alphabet: ["onCreate", "onStop", "start", "stop"]
            .iter()
            .map(|s| Action::new(*s))
            .collect(),
        states: ["0", "1", "2"].iter().map(|s| s.to_string()).collect(),
        initial: "0".into(),
        transitions: vec![
            trans("0", "onCreate", "1", &["onCreate"]),
            trans("1", "onStop", "0", &["onStop"]),
            trans("1", "start", "2", &["start"]),
            trans("2", "onStop", "0", &["stop", "onStop"]),
            trans("2", "stop", "1", &["stop"]),
        ],
    }
}
