//! Interference analysis for runtime policy enforcers.
//!
//! Enforcers are specified as edit automata that suppress and insert
//! actions of a monitored application. This crate decides, ahead of
//! deployment, whether a set of enforcers can be activated together:
//! each enforcer is translated into an I/O automaton with committed
//! emission states, the translations are combined into a composite
//! enforcer, and the composite is wired to an environment model plus
//! framework models (application lifecycle, resource protocols). The
//! reachable global behavior is then checked for policy violations and
//! deadlocks.

pub mod catalog;
pub mod compose;
pub mod dsl;
pub mod edit2io;
pub mod mcheck;
pub mod model;
pub mod simulate;
#[cfg(test)]
pub(crate) mod testutil;

pub use compose::{build_network, explore, GlobalStateGraph, Network};
pub use edit2io::{transform, CompletionPolicy};
pub use mcheck::{verify, VerificationReport};
pub use model::{Action, CtlFormula, EditAutomaton, IoAutomaton, Policy, Trace};
