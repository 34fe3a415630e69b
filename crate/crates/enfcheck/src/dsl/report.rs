//! JSON report serialization with a stable schema:
//!
//! ```json
//! {
//!   "interference": "yes" | "no",
//!   "policies": [ { "name": ..., "verdict": "holds" | "violated",
//!                   "counterexample": [ "action", ... ] } ],
//!   "deadlocks": [ { "trace": [ "action", ... ] } ],
//!   "stats": { "states": N, "edges": N, "runtimeMs": N }
//! }
//! ```
//!
//! Output is byte-identical across runs except for `runtimeMs`.

use serde::Serialize;

use crate::mcheck::VerificationReport;
use crate::model::Trace;

#[derive(Serialize)]
struct ReportDto<'a> {
    interference: &'a str,
    policies: Vec<PolicyDto>,
    deadlocks: Vec<DeadlockDto>,
    stats: StatsDto,
}

#[derive(Serialize)]
struct PolicyDto {
    name: String,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Vec<String>>,
}

#[derive(Serialize)]
struct DeadlockDto {
    trace: Vec<String>,
}

#[derive(Serialize)]
struct StatsDto {
    states: usize,
    edges: usize,
    #[serde(rename = "runtimeMs")]
    runtime_ms: u128,
}

fn names(t: &Trace) -> Vec<String> {
    t.0.iter().map(|a| a.name().to_owned()).collect()
}

pub fn emit_report_json(r: &VerificationReport) -> String {
    let dto = ReportDto {
        interference: if r.interference { "yes" } else { "no" },
        policies: r
            .policies
            .iter()
            .map(|p| PolicyDto {
                name: p.name.clone(),
                verdict: if p.holds { "holds" } else { "violated" },
                counterexample: p.counterexample.as_ref().map(names),
            })
            .collect(),
        deadlocks: r
            .deadlocks
            .iter()
            .map(|d| DeadlockDto {
                trace: names(&d.trace),
            })
            .collect(),
        stats: StatsDto {
            states: r.stats.states,
            edges: r.stats.edges,
            runtime_ms: r.stats.runtime_ms,
        },
    };
    serde_json::to_string_pretty(&dto).expect("report serialization is infallible")
}
