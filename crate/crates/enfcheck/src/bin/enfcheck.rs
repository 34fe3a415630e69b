//! Command-line front end: transform enforcers, verify networks,
//! simulate runs, reproduce the bundled case study, and export DOT.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use enfcheck::catalog;
use enfcheck::compose::{build_network, explore, Network, DEFAULT_MAX_STATES};
use enfcheck::dsl::{self, emit_report_json, parse_document, ModelDocument, NetworkDecl};
use enfcheck::edit2io::{transform, CompletionPolicy};
use enfcheck::mcheck::{verify, VerificationReport};
use enfcheck::model::Policy;
use enfcheck::simulate::{run_network_random, WalkOutcome};

#[derive(Parser)]
#[command(name = "enfcheck", version, about = "Interference analysis for runtime policy enforcers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate an edit automaton into its I/O automaton
    Transform {
        /// model file (.enf)
        file: PathBuf,
        /// edit_automaton name
        name: String,
        #[arg(long, value_enum, default_value_t = CompletionArg::Identity)]
        completion: CompletionArg,
        #[arg(long, value_enum, default_value_t = TransformFormat::Text)]
        format: TransformFormat,
    },
    /// Check a network for policy violations and deadlocks
    Verify {
        /// model file (.enf)
        file: PathBuf,
        /// network name
        network: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Random walk over a network's global behavior
    Simulate {
        /// model file (.enf)
        file: PathBuf,
        /// network name
        network: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// The bundled Android resource-usage case study
    Catalog(CatalogArgs),
    /// Graphviz export of a model or a network's global state graph
    ExportDot {
        /// model file (.enf)
        file: PathBuf,
        /// edit_automaton, lts, or network name
        name: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CatalogArgs {
    /// list the cases and their policies
    #[arg(long)]
    list: bool,
    /// verify every case and compare with the expected verdicts
    #[arg(long)]
    run_table1: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompletionArg {
    Identity,
    Strict,
}

impl From<CompletionArg> for CompletionPolicy {
    fn from(c: CompletionArg) -> Self {
        match c {
            CompletionArg::Identity => CompletionPolicy::Identity,
            CompletionArg::Strict => CompletionPolicy::Strict,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformFormat {
    Text,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &PathBuf) -> Result<ModelDocument, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("{}: {e}", file.display()))?;
    parse_document(&text).map_err(|e| format!("{}:{e}", file.display()))
}

fn network_of(doc: &ModelDocument, name: &str) -> Result<(Network, Vec<Policy>), String> {
    let decl: &NetworkDecl = doc
        .network(name)
        .ok_or_else(|| format!("no network named `{name}`"))?;
    let net = build_network(
        &doc.enforcers_for(decl),
        &doc.frameworks_for(decl),
        &decl.targets,
        decl.completion,
    )
    .map_err(|e| e.to_string())?;
    let policies = doc.bind_policies(decl).map_err(|e| e.to_string())?;
    Ok((net, policies))
}

fn run() -> Result<ExitCode, String> {
    match Cli::parse().command {
        Command::Transform {
            file,
            name,
            completion,
            format,
        } => {
            let doc = load(&file)?;
            let ea = doc
                .edit_automaton(&name)
                .ok_or_else(|| format!("no edit_automaton named `{name}`"))?;
            let transformed = transform(ea, completion.into());
            for w in &transformed.warnings {
                eprintln!("warning: {w}");
            }
            match format {
                TransformFormat::Dot => print!("{}", dsl::export_dot_io(&transformed.automaton)),
                TransformFormat::Text => {
                    let m = &transformed.automaton;
                    println!(
                        "{}: {} states ({} committed), {} transitions",
                        m.name,
                        m.states.len(),
                        m.committed_count(),
                        m.transitions.len()
                    );
                    for t in &m.transitions {
                        let mark = match t.polarity {
                            enfcheck::model::Polarity::Input => "?",
                            enfcheck::model::Polarity::Output => "!",
                            enfcheck::model::Polarity::Internal => "",
                        };
                        println!(
                            "  {} --{}{mark}--> {}",
                            m.states[t.from].id, t.action, m.states[t.to].id
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            file,
            network,
            format,
            max_states,
        } => {
            let doc = load(&file)?;
            let (net, policies) = network_of(&doc, &network)?;
            let report = verify(&net, &policies, max_states).map_err(|e| e.to_string())?;
            match format {
                ReportFormat::Json => println!("{}", emit_report_json(&report)),
                ReportFormat::Text => print_report(&report),
            }
            Ok(if report.interference {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Simulate {
            file,
            network,
            seed,
            steps,
        } => {
            let doc = load(&file)?;
            let (net, _) = network_of(&doc, &network)?;
            let walk = run_network_random(&net, seed, steps);
            for a in &walk.trace.0 {
                println!("{a}");
            }
            match walk.outcome {
                WalkOutcome::Deadlocked => println!("outcome: deadlocked"),
                WalkOutcome::Running => println!("outcome: running"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog(args) => {
            if args.list {
                for case in catalog::list_cases() {
                    println!("{} ({})", case.api, case.package);
                    for t in &case.templates {
                        println!("  {t}");
                    }
                }
                return Ok(ExitCode::SUCCESS);
            }
            let rows = catalog::run_table1(args.max_states);
            let mut interferences = 0;
            let mut all_match = true;
            println!(
                "{:<20} {:<20} {:<10} {:<10} match",
                "API", "package", "expected", "actual"
            );
            for row in &rows {
                let actual = match &row.actual {
                    Ok(v) => {
                        if *v == catalog::Verdict::Yes {
                            interferences += 1;
                        }
                        v.to_string()
                    }
                    Err(e) => format!("inconclusive ({e})"),
                };
                let matched = row.matches();
                all_match &= matched;
                println!(
                    "{:<20} {:<20} {:<10} {:<10} {}",
                    row.api,
                    row.package,
                    row.expected.to_string(),
                    actual,
                    if matched { "yes" } else { "MISMATCH" }
                );
            }
            println!("{interferences}/10 interferences");
            Ok(if all_match {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::ExportDot {
            file,
            name,
            max_states,
        } => {
            let doc = load(&file)?;
            if let Some(ea) = doc.edit_automaton(&name) {
                print!("{}", dsl::export_dot_edit(ea));
            } else if let Some(lts) = doc.lts(&name) {
                print!("{}", dsl::export_dot_io(&lts.to_io()));
            } else if doc.network(&name).is_some() {
                let (net, _) = network_of(&doc, &name)?;
                let graph = explore(&net, max_states).map_err(|e| e.to_string())?;
                print!("{}", dsl::export_dot_global(&graph, &net));
            } else {
                return Err(format!("no declaration named `{name}`"));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_report(report: &VerificationReport) {
    for p in &report.policies {
        if p.holds {
            println!("policy {}: holds", p.name);
        } else {
            println!("policy {}: violated", p.name);
            if let Some(ce) = &p.counterexample {
                println!("  counterexample: {}", trace_text(ce));
            }
        }
    }
    for d in &report.deadlocks {
        println!("deadlock after: {}", trace_text(&d.trace));
    }
    println!(
        "states: {}  edges: {}  runtime: {} ms",
        report.stats.states, report.stats.edges, report.stats.runtime_ms
    );
    println!(
        "interference: {}",
        if report.interference { "yes" } else { "no" }
    );
}

fn trace_text(t: &enfcheck::model::Trace) -> String {
    t.0.iter()
        .map(|a| a.name().to_owned())
        .collect::<Vec<_>>()
        .join("; ")
}
