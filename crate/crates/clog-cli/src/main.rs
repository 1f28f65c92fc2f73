//! Command-line front end: parsing, model enumeration and checking, process
//! traces, stable models, translations, and semantics comparisons as
//! reproducible batch runs.
//!
//! Exit status: 0 on success, 1 when a semantic check rejects, 2 on usage,
//! parse, or guard errors.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clog::engine::EngineOptions;
use clog::logic::{Element, Structure};
use clog::surface::{
    parse_clog, parse_edlp, parse_foclog, render_causal_theory, render_foclog, render_formula,
    render_program, FoClogTheory,
};
use clog::{
    analyze, compare_semantics, check_model, enumerate_models, fo_weakening, run_process,
    stable_models, translate_to_foclog, Formula, PolicySource, Verdict,
};

#[derive(Parser)]
#[command(name = "clog", version, about = "Causal-theory and stable-model workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct Problem {
    /// Theory file (.clog or .foclog)
    file: PathBuf,
    /// Exogenous interpretation as a structure JSON file
    #[arg(long)]
    exo: Option<PathBuf>,
    /// Extra initial elements, comma separated
    #[arg(long, value_delimiter = ',')]
    domain: Vec<String>,
    /// Integer segment LO:HI added to the domain
    #[arg(long)]
    segment: Option<String>,
    /// Maximum number of created elements
    #[arg(long, default_value_t = 4)]
    budget: i64,
    /// Report budget-truncated final states instead of discarding them
    #[arg(long)]
    allow_truncation: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a theory or program and print its canonical form
    Parse { file: PathBuf },
    /// Enumerate the models of a causal or combined theory
    Models {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check one candidate structure against a theory
    Check {
        #[command(flatten)]
        problem: Problem,
        /// Candidate structure JSON (merged over --exo if both are given)
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one causal process forward and print its trace
    Trace {
        #[command(flatten)]
        problem: Problem,
        /// Seed for nondeterministic choices (CLOG_SEED overrides)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate the stable models of an E-disjunctive program
    Stable {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        domain: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Translate an E-disjunctive program to a combined theory
    Translate { file: PathBuf },
    /// Print the first-order weakening of a creation-free theory
    Weaken { file: PathBuf },
    /// Report overlap and recursion-over-negation analyses
    Analyze {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        domain: Vec<String>,
    },
    /// Compare stable, causal, and weakened semantics of a program
    Compare {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        domain: Vec<String>,
        #[arg(long, default_value_t = 4)]
        budget: i64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_theory(path: &Path) -> Result<FoClogTheory, String> {
    let text = read(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("clog") => Ok(parse_clog(&text)
            .map_err(|e| format!("{}:{e}", path.display()))?
            .into()),
        Some("foclog") => {
            parse_foclog(&text).map_err(|e| format!("{}:{e}", path.display()))
        }
        other => Err(format!(
            "expected a .clog or .foclog file, got `{}`",
            other.unwrap_or("")
        )),
    }
}

fn load_structure(path: &Path) -> Result<Structure, String> {
    let text = read(path)?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Structure::from_json(&v).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_segment(spec: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| format!("segment must be LO:HI, got `{spec}`"))?;
    let lo: i64 = lo.parse().map_err(|_| format!("bad segment bound `{lo}`"))?;
    let hi: i64 = hi.parse().map_err(|_| format!("bad segment bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty segment {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn budget_of(raw: i64) -> Result<usize, String> {
    usize::try_from(raw).map_err(|_| format!("budget must be >= 0, got {raw}"))
}

/// Assembles the exogenous structure: the JSON file, extra elements, the
/// integer segment, and an interpretation for every constant of the theory
/// (same-named elements are bound automatically).
fn build_exo(theory: &FoClogTheory, problem: &Problem) -> Result<Structure, String> {
    let mut s = match &problem.exo {
        Some(path) => load_structure(path)?,
        None => Structure::new(),
    };
    for name in &problem.domain {
        if !name.is_empty() {
            s.add_initial(Element::name(name.clone()));
        }
    }
    if let Some(seg) = &problem.segment {
        let (lo, hi) = parse_segment(seg)?;
        for i in lo..=hi {
            s.add_initial(Element::Int(i));
        }
    }
    let vocab = theory.vocabulary().map_err(|e| e.to_string())?;
    for c in &vocab.constants {
        if s.constant(c).is_none() {
            let e = Element::name(c.clone());
            if !s.domain().contains(&e) {
                s.add_initial(e.clone());
            }
            s.set_constant(c.clone(), e).map_err(|e| e.to_string())?;
        }
    }
    Ok(s)
}

fn merge_structures(base: &Structure, over: &Structure) -> Result<Structure, String> {
    let mut out = base.clone();
    for e in over.domain() {
        if over.is_created(e) {
            out.add_created(e.clone());
        } else {
            out.add_initial(e.clone());
        }
    }
    for (c, e) in over.constants() {
        out.set_constant(c.clone(), e.clone()).map_err(|e| e.to_string())?;
    }
    for (p, t) in over.tables() {
        out.declare_predicate(p.clone(), t.arity);
        for tuple in &t.tuples {
            out.insert_fact(clog::Atom::new(p.clone(), tuple.clone()))
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(out)
}

fn named_domain(names: &[String]) -> BTreeSet<Element> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| Element::name(n.clone()))
        .collect()
}

fn print_structure_text(s: &Structure) -> String {
    let atoms: Vec<String> = s.true_atoms().iter().map(|a| a.to_string()).collect();
    let mut line = format!("{{{}}}", atoms.join(", "));
    if !s.created().is_empty() {
        let created: Vec<String> = s.created().iter().map(|e| e.to_string()).collect();
        line.push_str(&format!(" (created: {})", created.join(", ")));
    }
    line
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Parse { file } => {
            let text = read(&file)?;
            let out = match file.extension().and_then(|e| e.to_str()) {
                Some("clog") => render_causal_theory(
                    &parse_clog(&text).map_err(|e| format!("{}:{e}", file.display()))?,
                ),
                Some("foclog") => render_foclog(
                    &parse_foclog(&text).map_err(|e| format!("{}:{e}", file.display()))?,
                ),
                Some("edlp") => render_program(
                    &parse_edlp(&text).map_err(|e| format!("{}:{e}", file.display()))?,
                ),
                other => {
                    return Err(format!(
                        "expected .clog, .foclog, or .edlp, got `{}`",
                        other.unwrap_or("")
                    ))
                }
            };
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Models { problem, format } => {
            let theory = load_theory(&problem.file)?;
            let exo = build_exo(&theory, &problem)?;
            let opts = EngineOptions {
                budget: budget_of(problem.budget)?,
                truncation: problem.allow_truncation,
                ..EngineOptions::default()
            };
            let models = enumerate_models(&theory, &exo, &opts).map_err(|e| e.to_string())?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&models.to_json()).unwrap()
                ),
                _ => {
                    println!("budget: {}", models.budget);
                    println!("models: {}", models.models.len());
                    for (i, entry) in models.models.iter().enumerate() {
                        let mark = if entry.budget_limited {
                            " [budget-limited]"
                        } else {
                            ""
                        };
                        println!("{}: {}{mark}", i + 1, print_structure_text(&entry.structure));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            problem,
            candidate,
            format,
        } => {
            let theory = load_theory(&problem.file)?;
            let exo = build_exo(&theory, &problem)?;
            let cand = merge_structures(&exo, &load_structure(&candidate)?)?;
            let opts = EngineOptions {
                budget: budget_of(problem.budget)?,
                truncation: problem.allow_truncation,
                ..EngineOptions::default()
            };
            match check_model(&theory, &cand, &opts).map_err(|e| e.to_string())? {
                Verdict::Accepted { trace } => {
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "verdict": "accepted",
                                "budget": opts.budget,
                                "trace": trace.to_json(),
                            }))
                            .unwrap()
                        ),
                        Format::Dot => print!("{}", trace.to_dot()),
                        Format::Text => {
                            println!("accepted (budget {})", opts.budget);
                            for (i, s) in trace.state_chain().iter().enumerate() {
                                println!("state {}: {}", i, print_structure_text(s));
                            }
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Rejected { reasons } => {
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "verdict": "rejected",
                                "budget": opts.budget,
                                "reasons": reasons,
                            }))
                            .unwrap()
                        ),
                        _ => {
                            println!("rejected (budget {})", opts.budget);
                            for r in &reasons {
                                println!("  {r}");
                            }
                        }
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Trace {
            problem,
            seed,
            format,
        } => {
            let theory = load_theory(&problem.file)?;
            let exo = build_exo(&theory, &problem)?;
            let opts = EngineOptions {
                budget: budget_of(problem.budget)?,
                truncation: true,
                ..EngineOptions::default()
            };
            let seed = std::env::var("CLOG_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(seed);
            let trace = run_process(&theory, &exo, PolicySource::Seeded(seed), &opts)
                .map_err(|e| e.to_string())?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "budget": opts.budget,
                        "seed": seed,
                        "trace": trace.to_json(),
                    }))
                    .unwrap()
                ),
                Format::Dot => print!("{}", trace.to_dot()),
                Format::Text => {
                    println!("budget: {} seed: {seed}", opts.budget);
                    for (i, s) in trace.state_chain().iter().enumerate() {
                        println!("state {}: {}", i, print_structure_text(s));
                    }
                    if trace.truncated {
                        println!("truncated: the creation budget was exhausted");
                    }
                    for n in trace.stuck.iter().chain(trace.notes.iter()) {
                        println!("note: {n}");
                    }
                    if let Some(st) = trace.stable {
                        println!("stable: {st}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Stable {
            file,
            domain,
            format,
        } => {
            let text = read(&file)?;
            let p = parse_edlp(&text).map_err(|e| format!("{}:{e}", file.display()))?;
            let domain = clog::edlp::program_domain(&p, &named_domain(&domain));
            let models = stable_models(&p, &domain).map_err(|e| e.to_string())?;
            match format {
                Format::Json => {
                    let sets: Vec<Vec<String>> = models
                        .iter()
                        .map(|m| m.true_atoms().iter().map(|a| a.to_string()).collect())
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "count": sets.len(),
                            "models": sets,
                        }))
                        .unwrap()
                    );
                }
                _ => {
                    println!("models: {}", models.len());
                    for (i, m) in models.iter().enumerate() {
                        println!("{}: {}", i + 1, print_structure_text(m));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Translate { file } => {
            let text = read(&file)?;
            let p = parse_edlp(&text).map_err(|e| format!("{}:{e}", file.display()))?;
            print!("{}", render_foclog(&translate_to_foclog(&p)));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Weaken { file } => {
            let theory = load_theory(&file)?;
            let weakened = fo_weakening(&theory.causal).map_err(|e| e.to_string())?;
            for f in split_conjunction(&weakened) {
                println!("{}.", render_formula(f));
            }
            for s in &theory.sentences {
                println!("{}.", render_formula(s));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Analyze { file, domain } => {
            let text = read(&file)?;
            let p = parse_edlp(&text).map_err(|e| format!("{}:{e}", file.display()))?;
            let report =
                analyze(&p, &named_domain(&domain)).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report.to_json()).unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Compare {
            file,
            domain,
            budget,
        } => {
            let text = read(&file)?;
            let p = parse_edlp(&text).map_err(|e| format!("{}:{e}", file.display()))?;
            let opts = EngineOptions {
                budget: budget_of(budget)?,
                ..EngineOptions::default()
            };
            let report = compare_semantics(&p, &named_domain(&domain), &opts)
                .map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report.to_json()).unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn split_conjunction(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut out = split_conjunction(a);
            out.extend(split_conjunction(b));
            out
        }
        other => vec![other],
    }
}
