//! The semantic core: cset enumeration, model checking and enumeration under
//! a finite creation budget, and forward execution of causal processes.
//!
//! Model checking searches over selection policies (one branch per `Or`
//! choice, `Sel` witness, and `New` element assignment) and validates each
//! policy by running the process greedily from the default state. Conditions
//! are evaluated reduct-style: positive endogenous occurrences read the
//! intermediate state, negated endogenous occurrences and exogenous symbols
//! read the candidate, and `Sel` witnesses must exist in the intermediate
//! domain. A candidate is a model when some policy's process reproduces it
//! exactly and every first-order sentence holds in it.

mod csets;
mod runtime;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

pub use csets::{enumerate_csets, CSet, CsetOutcome, Justification};

use crate::logic::{
    default_state, evaluate_formula, Assignment, Atom, Element, EvalError, Structure,
    StructureError, Vocabulary,
};
use crate::surface::{classify_symbols, FoClogTheory};

use runtime::{FlatTheory, RunKind, Runner};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("vocabulary mismatch: {0}")]
    Vocab(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("candidate has {got} created elements but the budget is {budget}")]
    Budget { got: usize, budget: usize },
    #[error("policy search exceeded {0} branches")]
    SearchSpace(usize),
}

/// Engine knobs. With `truncation` off (the default), a process that needs
/// more creations than the budget yields no model; with it on, exhausted
/// `New` events are skipped and the resulting final states are reported as
/// budget-limited.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub budget: usize,
    pub truncation: bool,
    pub branch_limit: usize,
}

impl Default for EngineOptions {
    fn default() -> EngineOptions {
        EngineOptions {
            budget: 4,
            truncation: false,
            branch_limit: 2_000_000,
        }
    }
}

impl EngineOptions {
    pub fn with_budget(budget: usize) -> EngineOptions {
        EngineOptions {
            budget,
            ..EngineOptions::default()
        }
    }
}

/// One event instantiation: an AST node together with the values of its
/// enclosing quantified variables. Equal pairs denote the same event; each
/// fires at most once per process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventInstance {
    pub node: usize,
    pub label: String,
    pub binding: Vec<(String, Element)>,
}

impl std::fmt::Display for EventInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{} {}", self.node, self.label)?;
        if !self.binding.is_empty() {
            write!(f, " [")?;
            for (i, (v, e)) in self.binding.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}={e}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// One round of a causal process: the state after the round, the events that
/// fired during it, and what changed.
#[derive(Clone, Debug)]
pub struct TraceRound {
    pub state: Structure,
    pub fired: Vec<EventInstance>,
    pub delta_atoms: BTreeSet<Atom>,
    pub delta_created: Vec<Element>,
}

/// A causal process from the default state. The first entry of
/// [`ProcessTrace::states`] is the default state itself.
#[derive(Clone, Debug)]
pub struct ProcessTrace {
    pub initial: Structure,
    pub rounds: Vec<TraceRound>,
    pub truncated: bool,
    pub stuck: Vec<String>,
    pub notes: Vec<String>,
    /// Result of re-checking the final state for stability (forward runs
    /// only; `None` when the trace itself is a checking witness).
    pub stable: Option<bool>,
}

impl ProcessTrace {
    pub fn final_state(&self) -> &Structure {
        self.rounds.last().map(|r| &r.state).unwrap_or(&self.initial)
    }

    /// The chain of distinct states, collapsing rounds that changed nothing.
    pub fn state_chain(&self) -> Vec<&Structure> {
        let mut out = vec![&self.initial];
        for r in &self.rounds {
            if *out.last().unwrap() != &r.state {
                out.push(&r.state);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rounds: Vec<serde_json::Value> = self
            .rounds
            .iter()
            .enumerate()
            .map(|(i, r)| {
                serde_json::json!({
                    "round": i + 1,
                    "state": r.state.to_json(),
                    "fired": r.fired.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "delta": {
                        "atoms": r.delta_atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                        "created": r.delta_created.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                    },
                })
            })
            .collect();
        let mut obj = serde_json::json!({
            "initial": self.initial.to_json(),
            "rounds": rounds,
            "truncated": self.truncated,
            "notes": self.notes,
            "stuck": self.stuck,
        });
        if let Some(st) = self.stable {
            obj["stable"] = serde_json::Value::from(st);
        }
        obj
    }

    /// The state-transition chain in DOT format.
    pub fn to_dot(&self) -> String {
        let chain = self.state_chain();
        let mut out = String::from("digraph trace {\n  rankdir=LR;\n  node [shape=box];\n");
        for (i, s) in chain.iter().enumerate() {
            let label = state_label(s);
            let mut attrs = format!("label=\"{}\"", label.replace('"', "\\\""));
            if i + 1 == chain.len() && self.truncated {
                attrs.push_str(", style=dashed");
            }
            let _ = writeln!(out, "  s{i} [{attrs}];");
        }
        for i in 1..chain.len() {
            let _ = writeln!(out, "  s{} -> s{};", i - 1, i);
        }
        out.push_str("}\n");
        out
    }
}

fn state_label(s: &Structure) -> String {
    let atoms: Vec<String> = s.true_atoms().iter().map(|a| a.to_string()).collect();
    let mut label = format!("{{{}}}", atoms.join(", "));
    if !s.created().is_empty() {
        let created: Vec<String> = s.created().iter().map(|e| e.to_string()).collect();
        let _ = write!(label, " new: {}", created.join(", "));
    }
    label
}

/// Outcome of checking one candidate structure.
#[derive(Clone, Debug)]
pub enum Verdict {
    Accepted { trace: Box<ProcessTrace> },
    Rejected { reasons: Vec<String> },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

/// One enumerated model. `budget_limited` marks final states reached only by
/// skipping `New` events after the creation budget ran out.
#[derive(Clone, Debug)]
pub struct ModelEntry {
    pub structure: Structure,
    pub budget_limited: bool,
}

/// Canonically ordered enumeration result; the bound it was computed under
/// travels with it.
#[derive(Clone, Debug)]
pub struct ModelSet {
    pub budget: usize,
    pub models: Vec<ModelEntry>,
}

impl ModelSet {
    pub fn structures(&self) -> Vec<&Structure> {
        self.models.iter().map(|m| &m.structure).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "budget": self.budget,
            "count": self.models.len(),
            "models": self.models.iter().map(|m| {
                let mut v = m.structure.to_json();
                if m.budget_limited {
                    v["budget_limited"] = serde_json::Value::from(true);
                }
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// How a forward run resolves nondeterministic choices.
#[derive(Clone, Copy, Debug)]
pub enum PolicySource {
    /// Always take the canonically first option.
    Canonical,
    /// Pseudo-random choices from the given seed.
    Seeded(u64),
}

/// Normalizes a candidate against the theory vocabulary: missing predicates
/// become empty tables, arity conflicts are errors.
fn normalize_structure(vocab: &Vocabulary, s: &Structure) -> Result<Structure, EngineError> {
    let mut s = s.clone();
    for (p, &arity) in &vocab.predicates {
        match s.table(p) {
            Some(t) if t.arity != arity && !t.tuples.is_empty() => {
                return Err(EngineError::Vocab(format!(
                    "predicate `{p}` has arity {arity} in the theory but {} in the structure",
                    t.arity
                )));
            }
            Some(t) if t.arity != arity => {
                // empty table recorded with a default arity; fix it up
                let mut fixed = s.clone();
                fixed.tables_mut().insert(
                    p.clone(),
                    crate::logic::Table::empty(arity),
                );
                s = fixed;
            }
            Some(_) => {}
            None => s.declare_predicate(p.clone(), arity),
        }
    }
    for c in &vocab.constants {
        if s.constant(c).is_none() {
            return Err(EngineError::Structure(StructureError::MissingConstant(
                c.clone(),
            )));
        }
    }
    Ok(s)
}

/// Accepts a candidate exactly when (a) some selection policy's cset relative
/// to it reproduces its endogenous atoms and created elements, (b) a founded
/// firing order from the default state exists for that policy, and (c) every
/// first-order sentence holds in it. On success the witnessing process trace
/// is returned.
pub fn check_model(
    theory: &FoClogTheory,
    candidate: &Structure,
    opts: &EngineOptions,
) -> Result<Verdict, EngineError> {
    let vocab = theory.vocabulary()?;
    let candidate = normalize_structure(&vocab, candidate)?;
    if candidate.created().len() > opts.budget {
        return Err(EngineError::Budget {
            got: candidate.created().len(),
            budget: opts.budget,
        });
    }
    let mut reasons = Vec::new();
    for sentence in &theory.sentences {
        if !evaluate_formula(sentence, &candidate, &Assignment::new())? {
            reasons.push(format!(
                "sentence `{}` is false in the candidate",
                crate::surface::render_formula(sentence)
            ));
        }
    }
    if !reasons.is_empty() {
        return Ok(Verdict::Rejected { reasons });
    }

    let (endo, exo) = classify_symbols(theory);
    let exo_part = exogenous_part(&candidate, &exo);
    let initial = default_state(&vocab, &exo_part, &endo)?;
    let flat = FlatTheory::build(theory, &vocab, &endo)?;

    let mut runner = Runner::new(&flat, opts, RunKind::Check { candidate: &candidate });
    runner.stop_after_first = true;
    runner.run(initial)?;
    match runner.finals.into_iter().next() {
        Some(fin) => Ok(Verdict::Accepted {
            trace: Box::new(runtime::trace_of(fin, None)),
        }),
        None => {
            let mut rs: Vec<String> = runner.failures;
            rs.sort();
            rs.dedup();
            rs.truncate(8);
            if rs.is_empty() {
                rs.push("no selection policy reproduces the candidate".into());
            }
            Ok(Verdict::Rejected { reasons: rs })
        }
    }
}

/// The exogenous reduct of a structure, restricted to initial elements.
fn exogenous_part(s: &Structure, exo: &BTreeSet<String>) -> Structure {
    let mut out = Structure::new();
    for e in s.initial_elements() {
        out.add_initial(e.clone());
    }
    for (c, e) in s.constants() {
        let _ = out.set_constant(c.clone(), e.clone());
    }
    for (p, t) in s.tables() {
        if !exo.contains(p) {
            continue;
        }
        out.declare_predicate(p.clone(), t.arity);
        for tuple in &t.tuples {
            if tuple.iter().all(|e| !s.is_created(e)) {
                let _ = out.insert_fact(Atom::new(p.clone(), tuple.clone()));
            }
        }
    }
    out
}

/// Enumerates every model whose exogenous reduct equals `exo_part`, with at
/// most `opts.budget` created elements. Created elements are reported under
/// canonical names `_c0.._ck`; structures differing only by a renaming of
/// created elements are identified.
pub fn enumerate_models(
    theory: &FoClogTheory,
    exo_part: &Structure,
    opts: &EngineOptions,
) -> Result<ModelSet, EngineError> {
    let vocab = theory.vocabulary()?;
    let (endo, _exo) = classify_symbols(theory);
    let initial = default_state(&vocab, exo_part, &endo)?;
    let flat = FlatTheory::build(theory, &vocab, &endo)?;

    let mut runner = Runner::new(&flat, opts, RunKind::Enumerate);
    runner.run(initial)?;

    let mut found: std::collections::BTreeMap<Structure, bool> = std::collections::BTreeMap::new();
    for fin in runner.finals {
        let mut keep = true;
        for sentence in &theory.sentences {
            if !evaluate_formula(sentence, &fin.state, &Assignment::new())? {
                keep = false;
                break;
            }
        }
        if !keep {
            continue;
        }
        let canon = fin.state.canonicalize_created();
        let limited = fin.truncated;
        found
            .entry(canon)
            .and_modify(|l| *l = *l && limited)
            .or_insert(limited);
    }
    let mut models: Vec<ModelEntry> = found
        .into_iter()
        .map(|(structure, budget_limited)| ModelEntry {
            structure,
            budget_limited,
        })
        .collect();
    models.sort_by_key(|m| {
        (
            m.structure.created().len(),
            m.structure.true_atoms(),
            m.structure.clone(),
        )
    });
    Ok(ModelSet {
        budget: opts.budget,
        models,
    })
}

/// Runs one causal process forward from the default state. Conditions read
/// the current state only; the final state is re-checked for stability and
/// the trace is returned even when that re-check fails.
pub fn run_process(
    theory: &FoClogTheory,
    exo_part: &Structure,
    policy: PolicySource,
    opts: &EngineOptions,
) -> Result<ProcessTrace, EngineError> {
    let vocab = theory.vocabulary()?;
    let (endo, _exo) = classify_symbols(theory);
    let initial = default_state(&vocab, exo_part, &endo)?;
    let flat = FlatTheory::build(theory, &vocab, &endo)?;

    // Forward mode never dies: budget exhaustion truncates the trace instead.
    let fwd_opts = EngineOptions {
        truncation: true,
        ..opts.clone()
    };
    let mut runner = Runner::new(&flat, &fwd_opts, RunKind::Forward { policy });
    runner.run(initial)?;
    let fin = runner
        .finals
        .into_iter()
        .next()
        .expect("forward run always yields a final state");
    let final_state = fin.state.clone();
    let mut trace = runtime::trace_of(fin, None);
    let stable = match check_model(theory, &final_state, opts) {
        Ok(v) => v.is_accepted(),
        Err(_) => false,
    };
    trace.stable = Some(stable);
    Ok(trace)
}

/// Every process trace reachable by some policy under pure forward
/// evaluation.
pub fn run_all_processes(
    theory: &FoClogTheory,
    exo_part: &Structure,
    opts: &EngineOptions,
) -> Result<Vec<ProcessTrace>, EngineError> {
    let vocab = theory.vocabulary()?;
    let (endo, _exo) = classify_symbols(theory);
    let initial = default_state(&vocab, exo_part, &endo)?;
    let flat = FlatTheory::build(theory, &vocab, &endo)?;
    let fwd_opts = EngineOptions {
        truncation: true,
        ..opts.clone()
    };
    let mut runner = Runner::new(&flat, &fwd_opts, RunKind::ForwardAll);
    runner.run(initial)?;
    Ok(runner
        .finals
        .into_iter()
        .map(|fin| runtime::trace_of(fin, None))
        .collect())
}
