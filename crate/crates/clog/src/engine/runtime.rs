//! The process runner behind model checking, model enumeration, and forward
//! execution.
//!
//! A run proceeds in rounds. Unconditional nodes (atoms, `And`, `Or`
//! choices, `New`) cascade as soon as they are activated; conditional nodes
//! (`Rule` bodies, `All` instantiations, `Sel` firings) are evaluated against
//! the state the round started in and fire simultaneously. Enabledness is
//! monotone along a run for a fixed resolution of negated occurrences, so
//! firing greedily reaches the unique fixpoint of each policy.
//!
//! Nondeterminism (an `Or` branch, a `Sel` witness, a `New` element in check
//! mode, a guessed value for a negated endogenous atom in enumerate mode) is
//! explored by cloning the run state at each decision point.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::{
    eval_atom_pattern, eval_formula_with, Assignment, Atom, AtomOracle, AtomPattern, Element,
    EvalError, Formula, Structure, Vocabulary,
};
use crate::surface::{render_formula, Cee, FoClogTheory};

use super::{EngineError, EngineOptions, EventInstance, PolicySource, ProcessTrace, TraceRound};

pub(crate) type Binding = Vec<(String, Element)>;

#[derive(Clone, Debug)]
pub(crate) enum FlatKind {
    Atom(AtomPattern),
    Rule { head: usize, body: Formula },
    And(usize, usize),
    Or(usize, usize),
    All { var: String, qual: Formula, body: usize },
    Sel { var: String, qual: Formula, body: usize },
    New { var: String, body: usize },
}

pub(crate) struct FlatNode {
    pub kind: FlatKind,
    pub label: String,
}

pub(crate) struct FlatTheory {
    pub nodes: Vec<FlatNode>,
    pub root: Option<usize>,
    pub endo: BTreeSet<String>,
}

impl FlatTheory {
    pub fn build(
        theory: &FoClogTheory,
        _vocab: &Vocabulary,
        endo: &BTreeSet<String>,
    ) -> Result<FlatTheory, EngineError> {
        if let Some(root) = &theory.causal.root {
            let free = root.free_variables();
            if let Some(v) = free.iter().next() {
                return Err(EngineError::Vocab(format!(
                    "causal theory has free variable `{v}`"
                )));
            }
        }
        let mut nodes = Vec::new();
        let root = theory.causal.root.as_ref().map(|r| flatten(r, &mut nodes));
        Ok(FlatTheory {
            nodes,
            root,
            endo: endo.clone(),
        })
    }

    fn label(&self, node: usize) -> &str {
        &self.nodes[node].label
    }
}

fn flatten(cee: &Cee, nodes: &mut Vec<FlatNode>) -> usize {
    let id = nodes.len();
    nodes.push(FlatNode {
        kind: FlatKind::And(0, 0), // placeholder
        label: String::new(),
    });
    let (kind, label) = match cee {
        Cee::Atom(a) => (
            FlatKind::Atom(a.clone()),
            format!("Atom {}", render_formula(&Formula::Atom(a.clone()))),
        ),
        Cee::Rule { head, body } => {
            let h = flatten(head, nodes);
            (
                FlatKind::Rule {
                    head: h,
                    body: body.clone(),
                },
                format!("Rule <- {}", render_formula(body)),
            )
        }
        Cee::And(a, b) => {
            let l = flatten(a, nodes);
            let r = flatten(b, nodes);
            (FlatKind::And(l, r), "And".to_string())
        }
        Cee::Or(a, b) => {
            let l = flatten(a, nodes);
            let r = flatten(b, nodes);
            (FlatKind::Or(l, r), "Or".to_string())
        }
        Cee::All { var, qual, body } => {
            let b = flatten(body, nodes);
            (
                FlatKind::All {
                    var: var.clone(),
                    qual: qual.clone(),
                    body: b,
                },
                format!("All {var} [{}]", render_formula(qual)),
            )
        }
        Cee::Sel { var, qual, body } => {
            let b = flatten(body, nodes);
            (
                FlatKind::Sel {
                    var: var.clone(),
                    qual: qual.clone(),
                    body: b,
                },
                format!("Sel {var} [{}]", render_formula(qual)),
            )
        }
        Cee::New { var, body } => {
            let b = flatten(body, nodes);
            (
                FlatKind::New {
                    var: var.clone(),
                    body: b,
                },
                format!("New {var}"),
            )
        }
    };
    nodes[id] = FlatNode { kind, label };
    id
}

#[derive(Clone, Debug)]
pub(crate) struct RunState {
    pub state: Structure,
    initial_state: Structure,
    queue: VecDeque<(usize, Binding)>,
    pending: BTreeSet<(usize, Binding)>,
    all_done: BTreeSet<(usize, Binding, Element)>,
    sel_offered: BTreeMap<(usize, Binding), BTreeSet<Element>>,
    fired: BTreeSet<(usize, Binding)>,
    created_count: usize,
    assumptions: BTreeMap<Atom, bool>,
    snapshot: Option<Structure>,
    round_fired: Vec<EventInstance>,
    round_delta_atoms: BTreeSet<Atom>,
    round_delta_created: Vec<Element>,
    rounds: Vec<TraceRound>,
    pub truncated: bool,
    exempted: Vec<EventInstance>,
    notes: Vec<String>,
}

impl RunState {
    fn new(initial: Structure, root: Option<usize>) -> RunState {
        let mut queue = VecDeque::new();
        if let Some(root) = root {
            queue.push_back((root, Binding::new()));
        }
        RunState {
            initial_state: initial.clone(),
            state: initial,
            queue,
            pending: BTreeSet::new(),
            all_done: BTreeSet::new(),
            sel_offered: BTreeMap::new(),
            fired: BTreeSet::new(),
            created_count: 0,
            assumptions: BTreeMap::new(),
            snapshot: None,
            round_fired: Vec::new(),
            round_delta_atoms: BTreeSet::new(),
            round_delta_created: Vec::new(),
            rounds: Vec::new(),
            truncated: false,
            exempted: Vec::new(),
            notes: Vec::new(),
        }
    }
}

pub(crate) fn trace_of(fin: FinalState, stable: Option<bool>) -> ProcessTrace {
    let mut stuck: Vec<String> = fin
        .exempted
        .iter()
        .map(|e| format!("budget: {e} skipped"))
        .collect();
    stuck.extend(fin.notes.iter().filter(|n| n.starts_with("stuck")).cloned());
    ProcessTrace {
        initial: fin.initial_state,
        rounds: fin.rounds,
        truncated: fin.truncated,
        stuck,
        notes: fin.notes,
        stable,
    }
}

enum Outcome {
    Decision(Decision),
    Quiescent,
    Dead(String),
}

#[derive(Clone, Debug)]
enum Decision {
    Or {
        inst: (usize, Binding),
        left: usize,
        right: usize,
    },
    Sel {
        inst: (usize, Binding),
        var: String,
        body: usize,
        options: Vec<Element>,
    },
    New {
        inst: (usize, Binding),
        var: String,
        body: usize,
        options: Vec<Element>,
    },
    Guess {
        atom: Atom,
    },
}

#[derive(Clone, Copy)]
pub(crate) enum RunKind<'a> {
    Check { candidate: &'a Structure },
    Enumerate,
    Forward { policy: PolicySource },
    ForwardAll,
}

enum CondError {
    Eval(EvalError),
    NeedGuess(Atom),
}

impl From<EvalError> for CondError {
    fn from(e: EvalError) -> CondError {
        CondError::Eval(e)
    }
}

struct CondOracle<'a> {
    snapshot: &'a Structure,
    endo: &'a BTreeSet<String>,
    candidate: Option<&'a Structure>,
    assumptions: Option<&'a BTreeMap<Atom, bool>>,
}

impl AtomOracle for CondOracle<'_> {
    type Err = CondError;
    fn atom_holds(&mut self, atom: &Atom, positive: bool) -> Result<bool, CondError> {
        if !self.endo.contains(&atom.pred) {
            // Exogenous symbols are fixed; in check mode the candidate also
            // covers exogenous facts over created elements.
            if let Some(c) = self.candidate {
                return Ok(c.holds(atom));
            }
            return Ok(self.snapshot.holds(atom));
        }
        if positive {
            return Ok(self.snapshot.holds(atom));
        }
        if let Some(c) = self.candidate {
            return Ok(c.holds(atom));
        }
        if let Some(assum) = self.assumptions {
            if self.snapshot.holds(atom) {
                return Ok(true);
            }
            return match assum.get(atom) {
                Some(&v) => Ok(v),
                None => Err(CondError::NeedGuess(atom.clone())),
            };
        }
        // pure forward: negated occurrences read the current state too
        Ok(self.snapshot.holds(atom))
    }
}

pub(crate) struct Runner<'a> {
    th: &'a FlatTheory,
    opts: &'a EngineOptions,
    kind: RunKind<'a>,
    rng: Option<ChaCha8Rng>,
    branches: usize,
    pub stop_after_first: bool,
    pub finals: Vec<FinalState>,
    pub failures: Vec<String>,
}

/// A quiescent, validated run.
pub(crate) struct FinalState {
    pub state: Structure,
    pub initial_state: Structure,
    pub rounds: Vec<TraceRound>,
    pub truncated: bool,
    pub exempted: Vec<EventInstance>,
    pub notes: Vec<String>,
}

impl<'a> Runner<'a> {
    pub fn new(th: &'a FlatTheory, opts: &'a EngineOptions, kind: RunKind<'a>) -> Runner<'a> {
        let rng = match kind {
            RunKind::Forward {
                policy: PolicySource::Seeded(seed),
            } => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Runner {
            th,
            opts,
            kind,
            rng,
            branches: 0,
            stop_after_first: false,
            finals: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn run(&mut self, initial: Structure) -> Result<(), EngineError> {
        let st = RunState::new(initial, self.th.root);
        self.explore(st)
    }

    fn forward(&self) -> bool {
        matches!(self.kind, RunKind::Forward { .. })
    }

    fn explore(&mut self, st: RunState) -> Result<(), EngineError> {
        if self.stop_after_first && !self.finals.is_empty() {
            return Ok(());
        }
        self.branches += 1;
        if self.branches > self.opts.branch_limit {
            return Err(EngineError::SearchSpace(self.opts.branch_limit));
        }
        let mut st = st;
        loop {
            match self.step(&mut st)? {
                Outcome::Quiescent => {
                    self.finish(st);
                    return Ok(());
                }
                Outcome::Dead(msg) => {
                    self.failures.push(msg);
                    return Ok(());
                }
                Outcome::Decision(d) => {
                    if self.forward() {
                        self.resolve_forward(&mut st, d);
                        continue;
                    }
                    match d {
                        Decision::Or { inst, left, right } => {
                            for child in [left, right] {
                                let mut c = st.clone();
                                fire_or(&mut c, self.th, &inst, child);
                                self.explore(c)?;
                            }
                        }
                        Decision::Sel {
                            inst,
                            var,
                            body,
                            options,
                        } => {
                            for w in &options {
                                let mut c = st.clone();
                                fire_sel(&mut c, self.th, &inst, &var, body, w.clone());
                                self.explore(c)?;
                            }
                            // defer: decline all currently offered witnesses
                            let mut c = st;
                            c.sel_offered
                                .entry(inst)
                                .or_default()
                                .extend(options);
                            self.explore(c)?;
                        }
                        Decision::New {
                            inst,
                            var,
                            body,
                            options,
                        } => {
                            for e in options {
                                let mut c = st.clone();
                                fire_new(&mut c, self.th, &inst, &var, body, e);
                                self.explore(c)?;
                            }
                        }
                        Decision::Guess { atom } => {
                            for v in [false, true] {
                                let mut c = st.clone();
                                c.assumptions.insert(atom.clone(), v);
                                self.explore(c)?;
                            }
                        }
                    }
                    return Ok(());
                }
            }
        }
    }

    fn resolve_forward(&mut self, st: &mut RunState, d: Decision) {
        match d {
            Decision::Or { inst, left, right } => {
                let child = match &mut self.rng {
                    Some(rng) => {
                        if rng.gen_bool(0.5) {
                            left
                        } else {
                            right
                        }
                    }
                    None => left,
                };
                fire_or(st, self.th, &inst, child);
            }
            Decision::Sel {
                inst,
                var,
                body,
                options,
            } => {
                let w = match &mut self.rng {
                    Some(rng) => options[rng.gen_range(0..options.len())].clone(),
                    None => options[0].clone(),
                };
                fire_sel(st, self.th, &inst, &var, body, w);
            }
            Decision::New {
                inst,
                var,
                body,
                options,
            } => {
                let e = options.into_iter().next().expect("fresh element");
                fire_new(st, self.th, &inst, &var, body, e);
            }
            Decision::Guess { .. } => unreachable!("forward runs never guess"),
        }
    }

    fn finish(&mut self, mut st: RunState) {
        // every activated selection must eventually fire
        let mut stuck = Vec::new();
        for (n, b) in &st.pending {
            if matches!(self.th.nodes[*n].kind, FlatKind::Sel { .. }) {
                stuck.push(event(self.th, *n, b.clone()));
            }
        }
        match self.kind {
            RunKind::Check { candidate } => {
                if !stuck.is_empty() {
                    self.failures
                        .push(format!("selection never fired: {}", stuck[0]));
                    return;
                }
                if st.truncated {
                    self.failures.push("creation budget exhausted".into());
                    return;
                }
                let endo_now = st.state.atoms_of(&self.th.endo);
                let endo_cand = candidate.atoms_of(&self.th.endo);
                if endo_now != endo_cand {
                    let missing: Vec<String> = endo_cand
                        .difference(&endo_now)
                        .map(|a| a.to_string())
                        .collect();
                    self.failures.push(if missing.is_empty() {
                        "process causes atoms beyond the candidate".to_string()
                    } else {
                        format!("candidate atom(s) never caused: {}", missing.join(", "))
                    });
                    return;
                }
                if st.state.created() != candidate.created() {
                    self.failures
                        .push("created elements do not match the candidate".into());
                    return;
                }
            }
            RunKind::Enumerate => {
                if !stuck.is_empty() {
                    self.failures
                        .push(format!("selection never fired: {}", stuck[0]));
                    return;
                }
                for (atom, assumed) in &st.assumptions {
                    if st.state.holds(atom) != *assumed {
                        self.failures.push(format!(
                            "assumption {}{} not realized",
                            if *assumed { "" } else { "~" },
                            atom
                        ));
                        return;
                    }
                }
            }
            RunKind::Forward { .. } | RunKind::ForwardAll => {
                for s in &stuck {
                    st.notes.push(format!("stuck: {s} has no witness"));
                }
            }
        }
        self.finals.push(FinalState {
            state: st.state,
            initial_state: st.initial_state,
            rounds: st.rounds,
            truncated: st.truncated,
            exempted: st.exempted,
            notes: st.notes,
        });
    }

    fn step(&mut self, st: &mut RunState) -> Result<Outcome, EngineError> {
        loop {
            // cascade unconditional activations
            while let Some((n, b)) = st.queue.pop_front() {
                if st.fired.contains(&(n, b.clone())) {
                    continue;
                }
                match &self.th.nodes[n].kind {
                    FlatKind::Atom(pat) => {
                        let assignment: Assignment =
                            b.iter().cloned().collect();
                        let atom = eval_atom_pattern(pat, st.state.constants(), &assignment)?;
                        if let Some(bad) = atom.args.iter().find(|a| !st.state.domain().contains(a)) {
                            return Ok(Outcome::Dead(format!(
                                "caused atom `{atom}` mentions `{bad}` outside the domain"
                            )));
                        }
                        if let RunKind::Check { candidate } = self.kind {
                            if !candidate.holds(&atom) {
                                return Ok(Outcome::Dead(format!(
                                    "caused atom `{atom}` is not in the candidate"
                                )));
                            }
                        }
                        if st.assumptions.get(&atom) == Some(&false) {
                            return Ok(Outcome::Dead(format!(
                                "caused atom `{atom}` was assumed false"
                            )));
                        }
                        st.fired.insert((n, b.clone()));
                        st.round_fired.push(event(self.th, n, b));
                        if !st.state.holds(&atom) {
                            st.state.insert_fact(atom.clone()).expect("validated args");
                            st.round_delta_atoms.insert(atom);
                        }
                    }
                    FlatKind::And(l, r) => {
                        st.fired.insert((n, b.clone()));
                        st.queue.push_back((*l, b.clone()));
                        st.queue.push_back((*r, b));
                    }
                    FlatKind::Or(l, r) => {
                        return Ok(Outcome::Decision(Decision::Or {
                            inst: (n, b),
                            left: *l,
                            right: *r,
                        }));
                    }
                    FlatKind::New { var, body } => {
                        if st.created_count >= self.opts.budget {
                            if self.opts.truncation {
                                st.truncated = true;
                                st.exempted.push(event(self.th, n, b));
                                continue;
                            }
                            return Ok(Outcome::Dead(format!(
                                "creation budget {} exhausted at {}",
                                self.opts.budget,
                                event(self.th, n, b)
                            )));
                        }
                        match self.kind {
                            RunKind::Check { candidate } => {
                                let options: Vec<Element> = candidate
                                    .created()
                                    .iter()
                                    .filter(|e| !st.state.domain().contains(*e))
                                    .cloned()
                                    .collect();
                                if options.is_empty() {
                                    return Ok(Outcome::Dead(format!(
                                        "no created element left for {}",
                                        event(self.th, n, b)
                                    )));
                                }
                                return Ok(Outcome::Decision(Decision::New {
                                    inst: (n, b),
                                    var: var.clone(),
                                    body: *body,
                                    options,
                                }));
                            }
                            _ => {
                                let e = st.state.fresh_element(st.created_count);
                                let (var, body) = (var.clone(), *body);
                                fire_new(st, self.th, &(n, b), &var, body, e);
                            }
                        }
                    }
                    FlatKind::Rule { .. } | FlatKind::All { .. } | FlatKind::Sel { .. } => {
                        st.pending.insert((n, b));
                    }
                }
            }

            if st.snapshot.is_none() {
                st.snapshot = Some(st.state.clone());
            }
            let snapshot = st.snapshot.clone().expect("just set");

            // evaluate conditional instances against the round-start state
            let mut fire_rules: Vec<(usize, Binding, usize)> = Vec::new();
            let mut fire_alls: Vec<(usize, Binding, String, usize, Element)> = Vec::new();
            let mut sel_decision: Option<Decision> = None;
            let pend: Vec<(usize, Binding)> = st.pending.iter().cloned().collect();
            for (n, b) in pend {
                match &self.th.nodes[n].kind {
                    FlatKind::Rule { head, body } => {
                        match self.eval_cond(st, &snapshot, body, &b, None)? {
                            Cond::NeedGuess(atom) => {
                                return Ok(Outcome::Decision(Decision::Guess { atom }))
                            }
                            Cond::Known(true) => fire_rules.push((n, b.clone(), *head)),
                            Cond::Known(false) => {}
                        }
                    }
                    FlatKind::All { var, qual, body } => {
                        for d in snapshot.domain().iter().cloned().collect::<Vec<_>>() {
                            if st.all_done.contains(&(n, b.clone(), d.clone())) {
                                continue;
                            }
                            match self.eval_cond(st, &snapshot, qual, &b, Some((var, d.clone())))? {
                                Cond::NeedGuess(atom) => {
                                    return Ok(Outcome::Decision(Decision::Guess { atom }))
                                }
                                Cond::Known(true) => {
                                    fire_alls.push((n, b.clone(), var.clone(), *body, d))
                                }
                                Cond::Known(false) => {}
                            }
                        }
                    }
                    FlatKind::Sel { var, qual, body } => {
                        if sel_decision.is_some() {
                            continue;
                        }
                        let mut options = Vec::new();
                        for d in snapshot.domain().iter().cloned().collect::<Vec<_>>() {
                            if st
                                .sel_offered
                                .get(&(n, b.clone()))
                                .map(|s| s.contains(&d))
                                .unwrap_or(false)
                            {
                                continue;
                            }
                            match self.eval_cond(st, &snapshot, qual, &b, Some((var, d.clone())))? {
                                Cond::NeedGuess(atom) => {
                                    return Ok(Outcome::Decision(Decision::Guess { atom }))
                                }
                                Cond::Known(true) => options.push(d),
                                Cond::Known(false) => {}
                            }
                        }
                        if !options.is_empty() {
                            sel_decision = Some(Decision::Sel {
                                inst: (n, b),
                                var: var.clone(),
                                body: *body,
                                options,
                            });
                        }
                    }
                    _ => unreachable!("only conditional nodes pend"),
                }
            }

            if !fire_rules.is_empty() || !fire_alls.is_empty() {
                for (n, b, head) in fire_rules {
                    st.pending.remove(&(n, b.clone()));
                    st.fired.insert((n, b.clone()));
                    st.round_fired.push(event(self.th, n, b.clone()));
                    st.queue.push_back((head, b));
                }
                for (n, b, var, body, d) in fire_alls {
                    st.all_done.insert((n, b.clone(), d.clone()));
                    let mut nb = b.clone();
                    nb.push((var, d));
                    st.round_fired.push(event(self.th, n, nb.clone()));
                    st.queue.push_back((body, nb));
                }
                continue;
            }
            if let Some(d) = sel_decision {
                return Ok(Outcome::Decision(d));
            }

            // round end
            if st.round_fired.is_empty()
                && st.round_delta_atoms.is_empty()
                && st.round_delta_created.is_empty()
            {
                return Ok(Outcome::Quiescent);
            }
            st.rounds.push(TraceRound {
                state: st.state.clone(),
                fired: std::mem::take(&mut st.round_fired),
                delta_atoms: std::mem::take(&mut st.round_delta_atoms),
                delta_created: std::mem::take(&mut st.round_delta_created),
            });
            st.snapshot = None;
        }
    }

    fn eval_cond(
        &self,
        st: &mut RunState,
        snapshot: &Structure,
        f: &Formula,
        binding: &Binding,
        extra: Option<(&str, Element)>,
    ) -> Result<Cond, EngineError> {
        let mut assignment: Assignment = binding.iter().cloned().collect();
        if let Some((v, e)) = &extra {
            assignment.bind(v.to_string(), e.clone());
        }
        let candidate = match self.kind {
            RunKind::Check { candidate } => Some(candidate),
            _ => None,
        };
        let assumptions = matches!(self.kind, RunKind::Enumerate).then_some(&st.assumptions);
        let mut oracle = CondOracle {
            snapshot,
            endo: &self.th.endo,
            candidate,
            assumptions,
        };
        let r = eval_formula_with(
            f,
            snapshot.domain(),
            snapshot.constants(),
            &mut assignment.clone(),
            true,
            &mut oracle,
        );
        let value = match r {
            Ok(v) => v,
            Err(CondError::NeedGuess(atom)) => return Ok(Cond::NeedGuess(atom)),
            Err(CondError::Eval(e)) => return Err(EngineError::Eval(e)),
        };
        // With object creation the intermediate and final quantifier domains
        // can disagree; report such divergences in the trace.
        if let Some(c) = candidate {
            if c.domain() != snapshot.domain() {
                let mut oracle2 = CondOracle {
                    snapshot,
                    endo: &self.th.endo,
                    candidate,
                    assumptions: None,
                };
                if let Ok(v2) = eval_formula_with(
                    f,
                    c.domain(),
                    snapshot.constants(),
                    &mut assignment.clone(),
                    true,
                    &mut oracle2,
                ) {
                    if v2 != value {
                        st.notes.push(format!(
                            "domain divergence: `{}` is {} over the intermediate domain but {} over the candidate domain",
                            render_formula(f), value, v2
                        ));
                    }
                }
            }
        }
        Ok(Cond::Known(value))
    }
}

enum Cond {
    Known(bool),
    NeedGuess(Atom),
}

fn event(th: &FlatTheory, node: usize, binding: Binding) -> EventInstance {
    EventInstance {
        node,
        label: th.label(node).to_string(),
        binding,
    }
}

fn fire_or(st: &mut RunState, th: &FlatTheory, inst: &(usize, Binding), child: usize) {
    st.fired.insert(inst.clone());
    st.round_fired.push(event(th, inst.0, inst.1.clone()));
    st.queue.push_back((child, inst.1.clone()));
}

fn fire_sel(
    st: &mut RunState,
    th: &FlatTheory,
    inst: &(usize, Binding),
    var: &str,
    body: usize,
    witness: Element,
) {
    st.pending.remove(inst);
    st.fired.insert(inst.clone());
    let mut nb = inst.1.clone();
    nb.push((var.to_string(), witness));
    st.round_fired.push(event(th, inst.0, nb.clone()));
    st.queue.push_back((body, nb));
}

fn fire_new(
    st: &mut RunState,
    th: &FlatTheory,
    inst: &(usize, Binding),
    var: &str,
    body: usize,
    element: Element,
) {
    st.fired.insert(inst.clone());
    st.state.add_created(element.clone());
    st.created_count += 1;
    st.round_delta_created.push(element.clone());
    let mut nb = inst.1.clone();
    nb.push((var.to_string(), element));
    st.round_fired.push(event(th, inst.0, nb.clone()));
    st.queue.push_back((body, nb));
}
