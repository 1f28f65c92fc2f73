//! Translations and static analyzers connecting the three semantics: the
//! E-disjunctive-to-causal translation, the first-order weakening of a
//! creation-free causal theory, the non-overlapping and
//! recursion-over-negation analyzers, and the comparator that tests the
//! three inclusion/equality expectations against brute-force model sets.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::edlp::{self, EdlpError};
use crate::engine::{check_model, EngineError, EngineOptions};
use crate::logic::{
    assignments_over, eval_atom_pattern, evaluate_formula, Assignment, Atom, Element, Formula,
    Structure,
};
use crate::surface::{CausalTheory, Cee, EDisjProgram, FoClogTheory};

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("the theory contains a New expression; the weakening is defined for creation-free theories only")]
    NotCreationFree,
    #[error(transparent)]
    Edlp(#[from] EdlpError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Eval(#[from] crate::logic::EvalError),
}

/// Translates an E-disjunctive program into the corresponding combined
/// theory: each rule with a nonempty head becomes
/// `All x̄ [body] : Sel ȳ [true] : (α1 Or … Or αm)`, constraints become
/// negated sentences, and predicates never occurring in any head get closure
/// sentences forcing them false.
pub fn translate_to_foclog(p: &EDisjProgram) -> FoClogTheory {
    let mut cees = Vec::new();
    let mut sentences = Vec::new();
    for rule in &p.rules {
        let body = body_formula(&rule.pos, &rule.neg);
        if rule.is_constraint() {
            let mut sentence = Formula::not(body);
            for v in rule.universal.iter().rev() {
                sentence = Formula::forall(v.clone(), Formula::True, sentence);
            }
            sentences.push(sentence);
            continue;
        }
        let mut expr = rule
            .head
            .iter()
            .rev()
            .cloned()
            .map(Cee::Atom)
            .reduce(|acc, a| Cee::or(a, acc))
            .expect("nonempty head");
        for y in rule.existential.iter().rev() {
            expr = Cee::sel(y.clone(), Formula::True, expr);
        }
        if rule.universal.is_empty() {
            if body != Formula::True {
                expr = Cee::rule(expr, body);
            }
        } else {
            for (i, x) in rule.universal.iter().enumerate().rev() {
                let qual = if i == rule.universal.len() - 1 {
                    body.clone()
                } else {
                    Formula::True
                };
                expr = Cee::all(x.clone(), qual, expr);
            }
        }
        cees.push(expr);
    }
    let heads = p.head_predicates();
    let vocab = p.vocabulary().unwrap_or_default();
    for (pred, &arity) in &vocab.predicates {
        if heads.contains(pred) {
            continue;
        }
        let vars: Vec<String> = (0..arity).map(|i| format!("X{i}")).collect();
        let mut sentence = Formula::not(Formula::atom(
            pred.clone(),
            vars.iter().map(|v| crate::logic::Term::var(v.clone())).collect(),
        ));
        for v in vars.iter().rev() {
            sentence = Formula::forall(v.clone(), Formula::True, sentence);
        }
        sentences.push(sentence);
    }
    FoClogTheory {
        causal: CausalTheory::fold(cees),
        sentences,
    }
}

fn body_formula(pos: &[crate::logic::AtomPattern], neg: &[crate::logic::AtomPattern]) -> Formula {
    let mut parts: Vec<Formula> = pos.iter().cloned().map(Formula::Atom).collect();
    parts.extend(neg.iter().cloned().map(|a| Formula::not(Formula::Atom(a))));
    parts
        .into_iter()
        .reduce(Formula::and)
        .unwrap_or(Formula::True)
}

/// The first-order weakening of a creation-free causal theory: `All` becomes
/// universal quantification, `Sel` existential, `Or` disjunction, `And`
/// conjunction, and rules reversed implications.
pub fn fo_weakening(theory: &CausalTheory) -> Result<Formula, BridgeError> {
    if theory.contains_new() {
        return Err(BridgeError::NotCreationFree);
    }
    fn weaken(c: &Cee) -> Formula {
        match c {
            Cee::Atom(a) => Formula::Atom(a.clone()),
            Cee::Rule { head, body } => Formula::implies(body.clone(), weaken(head)),
            Cee::And(a, b) => Formula::and(weaken(a), weaken(b)),
            Cee::Or(a, b) => Formula::or(weaken(a), weaken(b)),
            Cee::All { var, qual, body } => Formula::forall(var.clone(), qual.clone(), weaken(body)),
            Cee::Sel { var, qual, body } => Formula::exists(var.clone(), qual.clone(), weaken(body)),
            Cee::New { .. } => unreachable!("checked creation-free"),
        }
    }
    Ok(theory.root.as_ref().map(weaken).unwrap_or(Formula::True))
}

/// A witness that a domain atom occurs in a rule head: `head[i]` under `eta`
/// equals the atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceWitness {
    pub rule: usize,
    pub head_index: usize,
    pub assignment: Vec<(String, Element)>,
    pub atom: Atom,
}

impl OccurrenceWitness {
    /// Re-derives the occurrence from the program; used by tests to confirm
    /// reported witnesses.
    pub fn verify(&self, p: &EDisjProgram, domain: &BTreeSet<Element>) -> bool {
        let Some(rule) = p.rules.get(self.rule) else {
            return false;
        };
        let Some(pat) = rule.head.get(self.head_index) else {
            return false;
        };
        let consts: BTreeMap<String, Element> = p
            .vocabulary()
            .map(|v| v.constants)
            .unwrap_or_default()
            .into_iter()
            .map(|c| (c.clone(), Element::Name(c)))
            .collect();
        let a: Assignment = self.assignment.iter().cloned().collect();
        if !self
            .assignment
            .iter()
            .all(|(_, e)| domain.contains(e))
        {
            return false;
        }
        eval_atom_pattern(pat, &consts, &a)
            .map(|ground| ground == self.atom)
            .unwrap_or(false)
    }
}

impl std::fmt::Display for OccurrenceWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} occurs in rule {} at head position {}",
            self.atom, self.rule, self.head_index
        )
    }
}

/// Static analysis of a program over a finite domain.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub non_overlapping: bool,
    pub violation: Option<(OccurrenceWitness, OccurrenceWitness)>,
    pub neg_recursion: bool,
    pub cycle: Option<Vec<String>>,
    pub head_predicates: BTreeSet<String>,
    pub never_in_head: BTreeSet<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "non_overlapping": self.non_overlapping,
            "violation": self.violation.as_ref().map(|(a, b)| {
                serde_json::json!([a.to_string(), b.to_string()])
            }),
            "neg_recursion": self.neg_recursion,
            "cycle": self.cycle,
            "head_predicates": self.head_predicates,
            "never_in_head": self.never_in_head,
        })
    }
}

/// Dependency edges of a program: head predicates depend on body predicates,
/// negatively for atoms under `not`.
fn dependency_edges(p: &EDisjProgram) -> Vec<(String, String, bool)> {
    let mut edges = Vec::new();
    for rule in &p.rules {
        for h in &rule.head {
            for b in &rule.pos {
                edges.push((h.pred.clone(), b.pred.clone(), true));
            }
            for g in &rule.neg {
                edges.push((h.pred.clone(), g.pred.clone(), false));
            }
        }
    }
    edges
}

/// A negative-edge cycle in the predicate dependency graph, if any. The
/// returned list is the cycle in edge order; the last node has an edge back
/// to the first.
pub fn negative_cycle(p: &EDisjProgram) -> Option<Vec<String>> {
    let edges = dependency_edges(p);
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (u, v, _) in &edges {
        adj.entry(u).or_default().push(v);
    }
    for (u, v, positive) in &edges {
        if *positive {
            continue;
        }
        // a path v ~> u closes the cycle u -(not)-> v ~> u
        let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(v.as_str());
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        seen.insert(v.as_str());
        while let Some(n) = queue.pop_front() {
            if n == u {
                // walk back from u to v, then emit the cycle starting at u
                let mut back = vec![u.to_string()];
                let mut cur = n;
                while cur != v.as_str() {
                    cur = prev[cur];
                    back.push(cur.to_string());
                }
                back.reverse(); // [v, ..., u]
                back.pop();
                let mut cycle = vec![u.clone()];
                cycle.extend(back);
                return Some(cycle);
            }
            for next in adj.get(n).into_iter().flatten() {
                if seen.insert(next) {
                    prev.insert(next, n);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// Computes the non-overlapping and recursion-over-negation analyses.
pub fn analyze(p: &EDisjProgram, domain: &BTreeSet<Element>) -> Result<AnalysisReport, BridgeError> {
    let domain = edlp::program_domain(p, domain);
    let consts: BTreeMap<String, Element> = p
        .vocabulary()?
        .constants
        .into_iter()
        .map(|c| (c.clone(), Element::Name(c)))
        .collect();

    let mut occurrences: BTreeMap<Atom, Vec<OccurrenceWitness>> = BTreeMap::new();
    for (ri, rule) in p.rules.iter().enumerate() {
        let mut vars: Vec<String> = rule.universal.clone();
        vars.extend(rule.existential.iter().cloned());
        for eta in assignments_over(&vars, &domain) {
            for (i, pat) in rule.head.iter().enumerate() {
                let atom = eval_atom_pattern(pat, &consts, &eta)?;
                occurrences.entry(atom.clone()).or_default().push(OccurrenceWitness {
                    rule: ri,
                    head_index: i,
                    assignment: eta.iter().map(|(v, e)| (v.clone(), e.clone())).collect(),
                    atom,
                });
            }
        }
    }

    let mut violation = None;
    for witnesses in occurrences.values() {
        let in_disjunctive = witnesses
            .iter()
            .any(|w| p.rules[w.rule].is_disjunctive());
        if !in_disjunctive || witnesses.len() <= 1 {
            continue;
        }
        let first = witnesses
            .iter()
            .find(|w| p.rules[w.rule].is_disjunctive())
            .expect("some witness is disjunctive");
        let second = witnesses.iter().find(|w| *w != first).expect("len > 1");
        violation = Some((first.clone(), second.clone()));
        break;
    }

    let cycle = negative_cycle(p);
    let vocab = p.vocabulary()?;
    let head_predicates = p.head_predicates();
    let never_in_head: BTreeSet<String> = vocab
        .predicates
        .keys()
        .filter(|pr| !head_predicates.contains(*pr))
        .cloned()
        .collect();
    Ok(AnalysisReport {
        non_overlapping: violation.is_none(),
        violation,
        neg_recursion: cycle.is_some(),
        cycle,
        head_predicates,
        never_in_head,
    })
}

/// Model sets of the three semantics plus the relations and theorem
/// expectations computed from them.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub analysis: AnalysisReport,
    pub stable: Vec<BTreeSet<Atom>>,
    pub foclog: Vec<BTreeSet<Atom>>,
    pub fo_weak: Vec<BTreeSet<Atom>>,
    pub stable_subset_foclog: bool,
    pub foclog_subset_weak: bool,
    pub stable_equals_foclog: bool,
    /// (name, expected-to-hold, holds, counterexamples)
    pub expectations: Vec<Expectation>,
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct Expectation {
    pub name: String,
    pub expected: bool,
    pub holds: bool,
    pub counterexamples: Vec<BTreeSet<Atom>>,
}

impl ComparisonReport {
    /// True when no expected relation is violated.
    pub fn ok(&self) -> bool {
        self.expectations.iter().all(|e| !e.expected || e.holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fmt_sets = |sets: &Vec<BTreeSet<Atom>>| -> Vec<Vec<String>> {
            sets.iter()
                .map(|s| s.iter().map(|a| a.to_string()).collect())
                .collect()
        };
        serde_json::json!({
            "analysis": self.analysis.to_json(),
            "stable": fmt_sets(&self.stable),
            "foclog": fmt_sets(&self.foclog),
            "fo_weak": fmt_sets(&self.fo_weak),
            "relations": {
                "stable_subset_foclog": self.stable_subset_foclog,
                "foclog_subset_fo_weak": self.foclog_subset_weak,
                "stable_equals_foclog": self.stable_equals_foclog,
            },
            "expectations": self.expectations.iter().map(|e| serde_json::json!({
                "name": e.name,
                "expected": e.expected,
                "holds": e.holds,
                "counterexamples": fmt_sets(&e.counterexamples),
            })).collect::<Vec<_>>(),
            "budget": self.budget,
        })
    }
}

/// Every structure over the program's domain atoms, as true-atom sets.
pub fn atom_lattice(p: &EDisjProgram, domain: &BTreeSet<Element>) -> Result<Vec<Structure>, BridgeError> {
    let models = all_structures(p, domain)?;
    Ok(models)
}

fn all_structures(p: &EDisjProgram, domain: &BTreeSet<Element>) -> Result<Vec<Structure>, BridgeError> {
    let vocab = p.vocabulary()?;
    let mut atoms: Vec<Atom> = Vec::new();
    for (pred, &arity) in &vocab.predicates {
        let vars: Vec<String> = (0..arity).map(|i| format!("X{i}")).collect();
        for a in assignments_over(&vars, domain) {
            let args: Vec<Element> = vars.iter().map(|v| a.get(v).unwrap().clone()).collect();
            atoms.push(Atom::new(pred.clone(), args));
        }
    }
    let n = atoms.len();
    if n > edlp::MAX_DOMAIN_ATOMS {
        return Err(BridgeError::Edlp(EdlpError::TooManyAtoms(
            n,
            edlp::MAX_DOMAIN_ATOMS,
        )));
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let mut s = Structure::new();
        for e in domain {
            s.add_initial(e.clone());
        }
        for (pred, &arity) in &vocab.predicates {
            s.declare_predicate(pred.clone(), arity);
        }
        for c in &vocab.constants {
            let e = Element::Name(c.clone());
            if domain.contains(&e) {
                let _ = s.set_constant(c.clone(), e);
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.insert_fact(a.clone()).expect("domain atoms");
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Computes the stable, combined-theory, and weakened-theory model sets of a
/// program over a domain and evaluates the three theorem expectations:
/// equality when the program is non-overlapping without recursion over
/// negation, stable ⊆ combined whenever there is no recursion over negation,
/// and combined ⊆ weakened always.
pub fn compare_semantics(
    p: &EDisjProgram,
    domain: &BTreeSet<Element>,
    opts: &EngineOptions,
) -> Result<ComparisonReport, BridgeError> {
    let domain = edlp::program_domain(p, domain);
    let analysis = analyze(p, &domain)?;
    let stable: Vec<BTreeSet<Atom>> = edlp::stable_models(p, &domain)?
        .into_iter()
        .map(|s| s.true_atoms().into_iter().collect())
        .collect();

    let tp = translate_to_foclog(p);
    let weak_formula = fo_weakening(&tp.causal)?;

    let mut foclog: Vec<BTreeSet<Atom>> = Vec::new();
    let mut fo_weak: Vec<BTreeSet<Atom>> = Vec::new();
    for candidate in all_structures(p, &domain)? {
        let atoms: BTreeSet<Atom> = candidate.true_atoms().into_iter().collect();
        let sentences_hold = tp
            .sentences
            .iter()
            .map(|s| evaluate_formula(s, &candidate, &Assignment::new()))
            .collect::<Result<Vec<bool>, _>>()?
            .into_iter()
            .all(|b| b);
        if sentences_hold && evaluate_formula(&weak_formula, &candidate, &Assignment::new())? {
            fo_weak.push(atoms.clone());
        }
        if check_model(&tp, &candidate, opts)?.is_accepted() {
            foclog.push(atoms);
        }
    }

    let as_set = |v: &Vec<BTreeSet<Atom>>| -> BTreeSet<BTreeSet<Atom>> { v.iter().cloned().collect() };
    let stable_set = as_set(&stable);
    let foclog_set = as_set(&foclog);
    let weak_set = as_set(&fo_weak);

    let stable_subset_foclog = stable_set.is_subset(&foclog_set);
    let foclog_subset_weak = foclog_set.is_subset(&weak_set);
    let stable_equals_foclog = stable_set == foclog_set;

    let cx = |from: &BTreeSet<BTreeSet<Atom>>, into: &BTreeSet<BTreeSet<Atom>>| -> Vec<BTreeSet<Atom>> {
        from.difference(into).take(3).cloned().collect()
    };
    let mut eq_cx = cx(&stable_set, &foclog_set);
    eq_cx.extend(cx(&foclog_set, &stable_set));
    eq_cx.truncate(3);

    let expectations = vec![
        Expectation {
            name: "foclog_subset_fo_weak".into(),
            expected: true,
            holds: foclog_subset_weak,
            counterexamples: cx(&foclog_set, &weak_set),
        },
        Expectation {
            name: "stable_subset_foclog".into(),
            expected: !analysis.neg_recursion,
            holds: stable_subset_foclog,
            counterexamples: cx(&stable_set, &foclog_set),
        },
        Expectation {
            name: "stable_equals_foclog".into(),
            expected: analysis.non_overlapping && !analysis.neg_recursion,
            holds: stable_equals_foclog,
            counterexamples: eq_cx,
        },
    ];

    Ok(ComparisonReport {
        analysis,
        stable,
        foclog,
        fo_weak,
        stable_subset_foclog,
        foclog_subset_weak,
        stable_equals_foclog,
        expectations,
        budget: opts.budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::EngineOptions;
    use crate::surface::{parse_clog, parse_edlp, render_foclog, render_formula};

    fn named_domain(names: &[&str]) -> BTreeSet<Element> {
        names.iter().map(|n| Element::name(*n)).collect()
    }

    #[test]
    fn a_bare_disjunction_translates_to_or() {
        let p = parse_edlp("p ; q.").unwrap();
        let t = translate_to_foclog(&p);
        let rendered = render_foclog(&t);
        assert!(rendered.contains("p Or q"), "{rendered}");
        // only closure sentences in the FO part, and none here
        assert!(t.sentences.is_empty());
    }

    #[test]
    fn a_constraint_translates_to_a_negated_sentence() {
        let p = parse_edlp(":- not q.").unwrap();
        let t = translate_to_foclog(&p);
        assert!(t.causal.root.is_none());
        // the constraint sentence plus the closure sentence for q
        assert_eq!(t.sentences.len(), 2);
        assert_eq!(render_formula(&t.sentences[0]), "~~q");
    }

    #[test]
    fn never_in_head_predicates_get_closure_sentences() {
        let p = parse_edlp("r :- s.").unwrap();
        let t = translate_to_foclog(&p);
        let rendered: Vec<String> = t.sentences.iter().map(render_formula).collect();
        assert_eq!(rendered, vec!["~s".to_string()]);
    }

    #[test]
    fn weakening_substitutes_the_connectives() {
        let t = parse_clog("P Or Q.").unwrap();
        assert_eq!(render_formula(&fo_weakening(&t).unwrap()), "P | Q");

        let atom = parse_clog("P.").unwrap();
        assert_eq!(render_formula(&fo_weakening(&atom).unwrap()), "P");

        let oven = parse_clog(
            "All b : Block(b) -> Sel t : true -> In(b, t) And Out(b, t + D).",
        )
        .unwrap();
        assert_eq!(
            render_formula(&fo_weakening(&oven).unwrap()),
            "!b [Block(b)] : ?t : In(b, t) & Out(b, t + D)"
        );
    }

    #[test]
    fn weakening_requires_creation_freedom() {
        let t = parse_clog("New x -> Q(x).").unwrap();
        assert!(matches!(
            fo_weakening(&t),
            Err(BridgeError::NotCreationFree)
        ));
    }

    #[test]
    fn the_overlapping_program_is_flagged_with_a_witness() {
        let p = parse_edlp("p. p ; q.").unwrap();
        let report = analyze(&p, &named_domain(&["a"])).unwrap();
        assert!(!report.non_overlapping);
        let (w1, w2) = report.violation.as_ref().unwrap();
        assert!(w1.verify(&p, &named_domain(&["a"])));
        assert!(w2.verify(&p, &named_domain(&["a"])));
        assert!(p.rules[w1.rule].is_disjunctive());
        assert!(!report.neg_recursion);
    }

    #[test]
    fn the_negation_pair_is_flagged_as_recursion() {
        let p = parse_edlp("p :- not p2. p2 :- not p.").unwrap();
        let report = analyze(&p, &named_domain(&["a"])).unwrap();
        assert!(report.neg_recursion);
        assert_eq!(report.cycle, Some(vec!["p".to_string(), "p2".to_string()]));
        assert!(report.non_overlapping);
    }

    #[test]
    fn the_empty_program_is_clean() {
        let p = EDisjProgram { rules: vec![] };
        let report = analyze(&p, &named_domain(&["a"])).unwrap();
        assert!(report.non_overlapping);
        assert!(!report.neg_recursion);
        assert!(report.head_predicates.is_empty());
    }

    #[test]
    fn comparison_of_the_overlapping_program() {
        let p = parse_edlp("p. p ; q.").unwrap();
        let report =
            compare_semantics(&p, &named_domain(&["a"]), &EngineOptions::with_budget(0)).unwrap();
        let fmt = |sets: &Vec<BTreeSet<Atom>>| -> Vec<Vec<String>> {
            sets.iter()
                .map(|s| s.iter().map(|a| a.to_string()).collect())
                .collect()
        };
        assert_eq!(fmt(&report.stable), vec![vec!["p".to_string()]]);
        assert_eq!(
            fmt(&report.foclog),
            vec![vec!["p".to_string()], vec!["p".to_string(), "q".to_string()]]
        );
        assert!(report.stable_subset_foclog);
        assert!(!report.stable_equals_foclog);
        // equality is not expected for an overlapping program
        assert!(report.ok());
    }

    #[test]
    fn comparison_of_a_non_overlapping_program_is_an_equality() {
        let p = parse_edlp("p ; q. r :- p.").unwrap();
        let report =
            compare_semantics(&p, &named_domain(&["a"]), &EngineOptions::with_budget(0)).unwrap();
        assert!(report.analysis.non_overlapping);
        assert!(!report.analysis.neg_recursion);
        assert!(report.stable_equals_foclog, "{:?}", report.to_json());
        assert!(report.ok());
    }

    #[test]
    fn comparison_of_the_lottery_program() {
        let p = parse_edlp(
            "lottery. passtest(a). permres(X) :- lottery. permres(X) :- passtest(X).",
        )
        .unwrap();
        let report =
            compare_semantics(&p, &named_domain(&["a", "b"]), &EngineOptions::with_budget(0))
                .unwrap();
        assert_eq!(report.stable.len(), 1);
        assert_eq!(report.foclog.len(), 2);
        assert!(report.stable_subset_foclog);
        assert!(!report.stable_equals_foclog);
        assert!(report.ok());
        let with_b: Vec<&BTreeSet<Atom>> = report
            .foclog
            .iter()
            .filter(|s| s.iter().any(|a| a.to_string() == "permres(b)"))
            .collect();
        assert_eq!(with_b.len(), 1);
    }

    #[test]
    fn opened_pair_and_free_disjunction_agree_on_fresh_predicates() {
        // in programs where the pair predicates occur in no other head, the
        // two-rule negation pattern and the free disjunction have the same
        // stable models
        let base = "q :- p.";
        let with_pair = format!("{base} p :- not p2. p2 :- not p.");
        let with_disj = format!("{base} p ; p2.");
        let a = crate::edlp::stable_models(&parse_edlp(&with_pair).unwrap(), &named_domain(&["a"]))
            .unwrap();
        let b = crate::edlp::stable_models(&parse_edlp(&with_disj).unwrap(), &named_domain(&["a"]))
            .unwrap();
        let fmt = |ms: Vec<Structure>| -> Vec<Vec<String>> {
            ms.iter()
                .map(|m| m.true_atoms().iter().map(|x| x.to_string()).collect())
                .collect()
        };
        assert_eq!(fmt(a), fmt(b));
    }
}
