//! Grounding and brute-force stable-model computation for E-disjunctive
//! programs. This module is the trusted oracle side of the semantics
//! comparisons, so the algorithms are deliberately the naive ones:
//! assignments are enumerated outright and minimality is checked by walking
//! the subset lattice.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::logic::{
    assignments_over, eval_atom_pattern, Assignment, Atom, Element, EvalError, Structure,
};
use crate::surface::EDisjProgram;

#[derive(Debug, Error)]
pub enum EdlpError {
    #[error("empty domain with a nonempty program: no assignments exist")]
    EmptyDomain,
    #[error("{0} domain atoms exceed the 2^N enumeration guard of N <= {1}")]
    TooManyAtoms(usize, usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The guard on brute-force subset enumeration.
pub const MAX_DOMAIN_ATOMS: usize = 24;

/// A signed ground atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// A consistent set of signed ground atoms.
pub type LiteralSet = BTreeSet<Literal>;

/// One rule instantiated by an assignment of its universal variables. The
/// head keeps its existential variables until the theta step: it is the set
/// of all their instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundRule {
    pub source_rule: usize,
    pub assignment: Vec<(String, Element)>,
    pub head_instances: BTreeSet<Atom>,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
}

impl GroundRule {
    pub fn is_constraint(&self) -> bool {
        self.head_instances.is_empty()
    }
}

fn constant_map(p: &EDisjProgram, domain: &BTreeSet<Element>) -> BTreeMap<String, Element> {
    // constants denote like-named elements; stable_models extends the domain
    // with them before grounding
    let mut out = BTreeMap::new();
    for c in p.vocabulary().map(|v| v.constants).unwrap_or_default() {
        let e = Element::Name(c.clone());
        if domain.contains(&e) {
            out.insert(c, e);
        }
    }
    out
}

/// Grounds a program over a finite domain: one [`GroundRule`] per rule and
/// assignment of its universal variables.
pub fn ground_program(
    p: &EDisjProgram,
    domain: &BTreeSet<Element>,
) -> Result<Vec<GroundRule>, EdlpError> {
    if domain.is_empty() && !p.rules.is_empty() {
        return Err(EdlpError::EmptyDomain);
    }
    let consts = constant_map(p, domain);
    let mut out = Vec::new();
    for (ri, rule) in p.rules.iter().enumerate() {
        for eta in assignments_over(&rule.universal, domain) {
            let ground_all = |atoms: &[crate::logic::AtomPattern],
                              a: &Assignment|
             -> Result<Vec<Atom>, EdlpError> {
                atoms
                    .iter()
                    .map(|pat| eval_atom_pattern(pat, &consts, a).map_err(EdlpError::from))
                    .collect()
            };
            let pos = ground_all(&rule.pos, &eta)?;
            let neg = ground_all(&rule.neg, &eta)?;
            let mut head_instances = BTreeSet::new();
            for theta in assignments_over(&rule.existential, domain) {
                let mut full = eta.clone();
                for (v, e) in theta.iter() {
                    full.bind(v.clone(), e.clone());
                }
                for pat in &rule.head {
                    head_instances.insert(eval_atom_pattern(pat, &consts, &full)?);
                }
            }
            out.push(GroundRule {
                source_rule: ri,
                assignment: eta.iter().map(|(v, e)| (v.clone(), e.clone())).collect(),
                head_instances,
                pos,
                neg,
            });
        }
    }
    Ok(out)
}

/// The literal set of all negated false domain atoms of a structure.
pub fn minus_set(m: &Structure) -> LiteralSet {
    let mut out = LiteralSet::new();
    for (pred, table) in m.tables() {
        for tuple in all_tuples(m.domain(), table.arity) {
            let atom = Atom::new(pred.clone(), tuple);
            if !m.holds(&atom) {
                out.insert(Literal {
                    positive: false,
                    atom,
                });
            }
        }
    }
    out
}

fn all_tuples(domain: &BTreeSet<Element>, arity: usize) -> Vec<Vec<Element>> {
    let elems: Vec<Element> = domain.iter().cloned().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for t in &out {
            for e in &elems {
                let mut t = t.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The closure condition on a set of atoms: whenever a ground rule's body is
/// entailed (positive atoms inside `x`, negated atoms outside it), some head
/// instance is inside `x`; an entailed constraint body refutes `x`.
fn closed(ground: &[GroundRule], x: &BTreeSet<Atom>) -> bool {
    for gr in ground {
        let body_holds =
            gr.pos.iter().all(|a| x.contains(a)) && gr.neg.iter().all(|a| !x.contains(a));
        if !body_holds {
            continue;
        }
        if gr.is_constraint() {
            return false;
        }
        if !gr.head_instances.iter().any(|a| x.contains(a)) {
            return false;
        }
    }
    true
}

fn all_domain_atoms(p: &EDisjProgram, domain: &BTreeSet<Element>) -> Result<Vec<Atom>, EdlpError> {
    let vocab = p.vocabulary()?;
    let mut out = Vec::new();
    for (pred, &arity) in &vocab.predicates {
        for tuple in all_tuples(domain, arity) {
            out.push(Atom::new(pred.clone(), tuple));
        }
    }
    Ok(out)
}

/// True when `m` is a stable model of `p`: `m` satisfies the closure
/// condition and no proper subset of it does.
pub fn is_stable(p: &EDisjProgram, m: &Structure) -> Result<bool, EdlpError> {
    let ground = ground_program(p, m.domain())?;
    let m_atoms: BTreeSet<Atom> = m.true_atoms().into_iter().collect();
    if !closed(&ground, &m_atoms) {
        return Ok(false);
    }
    // exhaustive walk over proper subsets of m
    let atoms: Vec<Atom> = m_atoms.iter().cloned().collect();
    let n = atoms.len();
    if n > MAX_DOMAIN_ATOMS {
        return Err(EdlpError::TooManyAtoms(n, MAX_DOMAIN_ATOMS));
    }
    for mask in 0..(1u32 << n) {
        if mask == (1u32 << n) - 1 {
            continue; // m itself
        }
        let x: BTreeSet<Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        if closed(&ground, &x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the structure over `domain` whose true atoms are exactly `atoms`.
fn structure_of(
    p: &EDisjProgram,
    domain: &BTreeSet<Element>,
    atoms: &BTreeSet<Atom>,
) -> Result<Structure, EdlpError> {
    let vocab = p.vocabulary()?;
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
    for a in atoms {
        s.insert_fact(a.clone()).expect("atoms over the domain");
    }
    Ok(s)
}

/// The full domain a program runs over: the given elements plus the
/// program's own constants.
pub fn program_domain(p: &EDisjProgram, given: &BTreeSet<Element>) -> BTreeSet<Element> {
    let mut domain = given.clone();
    for c in p.vocabulary().map(|v| v.constants).unwrap_or_default() {
        domain.insert(Element::Name(c));
    }
    domain
}

/// All stable models of `p` over `domain`, in canonical order. Enumerates
/// every subset of the domain atoms, guarded by [`MAX_DOMAIN_ATOMS`].
pub fn stable_models(
    p: &EDisjProgram,
    domain: &BTreeSet<Element>,
) -> Result<Vec<Structure>, EdlpError> {
    let atoms = all_domain_atoms(p, domain)?;
    let n = atoms.len();
    if n > MAX_DOMAIN_ATOMS {
        return Err(EdlpError::TooManyAtoms(n, MAX_DOMAIN_ATOMS));
    }
    if p.rules.is_empty() && domain.is_empty() {
        return Ok(vec![Structure::new()]);
    }
    let ground = ground_program(p, domain)?;
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let m_atoms: BTreeSet<Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        if !closed(&ground, &m_atoms) {
            continue;
        }
        let mut minimal = true;
        let m_vec: Vec<Atom> = m_atoms.iter().cloned().collect();
        for sub in 0..(1u32 << m_vec.len()) {
            if sub == (1u32 << m_vec.len()) - 1 {
                continue;
            }
            let x: BTreeSet<Atom> = m_vec
                .iter()
                .enumerate()
                .filter(|(i, _)| sub & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect();
            if closed(&ground, &x) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(structure_of(p, domain, &m_atoms)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_edlp;

    fn named_domain(names: &[&str]) -> BTreeSet<Element> {
        names.iter().map(|n| Element::name(*n)).collect()
    }

    fn model_atom_sets(p: &EDisjProgram, domain: &BTreeSet<Element>) -> Vec<Vec<String>> {
        stable_models(p, domain)
            .unwrap()
            .iter()
            .map(|m| m.true_atoms().iter().map(|a| a.to_string()).collect())
            .collect()
    }

    #[test]
    fn grounding_the_two_rule_program() {
        let p = parse_edlp("p. p ; q.").unwrap();
        let ground = ground_program(&p, &named_domain(&["a"])).unwrap();
        assert_eq!(ground.len(), 2);
        assert_eq!(ground[0].head_instances.len(), 1);
        assert_eq!(ground[1].head_instances.len(), 2);
    }

    #[test]
    fn grounding_existential_head_collects_all_instances() {
        let p = parse_edlp("permres(X) :- lottery.").unwrap();
        let ground = ground_program(&p, &named_domain(&["a", "b"])).unwrap();
        assert_eq!(ground.len(), 1);
        let heads: Vec<String> = ground[0]
            .head_instances
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(heads, vec!["permres(a)", "permres(b)"]);
    }

    #[test]
    fn grounding_the_empty_program_is_empty() {
        let p = EDisjProgram { rules: vec![] };
        assert!(ground_program(&p, &named_domain(&["a"])).unwrap().is_empty());
    }

    #[test]
    fn grounding_over_an_empty_domain_is_an_error() {
        let p = parse_edlp("p.").unwrap();
        assert!(matches!(
            ground_program(&p, &BTreeSet::new()),
            Err(EdlpError::EmptyDomain)
        ));
    }

    #[test]
    fn minus_set_lists_exactly_the_false_atoms() {
        let mut m = Structure::new();
        m.declare_predicate("p", 0);
        m.declare_predicate("q", 0);
        m.insert_fact(Atom::new("p", vec![])).unwrap();
        let neg: Vec<String> = minus_set(&m).iter().map(|l| l.to_string()).collect();
        assert_eq!(neg, vec!["~q"]);

        let mut empty = Structure::new();
        empty.declare_predicate("p", 0);
        empty.declare_predicate("q", 0);
        let neg: Vec<String> = minus_set(&empty).iter().map(|l| l.to_string()).collect();
        assert_eq!(neg, vec!["~p", "~q"]);
    }

    #[test]
    fn minus_set_over_a_two_element_domain() {
        let mut m = Structure::new();
        m.add_initial(Element::name("a"));
        m.add_initial(Element::name("b"));
        m.declare_predicate("permres", 1);
        m.declare_predicate("lottery", 1);
        m.declare_predicate("passtest", 1);
        m.insert_fact(Atom::new("permres", vec![Element::name("a")]))
            .unwrap();
        // six domain atoms in total, one true
        assert_eq!(minus_set(&m).len(), 5);
    }

    #[test]
    fn stable_models_of_the_overlapping_program() {
        let p = parse_edlp("p. p ; q.").unwrap();
        let domain = named_domain(&["a"]);
        assert_eq!(model_atom_sets(&p, &domain), vec![vec!["p".to_string()]]);

        let m_pq = {
            let mut s = Structure::new();
            s.add_initial(Element::name("a"));
            s.declare_predicate("p", 0);
            s.declare_predicate("q", 0);
            s.insert_fact(Atom::new("p", vec![])).unwrap();
            s.insert_fact(Atom::new("q", vec![])).unwrap();
            s
        };
        assert!(!is_stable(&p, &m_pq).unwrap());
    }

    #[test]
    fn the_constraint_flips_the_choice() {
        let p = parse_edlp("p. p ; q. :- not q.").unwrap();
        let domain = named_domain(&["a"]);
        assert_eq!(
            model_atom_sets(&p, &domain),
            vec![vec!["p".to_string(), "q".to_string()]]
        );

        let m_p = {
            let mut s = Structure::new();
            s.add_initial(Element::name("a"));
            s.declare_predicate("p", 0);
            s.declare_predicate("q", 0);
            s.insert_fact(Atom::new("p", vec![])).unwrap();
            s
        };
        assert!(!is_stable(&p, &m_p).unwrap());
    }

    #[test]
    fn the_empty_set_is_stable_for_the_empty_program() {
        let p = EDisjProgram { rules: vec![] };
        let m = Structure::new();
        assert!(is_stable(&p, &m).unwrap());
    }

    #[test]
    fn opened_predicate_pair_has_two_models() {
        let p = parse_edlp("p :- not p2. p2 :- not p.").unwrap();
        let domain = named_domain(&["a"]);
        assert_eq!(
            model_atom_sets(&p, &domain),
            vec![vec!["p".to_string()], vec!["p2".to_string()]]
        );
    }

    #[test]
    fn lottery_program_has_one_stable_model() {
        let p = parse_edlp(
            "lottery. passtest(a). permres(X) :- lottery. permres(X) :- passtest(X).",
        )
        .unwrap();
        let domain = program_domain(&p, &named_domain(&["b"]));
        assert_eq!(
            model_atom_sets(&p, &domain),
            vec![vec![
                "lottery".to_string(),
                "passtest(a)".to_string(),
                "permres(a)".to_string()
            ]]
        );
    }

    #[test]
    fn the_atom_count_guard_refuses_large_lattices() {
        let p = parse_edlp("e(X, Y) ; f(X, Y) ; g(X, Y) :- d(X), d(Y).").unwrap();
        let domain = named_domain(&["a", "b", "c"]);
        match stable_models(&p, &domain) {
            Err(EdlpError::TooManyAtoms(n, guard)) => {
                assert!(n > guard);
                assert_eq!(guard, MAX_DOMAIN_ATOMS);
            }
            other => panic!("expected the guard to trip, got {other:?}"),
        }
    }

    #[test]
    fn stable_models_agree_with_is_stable_over_the_lattice() {
        for text in ["p. p ; q.", "p. p ; q. :- not q.", "p :- not p2. p2 :- not p."] {
            let p = parse_edlp(text).unwrap();
            let domain = named_domain(&["a"]);
            let models: BTreeSet<Vec<String>> = stable_models(&p, &domain)
                .unwrap()
                .iter()
                .map(|m| m.true_atoms().iter().map(|a| a.to_string()).collect())
                .collect();
            for candidate in crate::bridge::atom_lattice(&p, &domain).unwrap() {
                let atoms: Vec<String> =
                    candidate.true_atoms().iter().map(|a| a.to_string()).collect();
                assert_eq!(
                    is_stable(&p, &candidate).unwrap(),
                    models.contains(&atoms),
                    "disagreement on {atoms:?} for `{text}`"
                );
            }
        }
    }
}
