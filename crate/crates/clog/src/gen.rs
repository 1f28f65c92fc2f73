//! Seeded random generators: programs and creation-free theories for the
//! semantics property suites, and raw ASTs for parser round-trip tests.
//! All generation is deterministic in the seed; suite parameters live in a
//! config file so runs are reproducible.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bridge::negative_cycle;
use crate::logic::{AtomPattern, Element, Formula, Structure, Term};
use crate::surface::{CausalTheory, Cee, EDisjProgram, EDisjRule, FoClogTheory};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    pub program_instances: usize,
    pub theory_instances: usize,
    pub max_rules: usize,
    pub max_predicates: usize,
    pub max_arity: usize,
    pub max_domain_size: usize,
    pub max_domain_atoms: usize,
    pub max_head_atoms: usize,
    pub negation_density: f64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0xC106,
            program_instances: 500,
            theory_instances: 500,
            max_rules: 4,
            max_predicates: 3,
            max_arity: 2,
            max_domain_size: 3,
            max_domain_atoms: 10,
            max_head_atoms: 2,
            negation_density: 0.4,
        }
    }
}

impl GenConfig {
    pub fn from_json(v: &serde_json::Value) -> GenConfig {
        let d = GenConfig::default();
        let get = |k: &str, dv: usize| -> usize {
            v.get(k).and_then(|x| x.as_u64()).map(|x| x as usize).unwrap_or(dv)
        };
        GenConfig {
            seed: v.get("seed").and_then(|x| x.as_u64()).unwrap_or(d.seed),
            program_instances: get("program_instances", d.program_instances),
            theory_instances: get("theory_instances", d.theory_instances),
            max_rules: get("max_rules", d.max_rules),
            max_predicates: get("max_predicates", d.max_predicates),
            max_arity: get("max_arity", d.max_arity),
            max_domain_size: get("max_domain_size", d.max_domain_size),
            max_domain_atoms: get("max_domain_atoms", d.max_domain_atoms),
            max_head_atoms: get("max_head_atoms", d.max_head_atoms),
            negation_density: v
                .get("negation_density")
                .and_then(|x| x.as_f64())
                .unwrap_or(d.negation_density),
        }
    }
}

pub fn rng_for(cfg: &GenConfig, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(stream))
}

const DOMAIN_NAMES: &[&str] = &["a", "b", "c", "d"];

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

/// A random safe E-disjunctive program without recursion over negation,
/// together with the domain it is meant to run over. The predicate/arity
/// draw is resampled until the domain-atom count fits the brute-force budget.
pub fn random_program(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> (EDisjProgram, BTreeSet<Element>) {
    loop {
        let domain_size = rng.gen_range(1..=cfg.max_domain_size);
        let domain: BTreeSet<Element> = DOMAIN_NAMES[..domain_size]
            .iter()
            .map(|n| Element::name(*n))
            .collect();
        let n_preds = rng.gen_range(1..=cfg.max_predicates);
        let arities: Vec<usize> = (0..n_preds)
            .map(|_| rng.gen_range(0..=cfg.max_arity))
            .collect();
        let atom_count: usize = arities.iter().map(|&a| domain_size.pow(a as u32)).sum();
        if atom_count > cfg.max_domain_atoms || atom_count == 0 {
            continue;
        }
        let preds: Vec<(String, usize)> = arities
            .iter()
            .enumerate()
            .map(|(i, &a)| (format!("p{i}"), a))
            .collect();

        let n_rules = rng.gen_range(1..=cfg.max_rules);
        let mut rules = Vec::new();
        for _ in 0..n_rules {
            if let Some(r) = random_rule(rng, cfg, &preds, domain_size) {
                rules.push(r);
            }
        }
        if rules.is_empty() {
            continue;
        }
        let p = EDisjProgram { rules };
        if negative_cycle(&p).is_some() {
            continue;
        }
        return (p, domain);
    }
}

fn random_rule(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    preds: &[(String, usize)],
    domain_size: usize,
) -> Option<EDisjRule> {
    let head_vars = ["X", "Y"];
    let n_pos = rng.gen_range(0..=2usize);
    let mut pos = Vec::new();
    let mut pos_vars: Vec<String> = Vec::new();
    for _ in 0..n_pos {
        let (p, arity) = pick(rng, preds).clone();
        let args: Vec<Term> = (0..arity)
            .map(|_| {
                if rng.gen_bool(0.6) {
                    let v = pick(rng, &head_vars).to_string();
                    if !pos_vars.contains(&v) {
                        pos_vars.push(v.clone());
                    }
                    Term::Var(v)
                } else {
                    Term::cst(*pick(rng, &DOMAIN_NAMES[..domain_size]))
                }
            })
            .collect();
        pos.push(AtomPattern::new(p, args));
    }
    let mut neg = Vec::new();
    if rng.gen_bool(cfg.negation_density) {
        let (p, arity) = pick(rng, preds).clone();
        let args: Vec<Term> = (0..arity)
            .map(|_| {
                if !pos_vars.is_empty() && rng.gen_bool(0.6) {
                    Term::Var(pick(rng, &pos_vars).clone())
                } else {
                    Term::cst(*pick(rng, &DOMAIN_NAMES[..domain_size]))
                }
            })
            .collect();
        neg.push(AtomPattern::new(p, args));
    }
    let n_head = if pos.is_empty() && neg.is_empty() {
        rng.gen_range(1..=cfg.max_head_atoms)
    } else {
        rng.gen_range(0..=cfg.max_head_atoms)
    };
    let mut head = Vec::new();
    for _ in 0..n_head {
        let (p, arity) = pick(rng, preds).clone();
        let args: Vec<Term> = (0..arity)
            .map(|_| match rng.gen_range(0..3) {
                0 if !pos_vars.is_empty() => Term::Var(pick(rng, &pos_vars).clone()),
                1 => Term::Var(format!("Z{}", rng.gen_range(0..2))),
                _ => Term::cst(*pick(rng, &DOMAIN_NAMES[..domain_size])),
            })
            .collect();
        head.push(AtomPattern::new(p, args));
    }
    let (universal, existential) = EDisjRule::partition_variables(&head, &pos, &neg);
    // reject unsafe draws instead of patching them
    let mut pos_var_set = BTreeSet::new();
    for a in &pos {
        for t in &a.args {
            t.variables(&mut pos_var_set);
        }
    }
    for a in &neg {
        let mut vs = BTreeSet::new();
        for t in &a.args {
            t.variables(&mut vs);
        }
        if !vs.is_subset(&pos_var_set) {
            return None;
        }
    }
    Some(EDisjRule {
        universal,
        existential,
        head,
        pos,
        neg,
    })
}

const THEORY_CONSTS: &[&str] = &["A", "B", "C"];

/// A random closed creation-free causal theory plus an exogenous template
/// (domain and constants, no relations) to enumerate interpretations over.
pub fn random_creation_free_theory(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
) -> (CausalTheory, Structure) {
    loop {
        let domain_size = rng.gen_range(1..=cfg.max_domain_size);
        let n_preds = rng.gen_range(1..=cfg.max_predicates);
        let arities: Vec<usize> = (0..n_preds)
            .map(|_| rng.gen_range(0..=cfg.max_arity.min(1)))
            .collect();
        let atom_count: usize = arities.iter().map(|&a| domain_size.pow(a as u32)).sum();
        if atom_count > cfg.max_domain_atoms {
            continue;
        }
        let preds: Vec<(String, usize)> = arities
            .iter()
            .enumerate()
            .map(|(i, &a)| (format!("q{i}"), a))
            .collect();
        let consts = &THEORY_CONSTS[..domain_size];
        let mut counter = 0usize;
        let depth = rng.gen_range(1..=3usize);
        let cee = random_cee(rng, &preds, consts, &mut Vec::new(), &mut counter, depth, false);
        let theory = CausalTheory::single(cee);

        let mut exo = Structure::new();
        for c in consts {
            exo.add_initial(Element::name(*c));
        }
        for c in consts {
            exo.set_constant(c.to_string(), Element::name(*c)).unwrap();
        }
        return (theory, exo);
    }
}

fn random_cee(
    rng: &mut ChaCha8Rng,
    preds: &[(String, usize)],
    consts: &[&str],
    scope: &mut Vec<String>,
    counter: &mut usize,
    depth: usize,
    allow_new: bool,
) -> Cee {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return Cee::Atom(random_atom(rng, preds, consts, scope));
    }
    let mut kinds: Vec<u8> = vec![1, 2, 3, 4, 5];
    if allow_new {
        kinds.push(6);
    }
    match *pick(rng, &kinds) {
        1 => Cee::rule(
            random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new),
            random_formula(rng, preds, consts, scope, counter, 1),
        ),
        2 => Cee::and(
            random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new),
            random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new),
        ),
        3 => Cee::or(
            random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new),
            random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new),
        ),
        4 | 5 => {
            let var = format!("v{}", *counter);
            *counter += 1;
            scope.push(var.clone());
            let qual = random_formula(rng, preds, consts, scope, counter, 1);
            let body = random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new);
            scope.pop();
            if rng.gen_bool(0.5) {
                Cee::all(var, qual, body)
            } else {
                Cee::sel(var, qual, body)
            }
        }
        _ => {
            let var = format!("v{}", *counter);
            *counter += 1;
            scope.push(var.clone());
            let body = random_cee(rng, preds, consts, scope, counter, depth - 1, allow_new);
            scope.pop();
            Cee::new_elem(var, body)
        }
    }
}

fn random_term(rng: &mut ChaCha8Rng, consts: &[&str], scope: &[String]) -> Term {
    if !scope.is_empty() && rng.gen_bool(0.6) {
        Term::Var(pick(rng, scope).clone())
    } else {
        Term::cst(*pick(rng, consts))
    }
}

fn random_atom(
    rng: &mut ChaCha8Rng,
    preds: &[(String, usize)],
    consts: &[&str],
    scope: &[String],
) -> AtomPattern {
    let (p, arity) = pick(rng, preds).clone();
    let args = (0..arity).map(|_| random_term(rng, consts, scope)).collect();
    AtomPattern::new(p, args)
}

fn random_formula(
    rng: &mut ChaCha8Rng,
    preds: &[(String, usize)],
    consts: &[&str],
    scope: &mut Vec<String>,
    counter: &mut usize,
    depth: usize,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..5) {
            0 => Formula::True,
            1 => Formula::Eq(
                random_term(rng, consts, scope),
                random_term(rng, consts, scope),
            ),
            _ => Formula::Atom(random_atom(rng, preds, consts, scope)),
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, preds, consts, scope, counter, depth - 1)),
        1 => Formula::and(
            random_formula(rng, preds, consts, scope, counter, depth - 1),
            random_formula(rng, preds, consts, scope, counter, depth - 1),
        ),
        2 => Formula::or(
            random_formula(rng, preds, consts, scope, counter, depth - 1),
            random_formula(rng, preds, consts, scope, counter, depth - 1),
        ),
        _ => {
            let var = format!("v{}", *counter);
            *counter += 1;
            scope.push(var.clone());
            let qual = random_formula(rng, preds, consts, scope, counter, 0);
            let body = random_formula(rng, preds, consts, scope, counter, depth - 1);
            scope.pop();
            if rng.gen_bool(0.5) {
                Formula::forall(var, qual, body)
            } else {
                Formula::exists(var, qual, body)
            }
        }
    }
}

// ---- raw AST generators for parser round-trips ----

/// A random closed causal theory exercising every constructor, including
/// object creation, sums, comparisons, and constants that need quoting.
pub fn random_ast_theory(rng: &mut ChaCha8Rng) -> CausalTheory {
    let preds: Vec<(String, usize)> = vec![
        ("P".into(), 0),
        ("Q".into(), 1),
        ("r".into(), 2),
        ("s_1".into(), 1),
    ];
    let consts: Vec<&str> = vec!["A", "B", "littleC", "New"];
    let mut counter = 0usize;
    let n = rng.gen_range(1..=3usize);
    let cees = (0..n)
        .map(|_| {
            let depth = rng.gen_range(1..=3usize);
            random_cee(rng, &preds, &consts, &mut Vec::new(), &mut counter, depth, true)
        })
        .collect();
    CausalTheory::fold(cees)
}

pub fn random_ast_foclog(rng: &mut ChaCha8Rng) -> FoClogTheory {
    let preds: Vec<(String, usize)> = vec![("P".into(), 0), ("Q".into(), 1), ("r".into(), 2)];
    let consts: Vec<&str> = vec!["A", "B", "littleC"];
    let mut counter = 1000usize;
    let causal = if rng.gen_bool(0.8) {
        random_ast_theory(rng)
    } else {
        CausalTheory::empty()
    };
    let n = rng.gen_range(0..=3usize);
    let sentences = (0..n)
        .map(|_| {
            let depth = rng.gen_range(0..=3usize);
            let mut f = random_formula(rng, &preds, &consts, &mut Vec::new(), &mut counter, depth);
            // sentences must be closed; the generator binds nothing at the
            // top, so quantify away any leftovers (there are none by
            // construction, but integers and sums are added here)
            if rng.gen_bool(0.3) {
                f = Formula::and(
                    f,
                    Formula::Gt(
                        Term::sum(Term::Int(1), Term::sum(Term::Int(2), Term::Int(3))),
                        Term::Int(rng.gen_range(0..5)),
                    ),
                );
            }
            f
        })
        .collect();
    FoClogTheory { causal, sentences }
}

pub fn random_ast_program(rng: &mut ChaCha8Rng) -> EDisjProgram {
    let preds: Vec<(String, usize)> = vec![
        ("p".into(), 0),
        ("q".into(), 1),
        ("edge".into(), 2),
    ];
    let n = rng.gen_range(1..=4usize);
    let mut rules = Vec::new();
    for _ in 0..n {
        let vars = ["X", "Y"];
        let consts = ["a", "b", "Big"];
        let mut pos_vars: Vec<String> = Vec::new();
        let n_pos = rng.gen_range(0..=2usize);
        let mut pos = Vec::new();
        for _ in 0..n_pos {
            let (p, arity) = pick(rng, &preds).clone();
            let args: Vec<Term> = (0..arity)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        let v = pick(rng, &vars).to_string();
                        if !pos_vars.contains(&v) {
                            pos_vars.push(v.clone());
                        }
                        Term::Var(v)
                    } else if rng.gen_bool(0.2) {
                        Term::Int(rng.gen_range(0..4))
                    } else {
                        Term::cst(*pick(rng, &consts))
                    }
                })
                .collect();
            pos.push(AtomPattern::new(p, args));
        }
        let mut neg = Vec::new();
        if rng.gen_bool(0.4) {
            let (p, arity) = pick(rng, &preds).clone();
            let args: Vec<Term> = (0..arity)
                .map(|_| {
                    if !pos_vars.is_empty() && rng.gen_bool(0.5) {
                        Term::Var(pick(rng, &pos_vars).clone())
                    } else {
                        Term::cst(*pick(rng, &consts))
                    }
                })
                .collect();
            neg.push(AtomPattern::new(p, args));
        }
        let n_head = if pos.is_empty() && neg.is_empty() {
            rng.gen_range(1..=2usize)
        } else {
            rng.gen_range(0..=2usize)
        };
        let mut head = Vec::new();
        for _ in 0..n_head {
            let (p, arity) = pick(rng, &preds).clone();
            let args: Vec<Term> = (0..arity)
                .map(|_| match rng.gen_range(0..3) {
                    0 if !pos_vars.is_empty() => Term::Var(pick(rng, &pos_vars).clone()),
                    1 => Term::Var(format!("W{}", rng.gen_range(0..2))),
                    _ => Term::cst(*pick(rng, &consts)),
                })
                .collect();
            head.push(AtomPattern::new(p, args));
        }
        if head.is_empty() && pos.is_empty() && neg.is_empty() {
            continue;
        }
        let (universal, existential) = EDisjRule::partition_variables(&head, &pos, &neg);
        rules.push(EDisjRule {
            universal,
            existential,
            head,
            pos,
            neg,
        });
    }
    if rules.is_empty() {
        rules.push(EDisjRule {
            universal: vec![],
            existential: vec![],
            head: vec![AtomPattern::nullary("p")],
            pos: vec![],
            neg: vec![],
        });
    }
    EDisjProgram { rules }
}
