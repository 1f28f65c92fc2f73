//! Compositional cset enumeration: one cset per admissible resolution of the
//! nondeterministic constructors, with every condition evaluated in the given
//! structure. This is independent of the process runner and serves as the
//! second route for the engine's cross-checks.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{
    eval_atom_pattern, eval_formula_with, Assignment, Atom, AtomOracle, Element, EvalError,
    Structure,
};
use crate::surface::{render_formula, CausalTheory, Cee};

use super::EngineError;

/// One nondeterministic outcome of a causal theory in a state: the caused
/// atoms, the created elements in creation order, and for every effect the
/// events and conditions that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSet {
    pub atoms: BTreeSet<Atom>,
    pub created: Vec<Element>,
    pub justifications: BTreeMap<String, Vec<Justification>>,
}

impl CSet {
    fn empty() -> CSet {
        CSet {
            atoms: BTreeSet::new(),
            created: Vec::new(),
            justifications: BTreeMap::new(),
        }
    }

    fn merge(mut self, other: CSet) -> CSet {
        self.atoms.extend(other.atoms);
        self.created.extend(other.created);
        for (k, v) in other.justifications {
            self.justifications.entry(k).or_default().extend(v);
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "atoms": self.atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "created": self.created.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "justifications": self.justifications.iter().map(|(k, v)| {
                (k.clone(), serde_json::json!(v.iter().map(|j| serde_json::json!({
                    "event": j.event,
                    "conditions": j.conditions,
                })).collect::<Vec<_>>()))
            }).collect::<serde_json::Map<_, _>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub event: String,
    pub conditions: Vec<String>,
}

/// The result of enumerating csets: the duplicate-free csets plus one entry
/// per failed branch (a `Sel` over an empty qualification extension, an
/// exhausted creation budget, or a caused atom denoting no element). A failed
/// branch yields no cset, which is distinct from yielding the empty cset.
#[derive(Clone, Debug)]
pub struct CsetOutcome {
    pub csets: Vec<CSet>,
    pub failures: Vec<String>,
}

struct Ctx<'a> {
    state: &'a Structure,
    budget: usize,
    failures: Vec<String>,
}

enum Branch {
    Ok(CSet),
    Failed,
}

/// Enumerates the csets of `theory` relative to `s`, pruning branches that
/// would create more than `budget` elements.
pub fn enumerate_csets(
    theory: &CausalTheory,
    s: &Structure,
    budget: usize,
) -> Result<CsetOutcome, EngineError> {
    let mut ctx = Ctx {
        state: s,
        budget,
        failures: Vec::new(),
    };
    let branches = match &theory.root {
        None => vec![Branch::Ok(CSet::empty())],
        Some(root) => go(root, &Assignment::new(), &[], 0, &mut ctx)?,
    };
    let mut seen: BTreeSet<(BTreeSet<Atom>, Vec<Element>)> = BTreeSet::new();
    let mut csets = Vec::new();
    for b in branches {
        if let Branch::Ok(cs) = b {
            let key = (cs.atoms.clone(), cs.created.clone());
            if seen.insert(key) {
                csets.push(cs);
            }
        }
    }
    csets.sort_by(|a, b| (&a.atoms, &a.created).cmp(&(&b.atoms, &b.created)));
    let mut failures = ctx.failures;
    failures.sort();
    failures.dedup();
    Ok(CsetOutcome { csets, failures })
}

/// Evaluates a condition in the base state, with quantifiers ranging over
/// the base domain extended by the elements created so far on this branch.
fn eval_condition(
    f: &crate::logic::Formula,
    ctx: &Ctx<'_>,
    a: &Assignment,
    created: &[Element],
) -> Result<bool, EvalError> {
    struct O<'b>(&'b Structure);
    impl AtomOracle for O<'_> {
        type Err = EvalError;
        fn atom_holds(&mut self, atom: &Atom, _positive: bool) -> Result<bool, EvalError> {
            Ok(self.0.holds(atom))
        }
    }
    let mut domain = ctx.state.domain().clone();
    domain.extend(created.iter().cloned());
    let mut oracle = O(ctx.state);
    eval_formula_with(f, &domain, ctx.state.constants(), &mut a.clone(), true, &mut oracle)
}

fn go(
    cee: &Cee,
    a: &Assignment,
    conditions: &[String],
    base_created: usize,
    ctx: &mut Ctx<'_>,
) -> Result<Vec<Branch>, EngineError> {
    // `base_created` counts elements created to the left of this subtree so
    // that fresh names stay distinct across And-composition.
    match cee {
        Cee::Atom(pat) => {
            let atom = eval_atom_pattern(pat, ctx.state.constants(), a)?;
            let in_domain = |e: &Element| {
                ctx.state.domain().contains(e) || a.iter().any(|(_, bound)| bound == e)
            };
            if let Some(bad) = atom.args.iter().find(|e| !in_domain(e)) {
                ctx.failures.push(format!(
                    "caused atom `{atom}` mentions `{bad}` outside the domain"
                ));
                return Ok(vec![Branch::Failed]);
            }
            let mut cs = CSet::empty();
            cs.justifications.insert(
                atom.to_string(),
                vec![Justification {
                    event: format!("Atom {atom}"),
                    conditions: conditions.to_vec(),
                }],
            );
            cs.atoms.insert(atom);
            Ok(vec![Branch::Ok(cs)])
        }
        Cee::Rule { head, body } => {
            let holds = eval_condition(body, ctx, a, &[])?;
            if holds {
                let mut conds = conditions.to_vec();
                conds.push(render_formula(body));
                go(head, a, &conds, base_created, ctx)
            } else {
                Ok(vec![Branch::Ok(CSet::empty())])
            }
        }
        Cee::And(l, r) => {
            let left = go(l, a, conditions, base_created, ctx)?;
            let mut out = Vec::new();
            for lb in left {
                match lb {
                    Branch::Failed => out.push(Branch::Failed),
                    Branch::Ok(lcs) => {
                        let right = go(r, a, conditions, base_created + lcs.created.len(), ctx)?;
                        for rb in right {
                            match rb {
                                Branch::Failed => out.push(Branch::Failed),
                                Branch::Ok(rcs) => out.push(Branch::Ok(lcs.clone().merge(rcs))),
                            }
                        }
                    }
                }
            }
            Ok(out)
        }
        Cee::Or(l, r) => {
            let mut out = go(l, a, conditions, base_created, ctx)?;
            out.extend(go(r, a, conditions, base_created, ctx)?);
            Ok(out)
        }
        Cee::All { var, qual, body } => {
            let mut domain: Vec<Element> = ctx.state.domain().iter().cloned().collect();
            // elements bound by enclosing creations are visible
            for (_, e) in a.iter() {
                if !domain.contains(e) {
                    domain.push(e.clone());
                }
            }
            let mut selected = Vec::new();
            for d in domain {
                let mut b = a.clone();
                b.bind(var.clone(), d.clone());
                if eval_condition(qual, ctx, &b, &[])? {
                    selected.push(d);
                }
            }
            let mut acc = vec![Branch::Ok(CSet::empty())];
            for d in selected {
                let mut b = a.clone();
                b.bind(var.clone(), d.clone());
                let mut conds = conditions.to_vec();
                conds.push(format!("{var} = {d} satisfies {}", render_formula(qual)));
                let mut next = Vec::new();
                for accb in &acc {
                    match accb {
                        Branch::Failed => next.push(Branch::Failed),
                        Branch::Ok(acs) => {
                            let sub = go(body, &b, &conds, base_created + acs.created.len(), ctx)?;
                            for sb in sub {
                                match sb {
                                    Branch::Failed => next.push(Branch::Failed),
                                    Branch::Ok(scs) => next.push(Branch::Ok(acs.clone().merge(scs))),
                                }
                            }
                        }
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        Cee::Sel { var, qual, body } => {
            let mut domain: Vec<Element> = ctx.state.domain().iter().cloned().collect();
            for (_, e) in a.iter() {
                if !domain.contains(e) {
                    domain.push(e.clone());
                }
            }
            let mut witnesses = Vec::new();
            for d in domain {
                let mut b = a.clone();
                b.bind(var.clone(), d.clone());
                if eval_condition(qual, ctx, &b, &[])? {
                    witnesses.push(d);
                }
            }
            if witnesses.is_empty() {
                ctx.failures.push(format!(
                    "selection `Sel {var} [{}]` has an empty qualification extension",
                    render_formula(qual)
                ));
                return Ok(vec![Branch::Failed]);
            }
            let mut out = Vec::new();
            for w in witnesses {
                let mut b = a.clone();
                b.bind(var.clone(), w.clone());
                let mut conds = conditions.to_vec();
                conds.push(format!("selected {var} = {w}"));
                out.extend(go(body, &b, &conds, base_created, ctx)?);
            }
            Ok(out)
        }
        Cee::New { var, body } => {
            if base_created >= ctx.budget {
                ctx.failures
                    .push(format!("creation budget {} exhausted", ctx.budget));
                return Ok(vec![Branch::Failed]);
            }
            let fresh = Element::Name(format!("_c{base_created}"));
            let mut b = a.clone();
            b.bind(var.clone(), fresh.clone());
            let sub = go(body, &b, conditions, base_created + 1, ctx)?;
            let mut out = Vec::new();
            for s in sub {
                match s {
                    Branch::Failed => out.push(Branch::Failed),
                    Branch::Ok(cs) => {
                        let mut created = vec![fresh.clone()];
                        created.extend(cs.created.clone());
                        let mut justifications = cs.justifications.clone();
                        justifications.insert(
                            fresh.to_string(),
                            vec![Justification {
                                event: format!("New {var}"),
                                conditions: conditions.to_vec(),
                            }],
                        );
                        out.push(Branch::Ok(CSet {
                            atoms: cs.atoms,
                            created,
                            justifications,
                        }));
                    }
                }
            }
            Ok(out)
        }
    }
}
