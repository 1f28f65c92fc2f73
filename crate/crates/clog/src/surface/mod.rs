//! Surface languages: abstract syntax, parsers, and pretty-printers for
//! causal theories (`.clog`), combined theories (`.foclog`), and
//! E-disjunctive programs (`.edlp`).

mod lex;
mod parse_clog;
mod parse_edlp;
pub mod render;

use std::collections::{BTreeMap, BTreeSet};

pub use lex::ParseError;
pub use parse_clog::{parse_clog, parse_foclog};
pub use parse_edlp::parse_edlp;
pub use render::{render_causal_theory, render_cee, render_foclog, render_formula, render_program};

use crate::logic::{AtomPattern, EvalError, Formula, Term, Vocabulary};

/// A causal effect expression, one constructor per clause of the inductive
/// definition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cee {
    Atom(AtomPattern),
    Rule { head: Box<Cee>, body: Formula },
    And(Box<Cee>, Box<Cee>),
    Or(Box<Cee>, Box<Cee>),
    All { var: String, qual: Formula, body: Box<Cee> },
    Sel { var: String, qual: Formula, body: Box<Cee> },
    New { var: String, body: Box<Cee> },
}

impl Cee {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Cee {
        Cee::Atom(AtomPattern::new(pred, args))
    }

    pub fn rule(head: Cee, body: Formula) -> Cee {
        Cee::Rule {
            head: Box::new(head),
            body,
        }
    }

    pub fn and(a: Cee, b: Cee) -> Cee {
        Cee::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Cee, b: Cee) -> Cee {
        Cee::Or(Box::new(a), Box::new(b))
    }

    pub fn all(var: impl Into<String>, qual: Formula, body: Cee) -> Cee {
        Cee::All {
            var: var.into(),
            qual,
            body: Box::new(body),
        }
    }

    pub fn sel(var: impl Into<String>, qual: Formula, body: Cee) -> Cee {
        Cee::Sel {
            var: var.into(),
            qual,
            body: Box::new(body),
        }
    }

    pub fn new_elem(var: impl Into<String>, body: Cee) -> Cee {
        Cee::New {
            var: var.into(),
            body: Box::new(body),
        }
    }

    pub fn contains_new(&self) -> bool {
        match self {
            Cee::Atom(_) => false,
            Cee::Rule { head, .. } => head.contains_new(),
            Cee::And(a, b) | Cee::Or(a, b) => a.contains_new() || b.contains_new(),
            Cee::All { body, .. } | Cee::Sel { body, .. } => body.contains_new(),
            Cee::New { .. } => true,
        }
    }

    /// Predicates of nested atom-expressions, i.e. the endogenous symbols.
    pub fn caused_predicates(&self, out: &mut BTreeSet<String>) {
        match self {
            Cee::Atom(a) => {
                out.insert(a.pred.clone());
            }
            Cee::Rule { head, .. } => head.caused_predicates(out),
            Cee::And(a, b) | Cee::Or(a, b) => {
                a.caused_predicates(out);
                b.caused_predicates(out);
            }
            Cee::All { body, .. } | Cee::Sel { body, .. } | Cee::New { body, .. } => {
                body.caused_predicates(out)
            }
        }
    }

    /// All predicates with arities, from atom-expressions and conditions.
    pub fn predicates(&self, out: &mut BTreeMap<String, usize>) {
        match self {
            Cee::Atom(a) => {
                out.insert(a.pred.clone(), a.args.len());
            }
            Cee::Rule { head, body } => {
                head.predicates(out);
                body.predicates(out);
            }
            Cee::And(a, b) | Cee::Or(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            Cee::All { qual, body, .. } | Cee::Sel { qual, body, .. } => {
                qual.predicates(out);
                body.predicates(out);
            }
            Cee::New { body, .. } => body.predicates(out),
        }
    }

    pub fn constants(&self, out: &mut BTreeSet<String>) {
        fn term(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Const(c) => {
                    out.insert(c.clone());
                }
                Term::Sum(a, b) => {
                    term(a, out);
                    term(b, out);
                }
                Term::Var(_) | Term::Int(_) => {}
            }
        }
        match self {
            Cee::Atom(a) => a.args.iter().for_each(|t| term(t, out)),
            Cee::Rule { head, body } => {
                head.constants(out);
                body.constants(out);
            }
            Cee::And(a, b) | Cee::Or(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Cee::All { qual, body, .. } | Cee::Sel { qual, body, .. } => {
                qual.constants(out);
                body.constants(out);
            }
            Cee::New { body, .. } => body.constants(out),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(c: &Cee, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let free_in_formula = |f: &Formula, bound: &Vec<String>, out: &mut BTreeSet<String>| {
                out.extend(
                    f.free_variables()
                        .into_iter()
                        .filter(|v| !bound.contains(v)),
                );
            };
            match c {
                Cee::Atom(a) => {
                    let mut vars = BTreeSet::new();
                    for t in &a.args {
                        t.variables(&mut vars);
                    }
                    out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
                }
                Cee::Rule { head, body } => {
                    walk(head, bound, out);
                    free_in_formula(body, bound, out);
                }
                Cee::And(a, b) | Cee::Or(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Cee::All { var, qual, body } | Cee::Sel { var, qual, body } => {
                    bound.push(var.clone());
                    free_in_formula(qual, bound, out);
                    walk(body, bound, out);
                    bound.pop();
                }
                Cee::New { var, body } => {
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

/// A closed causal theory. The neutral theory (empty conjunction) is
/// represented by an absent root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CausalTheory {
    pub root: Option<Cee>,
}

impl CausalTheory {
    pub fn empty() -> CausalTheory {
        CausalTheory { root: None }
    }

    pub fn single(cee: Cee) -> CausalTheory {
        CausalTheory { root: Some(cee) }
    }

    /// Left-to-right And-fold of a sequence of expressions.
    pub fn fold(cees: Vec<Cee>) -> CausalTheory {
        let mut it = cees.into_iter();
        let first = it.next();
        CausalTheory {
            root: first.map(|f| it.fold(f, Cee::and)),
        }
    }

    /// The top-level conjuncts, i.e. the left And-spine flattened.
    pub fn conjuncts(&self) -> Vec<&Cee> {
        fn spine<'a>(c: &'a Cee, out: &mut Vec<&'a Cee>) {
            match c {
                Cee::And(a, b) => {
                    spine(a, out);
                    out.push(b);
                }
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        if let Some(root) = &self.root {
            spine(root, &mut out);
        }
        out
    }

    pub fn vocabulary(&self) -> Result<Vocabulary, EvalError> {
        let mut vocab = Vocabulary::new();
        if let Some(root) = &self.root {
            let mut preds = BTreeMap::new();
            root.predicates(&mut preds);
            for (p, a) in preds {
                vocab.add_predicate(p, a)?;
            }
            root.constants(&mut vocab.constants);
        }
        Ok(vocab)
    }

    pub fn contains_new(&self) -> bool {
        self.root.as_ref().map(Cee::contains_new).unwrap_or(false)
    }
}

/// A combined theory: one causal block plus first-order sentences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoClogTheory {
    pub causal: CausalTheory,
    pub sentences: Vec<Formula>,
}

impl FoClogTheory {
    pub fn from_causal(causal: CausalTheory) -> FoClogTheory {
        FoClogTheory {
            causal,
            sentences: Vec::new(),
        }
    }

    pub fn vocabulary(&self) -> Result<Vocabulary, EvalError> {
        let mut vocab = self.causal.vocabulary()?;
        for s in &self.sentences {
            let mut preds = BTreeMap::new();
            s.predicates(&mut preds);
            for (p, a) in preds {
                vocab.add_predicate(p, a)?;
            }
            s.constants(&mut vocab.constants);
        }
        Ok(vocab)
    }
}

impl From<CausalTheory> for FoClogTheory {
    fn from(causal: CausalTheory) -> FoClogTheory {
        FoClogTheory::from_causal(causal)
    }
}

/// Splits the predicates of a theory into endogenous (those occurring as
/// nested atom-expressions) and exogenous (all others).
pub fn classify_symbols(theory: &FoClogTheory) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut endo = BTreeSet::new();
    if let Some(root) = &theory.causal.root {
        root.caused_predicates(&mut endo);
    }
    let vocab = theory.vocabulary().unwrap_or_default();
    let exo = vocab
        .predicates
        .keys()
        .filter(|p| !endo.contains(*p))
        .cloned()
        .collect();
    (endo, exo)
}

/// One E-disjunctive rule. `universal` holds the body variables, and
/// `existential` the head variables absent from the body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EDisjRule {
    pub universal: Vec<String>,
    pub existential: Vec<String>,
    pub head: Vec<AtomPattern>,
    pub pos: Vec<AtomPattern>,
    pub neg: Vec<AtomPattern>,
}

impl EDisjRule {
    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    /// A rule is disjunctive when its existential tuple is nonempty or it
    /// has more than one head atom.
    pub fn is_disjunctive(&self) -> bool {
        !self.existential.is_empty() || self.head.len() > 1
    }

    /// Recomputes the universal/existential split from the atoms.
    pub fn partition_variables(head: &[AtomPattern], pos: &[AtomPattern], neg: &[AtomPattern]) -> (Vec<String>, Vec<String>) {
        let mut body_vars = BTreeSet::new();
        for a in pos.iter().chain(neg.iter()) {
            for t in &a.args {
                t.variables(&mut body_vars);
            }
        }
        let mut head_vars = BTreeSet::new();
        for a in head {
            for t in &a.args {
                t.variables(&mut head_vars);
            }
        }
        let existential: Vec<String> = head_vars.difference(&body_vars).cloned().collect();
        let universal: Vec<String> = body_vars.into_iter().collect();
        (universal, existential)
    }
}

/// An E-disjunctive program: a finite list of rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EDisjProgram {
    pub rules: Vec<EDisjRule>,
}

impl EDisjProgram {
    pub fn vocabulary(&self) -> Result<Vocabulary, EvalError> {
        let mut vocab = Vocabulary::new();
        for r in &self.rules {
            for a in r.head.iter().chain(r.pos.iter()).chain(r.neg.iter()) {
                vocab.add_predicate(a.pred.clone(), a.args.len())?;
                for t in &a.args {
                    collect_constants(t, &mut vocab.constants);
                }
            }
        }
        Ok(vocab)
    }

    /// Predicates occurring in the head of at least one rule.
    pub fn head_predicates(&self) -> BTreeSet<String> {
        self.rules
            .iter()
            .flat_map(|r| r.head.iter().map(|a| a.pred.clone()))
            .collect()
    }
}

fn collect_constants(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const(c) => {
            out.insert(c.clone());
        }
        Term::Sum(a, b) => {
            collect_constants(a, out);
            collect_constants(b, out);
        }
        Term::Var(_) | Term::Int(_) => {}
    }
}
