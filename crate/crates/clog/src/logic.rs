//! Vocabularies, terms, formulas, finite structures, and first-order
//! satisfaction. Everything here is immutable after construction and all
//! operations are pure, so values can be shared and evaluated concurrently.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A domain element of a finite structure. Integers are admitted as sugar
/// for bounded time segments; everything else is a named element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Int(i64),
    Name(String),
}

impl Element {
    pub fn name(s: impl Into<String>) -> Element {
        Element::Name(s.into())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(n) => Some(*n),
            Element::Name(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Element::Int(n) => serde_json::Value::from(*n),
            Element::Name(s) => serde_json::Value::from(s.as_str()),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Element, StructureError> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Element::Int)
                .ok_or_else(|| StructureError::BadElement(v.to_string())),
            serde_json::Value::String(s) => Ok(Element::Name(s.clone())),
            other => Err(StructureError::BadElement(other.to_string())),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Name(s) => write!(f, "{s}"),
        }
    }
}

/// A term: a variable, a constant, an integer literal, or a sum of terms.
/// Sums only make sense over the integer segment of a domain; they exist so
/// that bounded-time examples can write `t + 1` directly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Int(i64),
    Sum(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(s: impl Into<String>) -> Term {
        Term::Var(s.into())
    }

    pub fn cst(s: impl Into<String>) -> Term {
        Term::Const(s.into())
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Int(_) => {}
            Term::Sum(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }
}

/// A syntactic atom: a predicate applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomPattern {
    pub pred: String,
    pub args: Vec<Term>,
}

impl AtomPattern {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> AtomPattern {
        AtomPattern {
            pred: pred.into(),
            args,
        }
    }

    pub fn nullary(pred: impl Into<String>) -> AtomPattern {
        AtomPattern::new(pred, Vec::new())
    }
}

/// A ground atom: a predicate over domain elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Element>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Element>) -> Atom {
        Atom {
            pred: pred.into(),
            args,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// First-order formulas with restricted quantifiers. Restricted `ForAll`
/// carries a qualification and an assertion; plain quantification uses the
/// qualification `True`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(AtomPattern),
    Eq(Term, Term),
    Gt(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll {
        var: String,
        qual: Box<Formula>,
        body: Box<Formula>,
    },
    Exists {
        var: String,
        qual: Box<Formula>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(AtomPattern::new(pred, args))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, qual: Formula, body: Formula) -> Formula {
        Formula::ForAll {
            var: var.into(),
            qual: Box::new(qual),
            body: Box::new(body),
        }
    }

    pub fn exists(var: impl Into<String>, qual: Formula, body: Formula) -> Formula {
        Formula::Exists {
            var: var.into(),
            qual: Box::new(qual),
            body: Box::new(body),
        }
    }

    /// Rewrites restricted quantifiers into their plain first-order form:
    /// `!x [q]: b` becomes `!x : q => b` and `?x [q]: b` becomes
    /// `?x : q & b`.
    pub fn desugared(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) | Formula::Gt(..) => {
                self.clone()
            }
            Formula::Not(f) => Formula::not(f.desugared()),
            Formula::And(a, b) => Formula::and(a.desugared(), b.desugared()),
            Formula::Or(a, b) => Formula::or(a.desugared(), b.desugared()),
            Formula::Implies(a, b) => Formula::implies(a.desugared(), b.desugared()),
            Formula::ForAll { var, qual, body } => Formula::forall(
                var.clone(),
                Formula::True,
                Formula::implies(qual.desugared(), body.desugared()),
            ),
            Formula::Exists { var, qual, body } => Formula::exists(
                var.clone(),
                Formula::True,
                Formula::and(qual.desugared(), body.desugared()),
            ),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => {
                    let mut vars = BTreeSet::new();
                    for t in &a.args {
                        t.variables(&mut vars);
                    }
                    out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
                }
                Formula::Eq(a, b) | Formula::Gt(a, b) => {
                    let mut vars = BTreeSet::new();
                    a.variables(&mut vars);
                    b.variables(&mut vars);
                    out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::ForAll { var, qual, body } | Formula::Exists { var, qual, body } => {
                    bound.push(var.clone());
                    walk(qual, bound, out);
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// All predicates occurring anywhere in the formula, with arities.
    pub fn predicates(&self, out: &mut BTreeMap<String, usize>) {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Gt(..) => {}
            Formula::Atom(a) => {
                out.insert(a.pred.clone(), a.args.len());
            }
            Formula::Not(f) => f.predicates(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            Formula::ForAll { qual, body, .. } | Formula::Exists { qual, body, .. } => {
                qual.predicates(out);
                body.predicates(out);
            }
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
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.args.iter().for_each(|t| term(t, out)),
            Formula::Eq(a, b) | Formula::Gt(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::Not(f) => f.constants(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Formula::ForAll { qual, body, .. } | Formula::Exists { qual, body, .. } => {
                qual.constants(out);
                body.constants(out);
            }
        }
    }
}

/// A relational vocabulary: predicate names with arities plus constants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub predicates: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl Vocabulary {
    pub fn new() -> Vocabulary {
        Vocabulary::default()
    }

    pub fn add_predicate(&mut self, name: impl Into<String>, arity: usize) -> Result<(), EvalError> {
        let name = name.into();
        match self.predicates.get(&name) {
            Some(&a) if a != arity => Err(EvalError::ArityMismatch {
                pred: name,
                expected: a,
                got: arity,
            }),
            _ => {
                self.predicates.insert(name, arity);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: &Vocabulary) -> Result<(), EvalError> {
        for (p, &a) in &other.predicates {
            self.add_predicate(p.clone(), a)?;
        }
        self.constants.extend(other.constants.iter().cloned());
        Ok(())
    }
}

/// A variable assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Element>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, e: Element) {
        self.0.insert(var.into(), e);
    }

    pub fn unbind(&mut self, var: &str) {
        self.0.remove(var);
    }

    pub fn get(&self, var: &str) -> Option<&Element> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Element)> {
        self.0.iter()
    }
}

impl FromIterator<(String, Element)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (String, Element)>>(iter: T) -> Assignment {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("arity mismatch for `{pred}`: expected {expected}, got {got}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("element `{0}` is not in the domain")]
    NotInDomain(String),
    #[error("constant `{0}` must denote an initial element")]
    ConstantNotInitial(String),
    #[error("constant `{0}` has no interpretation")]
    MissingConstant(String),
    #[error("tuple arity {got} does not match arity {expected} of `{pred}`")]
    TupleArity {
        pred: String,
        expected: usize,
        got: usize,
    },
    #[error("exogenous part interprets endogenous predicate `{0}`")]
    EndogenousInExoPart(String),
    #[error("exogenous part contains created element `{0}`")]
    CreatedInExoPart(String),
    #[error("cannot read structure: {0}")]
    BadJson(String),
    #[error("cannot read element: {0}")]
    BadElement(String),
}

/// One relation of a structure: its arity plus the set of tuples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Table {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Element>>,
}

impl Table {
    pub fn empty(arity: usize) -> Table {
        Table {
            arity,
            tuples: BTreeSet::new(),
        }
    }
}

/// A finite structure: a domain partitioned into initial and created
/// elements, an interpretation for every predicate, and a constant map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Structure {
    domain: BTreeSet<Element>,
    created: BTreeSet<Element>,
    constants: BTreeMap<String, Element>,
    tables: BTreeMap<String, Table>,
}

impl Structure {
    pub fn new() -> Structure {
        Structure::default()
    }

    pub fn add_initial(&mut self, e: Element) {
        self.domain.insert(e);
    }

    pub fn add_created(&mut self, e: Element) {
        self.domain.insert(e.clone());
        self.created.insert(e);
    }

    pub fn domain(&self) -> &BTreeSet<Element> {
        &self.domain
    }

    pub fn created(&self) -> &BTreeSet<Element> {
        &self.created
    }

    pub fn initial_elements(&self) -> impl Iterator<Item = &Element> {
        self.domain.iter().filter(move |e| !self.created.contains(e))
    }

    pub fn is_created(&self, e: &Element) -> bool {
        self.created.contains(e)
    }

    pub fn set_constant(&mut self, name: impl Into<String>, e: Element) -> Result<(), StructureError> {
        let name = name.into();
        if !self.domain.contains(&e) {
            return Err(StructureError::NotInDomain(e.to_string()));
        }
        if self.created.contains(&e) {
            return Err(StructureError::ConstantNotInitial(name));
        }
        self.constants.insert(name, e);
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<&Element> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> &BTreeMap<String, Element> {
        &self.constants
    }

    pub fn declare_predicate(&mut self, name: impl Into<String>, arity: usize) {
        self.tables
            .entry(name.into())
            .or_insert_with(|| Table::empty(arity));
    }

    pub fn table(&self, pred: &str) -> Option<&Table> {
        self.tables.get(pred)
    }

    pub fn tables(&self) -> &BTreeMap<String, Table> {
        &self.tables
    }

    pub fn tables_mut(&mut self) -> &mut BTreeMap<String, Table> {
        &mut self.tables
    }

    pub fn has_predicate(&self, pred: &str) -> bool {
        self.tables.contains_key(pred)
    }

    pub fn insert_fact(&mut self, atom: Atom) -> Result<(), StructureError> {
        for a in &atom.args {
            if !self.domain.contains(a) {
                return Err(StructureError::NotInDomain(a.to_string()));
            }
        }
        let table = self
            .tables
            .entry(atom.pred.clone())
            .or_insert_with(|| Table::empty(atom.args.len()));
        if table.arity != atom.args.len() {
            return Err(StructureError::TupleArity {
                pred: atom.pred,
                expected: table.arity,
                got: atom.args.len(),
            });
        }
        table.tuples.insert(atom.args);
        Ok(())
    }

    pub fn holds(&self, atom: &Atom) -> bool {
        self.tables
            .get(&atom.pred)
            .map(|t| t.tuples.contains(&atom.args))
            .unwrap_or(false)
    }

    /// All true ground atoms, in canonical order.
    pub fn true_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for (p, t) in &self.tables {
            for tuple in &t.tuples {
                out.push(Atom::new(p.clone(), tuple.clone()));
            }
        }
        out
    }

    /// True atoms restricted to the given predicates.
    pub fn atoms_of(&self, preds: &BTreeSet<String>) -> BTreeSet<Atom> {
        self.true_atoms()
            .into_iter()
            .filter(|a| preds.contains(&a.pred))
            .collect()
    }

    /// The restriction of this structure to the given predicates; domain,
    /// tags, and constants are kept.
    pub fn reduct(&self, preds: &BTreeSet<String>) -> Structure {
        Structure {
            domain: self.domain.clone(),
            created: self.created.clone(),
            constants: self.constants.clone(),
            tables: self
                .tables
                .iter()
                .filter(|(p, _)| preds.contains(*p))
                .map(|(p, t)| (p.clone(), t.clone()))
                .collect(),
        }
    }

    /// Renames created elements to `_c0.._ck` choosing the lexicographically
    /// smallest serialization over all renamings, so that structures that
    /// differ only in the identity of invented elements compare equal.
    pub fn canonicalize_created(&self) -> Structure {
        let created: Vec<Element> = self.created.iter().cloned().collect();
        if created.is_empty() {
            return self.clone();
        }
        let fresh: Vec<Element> = (0..created.len())
            .map(|i| Element::Name(format!("_c{i}")))
            .collect();
        let mut best: Option<Structure> = None;
        for perm in permutations(created.len()) {
            let mapping: BTreeMap<&Element, &Element> = created
                .iter()
                .enumerate()
                .map(|(i, e)| (e, &fresh[perm[i]]))
                .collect();
            let renamed = self.rename(&mapping);
            if best.as_ref().map(|b| renamed < *b).unwrap_or(true) {
                best = Some(renamed);
            }
        }
        best.unwrap()
    }

    fn rename(&self, mapping: &BTreeMap<&Element, &Element>) -> Structure {
        let map = |e: &Element| -> Element { mapping.get(e).cloned().cloned().unwrap_or_else(|| e.clone()) };
        Structure {
            domain: self.domain.iter().map(map).collect(),
            created: self.created.iter().map(map).collect(),
            constants: self.constants.iter().map(|(k, v)| (k.clone(), map(v))).collect(),
            tables: self
                .tables
                .iter()
                .map(|(p, t)| {
                    (
                        p.clone(),
                        Table {
                            arity: t.arity,
                            tuples: t.tuples.iter().map(|tu| tu.iter().map(map).collect()).collect(),
                        },
                    )
                })
                .collect(),
        }
    }

    /// A fresh element name not colliding with anything in the domain.
    pub fn fresh_element(&self, k: usize) -> Element {
        let mut name = format!("_c{k}");
        while self.domain.contains(&Element::Name(name.clone())) {
            name.insert(0, '_');
        }
        Element::Name(name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "domain".into(),
            serde_json::Value::Array(self.domain.iter().map(Element::to_json).collect()),
        );
        obj.insert(
            "created".into(),
            serde_json::Value::Array(self.created.iter().map(Element::to_json).collect()),
        );
        if !self.constants.is_empty() {
            let mut consts = serde_json::Map::new();
            for (k, v) in &self.constants {
                consts.insert(k.clone(), v.to_json());
            }
            obj.insert("constants".into(), serde_json::Value::Object(consts));
        }
        let mut preds = serde_json::Map::new();
        for (p, t) in &self.tables {
            let tuples: Vec<serde_json::Value> = t
                .tuples
                .iter()
                .map(|tu| serde_json::Value::Array(tu.iter().map(Element::to_json).collect()))
                .collect();
            preds.insert(p.clone(), serde_json::Value::Array(tuples));
        }
        obj.insert("predicates".into(), serde_json::Value::Object(preds));
        serde_json::Value::Object(obj)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Structure, StructureError> {
        let obj = v
            .as_object()
            .ok_or_else(|| StructureError::BadJson("expected an object".into()))?;
        let mut s = Structure::new();
        if let Some(domain) = obj.get("domain") {
            let arr = domain
                .as_array()
                .ok_or_else(|| StructureError::BadJson("`domain` must be an array".into()))?;
            for e in arr {
                s.add_initial(Element::from_json(e)?);
            }
        }
        if let Some(created) = obj.get("created") {
            let arr = created
                .as_array()
                .ok_or_else(|| StructureError::BadJson("`created` must be an array".into()))?;
            for e in arr {
                s.add_created(Element::from_json(e)?);
            }
        }
        if let Some(preds) = obj.get("predicates") {
            let map = preds
                .as_object()
                .ok_or_else(|| StructureError::BadJson("`predicates` must be an object".into()))?;
            for (p, tuples) in map {
                let arr = tuples
                    .as_array()
                    .ok_or_else(|| StructureError::BadJson(format!("`{p}` must map to an array")))?;
                if arr.is_empty() {
                    // Arity unknown from an empty listing; default nullary-false
                    // tables get fixed up against the vocabulary by callers.
                    s.declare_predicate(p.clone(), 0);
                }
                for tuple in arr {
                    let tuple = tuple
                        .as_array()
                        .ok_or_else(|| StructureError::BadJson(format!("tuples of `{p}` must be arrays")))?;
                    let mut elems = Vec::new();
                    for e in tuple {
                        elems.push(Element::from_json(e)?);
                    }
                    s.insert_fact(Atom::new(p.clone(), elems))
                        .map_err(|e| match e {
                            StructureError::NotInDomain(el) => StructureError::BadJson(format!(
                                "tuple of `{p}` mentions `{el}` which is not in the domain"
                            )),
                            other => other,
                        })?;
                }
            }
        }
        if let Some(consts) = obj.get("constants") {
            let map = consts
                .as_object()
                .ok_or_else(|| StructureError::BadJson("`constants` must be an object".into()))?;
            for (k, v) in map {
                let e = Element::from_json(v)?;
                s.set_constant(k.clone(), e)?;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.true_atoms().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Answers ground-atom queries during formula evaluation. The polarity flag
/// reports whether the atom occurrence sits under an even number of
/// negations; plain satisfaction ignores it, the causal engine does not.
pub trait AtomOracle {
    type Err: From<EvalError>;
    fn atom_holds(&mut self, atom: &Atom, positive: bool) -> Result<bool, Self::Err>;
}

struct StructureOracle<'a>(&'a Structure);

impl AtomOracle for StructureOracle<'_> {
    type Err = EvalError;
    fn atom_holds(&mut self, atom: &Atom, _positive: bool) -> Result<bool, EvalError> {
        if !self.0.has_predicate(&atom.pred) {
            return Err(EvalError::UnknownPredicate(atom.pred.clone()));
        }
        Ok(self.0.holds(atom))
    }
}

pub fn eval_term(
    t: &Term,
    constants: &BTreeMap<String, Element>,
    a: &Assignment,
) -> Result<Element, EvalError> {
    match t {
        Term::Var(v) => a
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Term::Const(c) => constants
            .get(c)
            .cloned()
            .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
        Term::Int(n) => Ok(Element::Int(*n)),
        Term::Sum(x, y) => {
            let x = eval_term(x, constants, a)?;
            let y = eval_term(y, constants, a)?;
            match (x.as_int(), y.as_int()) {
                (Some(x), Some(y)) => Ok(Element::Int(x + y)),
                // Sums over non-integers denote nothing; use an element that
                // can never be in a domain so membership tests come out false.
                _ => Ok(Element::Name("#undefined".into())),
            }
        }
    }
}

pub fn eval_atom_pattern(
    p: &AtomPattern,
    constants: &BTreeMap<String, Element>,
    a: &Assignment,
) -> Result<Atom, EvalError> {
    let mut args = Vec::with_capacity(p.args.len());
    for t in &p.args {
        args.push(eval_term(t, constants, a)?);
    }
    Ok(Atom::new(p.pred.clone(), args))
}

/// Tarskian evaluation parameterized by the atom oracle and the quantifier
/// domain. `positive` is threaded through so reduct-style oracles can tell
/// positive from negated occurrences.
pub fn eval_formula_with<O: AtomOracle>(
    f: &Formula,
    domain: &BTreeSet<Element>,
    constants: &BTreeMap<String, Element>,
    a: &mut Assignment,
    positive: bool,
    oracle: &mut O,
) -> Result<bool, O::Err> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom(p) => {
            let atom = eval_atom_pattern(p, constants, a).map_err(O::Err::from)?;
            oracle.atom_holds(&atom, positive)
        }
        Formula::Eq(x, y) => {
            let x = eval_term(x, constants, a).map_err(O::Err::from)?;
            let y = eval_term(y, constants, a).map_err(O::Err::from)?;
            Ok(x == y)
        }
        Formula::Gt(x, y) => {
            let x = eval_term(x, constants, a).map_err(O::Err::from)?;
            let y = eval_term(y, constants, a).map_err(O::Err::from)?;
            Ok(match (x.as_int(), y.as_int()) {
                (Some(x), Some(y)) => x > y,
                _ => false,
            })
        }
        Formula::Not(g) => Ok(!eval_formula_with(g, domain, constants, a, !positive, oracle)?),
        Formula::And(x, y) => Ok(eval_formula_with(x, domain, constants, a, positive, oracle)?
            && eval_formula_with(y, domain, constants, a, positive, oracle)?),
        Formula::Or(x, y) => Ok(eval_formula_with(x, domain, constants, a, positive, oracle)?
            || eval_formula_with(y, domain, constants, a, positive, oracle)?),
        Formula::Implies(x, y) => Ok(!eval_formula_with(x, domain, constants, a, !positive, oracle)?
            || eval_formula_with(y, domain, constants, a, positive, oracle)?),
        Formula::ForAll { var, qual, body } => {
            let elems: Vec<Element> = domain.iter().cloned().collect();
            for e in elems {
                a.bind(var.clone(), e);
                let q = eval_formula_with(qual, domain, constants, a, !positive, oracle)?;
                let ok = !q || eval_formula_with(body, domain, constants, a, positive, oracle)?;
                a.unbind(var);
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists { var, qual, body } => {
            let elems: Vec<Element> = domain.iter().cloned().collect();
            for e in elems {
                a.bind(var.clone(), e);
                let q = eval_formula_with(qual, domain, constants, a, positive, oracle)?;
                let ok = q && eval_formula_with(body, domain, constants, a, positive, oracle)?;
                a.unbind(var);
                if ok {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Standard first-order satisfaction of `f` in `s` under `a`. Quantifiers
/// range over the full current domain of `s`.
pub fn evaluate_formula(f: &Formula, s: &Structure, a: &Assignment) -> Result<bool, EvalError> {
    let mut a = a.clone();
    let mut oracle = StructureOracle(s);
    eval_formula_with(f, s.domain(), s.constants(), &mut a, true, &mut oracle)
}

/// Extends an exogenous structure to the default state: every endogenous
/// predicate interpreted as empty, no created elements.
pub fn default_state(
    vocab: &Vocabulary,
    exo_part: &Structure,
    endogenous: &BTreeSet<String>,
) -> Result<Structure, StructureError> {
    for p in exo_part.tables().keys() {
        if endogenous.contains(p) {
            return Err(StructureError::EndogenousInExoPart(p.clone()));
        }
    }
    if let Some(e) = exo_part.created().iter().next() {
        return Err(StructureError::CreatedInExoPart(e.to_string()));
    }
    let mut s = exo_part.clone();
    for c in &vocab.constants {
        if s.constant(c).is_none() {
            return Err(StructureError::MissingConstant(c.clone()));
        }
    }
    for (p, &arity) in &vocab.predicates {
        if endogenous.contains(p) {
            s.declare_predicate(p.clone(), arity);
        } else if !s.has_predicate(p) {
            s.declare_predicate(p.clone(), arity);
        }
    }
    Ok(s)
}

/// All assignments of the given variables to domain elements, in canonical
/// order.
pub fn assignments_over(
    vars: &[String],
    domain: &BTreeSet<Element>,
) -> Vec<Assignment> {
    let elems: Vec<Element> = domain.iter().cloned().collect();
    let mut out = vec![Assignment::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for a in &out {
            for e in &elems {
                let mut b = a.clone();
                b.bind(v.clone(), e.clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> Element {
        Element::name(name)
    }

    fn bicycle_final() -> Structure {
        let mut s = Structure::new();
        s.add_initial(a("BigGear"));
        s.add_initial(a("SmallGear"));
        s.set_constant("BigGear", a("BigGear")).unwrap();
        s.set_constant("SmallGear", a("SmallGear")).unwrap();
        s.declare_predicate("Pedal", 0);
        s.declare_predicate("Turn", 1);
        s.insert_fact(Atom::new("Pedal", vec![])).unwrap();
        s.insert_fact(Atom::new("Turn", vec![a("BigGear")])).unwrap();
        s.insert_fact(Atom::new("Turn", vec![a("SmallGear")])).unwrap();
        s
    }

    #[test]
    fn satisfaction_in_the_final_bicycle_state() {
        let f = Formula::atom("Turn", vec![Term::cst("SmallGear")]);
        assert!(evaluate_formula(&f, &bicycle_final(), &Assignment::new()).unwrap());
    }

    #[test]
    fn universal_negation_holds_vacuously() {
        let mut s = Structure::new();
        s.add_initial(a("e"));
        s.declare_predicate("P", 1);
        let f = Formula::forall(
            "x",
            Formula::True,
            Formula::not(Formula::atom("P", vec![Term::var("x")])),
        );
        assert!(evaluate_formula(&f, &s, &Assignment::new()).unwrap());
    }

    #[test]
    fn two_packages_on_one_channel_refutes_the_observation_negation() {
        let mut s = Structure::new();
        s.add_initial(a("b1"));
        s.add_initial(a("b2"));
        s.add_initial(Element::Int(3));
        s.declare_predicate("In", 2);
        s.insert_fact(Atom::new("In", vec![a("b1"), Element::Int(3)])).unwrap();
        s.insert_fact(Atom::new("In", vec![a("b2"), Element::Int(3)])).unwrap();
        // ~? t, b, b2 [b != b2] : In(b, t) & In(b2, t)
        let inner = Formula::exists(
            "t",
            Formula::True,
            Formula::exists(
                "b",
                Formula::True,
                Formula::exists(
                    "c",
                    Formula::not(Formula::Eq(Term::var("b"), Term::var("c"))),
                    Formula::and(
                        Formula::atom("In", vec![Term::var("b"), Term::var("t")]),
                        Formula::atom("In", vec![Term::var("c"), Term::var("t")]),
                    ),
                ),
            ),
        );
        let f = Formula::not(inner);
        assert!(!evaluate_formula(&f, &s, &Assignment::new()).unwrap());
    }

    #[test]
    fn unbound_variables_are_reported_by_name() {
        let s = bicycle_final();
        let f = Formula::atom("Turn", vec![Term::var("g")]);
        match evaluate_formula(&f, &s, &Assignment::new()) {
            Err(EvalError::UnboundVariable(v)) => assert_eq!(v, "g"),
            other => panic!("expected an unbound-variable error, got {other:?}"),
        }
    }

    #[test]
    fn sums_and_comparisons_work_on_the_integer_segment() {
        let mut s = Structure::new();
        for t in 0..=3 {
            s.add_initial(Element::Int(t));
        }
        s.declare_predicate("OnCh", 1);
        s.insert_fact(Atom::new("OnCh", vec![Element::Int(3)])).unwrap();
        let mut asg = Assignment::new();
        asg.bind("t", Element::Int(2));
        let f = Formula::atom("OnCh", vec![Term::sum(Term::var("t"), Term::Int(1))]);
        assert!(evaluate_formula(&f, &s, &asg).unwrap());
        let g = Formula::Gt(Term::var("t"), Term::Int(0));
        assert!(evaluate_formula(&g, &s, &asg).unwrap());
        // a sum that leaves the segment denotes nothing and fails membership
        let mut far = Assignment::new();
        far.bind("t", Element::Int(3));
        let h = Formula::atom("OnCh", vec![Term::sum(Term::var("t"), Term::Int(1))]);
        assert!(!evaluate_formula(&h, &s, &far).unwrap());
    }

    #[test]
    fn default_state_extends_the_exogenous_part() {
        let mut vocab = Vocabulary::new();
        vocab.add_predicate("Pedal", 0).unwrap();
        vocab.add_predicate("Turn", 1).unwrap();
        vocab.constants.insert("BigGear".into());
        vocab.constants.insert("SmallGear".into());
        let mut exo = Structure::new();
        exo.add_initial(a("BigGear"));
        exo.add_initial(a("SmallGear"));
        exo.set_constant("BigGear", a("BigGear")).unwrap();
        exo.set_constant("SmallGear", a("SmallGear")).unwrap();
        exo.declare_predicate("Pedal", 0);
        exo.insert_fact(Atom::new("Pedal", vec![])).unwrap();
        let endo: BTreeSet<String> = ["Turn".to_string()].into_iter().collect();
        let s = default_state(&vocab, &exo, &endo).unwrap();
        assert!(s.holds(&Atom::new("Pedal", vec![])));
        assert!(s.table("Turn").unwrap().tuples.is_empty());
    }

    #[test]
    fn default_state_of_nothing_is_empty() {
        let s = default_state(&Vocabulary::new(), &Structure::new(), &BTreeSet::new()).unwrap();
        assert_eq!(s, Structure::new());
    }

    #[test]
    fn default_state_rejects_interpreted_endogenous_predicates() {
        let mut vocab = Vocabulary::new();
        vocab.add_predicate("Turn", 1).unwrap();
        let mut exo = Structure::new();
        exo.add_initial(a("g"));
        exo.declare_predicate("Turn", 1);
        let endo: BTreeSet<String> = ["Turn".to_string()].into_iter().collect();
        assert!(matches!(
            default_state(&vocab, &exo, &endo),
            Err(StructureError::EndogenousInExoPart(p)) if p == "Turn"
        ));
    }

    #[test]
    fn canonicalization_identifies_created_renamings() {
        let build = |first: &str, second: &str| {
            let mut s = Structure::new();
            s.add_created(a(first));
            s.add_created(a(second));
            s.declare_predicate("P", 1);
            s.declare_predicate("Q", 1);
            s.insert_fact(Atom::new("P", vec![a(first)])).unwrap();
            s.insert_fact(Atom::new("Q", vec![a(second)])).unwrap();
            s
        };
        let one = build("x", "y");
        let two = build("y", "x");
        assert_ne!(one, two);
        assert_eq!(one.canonicalize_created(), two.canonicalize_created());
    }

    #[test]
    fn structure_json_round_trips() {
        let s = bicycle_final();
        let j = s.to_json();
        let back = Structure::from_json(&j).unwrap();
        assert_eq!(s, back);
    }
}
