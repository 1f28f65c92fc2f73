//! Recursive-descent parser for causal theories and combined theories.
//!
//! Variable discipline: an identifier in term position is a variable when a
//! quantifier binds it in scope. Unbound identifiers are constants when they
//! start with an uppercase letter (or are quoted like `'a'`); an unbound
//! lowercase identifier is reported as a free variable, as is any unbound
//! use of a name that is bound elsewhere in the theory.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{AtomPattern, Formula, Term};

use super::lex::{tokenize, Cursor, ParseError, Tok};
use super::{CausalTheory, Cee, FoClogTheory};

const RESERVED: &[&str] = &["All", "Sel", "New", "And", "Or", "true", "false", "not"];

pub(crate) struct Names {
    scope: Vec<String>,
    binders: BTreeSet<String>,
    const_uses: BTreeMap<String, (usize, usize)>,
    arities: BTreeMap<String, usize>,
}

impl Names {
    pub(crate) fn new() -> Names {
        Names {
            scope: Vec::new(),
            binders: BTreeSet::new(),
            const_uses: BTreeMap::new(),
            arities: BTreeMap::new(),
        }
    }

    fn enter(&mut self, var: &str, line: usize, col: usize) -> Result<(), ParseError> {
        if self.scope.iter().any(|v| v == var) {
            return Err(ParseError::new(
                line,
                col,
                format!("variable `{var}` shadows an enclosing binding"),
            ));
        }
        self.scope.push(var.to_string());
        self.binders.insert(var.to_string());
        Ok(())
    }

    fn leave(&mut self) {
        self.scope.pop();
    }

    fn term_ident(&mut self, name: String, line: usize, col: usize) -> Term {
        if self.scope.iter().any(|v| *v == name) {
            Term::Var(name)
        } else {
            self.const_uses.entry(name.clone()).or_insert((line, col));
            Term::Const(name)
        }
    }

    fn record_pred(&mut self, name: &str, arity: usize, line: usize, col: usize) -> Result<(), ParseError> {
        match self.arities.get(name) {
            Some(&a) if a != arity => Err(ParseError::new(
                line,
                col,
                format!("predicate `{name}` used with arity {arity} but earlier with arity {a}"),
            )),
            _ => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub(crate) fn finish(self) -> Result<(), ParseError> {
        for (name, (line, col)) in self.const_uses {
            if self.binders.contains(&name) {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("free occurrence of variable `{name}`"),
                ));
            }
            if name.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("free variable `{name}` (lowercase identifiers are variables; write '{name}' for a constant)"),
                ));
            }
        }
        Ok(())
    }
}

pub fn parse_clog(text: &str) -> Result<CausalTheory, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut names = Names::new();
    let mut cees = Vec::new();
    while *cur.peek() != Tok::Eof {
        let cee = parse_cee(&mut cur, &mut names)?;
        cur.eat(&Tok::Dot)?;
        cees.push(cee);
    }
    names.finish()?;
    Ok(CausalTheory::fold(cees))
}

pub fn parse_foclog(text: &str) -> Result<FoClogTheory, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut names = Names::new();
    let mut cees = Vec::new();
    let mut saw_block = false;
    if *cur.peek() == Tok::LBrace {
        saw_block = true;
        cur.next();
        while *cur.peek() != Tok::RBrace {
            if *cur.peek() == Tok::Eof {
                return Err(cur.error("unterminated causal block: expected `}`"));
            }
            let cee = parse_cee(&mut cur, &mut names)?;
            cur.eat(&Tok::Dot)?;
            cees.push(cee);
        }
        cur.next();
    }
    let mut sentences = Vec::new();
    while *cur.peek() != Tok::Eof {
        if *cur.peek() == Tok::LBrace {
            return Err(if saw_block {
                cur.error("a theory has a single causal block")
            } else {
                cur.error("the causal block must precede the sentences")
            });
        }
        let f = parse_formula(&mut cur, &mut names)?;
        cur.eat(&Tok::Dot)?;
        let free = f.free_variables();
        if let Some(v) = free.iter().next() {
            return Err(cur.error(format!("sentence has free variable `{v}`")));
        }
        sentences.push(f);
    }
    names.finish()?;
    Ok(FoClogTheory {
        causal: CausalTheory::fold(cees),
        sentences,
    })
}

pub(crate) fn parse_cee(cur: &mut Cursor, names: &mut Names) -> Result<Cee, ParseError> {
    let mut left = parse_cee_or(cur, names)?;
    while *cur.peek() == Tok::LeftArrow {
        cur.next();
        let body = parse_formula(cur, names)?;
        left = Cee::rule(left, body);
    }
    Ok(left)
}

fn parse_cee_or(cur: &mut Cursor, names: &mut Names) -> Result<Cee, ParseError> {
    let mut left = parse_cee_and(cur, names)?;
    while cur.at_ident("Or") {
        cur.next();
        let right = parse_cee_and(cur, names)?;
        left = Cee::or(left, right);
    }
    Ok(left)
}

fn parse_cee_and(cur: &mut Cursor, names: &mut Names) -> Result<Cee, ParseError> {
    let mut left = parse_cee_prim(cur, names)?;
    while cur.at_ident("And") {
        cur.next();
        let right = parse_cee_prim(cur, names)?;
        left = Cee::and(left, right);
    }
    Ok(left)
}

fn parse_var_list(cur: &mut Cursor) -> Result<Vec<(String, usize, usize)>, ParseError> {
    let mut vars = Vec::new();
    loop {
        let (line, col) = cur.here();
        match cur.next().tok {
            Tok::Ident(v) if !RESERVED.contains(&v.as_str()) => vars.push((v, line, col)),
            other => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("expected a variable name, found {other}"),
                ))
            }
        }
        if *cur.peek() == Tok::Comma {
            cur.next();
        } else {
            return Ok(vars);
        }
    }
}

fn parse_cee_prim(cur: &mut Cursor, names: &mut Names) -> Result<Cee, ParseError> {
    match cur.peek().clone() {
        Tok::LParen => {
            cur.next();
            let cee = parse_cee(cur, names)?;
            cur.eat(&Tok::RParen)?;
            Ok(cee)
        }
        Tok::Ident(word) if word == "All" || word == "Sel" => {
            cur.next();
            let vars = parse_var_list(cur)?;
            for (v, l, c) in &vars {
                names.enter(v, *l, *c)?;
            }
            cur.eat(&Tok::Colon)?;
            let qual = parse_formula(cur, names)?;
            cur.eat(&Tok::RightArrow)?;
            let body = parse_cee(cur, names)?;
            for _ in &vars {
                names.leave();
            }
            // the qualification attaches to the innermost variable
            let mut cee = body;
            for (i, (v, _, _)) in vars.iter().enumerate().rev() {
                let q = if i == vars.len() - 1 {
                    qual.clone()
                } else {
                    Formula::True
                };
                cee = if word == "All" {
                    Cee::all(v.clone(), q, cee)
                } else {
                    Cee::sel(v.clone(), q, cee)
                };
            }
            Ok(cee)
        }
        Tok::Ident(word) if word == "New" => {
            cur.next();
            let vars = parse_var_list(cur)?;
            for (v, l, c) in &vars {
                names.enter(v, *l, *c)?;
            }
            cur.eat(&Tok::RightArrow)?;
            let body = parse_cee(cur, names)?;
            for _ in &vars {
                names.leave();
            }
            let mut cee = body;
            for (v, _, _) in vars.iter().rev() {
                cee = Cee::new_elem(v.clone(), cee);
            }
            Ok(cee)
        }
        Tok::Ident(word) if RESERVED.contains(&word.as_str()) => {
            Err(cur.error(format!("`{word}` cannot start a causal expression")))
        }
        Tok::Ident(_) => {
            let atom = parse_atom(cur, names)?;
            Ok(Cee::Atom(atom))
        }
        other => Err(cur.error(format!("expected a causal expression, found {other}"))),
    }
}

fn parse_atom(cur: &mut Cursor, names: &mut Names) -> Result<AtomPattern, ParseError> {
    let (line, col) = cur.here();
    let name = match cur.next().tok {
        Tok::Ident(s) => s,
        other => return Err(ParseError::new(line, col, format!("expected a predicate, found {other}"))),
    };
    let mut args = Vec::new();
    if *cur.peek() == Tok::LParen {
        cur.next();
        loop {
            args.push(parse_term(cur, names)?);
            if *cur.peek() == Tok::Comma {
                cur.next();
            } else {
                break;
            }
        }
        cur.eat(&Tok::RParen)?;
    }
    names.record_pred(&name, args.len(), line, col)?;
    Ok(AtomPattern::new(name, args))
}

pub(crate) fn parse_term(cur: &mut Cursor, names: &mut Names) -> Result<Term, ParseError> {
    let mut left = parse_term_factor(cur, names)?;
    while *cur.peek() == Tok::Plus {
        cur.next();
        let right = parse_term_factor(cur, names)?;
        left = Term::sum(left, right);
    }
    Ok(left)
}

fn parse_term_factor(cur: &mut Cursor, names: &mut Names) -> Result<Term, ParseError> {
    if *cur.peek() == Tok::LParen {
        cur.next();
        let t = parse_term(cur, names)?;
        cur.eat(&Tok::RParen)?;
        return Ok(t);
    }
    let (line, col) = cur.here();
    match cur.next().tok {
        Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => Ok(names.term_ident(s, line, col)),
        Tok::Quoted(s) => Ok(Term::Const(s)),
        Tok::Int(n) => Ok(Term::Int(n)),
        other => Err(ParseError::new(line, col, format!("expected a term, found {other}"))),
    }
}

pub(crate) fn parse_formula(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    let mut left = parse_implies(cur, names)?;
    while *cur.peek() == Tok::Iff {
        cur.next();
        let right = parse_implies(cur, names)?;
        left = Formula::and(
            Formula::implies(left.clone(), right.clone()),
            Formula::implies(right, left),
        );
    }
    Ok(left)
}

fn parse_implies(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    let left = parse_or_formula(cur, names)?;
    if *cur.peek() == Tok::FatArrow {
        cur.next();
        let right = parse_implies(cur, names)?;
        Ok(Formula::implies(left, right))
    } else {
        Ok(left)
    }
}

fn parse_or_formula(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    let mut left = parse_and_formula(cur, names)?;
    while *cur.peek() == Tok::Pipe {
        cur.next();
        let right = parse_and_formula(cur, names)?;
        left = Formula::or(left, right);
    }
    Ok(left)
}

fn parse_and_formula(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    let mut left = parse_unary_formula(cur, names)?;
    while *cur.peek() == Tok::Amp {
        cur.next();
        let right = parse_unary_formula(cur, names)?;
        left = Formula::and(left, right);
    }
    Ok(left)
}

fn parse_unary_formula(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    match cur.peek().clone() {
        Tok::Tilde => {
            cur.next();
            Ok(Formula::not(parse_unary_formula(cur, names)?))
        }
        Tok::Bang | Tok::Question => {
            let universal = *cur.peek() == Tok::Bang;
            cur.next();
            let vars = parse_var_list(cur)?;
            for (v, l, c) in &vars {
                names.enter(v, *l, *c)?;
            }
            let qual = if *cur.peek() == Tok::LBracket {
                cur.next();
                let q = parse_formula(cur, names)?;
                cur.eat(&Tok::RBracket)?;
                q
            } else {
                Formula::True
            };
            cur.eat(&Tok::Colon)?;
            let body = parse_formula(cur, names)?;
            for _ in &vars {
                names.leave();
            }
            let mut f = body;
            for (i, (v, _, _)) in vars.iter().enumerate().rev() {
                let q = if i == vars.len() - 1 {
                    qual.clone()
                } else {
                    Formula::True
                };
                f = if universal {
                    Formula::forall(v.clone(), q, f)
                } else {
                    Formula::exists(v.clone(), q, f)
                };
            }
            Ok(f)
        }
        _ => parse_formula_atom(cur, names),
    }
}

fn parse_formula_atom(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    match cur.peek().clone() {
        Tok::LParen => {
            cur.next();
            let f = parse_formula(cur, names)?;
            cur.eat(&Tok::RParen)?;
            Ok(f)
        }
        Tok::Ident(word) if word == "true" => {
            cur.next();
            Ok(Formula::True)
        }
        Tok::Ident(word) if word == "false" => {
            cur.next();
            Ok(Formula::False)
        }
        Tok::Int(_) | Tok::Quoted(_) => parse_comparison(cur, names),
        Tok::Ident(word) if RESERVED.contains(&word.as_str()) => {
            Err(cur.error(format!("`{word}` cannot appear in a formula")))
        }
        Tok::Ident(_) => {
            // A predicate application, unless a comparison operator follows a
            // bare identifier or a sum begins.
            if *cur.peek2() == Tok::LParen {
                let atom = parse_atom(cur, names)?;
                Ok(Formula::Atom(atom))
            } else if matches!(cur.peek2(), Tok::Eq | Tok::NotEq | Tok::Gt | Tok::Plus) {
                parse_comparison(cur, names)
            } else {
                let atom = parse_atom(cur, names)?;
                Ok(Formula::Atom(atom))
            }
        }
        other => Err(cur.error(format!("expected a formula, found {other}"))),
    }
}

fn parse_comparison(cur: &mut Cursor, names: &mut Names) -> Result<Formula, ParseError> {
    let left = parse_term(cur, names)?;
    let (line, col) = cur.here();
    match cur.next().tok {
        Tok::Eq => Ok(Formula::Eq(left, parse_term(cur, names)?)),
        Tok::NotEq => Ok(Formula::not(Formula::Eq(left, parse_term(cur, names)?))),
        Tok::Gt => Ok(Formula::Gt(left, parse_term(cur, names)?)),
        other => Err(ParseError::new(
            line,
            col,
            format!("expected `=`, `!=`, or `>` after a term, found {other}"),
        )),
    }
}
