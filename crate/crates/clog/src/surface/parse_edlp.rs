//! Parser for E-disjunctive programs. Follows the usual ASP lexical
//! conventions: identifiers starting with an uppercase letter are variables,
//! everything else (including quoted identifiers and integers) is a constant.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{AtomPattern, Term};

use super::lex::{tokenize, Cursor, ParseError, Tok};
use super::{EDisjProgram, EDisjRule};

const RESERVED: &[&str] = &["All", "Sel", "New", "And", "Or", "true", "false", "not"];

pub fn parse_edlp(text: &str) -> Result<EDisjProgram, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    let mut rules = Vec::new();
    while *cur.peek() != Tok::Eof {
        rules.push(parse_rule(&mut cur, &mut arities)?);
    }
    Ok(EDisjProgram { rules })
}

fn parse_rule(cur: &mut Cursor, arities: &mut BTreeMap<String, usize>) -> Result<EDisjRule, ParseError> {
    let (line, col) = cur.here();
    let mut head = Vec::new();
    if *cur.peek() != Tok::ColonDash {
        loop {
            head.push(parse_atom(cur, arities)?);
            if *cur.peek() == Tok::Semi {
                cur.next();
            } else {
                break;
            }
        }
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    if *cur.peek() == Tok::ColonDash {
        cur.next();
        loop {
            if cur.at_ident("not") {
                cur.next();
                neg.push(parse_atom(cur, arities)?);
            } else {
                pos.push(parse_atom(cur, arities)?);
            }
            if *cur.peek() == Tok::Comma {
                cur.next();
            } else {
                break;
            }
        }
    }
    cur.eat(&Tok::Dot)?;
    if head.is_empty() && pos.is_empty() && neg.is_empty() {
        return Err(ParseError::new(line, col, "rule has neither head nor body"));
    }

    let mut pos_vars = BTreeSet::new();
    for a in &pos {
        for t in &a.args {
            t.variables(&mut pos_vars);
        }
    }
    for a in &neg {
        let mut vars = BTreeSet::new();
        for t in &a.args {
            t.variables(&mut vars);
        }
        for v in vars {
            if !pos_vars.contains(&v) {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("unsafe rule: variable `{v}` occurs under `not` but not in the positive body"),
                ));
            }
        }
    }

    let (universal, existential) = EDisjRule::partition_variables(&head, &pos, &neg);
    Ok(EDisjRule {
        universal,
        existential,
        head,
        pos,
        neg,
    })
}

fn parse_atom(cur: &mut Cursor, arities: &mut BTreeMap<String, usize>) -> Result<AtomPattern, ParseError> {
    let (line, col) = cur.here();
    let name = match cur.next().tok {
        Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s,
        other => {
            return Err(ParseError::new(
                line,
                col,
                format!("expected a predicate, found {other}"),
            ))
        }
    };
    let mut args = Vec::new();
    if *cur.peek() == Tok::LParen {
        cur.next();
        loop {
            args.push(parse_term(cur)?);
            if *cur.peek() == Tok::Comma {
                cur.next();
            } else {
                break;
            }
        }
        cur.eat(&Tok::RParen)?;
    }
    match arities.get(&name) {
        Some(&a) if a != args.len() => {
            return Err(ParseError::new(
                line,
                col,
                format!(
                    "predicate `{name}` used with arity {} but earlier with arity {a}",
                    args.len()
                ),
            ))
        }
        _ => {
            arities.insert(name.clone(), args.len());
        }
    }
    Ok(AtomPattern::new(name, args))
}

fn parse_term(cur: &mut Cursor) -> Result<Term, ParseError> {
    let (line, col) = cur.here();
    match cur.next().tok {
        Tok::Ident(s) if s == "not" => Err(ParseError::new(line, col, "`not` cannot be a term")),
        Tok::Ident(s) => {
            if s.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                Ok(Term::Var(s))
            } else {
                Ok(Term::Const(s))
            }
        }
        Tok::Quoted(s) => Ok(Term::Const(s)),
        Tok::Int(n) => Ok(Term::Int(n)),
        other => Err(ParseError::new(line, col, format!("expected a term, found {other}"))),
    }
}
