//! Canonical pretty-printers. Rendering then reparsing yields a structurally
//! identical AST; parenthesization follows the documented precedence table
//! (`<-` binds loosest, then `Or`, then `And`; in formulas `=>` binds looser
//! than `|`, which binds looser than `&`).

use std::collections::BTreeSet;

use crate::logic::{Formula, Term};

use super::{CausalTheory, Cee, EDisjProgram, EDisjRule, FoClogTheory};

const RESERVED: &[&str] = &["All", "Sel", "New", "And", "Or", "true", "false", "not"];

struct Ctx {
    binders: BTreeSet<String>,
}

impl Ctx {
    fn for_cee(cee: &Cee) -> Ctx {
        let mut binders = BTreeSet::new();
        collect_cee_binders(cee, &mut binders);
        Ctx { binders }
    }

    fn for_formula(f: &Formula) -> Ctx {
        let mut binders = BTreeSet::new();
        collect_formula_binders(f, &mut binders);
        Ctx { binders }
    }

    fn constant(&self, name: &str) -> String {
        let plain = name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && !self.binders.contains(name)
            && !RESERVED.contains(&name);
        if plain {
            name.to_string()
        } else {
            format!("'{name}'")
        }
    }
}

fn collect_cee_binders(cee: &Cee, out: &mut BTreeSet<String>) {
    match cee {
        Cee::Atom(_) => {}
        Cee::Rule { head, body } => {
            collect_cee_binders(head, out);
            collect_formula_binders(body, out);
        }
        Cee::And(a, b) | Cee::Or(a, b) => {
            collect_cee_binders(a, out);
            collect_cee_binders(b, out);
        }
        Cee::All { var, qual, body } | Cee::Sel { var, qual, body } => {
            out.insert(var.clone());
            collect_formula_binders(qual, out);
            collect_cee_binders(body, out);
        }
        Cee::New { var, body } => {
            out.insert(var.clone());
            collect_cee_binders(body, out);
        }
    }
}

fn collect_formula_binders(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) | Formula::Gt(..) => {}
        Formula::Not(g) => collect_formula_binders(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_formula_binders(a, out);
            collect_formula_binders(b, out);
        }
        Formula::ForAll { var, qual, body } | Formula::Exists { var, qual, body } => {
            out.insert(var.clone());
            collect_formula_binders(qual, out);
            collect_formula_binders(body, out);
        }
    }
}

fn term(t: &Term, ctx: &Ctx, paren_sum: bool) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Const(c) => ctx.constant(c),
        Term::Int(n) => n.to_string(),
        Term::Sum(a, b) => {
            let s = format!("{} + {}", term(a, ctx, false), term(b, ctx, true));
            if paren_sum {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

fn atom(pred: &str, args: &[Term], ctx: &Ctx) -> String {
    if args.is_empty() {
        pred.to_string()
    } else {
        let args: Vec<String> = args.iter().map(|t| term(t, ctx, false)).collect();
        format!("{}({})", pred, args.join(", "))
    }
}

fn formula(f: &Formula, ctx: &Ctx, min: u8) -> String {
    let (s, prec) = match f {
        Formula::True => ("true".to_string(), 5),
        Formula::False => ("false".to_string(), 5),
        Formula::Atom(a) => (atom(&a.pred, &a.args, ctx), 5),
        Formula::Eq(a, b) => (
            format!("{} = {}", term(a, ctx, false), term(b, ctx, false)),
            5,
        ),
        Formula::Gt(a, b) => (
            format!("{} > {}", term(a, ctx, false), term(b, ctx, false)),
            5,
        ),
        Formula::Not(g) => match g.as_ref() {
            Formula::Eq(a, b) => (
                format!("{} != {}", term(a, ctx, false), term(b, ctx, false)),
                5,
            ),
            _ => (format!("~{}", formula(g, ctx, 4)), 4),
        },
        Formula::And(a, b) => (
            format!("{} & {}", formula(a, ctx, 3), formula(b, ctx, 4)),
            3,
        ),
        Formula::Or(a, b) => (
            format!("{} | {}", formula(a, ctx, 2), formula(b, ctx, 3)),
            2,
        ),
        Formula::Implies(a, b) => (
            format!("{} => {}", formula(a, ctx, 2), formula(b, ctx, 1)),
            1,
        ),
        Formula::ForAll { var, qual, body } | Formula::Exists { var, qual, body } => {
            let sigil = if matches!(f, Formula::ForAll { .. }) {
                "!"
            } else {
                "?"
            };
            let q = if **qual == Formula::True {
                String::new()
            } else {
                format!(" [{}]", formula(qual, ctx, 0))
            };
            (format!("{sigil}{var}{q} : {}", formula(body, ctx, 0)), 0)
        }
    };
    if prec < min {
        format!("({s})")
    } else {
        s
    }
}

fn cee(c: &Cee, ctx: &Ctx, min: u8) -> String {
    let (s, prec) = match c {
        Cee::Atom(a) => (atom(&a.pred, &a.args, ctx), 4),
        Cee::Rule { head, body } => (
            format!("{} <- {}", cee(head, ctx, 2), formula(body, ctx, 0)),
            1,
        ),
        Cee::Or(a, b) => (format!("{} Or {}", cee(a, ctx, 2), cee(b, ctx, 3)), 2),
        Cee::And(a, b) => (format!("{} And {}", cee(a, ctx, 3), cee(b, ctx, 4)), 3),
        Cee::All { var, qual, body } => (
            format!("All {var} : {} -> {}", formula(qual, ctx, 0), cee(body, ctx, 0)),
            0,
        ),
        Cee::Sel { var, qual, body } => (
            format!("Sel {var} : {} -> {}", formula(qual, ctx, 0), cee(body, ctx, 0)),
            0,
        ),
        Cee::New { var, body } => (format!("New {var} -> {}", cee(body, ctx, 0)), 0),
    };
    if prec < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn render_cee(c: &Cee) -> String {
    let ctx = Ctx::for_cee(c);
    cee(c, &ctx, 0)
}

pub fn render_formula(f: &Formula) -> String {
    let ctx = Ctx::for_formula(f);
    formula(f, &ctx, 0)
}

pub fn render_causal_theory(t: &CausalTheory) -> String {
    let ctx = match &t.root {
        Some(root) => Ctx::for_cee(root),
        None => Ctx {
            binders: BTreeSet::new(),
        },
    };
    let mut out = String::new();
    for c in t.conjuncts() {
        out.push_str(&cee(c, &ctx, 0));
        out.push_str(".\n");
    }
    out
}

pub fn render_foclog(t: &FoClogTheory) -> String {
    let mut binders = BTreeSet::new();
    if let Some(root) = &t.causal.root {
        collect_cee_binders(root, &mut binders);
    }
    for s in &t.sentences {
        collect_formula_binders(s, &mut binders);
    }
    let ctx = Ctx { binders };
    let mut out = String::new();
    if let Some(_root) = &t.causal.root {
        out.push_str("{\n");
        for c in t.causal.conjuncts() {
            out.push_str("  ");
            out.push_str(&cee(c, &ctx, 0));
            out.push_str(".\n");
        }
        out.push_str("}\n");
    }
    for s in &t.sentences {
        out.push_str(&formula(s, &ctx, 0));
        out.push_str(".\n");
    }
    out
}

fn edlp_term(t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Const(c) => {
            let plain = c.chars().next().is_some_and(|ch| ch.is_ascii_lowercase())
                && !RESERVED.contains(&c.as_str());
            if plain {
                c.clone()
            } else {
                format!("'{c}'")
            }
        }
        Term::Int(n) => n.to_string(),
        Term::Sum(a, b) => format!("{} + {}", edlp_term(a), edlp_term(b)),
    }
}

fn edlp_atom(a: &crate::logic::AtomPattern) -> String {
    if a.args.is_empty() {
        a.pred.clone()
    } else {
        let args: Vec<String> = a.args.iter().map(edlp_term).collect();
        format!("{}({})", a.pred, args.join(", "))
    }
}

pub fn render_rule(r: &EDisjRule) -> String {
    let head: Vec<String> = r.head.iter().map(edlp_atom).collect();
    let mut body: Vec<String> = r.pos.iter().map(edlp_atom).collect();
    body.extend(r.neg.iter().map(|a| format!("not {}", edlp_atom(a))));
    match (head.is_empty(), body.is_empty()) {
        (false, true) => format!("{}.", head.join(" ; ")),
        (false, false) => format!("{} :- {}.", head.join(" ; "), body.join(", ")),
        (true, false) => format!(":- {}.", body.join(", ")),
        (true, true) => String::from("."),
    }
}

pub fn render_program(p: &EDisjProgram) -> String {
    let mut out = String::new();
    for r in &p.rules {
        out.push_str(&render_rule(r));
        out.push('\n');
    }
    out
}
