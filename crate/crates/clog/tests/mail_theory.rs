//! The mail protocol: object creation plus a bounded time segment. One
//! package is created when send is hit; it stays on the channel until it is
//! received at a nondeterministically chosen later time.

use std::collections::BTreeSet;

use clog::engine::EngineOptions;
use clog::logic::{Atom, Element, Structure};
use clog::surface::parse_clog;
use clog::{classify_symbols, default_state, enumerate_models, FoClogTheory};

const MAIL: &str = "
All m, t : Mail(m) & HitSend(m, t) ->
  New p -> (Pack(p) And Cont(p, m) And OnCh(p, t + 1) And
            (Sel d : d > 0 -> Received(p, t + d))).
All p, t : Pack(p) & OnCh(p, t) & ~Received(p, t) -> OnCh(p, t + 1).
";

fn mail_exo(t_max: i64) -> Structure {
    let mut s = Structure::new();
    s.add_initial(Element::name("MyMail"));
    for t in 0..=t_max {
        s.add_initial(Element::Int(t));
    }
    s.declare_predicate("Mail", 1);
    s.declare_predicate("HitSend", 2);
    s.insert_fact(Atom::new("Mail", vec![Element::name("MyMail")]))
        .unwrap();
    s.insert_fact(Atom::new(
        "HitSend",
        vec![Element::name("MyMail"), Element::Int(0)],
    ))
    .unwrap();
    s
}

#[test]
fn classification_matches_the_worked_example() {
    let theory: FoClogTheory = parse_clog(MAIL).unwrap().into();
    let (endo, exo) = classify_symbols(&theory);
    let want_endo: BTreeSet<String> = ["Pack", "Cont", "OnCh", "Received"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let want_exo: BTreeSet<String> = ["Mail", "HitSend"].iter().map(|s| s.to_string()).collect();
    assert_eq!(endo, want_endo);
    assert_eq!(exo, want_exo);
}

#[test]
fn default_state_makes_all_endogenous_predicates_empty() {
    let theory: FoClogTheory = parse_clog(MAIL).unwrap().into();
    let (endo, _) = classify_symbols(&theory);
    let vocab = theory.vocabulary().unwrap();
    let s = default_state(&vocab, &mail_exo(8), &endo).unwrap();
    for p in &endo {
        assert!(s.table(p).unwrap().tuples.is_empty(), "{p} not empty");
    }
    assert!(s.created().is_empty());
}

#[test]
fn eight_models_one_per_delay() {
    let theory: FoClogTheory = parse_clog(MAIL).unwrap().into();
    let models = enumerate_models(&theory, &mail_exo(8), &EngineOptions::with_budget(1)).unwrap();
    assert_eq!(models.models.len(), 8);

    let pack = Element::name("_c0");
    for d in 1..=8i64 {
        let entry = models
            .models
            .iter()
            .find(|e| {
                e.structure
                    .holds(&Atom::new("Received", vec![pack.clone(), Element::Int(d)]))
            })
            .unwrap_or_else(|| panic!("no model with delay {d}"));
        let m = &entry.structure;
        assert!(m.holds(&Atom::new("Pack", vec![pack.clone()])));
        assert!(m.holds(&Atom::new(
            "Cont",
            vec![pack.clone(), Element::name("MyMail")]
        )));
        for t in 1..=d {
            assert!(m.holds(&Atom::new("OnCh", vec![pack.clone(), Element::Int(t)])));
        }
        for t in (d + 1)..=8 {
            assert!(!m.holds(&Atom::new("OnCh", vec![pack.clone(), Element::Int(t)])));
        }
        assert!(!entry.budget_limited);
    }
}

#[test]
fn the_paper_run_is_the_delay_seven_model() {
    let theory: FoClogTheory = parse_clog(MAIL).unwrap().into();
    let models = enumerate_models(&theory, &mail_exo(8), &EngineOptions::with_budget(1)).unwrap();
    let pack = Element::name("_c0");
    let seven = models
        .structures()
        .into_iter()
        .find(|m| m.holds(&Atom::new("Received", vec![pack.clone(), Element::Int(7)])));
    let m = seven.expect("the delay-7 model exists");
    for t in 1..=7 {
        assert!(m.holds(&Atom::new("OnCh", vec![pack.clone(), Element::Int(t)])));
    }
    assert_eq!(m.created().len(), 1);
}

#[test]
fn observation_of_two_packages_is_unsatisfiable_at_budget_one() {
    let text = format!(
        "{{\n{MAIL}\n}}\n? t, p1, p2 [p1 != p2] : OnCh(p1, t) & OnCh(p2, t).\n"
    );
    let theory = clog::parse_foclog(&text).unwrap();
    let models = enumerate_models(&theory, &mail_exo(4), &EngineOptions::with_budget(1)).unwrap();
    assert!(models.models.is_empty());
}
