//! Parser and printer behavior for the three surface languages: structural
//! expectations on the worked examples, located errors, and round-trip
//! identities on generated syntax trees.

use clog::gen::{random_ast_foclog, random_ast_program, random_ast_theory};
use clog::logic::{Formula, Term};
use clog::surface::{
    parse_clog, parse_edlp, parse_foclog, render_causal_theory, render_foclog, render_program,
    CausalTheory, Cee,
};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn the_gear_rules_fold_left_to_right() {
    let t = parse_clog(
        "Turn(BigGear) <- Pedal.
         Turn(BigGear) <- Turn(SmallGear).
         Turn(SmallGear) <- Turn(BigGear).",
    )
    .unwrap();
    let Some(Cee::And(left, r3)) = &t.root else {
        panic!("expected a left fold, got {:?}", t.root);
    };
    assert!(matches!(left.as_ref(), Cee::And(..)));
    assert!(matches!(r3.as_ref(), Cee::Rule { .. }));
    assert_eq!(t.conjuncts().len(), 3);
}

#[test]
fn a_disjunction_parses_to_or() {
    let t = parse_clog("P Or Q.").unwrap();
    assert_eq!(
        t.root,
        Some(Cee::or(Cee::atom("P", vec![]), Cee::atom("Q", vec![])))
    );
}

#[test]
fn the_empty_file_is_the_neutral_theory() {
    let t = parse_clog("// nothing here\n").unwrap();
    assert_eq!(t, CausalTheory::empty());
    assert_eq!(render_causal_theory(&t), "");
}

#[test]
fn quantifier_sugar_attaches_the_qualification_innermost() {
    let t = parse_clog("All m, t : Mail(m) -> OnCh(m, t).").unwrap();
    let Some(Cee::All { var, qual, body }) = &t.root else {
        panic!();
    };
    assert_eq!(var, "m");
    assert_eq!(*qual, Formula::True);
    let Cee::All { var, qual, .. } = body.as_ref() else {
        panic!();
    };
    assert_eq!(var, "t");
    assert_eq!(*qual, Formula::atom("Mail", vec![Term::var("m")]));
}

#[test]
fn precedence_rule_binds_loosest_then_or_then_and() {
    let t = parse_clog("P And Q Or R <- S.").unwrap();
    // (Or (And P Q) R) <- S
    let Some(Cee::Rule { head, .. }) = &t.root else {
        panic!();
    };
    let Cee::Or(l, _) = head.as_ref() else {
        panic!();
    };
    assert!(matches!(l.as_ref(), Cee::And(..)));
}

#[test]
fn syntax_errors_carry_positions() {
    let err = parse_clog("P <- .\n").unwrap_err();
    assert_eq!((err.line, err.col), (1, 6));

    let err = parse_clog("P.\nQ(].\n").unwrap_err();
    assert_eq!(err.line, 2);
}

#[test]
fn free_variables_are_rejected_with_a_location() {
    // lowercase unbound identifiers are free variables
    let err = parse_clog("PermRes(p).").unwrap_err();
    assert_eq!((err.line, err.col), (1, 9));
    assert!(err.msg.contains("free variable `p`"), "{}", err.msg);

    // a name bound elsewhere cannot also occur free
    let err = parse_clog("Q(X). All X : true -> P(X).").unwrap_err();
    assert!(err.msg.contains("free occurrence of variable `X`"), "{}", err.msg);
}

#[test]
fn shadowing_a_binding_is_rejected() {
    let err = parse_clog("All x : true -> All x : true -> P(x).").unwrap_err();
    assert!(err.msg.contains("shadows"), "{}", err.msg);
}

#[test]
fn arity_conflicts_are_rejected() {
    let err = parse_clog("P(A). P(A, B).").unwrap_err();
    assert!(err.msg.contains("arity"), "{}", err.msg);
}

#[test]
fn the_two_rule_program_parses_with_a_disjunctive_second_rule() {
    let p = parse_edlp("p.  p ; q.").unwrap();
    assert_eq!(p.rules.len(), 2);
    assert_eq!(p.rules[0].head.len(), 1);
    assert_eq!(p.rules[1].head.len(), 2);
    assert!(p.rules[1].is_disjunctive());
}

#[test]
fn a_constraint_has_no_head() {
    let p = parse_edlp(":- not q.").unwrap();
    assert!(p.rules[0].is_constraint());
    assert_eq!(p.rules[0].neg.len(), 1);
    assert!(p.rules[0].existential.is_empty());
}

#[test]
fn head_only_variables_are_existential() {
    let p = parse_edlp("permres(X) :- lottery.").unwrap();
    assert_eq!(p.rules[0].existential, vec!["X".to_string()]);
    assert!(p.rules[0].universal.is_empty());
}

#[test]
fn unsafe_rules_are_rejected() {
    let err = parse_edlp("p(X) :- not q(X).").unwrap_err();
    assert!(err.msg.contains("unsafe"), "{}", err.msg);
}

#[test]
fn rendering_the_disjunction_is_canonical() {
    let t = parse_clog("P Or Q.").unwrap();
    assert_eq!(render_causal_theory(&t), "P Or Q.\n");
}

#[test]
fn the_mail_theory_round_trips() {
    let text = "
All m, t : Mail(m) & HitSend(m, t) ->
  New p -> (Pack(p) And Cont(p, m) And OnCh(p, t + 1) And
            (Sel d : d > 0 -> Received(p, t + d))).
All p, t : Pack(p) & OnCh(p, t) & ~Received(p, t) -> OnCh(p, t + 1).
";
    let t = parse_clog(text).unwrap();
    let rendered = render_causal_theory(&t);
    let back = parse_clog(&rendered).unwrap();
    assert_eq!(t, back);
}

#[test]
fn foclog_files_keep_causal_block_and_sentences_apart() {
    let text = "
{
  All b : Block(b) -> Sel t : true -> In(b, t) And Out(b, t + D).
}
~? t, b, b2 [b != b2] : In(b, t) & In(b2, t).
";
    let t = parse_foclog(text).unwrap();
    assert!(t.causal.root.is_some());
    assert_eq!(t.sentences.len(), 1);
    let rendered = render_foclog(&t);
    assert_eq!(parse_foclog(&rendered).unwrap(), t);
}

#[test]
fn seeded_ast_round_trips_across_the_three_languages() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA57);
    for i in 0..300 {
        let theory = random_ast_theory(&mut rng);
        let rendered = render_causal_theory(&theory);
        let back = parse_clog(&rendered)
            .unwrap_or_else(|e| panic!("case {i}: {e}\n{rendered}"));
        assert_eq!(theory, back, "case {i}:\n{rendered}");

        let combined = random_ast_foclog(&mut rng);
        let rendered = render_foclog(&combined);
        let back = parse_foclog(&rendered)
            .unwrap_or_else(|e| panic!("case {i}: {e}\n{rendered}"));
        assert_eq!(combined, back, "case {i}:\n{rendered}");

        let program = random_ast_program(&mut rng);
        let rendered = render_program(&program);
        let back = parse_edlp(&rendered)
            .unwrap_or_else(|e| panic!("case {i}: {e}\n{rendered}"));
        assert_eq!(program, back, "case {i}:\n{rendered}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn clog_round_trip_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theory = random_ast_theory(&mut rng);
        let rendered = render_causal_theory(&theory);
        let back = parse_clog(&rendered).map_err(|e| {
            TestCaseError::fail(format!("{e}\n{rendered}"))
        })?;
        prop_assert_eq!(theory, back);
    }

    #[test]
    fn edlp_round_trip_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let program = random_ast_program(&mut rng);
        let rendered = render_program(&program);
        let back = parse_edlp(&rendered).map_err(|e| {
            TestCaseError::fail(format!("{e}\n{rendered}"))
        })?;
        prop_assert_eq!(program, back);
    }
}
