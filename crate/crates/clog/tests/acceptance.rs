//! Acceptance suite: one test per criterion, each asserting the expected
//! values exactly and staying inside its time bound. Criteria 7-9 are the
//! seeded property suites driven by `corpus/fixtures/genconfig.json`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clog::bridge::{analyze, atom_lattice, fo_weakening, translate_to_foclog};
use clog::edlp::{program_domain, stable_models};
use clog::engine::{enumerate_csets, EngineOptions};
use clog::gen::{random_creation_free_theory, random_program, rng_for, GenConfig};
use clog::logic::{Atom, Element, Structure};
use clog::surface::{parse_clog, parse_edlp, parse_foclog, render_causal_theory};
use clog::{
    check_model, classify_symbols, enumerate_models, evaluate_formula, run_process, Assignment,
    FoClogTheory, PolicySource, Verdict,
};

use rand::Rng;

fn corpus_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
}

fn corpus_text(rel: &str) -> String {
    std::fs::read_to_string(corpus_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn corpus_structure(rel: &str) -> Structure {
    let v: serde_json::Value = serde_json::from_str(&corpus_text(rel)).unwrap();
    Structure::from_json(&v).unwrap()
}

fn config() -> GenConfig {
    let v: serde_json::Value =
        serde_json::from_str(&corpus_text("fixtures/genconfig.json")).unwrap();
    GenConfig::from_json(&v)
}

fn finish(criterion: &str, start: Instant, bound: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= bound,
        "{criterion} took {elapsed:?}, bound {bound:?}"
    );
    println!("ACCEPTANCE {criterion}: PASS ({elapsed:?})");
}

fn endo_atoms(s: &Structure, endo: &BTreeSet<String>) -> BTreeSet<String> {
    s.atoms_of(endo).iter().map(|a| a.to_string()).collect()
}

#[test]
fn acceptance_01_bicycle_trace() {
    let start = Instant::now();
    let theory: FoClogTheory = parse_clog(&corpus_text("clog/bicycle.clog")).unwrap().into();
    let exo = corpus_structure("fixtures/bicycle_exo.json");
    let exo = with_constants(&theory, exo);
    let opts = EngineOptions::with_budget(0);
    let trace = run_process(&theory, &exo, PolicySource::Seeded(0), &opts).unwrap();
    let endo: BTreeSet<String> = ["Turn".to_string()].into_iter().collect();
    let chain: Vec<BTreeSet<String>> = trace
        .state_chain()
        .iter()
        .map(|s| endo_atoms(s, &endo))
        .collect();
    let set = |xs: &[&str]| -> BTreeSet<String> { xs.iter().map(|s| s.to_string()).collect() };
    assert_eq!(
        chain,
        vec![
            set(&[]),
            set(&["Turn(BigGear)"]),
            set(&["Turn(BigGear)", "Turn(SmallGear)"]),
        ],
        "the three-state sequence"
    );
    assert_eq!(trace.stable, Some(true));

    // with the pedalling rule removed the gears never start
    let without: FoClogTheory = parse_clog(
        "Turn(BigGear) <- Turn(SmallGear).\nTurn(SmallGear) <- Turn(BigGear).",
    )
    .unwrap()
    .into();
    let trace = run_process(&without, &exo, PolicySource::Seeded(0), &opts).unwrap();
    assert_eq!(trace.state_chain().len(), 1);
    assert!(endo_atoms(trace.final_state(), &endo).is_empty());
    finish("01 bicycle", start, Duration::from_secs(1));
}

#[test]
fn acceptance_02_lottery_csets() {
    let start = Instant::now();
    let theory = parse_clog(&corpus_text("clog/lottery.clog")).unwrap();
    for k in 1..=5usize {
        let mut s = Structure::new();
        s.add_initial(Element::name("w"));
        for i in 0..k {
            s.add_initial(Element::name(format!("d{i}")));
        }
        for p in ["Apply", "PassedTest", "Play", "PermRes"] {
            s.declare_predicate(p, 1);
        }
        s.declare_predicate("Lottery", 0);
        s.insert_fact(Atom::new("Lottery", vec![])).unwrap();
        s.insert_fact(Atom::new("Apply", vec![Element::name("w")])).unwrap();
        s.insert_fact(Atom::new("PassedTest", vec![Element::name("w")])).unwrap();
        for i in 0..k {
            s.insert_fact(Atom::new("Play", vec![Element::name(format!("d{i}"))]))
                .unwrap();
        }
        let out = enumerate_csets(&theory, &s, 0).unwrap();
        assert_eq!(out.csets.len(), k, "k = {k}");
        for cs in &out.csets {
            assert_eq!(cs.atoms.len(), 2);
            assert!(cs.atoms.contains(&Atom::new("PermRes", vec![Element::name("w")])));
            let winner = cs
                .atoms
                .iter()
                .find(|a| a.args != vec![Element::name("w")])
                .unwrap();
            assert_eq!(winner.pred, "PermRes");
        }
    }
    finish("02 lottery csets", start, Duration::from_secs(1));
}

#[test]
fn acceptance_03_mail_models() {
    let start = Instant::now();
    let theory: FoClogTheory = parse_clog(&corpus_text("clog/mail.clog")).unwrap().into();
    let exo = corpus_structure("fixtures/mail_exo.json");
    let models = enumerate_models(&theory, &exo, &EngineOptions::with_budget(1)).unwrap();
    assert_eq!(models.models.len(), 8, "one model per delay 1..8");
    let pack = Element::name("_c0");
    for d in 1..=8i64 {
        let m = models
            .structures()
            .into_iter()
            .find(|m| m.holds(&Atom::new("Received", vec![pack.clone(), Element::Int(d)])))
            .unwrap_or_else(|| panic!("missing the delay-{d} model"));
        assert!(m.holds(&Atom::new("Pack", vec![pack.clone()])));
        assert!(m.holds(&Atom::new("Cont", vec![pack.clone(), Element::name("MyMail")])));
        for t in 1..=d {
            assert!(m.holds(&Atom::new("OnCh", vec![pack.clone(), Element::Int(t)])));
        }
        for t in (d + 1)..=8 {
            assert!(!m.holds(&Atom::new("OnCh", vec![pack.clone(), Element::Int(t)])));
        }
    }
    finish("03 mail models", start, Duration::from_secs(10));
}

#[test]
fn acceptance_04_stable_models() {
    let start = Instant::now();
    let overlap = parse_edlp(&corpus_text("edlp/overlap.edlp")).unwrap();
    let domain: BTreeSet<Element> = [Element::name("a")].into_iter().collect();
    let models: Vec<Vec<String>> = stable_models(&overlap, &domain)
        .unwrap()
        .iter()
        .map(|m| m.true_atoms().iter().map(|a| a.to_string()).collect())
        .collect();
    assert_eq!(models, vec![vec!["p".to_string()]]);

    let constrained = parse_edlp(&corpus_text("edlp/overlap_constraint.edlp")).unwrap();
    let models: Vec<Vec<String>> = stable_models(&constrained, &domain)
        .unwrap()
        .iter()
        .map(|m| m.true_atoms().iter().map(|a| a.to_string()).collect())
        .collect();
    assert_eq!(models, vec![vec!["p".to_string(), "q".to_string()]]);
    finish("04 stable models", start, Duration::from_secs(1));
}

#[test]
fn acceptance_05_modularity() {
    let start = Instant::now();
    let p = parse_edlp(&corpus_text("edlp/lottery.edlp")).unwrap();
    let domain = program_domain(&p, &[Element::name("b")].into_iter().collect());
    let report = clog::compare_semantics(&p, &domain, &EngineOptions::with_budget(0)).unwrap();

    let fmt = |sets: &Vec<BTreeSet<Atom>>| -> BTreeSet<BTreeSet<String>> {
        sets.iter()
            .map(|s| s.iter().map(|a| a.to_string()).collect())
            .collect()
    };
    let set = |xs: &[&str]| -> BTreeSet<String> { xs.iter().map(|s| s.to_string()).collect() };
    let stable = fmt(&report.stable);
    let foclog = fmt(&report.foclog);
    assert_eq!(
        stable,
        [set(&["lottery", "passtest(a)", "permres(a)"])].into_iter().collect()
    );
    assert_eq!(
        foclog,
        [
            set(&["lottery", "passtest(a)", "permres(a)"]),
            set(&["lottery", "passtest(a)", "permres(a)", "permres(b)"]),
        ]
        .into_iter()
        .collect()
    );
    assert!(stable.is_subset(&foclog) && stable != foclog, "strict containment");
    finish("05 modularity", start, Duration::from_secs(1));
}

#[test]
fn acceptance_06_selection_creation_interplay() {
    let start = Instant::now();
    let theory: FoClogTheory = parse_clog(&corpus_text("clog/sel_new_sel.clog")).unwrap().into();

    // exhaustive over initial domains of size <= 2 and budgets <= 2: no
    // accepted candidate has a one-element domain
    for initial in [vec![], vec!["A"], vec!["A", "B0"]] {
        for budget in 0..=2usize {
            let mut exo = Structure::new();
            for e in &initial {
                exo.add_initial(Element::name(*e));
            }
            let models =
                enumerate_models(&theory, &exo, &EngineOptions::with_budget(budget)).unwrap();
            for m in models.structures() {
                assert!(
                    m.domain().len() >= 2,
                    "one-element model found: {m} (initial {initial:?}, budget {budget})"
                );
            }
        }
    }

    // the two-element structure with the created witness is accepted
    let candidate = corpus_structure("fixtures/sel_new_sel_model.json");
    let verdict = check_model(&theory, &candidate, &EngineOptions::with_budget(2)).unwrap();
    assert!(verdict.is_accepted());
    finish("06 selection/creation", start, Duration::from_secs(5));
}

#[test]
fn acceptance_07_weakening_property_suite() {
    let start = Instant::now();
    let cfg = config();
    let mut rng = rng_for(&cfg, 1);
    let mut violations = 0usize;
    for i in 0..cfg.theory_instances {
        let (theory, exo_template) = random_creation_free_theory(&mut rng, &cfg);
        let combined: FoClogTheory = theory.clone().into();
        let weakened = fo_weakening(&theory).unwrap();
        let vocab = combined.vocabulary().unwrap();
        let (_, exo_preds) = classify_symbols(&combined);

        for exo in interpretations_over(&exo_template, &vocab, &exo_preds) {
            let models = enumerate_models(&combined, &exo, &EngineOptions::with_budget(0))
                .unwrap_or_else(|e| panic!("instance {i}: {e}"));
            for m in models.structures() {
                if !evaluate_formula(&weakened, m, &Assignment::new()).unwrap() {
                    violations += 1;
                    eprintln!(
                        "instance {i}: model {m} violates the weakening\n{}",
                        render_causal_theory(&theory)
                    );
                }
            }
        }
    }
    assert_eq!(violations, 0);
    finish("07 weakening suite", start, Duration::from_secs(300));
}

#[test]
fn acceptance_08_stable_subset_suite() {
    let start = Instant::now();
    let cfg = config();
    let mut rng = rng_for(&cfg, 2);
    let mut violations = 0usize;
    for i in 0..cfg.program_instances {
        let (p, domain) = random_program(&mut rng, &cfg);
        let tp = translate_to_foclog(&p);
        let stable = stable_models(&p, &domain).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        for m in stable {
            let verdict = check_model(&tp, &m, &EngineOptions::with_budget(0))
                .unwrap_or_else(|e| panic!("instance {i}: {e}"));
            if !verdict.is_accepted() {
                violations += 1;
                eprintln!("instance {i}: stable model {m} rejected by the translation");
            }
        }
    }
    assert_eq!(violations, 0);
    finish("08 stable-subset suite", start, Duration::from_secs(600));
}

#[test]
fn acceptance_09_equality_suite() {
    let start = Instant::now();
    let cfg = config();
    let mut rng = rng_for(&cfg, 3);
    let mut instances = 0usize;
    let mut violations = 0usize;
    let mut attempts = 0usize;
    while instances < 200 && attempts < 10_000 {
        attempts += 1;
        let (p, domain) = random_program(&mut rng, &cfg);
        let report = analyze(&p, &domain).unwrap();
        if !report.non_overlapping {
            continue;
        }
        instances += 1;
        let cmp = clog::compare_semantics(&p, &domain, &EngineOptions::with_budget(0)).unwrap();
        if !cmp.stable_equals_foclog {
            violations += 1;
            eprintln!(
                "instance {instances}: sets differ\n{}",
                clog::surface::render_program(&p)
            );
        }
    }
    assert!(instances >= 200, "only {instances} non-overlapping instances");
    assert_eq!(violations, 0);
    finish("09 equality suite", start, Duration::from_secs(600));
}

#[test]
fn acceptance_10_oracle_self_consistency() {
    let start = Instant::now();
    let mut discrepancies = 0usize;

    // exhaustive cross-check where the endogenous lattice is small
    let mut lattice_cases: Vec<(FoClogTheory, Structure, usize)> = Vec::new();
    let bicycle: FoClogTheory = parse_clog(&corpus_text("clog/bicycle.clog")).unwrap().into();
    let bexo = with_constants(&bicycle, corpus_structure("fixtures/bicycle_exo.json"));
    lattice_cases.push((bicycle, bexo, 0));

    let lottery: FoClogTheory = parse_clog(&corpus_text("clog/lottery.clog")).unwrap().into();
    let mut lexo = Structure::new();
    lexo.add_initial(Element::name("a"));
    lexo.add_initial(Element::name("d1"));
    for p in ["Apply", "PassedTest", "Play"] {
        lexo.declare_predicate(p, 1);
    }
    lexo.declare_predicate("Lottery", 0);
    lexo.insert_fact(Atom::new("Lottery", vec![])).unwrap();
    lexo.insert_fact(Atom::new("Apply", vec![Element::name("a")])).unwrap();
    lexo.insert_fact(Atom::new("PassedTest", vec![Element::name("a")])).unwrap();
    lexo.insert_fact(Atom::new("Play", vec![Element::name("d1")])).unwrap();
    lattice_cases.push((lottery, lexo, 0));

    let sel_new_sel: FoClogTheory =
        parse_clog(&corpus_text("clog/sel_new_sel.clog")).unwrap().into();
    let mut snexo = Structure::new();
    snexo.add_initial(Element::name("A"));
    lattice_cases.push((sel_new_sel, snexo, 2));

    let electrician: FoClogTheory =
        parse_clog(&corpus_text("clog/electrician.clog")).unwrap().into();
    let mut eexo = Structure::new();
    eexo.declare_predicate("Button", 0);
    eexo.declare_predicate("Electrician", 0);
    eexo.insert_fact(Atom::new("Button", vec![])).unwrap();
    eexo.insert_fact(Atom::new("Electrician", vec![])).unwrap();
    lattice_cases.push((electrician, eexo, 0));

    let robot: FoClogTheory = parse_clog(&corpus_text("clog/robot.clog")).unwrap().into();
    let rexo = corpus_structure("fixtures/robot_exo.json");
    lattice_cases.push((robot, rexo, 0));

    let natnum: FoClogTheory =
        parse_clog(&corpus_text("clog/natural_numbers.clog")).unwrap().into();
    lattice_cases.push((natnum, Structure::new(), 2));

    let president: FoClogTheory =
        parse_clog(&corpus_text("clog/president.clog")).unwrap().into();
    let mut pexo = Structure::new();
    pexo.add_initial(Element::name("belgium"));
    pexo.declare_predicate("Country", 1);
    pexo.insert_fact(Atom::new("Country", vec![Element::name("belgium")])).unwrap();
    lattice_cases.push((president, pexo, 1));

    for (theory, exo, budget) in &lattice_cases {
        discrepancies += lattice_cross_check(theory, exo, *budget);
    }

    // larger theories: every enumerated model is accepted, and single-atom
    // perturbations agree with membership in the enumerated set
    let mail: FoClogTheory = parse_clog(&corpus_text("clog/mail.clog")).unwrap().into();
    let mexo = corpus_structure("fixtures/mail_exo.json");
    discrepancies += perturbation_cross_check(&mail, &mexo, 1);

    let oven = parse_foclog(&corpus_text("foclog/oven.foclog")).unwrap();
    let oexo = corpus_structure("fixtures/oven_exo.json");
    discrepancies += perturbation_cross_check(&oven, &oexo, 0);

    assert_eq!(discrepancies, 0);
    finish("10 oracle self-consistency", start, Duration::from_secs(120));
}

#[test]
fn acceptance_11_round_trips() {
    let start = Instant::now();
    let cfg = config();
    let mut rng = rng_for(&cfg, 4);
    for i in 0..1000 {
        let theory = clog::gen::random_ast_theory(&mut rng);
        let rendered = render_causal_theory(&theory);
        let back = parse_clog(&rendered).unwrap_or_else(|e| panic!("clog case {i}: {e}\n{rendered}"));
        assert_eq!(theory, back, "clog case {i}");
    }
    for i in 0..1000 {
        let combined = clog::gen::random_ast_foclog(&mut rng);
        let rendered = clog::surface::render_foclog(&combined);
        let back =
            parse_foclog(&rendered).unwrap_or_else(|e| panic!("foclog case {i}: {e}\n{rendered}"));
        assert_eq!(combined, back, "foclog case {i}");
    }
    for i in 0..1000 {
        let program = clog::gen::random_ast_program(&mut rng);
        let rendered = clog::surface::render_program(&program);
        let back =
            parse_edlp(&rendered).unwrap_or_else(|e| panic!("edlp case {i}: {e}\n{rendered}"));
        assert_eq!(program, back, "edlp case {i}");
    }
    finish("11 round trips", start, Duration::from_secs(60));
}

#[test]
fn acceptance_12_corpus_compilation() {
    let start = Instant::now();

    // president rule: one fresh president per country
    let president: FoClogTheory =
        parse_clog(&corpus_text("clog/president.clog")).unwrap().into();
    let pexo = corpus_structure("fixtures/president_exo.json");
    let models = enumerate_models(&president, &pexo, &EngineOptions::with_budget(2)).unwrap();
    assert_eq!(models.models.len(), 1);
    let m = &models.models[0].structure;
    assert_eq!(m.created().len(), 2);
    assert_eq!(m.table("President").unwrap().tuples.len(), 2);
    assert_eq!(m.table("PresidentOf").unwrap().tuples.len(), 2);

    // validation rule: an incomplete order causes one fresh result
    let validation: FoClogTheory =
        parse_clog(&corpus_text("clog/validation_rule.clog")).unwrap().into();
    let vexo = with_constants(&validation, corpus_structure("fixtures/validation_exo.json"));
    let models = enumerate_models(&validation, &vexo, &EngineOptions::with_budget(1)).unwrap();
    assert_eq!(models.models.len(), 1);
    let m = &models.models[0].structure;
    assert_eq!(m.created().len(), 1);
    assert!(m.holds(&Atom::new(
        "Message",
        vec![Element::name("_c0"), Element::name("MsgCustomerMissing")]
    )));

    // electrician: the nested rule links button to light only when active
    let electrician: FoClogTheory =
        parse_clog(&corpus_text("clog/electrician.clog")).unwrap().into();
    for (e, b, expect_light) in
        [(false, false, false), (true, false, false), (false, true, false), (true, true, true)]
    {
        let mut exo = Structure::new();
        exo.declare_predicate("Electrician", 0);
        exo.declare_predicate("Button", 0);
        if e {
            exo.insert_fact(Atom::new("Electrician", vec![])).unwrap();
        }
        if b {
            exo.insert_fact(Atom::new("Button", vec![])).unwrap();
        }
        let models = enumerate_models(&electrician, &exo, &EngineOptions::with_budget(0)).unwrap();
        assert_eq!(models.models.len(), 1);
        assert_eq!(
            models.models[0].structure.holds(&Atom::new("Light", vec![])),
            expect_light
        );
    }

    // robot: leaves by exactly one open door
    let robot: FoClogTheory = parse_clog(&corpus_text("clog/robot.clog")).unwrap().into();
    let rexo = corpus_structure("fixtures/robot_exo.json");
    let models = enumerate_models(&robot, &rexo, &EngineOptions::with_budget(0)).unwrap();
    let leaves: Vec<String> = models
        .structures()
        .iter()
        .flat_map(|m| m.atoms_of(&["Leave".to_string()].into_iter().collect()))
        .map(|a| a.to_string())
        .collect();
    assert_eq!(leaves, vec!["Leave(d1)".to_string(), "Leave(d2)".to_string()]);

    // oven: three start slots per block, no simultaneous entry
    let oven = parse_foclog(&corpus_text("foclog/oven.foclog")).unwrap();
    let oexo = corpus_structure("fixtures/oven_exo.json");
    let models = enumerate_models(&oven, &oexo, &EngineOptions::with_budget(0)).unwrap();
    assert_eq!(models.models.len(), 6);
    for m in models.structures() {
        let ins: Vec<Atom> = m
            .atoms_of(&["In".to_string()].into_iter().collect())
            .into_iter()
            .collect();
        assert_eq!(ins.len(), 2);
        assert_ne!(ins[0].args[1], ins[1].args[1], "distinct entry times");
        for a in &ins {
            let t = a.args[1].as_int().unwrap();
            assert!(m.holds(&Atom::new(
                "Out",
                vec![a.args[0].clone(), Element::Int(t + 2)]
            )));
        }
    }

    // bounded natural numbers: at budget k the only budget-limited model is
    // the k-element successor chain (modulo isomorphism)
    let natnum: FoClogTheory =
        parse_clog(&corpus_text("clog/natural_numbers.clog")).unwrap().into();
    let strict = enumerate_models(&natnum, &Structure::new(), &EngineOptions::with_budget(3)).unwrap();
    assert!(strict.models.is_empty(), "no exact models under a finite budget");
    for k in 0..=3usize {
        let opts = EngineOptions {
            budget: k,
            truncation: true,
            ..EngineOptions::default()
        };
        let models = enumerate_models(&natnum, &Structure::new(), &opts).unwrap();
        assert_eq!(models.models.len(), 1, "budget {k}");
        let m = &models.models[0].structure;
        assert!(models.models[0].budget_limited);
        assert_eq!(m.created().len(), k);
        let nat = m.table("Nat").map(|t| t.tuples.len()).unwrap_or(0);
        let zero = m.table("Zero").map(|t| t.tuples.len()).unwrap_or(0);
        let succ = m.table("Succ").map(|t| t.tuples.len()).unwrap_or(0);
        assert_eq!(nat, k);
        assert_eq!(zero, k.min(1));
        assert_eq!(succ, k.saturating_sub(1));
    }

    // everything parses back from its canonical rendering
    for rel in [
        "clog/president.clog",
        "clog/validation_rule.clog",
        "clog/electrician.clog",
        "clog/robot.clog",
        "clog/natural_numbers.clog",
    ] {
        let t = parse_clog(&corpus_text(rel)).unwrap();
        let rendered = render_causal_theory(&t);
        assert_eq!(parse_clog(&rendered).unwrap(), t, "{rel}");
    }
    let oven_parsed = parse_foclog(&corpus_text("foclog/oven.foclog")).unwrap();
    let rendered = clog::surface::render_foclog(&oven_parsed);
    assert_eq!(parse_foclog(&rendered).unwrap(), oven_parsed);

    finish("12 corpus compilation", start, Duration::from_secs(60));
}

// ---- helpers ----

/// Binds every theory constant to a like-named element, adding elements as
/// needed (what the command-line front end does).
fn with_constants(theory: &FoClogTheory, mut s: Structure) -> Structure {
    let vocab = theory.vocabulary().unwrap();
    for c in &vocab.constants {
        if s.constant(c).is_none() {
            let e = Element::name(c.clone());
            if !s.domain().contains(&e) {
                s.add_initial(e.clone());
            }
            s.set_constant(c.clone(), e).unwrap();
        }
    }
    s
}

/// All interpretations of the given predicates over the template's domain.
fn interpretations_over(
    template: &Structure,
    vocab: &clog::Vocabulary,
    preds: &BTreeSet<String>,
) -> Vec<Structure> {
    let mut atoms: Vec<Atom> = Vec::new();
    for p in preds {
        let arity = vocab.predicates[p];
        let elems: Vec<Element> = template.domain().iter().cloned().collect();
        let mut tuples: Vec<Vec<Element>> = vec![vec![]];
        for _ in 0..arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    elems.iter().map(move |e| {
                        let mut t = t.clone();
                        t.push(e.clone());
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            atoms.push(Atom::new(p.clone(), t));
        }
    }
    assert!(atoms.len() <= 16, "exogenous lattice too large");
    let mut out = Vec::new();
    for mask in 0u32..(1 << atoms.len()) {
        let mut s = template.clone();
        for p in preds {
            s.declare_predicate(p.clone(), vocab.predicates[p]);
        }
        for (i, a) in atoms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.insert_fact(a.clone()).unwrap();
            }
        }
        out.push(s);
    }
    out
}

/// Exhaustively compares `check_model` with `enumerate_models` over every
/// candidate with up to `budget` created elements; returns the number of
/// disagreements.
fn lattice_cross_check(theory: &FoClogTheory, exo: &Structure, budget: usize) -> usize {
    let opts = EngineOptions::with_budget(budget);
    let models = enumerate_models(theory, exo, &opts).unwrap();
    let model_set: BTreeSet<Structure> =
        models.structures().into_iter().cloned().collect();
    let (endo, _) = classify_symbols(theory);
    let vocab = theory.vocabulary().unwrap();
    let mut bad = 0usize;
    for k in 0..=budget {
        let mut base = exo.clone();
        for i in 0..k {
            base.add_created(Element::Name(format!("_c{i}")));
        }
        let mut atoms: Vec<Atom> = Vec::new();
        for p in &endo {
            let arity = vocab.predicates[p];
            let elems: Vec<Element> = base.domain().iter().cloned().collect();
            let mut tuples: Vec<Vec<Element>> = vec![vec![]];
            for _ in 0..arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        elems.iter().map(move |e| {
                            let mut t = t.clone();
                            t.push(e.clone());
                            t
                        })
                    })
                    .collect();
            }
            for t in tuples {
                atoms.push(Atom::new(p.clone(), t));
            }
        }
        assert!(atoms.len() <= 20, "lattice too large: {}", atoms.len());
        for mask in 0u64..(1 << atoms.len()) {
            let mut candidate = base.clone();
            for (p, &a) in &vocab.predicates {
                candidate.declare_predicate(p.clone(), a);
            }
            for (i, a) in atoms.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    candidate.insert_fact(a.clone()).unwrap();
                }
            }
            let accepted = check_model(theory, &candidate, &opts).unwrap().is_accepted();
            let member = model_set.contains(&candidate.canonicalize_created());
            if accepted != member {
                eprintln!("disagreement on {candidate}: check {accepted}, enumerate {member}");
                bad += 1;
            }
        }
    }
    bad
}

/// Checks that every enumerated model is accepted and that single-atom
/// perturbations of each model agree with set membership.
fn perturbation_cross_check(theory: &FoClogTheory, exo: &Structure, budget: usize) -> usize {
    let opts = EngineOptions::with_budget(budget);
    let models = enumerate_models(theory, exo, &opts).unwrap();
    let model_set: BTreeSet<Structure> =
        models.structures().into_iter().cloned().collect();
    let (endo, _) = classify_symbols(theory);
    let vocab = theory.vocabulary().unwrap();
    let mut bad = 0usize;
    let mut rng = rng_for(&config(), 10);
    for m in models.structures() {
        match check_model(theory, m, &opts).unwrap() {
            Verdict::Accepted { .. } => {}
            Verdict::Rejected { reasons } => {
                eprintln!("enumerated model rejected: {reasons:?}");
                bad += 1;
            }
        }
        // flip each true endogenous atom off, plus a few random atoms on
        for atom in m.atoms_of(&endo) {
            let mut flipped = m.clone();
            let mut tables = flipped.tables().clone();
            tables.get_mut(&atom.pred).unwrap().tuples.remove(&atom.args);
            *flipped.tables_mut() = tables;
            let accepted = check_model(theory, &flipped, &opts).unwrap().is_accepted();
            if accepted != model_set.contains(&flipped.canonicalize_created()) {
                eprintln!("perturbation disagreement on {flipped}");
                bad += 1;
            }
        }
        let elems: Vec<Element> = m.domain().iter().cloned().collect();
        for _ in 0..12 {
            let p: Vec<&String> = endo.iter().collect();
            let pred = p[rng.gen_range(0..p.len())].clone();
            let arity = vocab.predicates[&pred];
            let args: Vec<Element> = (0..arity)
                .map(|_| elems[rng.gen_range(0..elems.len())].clone())
                .collect();
            let atom = Atom::new(pred, args);
            if m.holds(&atom) {
                continue;
            }
            let mut flipped = m.clone();
            flipped.insert_fact(atom).unwrap();
            let accepted = check_model(theory, &flipped, &opts).unwrap().is_accepted();
            if accepted != model_set.contains(&flipped.canonicalize_created()) {
                eprintln!("perturbation disagreement on {flipped}");
                bad += 1;
            }
        }
    }
    bad
}
