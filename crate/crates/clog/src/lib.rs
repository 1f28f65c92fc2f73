//! A reference interpreter and cross-semantics workbench for causal effect
//! expressions, their integration with first-order logic, and E-disjunctive
//! logic programs under the stable semantics.
//!
//! The crate is organized as:
//!
//! - [`logic`]: terms, formulas, finite structures, first-order satisfaction;
//! - [`surface`]: the three surface languages with parsers and printers;
//! - [`engine`]: cset enumeration, model checking/enumeration under a finite
//!   creation budget, and forward process execution;
//! - [`edlp`]: brute-force grounding and stable-model computation, the
//!   trusted oracle for the semantics comparisons;
//! - [`bridge`]: the program-to-theory translation, the first-order
//!   weakening, the non-overlapping/recursion analyzers, and the comparator;
//! - [`gen`]: seeded random generators for the property suites.

pub mod bridge;
pub mod edlp;
pub mod engine;
pub mod gen;
pub mod logic;
pub mod surface;

pub use bridge::{analyze, compare_semantics, fo_weakening, translate_to_foclog};
pub use edlp::{ground_program, is_stable, minus_set, stable_models};
pub use engine::{
    check_model, enumerate_csets, enumerate_models, run_all_processes, run_process, EngineOptions,
    PolicySource, ProcessTrace, Verdict,
};
pub use logic::{
    default_state, evaluate_formula, Assignment, Atom, Element, Formula, Structure, Term,
    Vocabulary,
};
pub use surface::{
    classify_symbols, parse_clog, parse_edlp, parse_foclog, render_causal_theory, render_foclog,
    render_program, CausalTheory, Cee, EDisjProgram, EDisjRule, FoClogTheory,
};
