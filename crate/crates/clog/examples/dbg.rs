use clog::gen::{random_program, rng_for, GenConfig};
use clog::surface::render_program;
use clog::engine::EngineOptions;

fn main() {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string("corpus/fixtures/genconfig.json").unwrap()).unwrap();
    let cfg = GenConfig::from_json(&v);
    let mut rng = rng_for(&cfg, 2);
    let (p, domain) = random_program(&mut rng, &cfg);
    println!("program:\n{}", render_program(&p));
    println!("domain: {:?}", domain);
    let tp = clog::translate_to_foclog(&p);
    println!("translation:\n{}", clog::surface::render_foclog(&tp));
    let stable = clog::stable_models(&p, &domain).unwrap();
    for m in &stable {
        println!("stable: {m}");
        let v = clog::check_model(&tp, m, &EngineOptions::with_budget(0)).unwrap();
        println!("  verdict: {v:?}");
    }
}
