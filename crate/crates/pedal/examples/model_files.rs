//! The JSON file formats: models, measured models, bounds queries and
//! proofs, as consumed by the command-line tool.
//!
//!     cargo run --example model_files

use pedal::files::{bounds_to_json, load_model, load_pedal, load_query, proof_to_json};
use pedal::bounds::{solve_bounds, BoundsLimits};
use pedal::proofcheck::derived_rule_scripts;
use pedal::rational::format_rational;
use pedal::syntax::parse_formula_raw;

fn main() {
    let model = r#"{
        "states": 2,
        "vf": {"A": [0], "B": [1], "C": [0], "D": [1]},
        "rbox": "universal",
        "vp": {"p": [[0,1]], "q": [[0,1]]}
    }"#;
    let m = load_model(model).unwrap();
    let f = parse_formula_raw("G [(?A;p)+(?C;q)](B|D)").unwrap();
    println!("model file loads; query holds everywhere: {}", m.valid_on(&f));

    let pedal_file = r#"{
        "states": 2,
        "vf": {"A": [0], "B": [1], "C": [0], "D": [1]},
        "rbox": "universal",
        "cells": [
            {"weight": "2/5", "valuations": [{"p": [[0,1]], "q": [[0,0]]}]},
            {"weight": "1/5", "valuations": [{"p": [[0,1]], "q": [[0,1]]}]},
            {"weight": "2/5", "valuations": [{"p": [[0,0]], "q": [[0,1]]}]}
        ]
    }"#;
    let pm = load_pedal(pedal_file).unwrap();
    println!(
        "measured-model file loads; mu = {}",
        format_rational(&pm.mu(0, &f))
    );

    let query_file = r#"{
        "frame": {"states": 2, "vf": {"A": [0], "B": [1], "C": [0], "D": [1]}, "rbox": "universal"},
        "state": 0,
        "constraints": ["P(G(A -> [p]B)) >= 3/5", "P(G(C -> [q]D)) >= 3/5"],
        "query": "G [(?A;p)+(?C;q)](B|D)"
    }"#;
    let q = load_query(query_file).unwrap();
    let result = solve_bounds(&q, &BoundsLimits::default()).unwrap();
    println!("bounds output:\n{}", bounds_to_json(&result));

    let (name, script) = derived_rule_scripts().remove(0);
    println!("proof file for `{name}`:\n{}", proof_to_json(&script));
}
