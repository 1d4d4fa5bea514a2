//! The validity decision procedure: closure atoms, elimination, and
//! witness models.
//!
//!     cargo run --example decide_validity

use std::collections::BTreeSet;

use pedal::decision::{atoms, decide_satisfiable, decide_valid, DecisionLimits};
use pedal::files::model_to_json;
use pedal::syntax::parse_formula_raw;

fn main() {
    let limits = DecisionLimits::default();

    for text in [
        "G a -> a",
        "F a -> G F a",
        "<p>a -> F a",
        "<p*>a <-> a | <p><p*>a",
        "a -> [p]a",
        "[p*](a -> [p]a) -> (a -> [p*]a)",
    ] {
        let f = parse_formula_raw(text).unwrap();
        let valid = decide_valid(&f, &limits).unwrap();
        println!("{:9} {text}", if valid { "valid" } else { "not valid" });
    }

    // a satisfiable formula comes with a witness model
    println!();
    let f = parse_formula_raw("F a & F ~a").unwrap();
    let (sat, witness) = decide_satisfiable(&f, &limits).unwrap();
    println!("F a & F ~a satisfiable: {sat}");
    let w = witness.unwrap();
    println!("witness model:\n{}", model_to_json(&w));

    // the atom space behind the scenes
    let seeds: BTreeSet<_> = [parse_formula_raw("<p*>a").unwrap()].into_iter().collect();
    let space = atoms(&seeds, &limits).unwrap();
    println!("closure of <p*>a has {} formulas", space.closure().len());
    println!("surviving atoms: {}", space.atom_count());
    for i in 0..space.atom_count() {
        let members: Vec<String> = space.atom_members(i).iter().map(|f| f.to_string()).collect();
        println!("  atom {i}: {}", members.join(", "));
    }
}
