//! Parsing, printing, desugaring and the Fischer-Ladner closure.
//!
//!     cargo run --example parse_and_print

use std::collections::BTreeSet;

use pedal::rational::format_rational;
use pedal::syntax::{
    fl_closure, fl_pm, parse_credence, parse_formula, CompareOp, Comparison, Signature,
};

fn main() {
    let sig = Signature::new(["A", "B", "a", "b"], ["p", "q"]);

    // the grammar: # ~ & | -> <-> [prog]f <prog>f G f F f ; + * ?f
    for text in [
        "[(p;q)*]a",
        "<?A;p>B",
        "G(A -> [p]B)",
        "a & ~b -> F (a | b)",
    ] {
        let f = parse_formula(text, &sig).unwrap();
        println!("{text:24} parses to {f}");
        assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f);
    }

    // comparison sugar desugars into the primitive >= form
    println!();
    let a = parse_formula("a", &sig).unwrap();
    for op in [
        CompareOp::Ge,
        CompareOp::Gt,
        CompareOp::Eq,
        CompareOp::Le,
        CompareOp::Lt,
    ] {
        let cf = Comparison::new(a.clone(), op, pedal::rational::rat(3, 5))
            .unwrap()
            .desugar();
        println!("P(a) {op:?} {:5} desugars to {cf}", format_rational(&pedal::rational::rat(3, 5)));
    }
    let c = parse_credence("P(G(A -> [p]B)) >= 0.6", &sig).unwrap();
    println!("decimal thresholds are exact: {c}");

    // the closure of a star formula
    println!();
    let star = parse_formula("<p*>a", &sig).unwrap();
    let seeds: BTreeSet<_> = [star].into_iter().collect();
    println!("closure of <p*>a:");
    for f in fl_closure(&seeds) {
        println!("  {f}");
    }
    println!("signed closure has {} formulas", fl_pm(&seeds).len());
}
