//! Hilbert proof checking: the derived-rule library, an R3 use, and a
//! deliberately broken script.
//!
//!     cargo run --example proof_checking

use pedal::decision::DecisionLimits;
use pedal::files::proof_to_json;
use pedal::proofcheck::{
    check_proof, derived_rule_suite, match_axiom, r3_demo_script, Statement, System, Verdict,
};
use pedal::syntax::parse_credence_raw;

fn main() {
    let limits = DecisionLimits::default();

    println!("derived-rule library:");
    for entry in derived_rule_suite(&limits) {
        let conclusion = entry.script.conclusion().unwrap().to_string();
        println!(
            "  {:24} {:?}  |- {conclusion}",
            entry.name, entry.verdict
        );
        assert_eq!(entry.verdict, Verdict::Accepted);
    }

    // axiom recognition
    println!();
    for text in ["P(a) >= 0", "P(a) < 1/2 -> P(a) <= 1/2"] {
        let stmt = Statement::Credence(parse_credence_raw(text).unwrap());
        println!("{text:28} matches {:?}", match_axiom(&stmt, System::Pedal));
    }

    // the bounded infinitary rule downgrades acceptance
    println!();
    let r3 = r3_demo_script(12);
    println!("R3 demo verdict: {:?}", check_proof(&r3, 12, &limits));

    // corrupting a citation is caught
    let mut broken = r3.clone();
    broken.lines.pop();
    broken.lines.pop();
    println!(
        "truncated script: {:?}",
        check_proof(&broken, 12, &limits)
    );

    // scripts serialize to the proof-file format
    println!();
    let (name, script) = pedal::proofcheck::derived_rule_scripts().remove(9);
    println!("`{name}` as a proof file:\n{}", proof_to_json(&script));
}
