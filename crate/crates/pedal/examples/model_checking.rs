//! Satisfaction and program denotations on the two-state demonstration
//! frame, under each of its three program valuations.
//!
//!     cargo run --example model_checking

use pedal::demo::{frame, signature, valuations, CLAIM_AB, CLAIM_CD, CLAIM_MIX};
use pedal::kripke::{validate_model, KripkeModel};
use pedal::syntax::{parse_formula, parse_program};

fn main() {
    let sig = signature();
    let claims = [CLAIM_AB, CLAIM_CD, CLAIM_MIX]
        .map(|text| parse_formula(text, &sig).unwrap());

    for (i, vp) in valuations().into_iter().enumerate() {
        let m = KripkeModel::new(frame(), vp);
        assert!(validate_model(&m).is_empty());
        println!("valuation v{}:", i + 1);
        for f in &claims {
            println!("  holds everywhere: {:5}  {f}", m.valid_on(f));
        }
        let r = parse_program("(?A;p)+(?C;q)", &sig).unwrap();
        let rel = m.denote(&r);
        let moves: Vec<String> = rel.pairs().map(|(s, t)| format!("{s}->{t}")).collect();
        println!("  [{r}] moves: {}", moves.join(", "));
        println!();
    }
}
