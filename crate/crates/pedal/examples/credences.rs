//! Exact credences on a measured model: cell masses spread uniformly
//! over their valuations, and `mu(s, g)` is the mass of the valuations
//! making `g` true at `s`.
//!
//!     cargo run --example credences

use pedal::credence::{mu, point_mass, validate_pedal};
use pedal::demo::{model_corrected, signature, CLAIM_AB, CLAIM_CD, CLAIM_MIX};
use pedal::rational::format_rational;
use pedal::syntax::{parse_credence, parse_formula};

fn main() {
    let pm = model_corrected();
    assert!(validate_pedal(&pm).is_empty());
    let sig = signature();

    println!("point masses:");
    for cell in &pm.cells {
        for v in &cell.valuations {
            println!("  {}", format_rational(&point_mass(&pm, v)));
        }
    }

    println!("credences at s = 0:");
    for text in [CLAIM_AB, CLAIM_CD, CLAIM_MIX, "~#", "#", "A & F B"] {
        let f = parse_formula(text, &sig).unwrap();
        println!("  mu(s, {f}) = {}", format_rational(&mu(&pm, 0, &f)));
        // complementation: mu(g) + mu(~g) = 1, exactly
        let total = mu(&pm, 0, &f) + mu(&pm, 0, &f.clone().not());
        assert_eq!(total, pedal::rational::one());
    }

    println!("credence formulas:");
    for text in [
        "P(G(A -> [p]B)) >= 3/5",
        "P(G(A -> [p]B)) > 3/5",
        "P(G [(?A;p)+(?C;q)](B|D)) = 1/5",
    ] {
        let c = parse_credence(text, &sig).unwrap();
        println!("  {:5}  {text}", pm.satisfies(0, &c));
    }
}
