//! Tight credence bounds by exact linear programming over the valuation
//! space of a frame, plus the validity-based bound.
//!
//!     cargo run --example credence_bounds

use pedal::bounds::{
    enumerate_valuations, frechet_lower_bound, solve_bounds, truth_profile, BoundsLimits,
    BoundsQuery, BoundsResult,
};
use pedal::decision::DecisionLimits;
use pedal::demo::{frame, signature, CLAIM_AB, CLAIM_CD, CLAIM_MIX};
use pedal::rational::{format_rational, rat};
use pedal::syntax::{parse_credence, parse_formula};

fn main() {
    let sig = signature();
    let frame = frame();

    // the valuation space: every way of assigning each program a
    // relation inside rbox
    let programs = sig.program_atoms.clone();
    let vs = enumerate_valuations(&frame, &programs, 1 << 20).unwrap();
    println!("valuation space: {} valuations", vs.len());

    let query = parse_formula(CLAIM_MIX, &sig).unwrap();
    let bits = truth_profile(&frame, 0, &query, &vs);
    println!(
        "query true under {} of them",
        bits.iter().filter(|&&b| b).count()
    );

    let q = BoundsQuery {
        frame: frame.clone(),
        state: 0,
        constraints: vec![
            parse_credence(&format!("P({CLAIM_AB}) >= 3/5"), &sig).unwrap(),
            parse_credence(&format!("P({CLAIM_CD}) >= 3/5"), &sig).unwrap(),
        ],
        query: query.clone(),
    };
    match solve_bounds(&q, &BoundsLimits::default()).unwrap() {
        BoundsResult::Bounded(b) => {
            println!(
                "min = {} (attained: {}), max = {} (attained: {})",
                format_rational(&b.minimum),
                b.min_attained,
                format_rational(&b.maximum),
                b.max_attained,
            );
            let w = b.witness_min.unwrap();
            println!(
                "minimizing model realizes it exactly: mu = {}",
                format_rational(&w.mu(0, &query))
            );
        }
        BoundsResult::Infeasible => println!("infeasible"),
    }

    // the validity-based bound agrees here
    let ab = parse_formula(CLAIM_AB, &sig).unwrap();
    let cd = parse_formula(CLAIM_CD, &sig).unwrap();
    let frechet = frechet_lower_bound(
        &[(ab, rat(3, 5)), (cd, rat(3, 5))],
        &query,
        &DecisionLimits::default(),
    )
    .unwrap();
    println!(
        "validity-based bound: {}",
        frechet.map(|r| format_rational(&r)).unwrap_or_else(|| "none".into())
    );
}
