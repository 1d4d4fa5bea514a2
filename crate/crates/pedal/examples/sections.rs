//! Dmff classes, canonical sections and the valuations they induce on
//! the canonical model.
//!
//!     cargo run --example sections

use std::collections::BTreeSet;

use pedal::decision::{
    atoms, canonical_sections, dmff_classes, section_valuation, DecisionLimits,
};
use pedal::kripke::{denote, satisfies, Frame, KripkeModel};
use pedal::syntax::{parse_formula_raw, parse_program_raw};

fn main() {
    let limits = DecisionLimits::default();
    let seeds: BTreeSet<_> = [parse_formula_raw("[p]a").unwrap()].into_iter().collect();
    let space = atoms(&seeds, &limits).unwrap();

    println!("atoms over the closure of [p]a: {}", space.atom_count());
    for (k, class) in dmff_classes(&space).into_iter().enumerate() {
        println!("dmff class {k}: atoms {class:?}");
    }

    let sections = canonical_sections(&space, &limits).unwrap();
    println!("canonical sections: {}", sections.len());

    // each section induces a program valuation over the atoms; edges are
    // relocated through the section's inverse
    let canonical = space.canonical_kripke();
    let pi = parse_program_raw("p").unwrap();
    let canonical_edges = denote(&canonical.frame, &canonical.vp, &pi);
    for (k, sigma) in sections.iter().enumerate() {
        let v = section_valuation(&space, sigma);
        let model = KripkeModel::new(
            Frame::new(
                canonical.frame.n_states,
                canonical.frame.vf.clone(),
                canonical.frame.rbox.clone(),
            ),
            v,
        );
        let edges = denote(&model.frame, &model.vp, &pi);
        let inv = sigma.inverse();
        // relocation: (W,V) canonically iff (inv W, inv V) under the section
        for i in 0..space.atom_count() {
            for j in 0..space.atom_count() {
                assert_eq!(
                    canonical_edges.contains(i, j),
                    edges.contains(inv.apply(i), inv.apply(j)),
                );
            }
        }
        // truth transfers through the inverse as well
        for g in space.closure() {
            for w in 0..space.atom_count() {
                assert_eq!(
                    satisfies(&canonical, w, g),
                    satisfies(&model, inv.apply(w), g),
                );
            }
        }
        println!(
            "section {k}: mapping {:?}, {} p-edges, relocation and truth transfer hold",
            sigma.mapping(),
            edges.count_pairs(),
        );
    }
}
