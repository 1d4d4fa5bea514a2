//! Acceptance suite: one test per headline guarantee, each printing a
//! `[PASS]` line (visible with `--nocapture`). Oracles here are
//! independent of the implementation paths they check: exhaustive model
//! search for the decision procedure, vertex enumeration for the LP, and
//! hand-pinned exact values for the reference scenario.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pedal::bounds::{
    enumerate_valuations, frechet_lower_bound, solve_bounds, BoundsLimits, BoundsQuery,
    BoundsResult, ValuationSpace,
};
use pedal::bounds::simplex::{self, Cmp, LinearConstraint, Lp, LpOutcome};
use pedal::credence::{measure_set, mu, satisfies_credence, validate_pedal, PedalModel};
use pedal::decision::{
    atoms, canonical_model, canonical_sections, decide_satisfiable, section_valuation,
    DecisionLimits,
};
use pedal::demo::{self, run_demo};
use pedal::generate::{
    mutate_script, random_dmff, random_formula, random_pedal_model, random_program,
    random_threshold,
};
use pedal::kripke::{
    denote, random_model, satisfies, Frame, KripkeModel, ProgramValuation, Relation, StateSet,
};
use pedal::proofcheck::{
    check_proof, derived_rule_suite, ProofScript, Statement, System, Verdict,
};
use pedal::rational::{rat, Rational};
use pedal::syntax::{parse_credence, parse_formula, parse_formula_raw, Formula, Signature};

fn limits() -> DecisionLimits {
    DecisionLimits::default()
}

fn budget(start: Instant, cap: Duration, what: &str) {
    let spent = start.elapsed();
    assert!(spent < cap, "{what} took {spent:?}, budget {cap:?}");
}

// ---------------------------------------------------------------------
// 1. Reference-scenario reproduction, exact

#[test]
fn acceptance_reference_scenario_reproduction() {
    let start = Instant::now();
    let sig = demo::signature();
    let claims = [
        parse_formula(demo::CLAIM_AB, &sig).unwrap(),
        parse_formula(demo::CLAIM_CD, &sig).unwrap(),
        parse_formula(demo::CLAIM_MIX, &sig).unwrap(),
    ];

    let corrected = demo::model_corrected();
    assert!(validate_pedal(&corrected).is_empty());
    assert_eq!(corrected.mu(0, &claims[0]), rat(3, 5));
    assert_eq!(corrected.mu(0, &claims[1]), rat(3, 5));
    assert_eq!(corrected.mu(0, &claims[2]), rat(1, 5));

    // reading the weights in display order instead must yield 4/5 for
    // the first claim; the tool reports the discrepancy
    let display = demo::model_display_order();
    assert_eq!(display.mu(0, &claims[0]), rat(4, 5));

    let report = run_demo();
    assert!(report.ok);

    budget(start, Duration::from_secs(1), "reference reproduction");
    println!("[PASS] reference scenario: credences 3/5, 3/5, 1/5 exact; display-order weights give 4/5");
}

// ---------------------------------------------------------------------
// 2. Reference-scenario bound optimum, exact

#[test]
fn acceptance_reference_bound_optimum() {
    let start = Instant::now();
    let sig = demo::signature();
    let frame = demo::frame();

    // the space really is the full 256 valuations
    let programs: BTreeSet<String> = sig.program_atoms.clone();
    let count = enumerate_valuations(&frame, &programs, 1 << 20).unwrap().len();
    assert_eq!(count, 256);

    let query = BoundsQuery {
        frame: frame.clone(),
        state: 0,
        constraints: vec![
            parse_credence(&format!("P({}) >= 3/5", demo::CLAIM_AB), &sig).unwrap(),
            parse_credence(&format!("P({}) >= 3/5", demo::CLAIM_CD), &sig).unwrap(),
        ],
        query: parse_formula(demo::CLAIM_MIX, &sig).unwrap(),
    };
    let BoundsResult::Bounded(b) = solve_bounds(&query, &BoundsLimits::default()).unwrap() else {
        panic!("the reference query is feasible");
    };
    assert_eq!(b.minimum, rat(1, 5));
    assert!(b.min_attained);

    // the witness realizes 1/5 exactly and satisfies the constraints
    let w = b.witness_min.as_ref().unwrap();
    assert!(validate_pedal(w).is_empty());
    assert_eq!(w.mu(0, &query.query), rat(1, 5));
    for c in &query.constraints {
        assert!(w.satisfies(0, c));
    }

    let ab = parse_formula(demo::CLAIM_AB, &sig).unwrap();
    let cd = parse_formula(demo::CLAIM_CD, &sig).unwrap();
    let frechet = frechet_lower_bound(
        &[(ab, rat(3, 5)), (cd, rat(3, 5))],
        &query.query,
        &limits(),
    )
    .unwrap();
    assert_eq!(frechet, Some(rat(1, 5)));

    budget(start, Duration::from_secs(10), "reference bound optimum");
    println!("[PASS] reference bound optimum: minimum 1/5 attained, validity-based bound 1/5");
}

// ---------------------------------------------------------------------
// 3. Axiom soundness suite

fn kripke_corpus() -> Vec<KripkeModel> {
    let sig = Signature::new(["a", "b"], ["p", "q"]);
    (0..200u64
        )
        .map(|seed| {
            let n = 1 + (seed as usize % 4);
            let density = 0.2 + 0.2 * ((seed % 4) as f64);
            random_model(seed, n, &sig, density)
        })
        .collect()
}

fn pedal_corpus(count: usize, seed: u64) -> Vec<PedalModel> {
    let sig = Signature::new(["a", "b"], ["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            random_pedal_model(&mut rng, n, &sig, 3, 3)
        })
        .collect()
}

#[test]
fn acceptance_axiom_soundness_suite() {
    let start = Instant::now();
    let sig = Signature::new(["a", "b"], ["p", "q"]);
    let models = kripke_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // one instance builder per ground schema
    let schemas: Vec<(&str, Box<dyn Fn(&mut ChaCha8Rng) -> Formula>)> = vec![
        ("tautology", Box::new(|rng: &mut ChaCha8Rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let h = random_formula(rng, &sig_static(), 3);
            match rng.gen_range(0..4) {
                0 => g.clone().or(g.not()),
                1 => g.clone().implies(h.implies(g)),
                2 => g.clone().not().not().iff(g),
                _ => g.clone().implies(h.clone()).or(h.implies(g)),
            }
        })),
        ("k-program", Box::new(|rng| {
            let (g1, g2) = (random_formula(rng, &sig_static(), 3), random_formula(rng, &sig_static(), 3));
            let pi = random_program(rng, &sig_static(), 2);
            Formula::box_(pi.clone(), g1.clone().implies(g2.clone()))
                .implies(Formula::box_(pi.clone(), g1).implies(Formula::box_(pi, g2)))
        })),
        ("and-dist", Box::new(|rng| {
            let (g1, g2) = (random_formula(rng, &sig_static(), 3), random_formula(rng, &sig_static(), 3));
            let pi = random_program(rng, &sig_static(), 2);
            Formula::box_(pi.clone(), g1.clone().and(g2.clone()))
                .iff(Formula::box_(pi.clone(), g1).and(Formula::box_(pi, g2)))
        })),
        ("choice", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let (p1, p2) = (random_program(rng, &sig_static(), 2), random_program(rng, &sig_static(), 2));
            Formula::box_(p1.clone().choice(p2.clone()), g.clone())
                .iff(Formula::box_(p1, g.clone()).and(Formula::box_(p2, g)))
        })),
        ("test", Box::new(|rng| {
            let (a, b) = (random_formula(rng, &sig_static(), 3), random_formula(rng, &sig_static(), 3));
            Formula::box_(pedal::syntax::Program::test(a.clone()), b.clone()).iff(a.implies(b))
        })),
        ("seq", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let (p1, p2) = (random_program(rng, &sig_static(), 2), random_program(rng, &sig_static(), 2));
            Formula::box_(p1.clone().seq(p2.clone()), g.clone())
                .iff(Formula::box_(p1, Formula::box_(p2, g)))
        })),
        ("unfold", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let p = random_program(rng, &sig_static(), 2);
            let star = p.clone().star();
            g.clone()
                .and(Formula::box_(p, Formula::box_(star.clone(), g.clone())))
                .iff(Formula::box_(star, g))
        })),
        ("induction", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let p = random_program(rng, &sig_static(), 2);
            let star = p.clone().star();
            g.clone()
                .and(Formula::box_(star.clone(), g.clone().implies(Formula::box_(p, g.clone()))))
                .implies(Formula::box_(star, g))
        })),
        ("k-global", Box::new(|rng| {
            let (g1, g2) = (random_formula(rng, &sig_static(), 3), random_formula(rng, &sig_static(), 3));
            g1.clone()
                .implies(g2.clone())
                .gbox()
                .implies(g1.gbox().implies(g2.gbox()))
        })),
        ("t", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            g.clone().gbox().implies(g)
        })),
        ("five", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            g.clone().gdia().implies(g.gdia().gbox())
        })),
        ("incl", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let pi = random_program(rng, &sig_static(), 2);
            Formula::diamond(pi, g.clone()).implies(g.gdia())
        })),
        ("dual", Box::new(|rng| {
            let g = random_formula(rng, &sig_static(), 3);
            let pi = random_program(rng, &sig_static(), 2);
            if rng.gen_bool(0.5) {
                Formula::diamond(pi.clone(), g.clone())
                    .iff(Formula::box_(pi, g.not()).not())
            } else {
                g.clone().gbox().iff(g.not().gdia().not())
            }
        })),
    ];
    let _ = sig;

    for (name, make) in &schemas {
        for _ in 0..50 {
            let instance = make(&mut rng);
            for (mi, model) in models.iter().enumerate() {
                assert!(
                    model.valid_on(&instance),
                    "ground schema {name} failed on model {mi}: {instance}"
                );
            }
        }
    }

    // credence axioms on measured models
    let pedal_models = pedal_corpus(200, 77);
    let sig = sig_static();
    for round in 0..50 {
        let g1 = random_formula(&mut rng, &sig, 3);
        let g2 = random_formula(&mut rng, &sig, 3);
        let dmff = random_dmff(&mut rng, &sig, 3);
        let (lo, hi) = {
            let a = random_threshold(&mut rng);
            let b = random_threshold(&mut rng);
            if a <= b { (a, b) } else { (b, a) }
        };
        let strict_pair = lo < hi;
        let r = random_threshold(&mut rng);

        let a2 = pedal::syntax::CredenceFormula::AtLeast(g1.clone(), Rational::zero());
        let a3 = pedal::syntax::eq_form(&dmff, &Rational::one())
            .or(pedal::syntax::eq_form(&dmff, &Rational::zero()));
        let a4 = strict_pair.then(|| {
            pedal::syntax::le_form(&g1, &lo).implies(pedal::syntax::lt_form(&g1, &hi))
        });
        let a5 = pedal::syntax::lt_form(&g1, &r).implies(pedal::syntax::le_form(&g1, &r));
        let a6 = {
            let (r1, r2) = (lo.clone(), hi.clone());
            let bound = (r1.clone() + r2.clone()).min(Rational::one());
            pedal::syntax::CredenceFormula::AtLeast(g1.clone(), r1)
                .and(pedal::syntax::CredenceFormula::AtLeast(g2.clone(), r2))
                .and(pedal::syntax::eq_form(&g1.clone().and(g2.clone()), &Rational::zero()))
                .implies(pedal::syntax::CredenceFormula::AtLeast(
                    g1.clone().or(g2.clone()),
                    bound,
                ))
        };
        let a7 = (lo.clone() + hi.clone() <= Rational::one()).then(|| {
            pedal::syntax::le_form(&g1, &lo)
                .and(pedal::syntax::lt_form(&g2, &hi))
                .implies(pedal::syntax::lt_form(&g1.clone().or(g2.clone()), &(lo.clone() + hi.clone())))
        });
        let a1 = {
            let c = pedal::syntax::CredenceFormula::AtLeast(g1.clone(), r.clone());
            c.clone().or(c.not())
        };

        for (mi, pm) in pedal_models.iter().enumerate() {
            for s in 0..pm.frame.n_states {
                let mut check = |label: &str, cf: &pedal::syntax::CredenceFormula| {
                    assert!(
                        satisfies_credence(pm, s, cf),
                        "{label} failed on model {mi} state {s} round {round}: {cf}"
                    );
                };
                check("A1", &a1);
                check("A2", &a2);
                check("A3", &a3);
                if let Some(a4) = &a4 {
                    check("A4", a4);
                }
                check("A5", &a5);
                check("A6", &a6);
                if let Some(a7) = &a7 {
                    check("A7", a7);
                }
            }
        }
    }

    // constructed non-vacuous additivity instances: g and ~g are always
    // incompatible, so the antecedent bites at the probed state
    for (mi, pm) in pedal_models.iter().enumerate() {
        let g = random_formula(&mut rng, &sig, 3);
        let r1 = mu(pm, 0, &g);
        let r2 = mu(pm, 0, &g.clone().not());
        let instance = pedal::syntax::CredenceFormula::AtLeast(g.clone(), r1.clone())
            .and(pedal::syntax::CredenceFormula::AtLeast(g.clone().not(), r2.clone()))
            .and(pedal::syntax::eq_form(&g.clone().and(g.clone().not()), &Rational::zero()))
            .implies(pedal::syntax::CredenceFormula::AtLeast(
                g.clone().or(g.clone().not()),
                (r1 + r2).min(Rational::one()),
            ));
        assert!(
            satisfies_credence(pm, 0, &instance),
            "non-vacuous A6 failed on model {mi}"
        );
    }

    budget(start, Duration::from_secs(120), "axiom soundness suite");
    println!("[PASS] axiom soundness: 13 ground schemas and A1-A7, 50 instances each, zero counterexamples");
}

fn sig_static() -> Signature {
    Signature::new(["a", "b"], ["p", "q"])
}

// ---------------------------------------------------------------------
// 4. Diamond equivalences on the random corpus

#[test]
fn acceptance_diamond_equivalences() {
    let start = Instant::now();
    let sig = sig_static();
    let models = kripke_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(5150);

    for round in 0..50 {
        let g = random_formula(&mut rng, &sig, 3);
        let g2 = random_formula(&mut rng, &sig, 3);
        let p1 = random_program(&mut rng, &sig, 2);
        let p2 = random_program(&mut rng, &sig, 2);

        let mut instances: Vec<(String, Formula)> = Vec::new();
        // <p1+p2>g <-> <p1>g | <p2>g
        instances.push((
            "choice".into(),
            Formula::diamond(p1.clone().choice(p2.clone()), g.clone()).iff(
                Formula::diamond(p1.clone(), g.clone())
                    .or(Formula::diamond(p2.clone(), g.clone())),
            ),
        ));
        // <p*>g <-> g | <p><p*>g
        let star = p1.clone().star();
        instances.push((
            "star-unfold".into(),
            Formula::diamond(star.clone(), g.clone()).iff(g.clone().or(Formula::diamond(
                p1.clone(),
                Formula::diamond(star.clone(), g.clone()),
            ))),
        ));
        // <?g>g2 <-> g & g2
        instances.push((
            "test".into(),
            Formula::diamond(pedal::syntax::Program::test(g.clone()), g2.clone())
                .iff(g.clone().and(g2.clone())),
        ));
        // <p>(g | g2) <-> <p>g | <p>g2
        instances.push((
            "or-dist".into(),
            Formula::diamond(p1.clone(), g.clone().or(g2.clone())).iff(
                Formula::diamond(p1.clone(), g.clone())
                    .or(Formula::diamond(p1.clone(), g2.clone())),
            ),
        ));
        // <p1;p2>g <-> <p1><p2>g
        instances.push((
            "seq".into(),
            Formula::diamond(p1.clone().seq(p2.clone()), g.clone())
                .iff(Formula::diamond(p1.clone(), Formula::diamond(p2.clone(), g.clone()))),
        ));
        // <p^n>g -> <p*>g for n = 1..4
        let mut iterated = p1.clone();
        for n in 1..=4usize {
            instances.push((
                format!("power-{n}"),
                Formula::diamond(iterated.clone(), g.clone())
                    .implies(Formula::diamond(star.clone(), g.clone())),
            ));
            iterated = p1.clone().seq(iterated);
        }

        for (name, instance) in &instances {
            for (mi, model) in models.iter().enumerate() {
                assert!(
                    model.valid_on(instance),
                    "{name} equivalence failed on model {mi}, round {round}: {instance}"
                );
            }
        }
    }

    // star denotation agrees with the closure computed independently by
    // iterated composition
    for (mi, model) in models.iter().enumerate().take(50) {
        let p = pedal::syntax::Program::atom("p");
        let star = denote(&model.frame, &model.vp, &p.clone().star());
        let base = denote(&model.frame, &model.vp, &p);
        let n = model.frame.n_states;
        let mut by_powers = Relation::identity(n);
        let mut power = Relation::identity(n);
        for _ in 0..n {
            power = power.compose(&base);
            by_powers = by_powers.union(&power);
        }
        assert_eq!(star, by_powers, "star vs powers on model {mi}");
        assert_eq!(star, pedal::kripke::star_closure(&base));
    }

    budget(start, Duration::from_secs(120), "diamond equivalences");
    println!("[PASS] diamond equivalences (choice, star, test, or-dist, seq, powers 1-4): zero counterexamples");
}

// ---------------------------------------------------------------------
// 5. Measure laws

#[test]
fn acceptance_measure_laws() {
    let start = Instant::now();
    let sig = sig_static();
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let models = pedal_corpus(500, 99);

    // complementation and finite additivity, exact, on 500 models
    for (mi, pm) in models.iter().enumerate() {
        let g = random_formula(&mut rng, &sig, 4);
        let s = rng.gen_range(0..pm.frame.n_states);
        let total = mu(pm, s, &g) + mu(pm, s, &g.clone().not());
        assert!(total.is_one(), "complement law failed on model {mi}");

        // split the supported valuations into two disjoint sets
        let supported: Vec<ProgramValuation> =
            pm.supported_valuations().map(|(v, _)| v.clone()).collect();
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for v in supported {
            if rng.gen_bool(0.5) {
                left.insert(v);
            } else {
                right.insert(v);
            }
        }
        let union: BTreeSet<ProgramValuation> = left.union(&right).cloned().collect();
        assert_eq!(
            measure_set(pm, &union),
            measure_set(pm, &left) + measure_set(pm, &right),
            "additivity failed on model {mi}"
        );
    }

    // zero-one law and valuation independence for dmffs
    let dmff_models = pedal_corpus(40, 123);
    for round in 0..200 {
        let g = random_dmff(&mut rng, &sig, 4);
        let pm = &dmff_models[round % dmff_models.len()];
        let s = rng.gen_range(0..pm.frame.n_states);
        let value = mu(pm, s, &g);
        assert!(
            value.is_zero() || value.is_one(),
            "zero-one law failed in round {round}: mu = {value}"
        );
        let verdicts: BTreeSet<bool> = pm
            .supported_valuations()
            .map(|(v, _)| {
                pedal::kripke::eval_set(&pm.frame, v, &g).contains(s)
            })
            .collect();
        assert!(verdicts.len() <= 1, "dmff truth varied across valuations");
    }

    // derived probability rules, semantically: threshold monotonicity and
    // modus ponens under the probability operator
    for (mi, pm) in models.iter().enumerate().take(100) {
        let g1 = random_formula(&mut rng, &sig, 3);
        let g2 = random_formula(&mut rng, &sig, 3);
        let s = rng.gen_range(0..pm.frame.n_states);
        let m1 = mu(pm, s, &g1);
        let lower = random_threshold(&mut rng);
        if lower <= m1 {
            // Pr(g) >= m1 holds, so Pr(g) >= lower must too
            assert!(satisfies_credence(
                pm,
                s,
                &pedal::syntax::CredenceFormula::AtLeast(g1.clone(), lower)
            ));
        }
        if mu(pm, s, &g1.clone().implies(g2.clone())).is_one() {
            assert!(
                mu(pm, s, &g2) >= m1,
                "modus ponens under the measure failed on model {mi}"
            );
        }
    }

    budget(start, Duration::from_secs(120), "measure laws");
    println!("[PASS] measure laws: complementation and additivity on 500 models, zero-one on 200 dmffs");
}

// ---------------------------------------------------------------------
// 6. Decision procedure against exhaustive model search

/// Every partition of `0..n` as an equivalence relation.
fn all_equivalences(n: usize) -> Vec<Relation> {
    fn blocks(n: usize) -> Vec<Vec<usize>> {
        // block assignment in restricted-growth form
        let mut out = Vec::new();
        let mut current = vec![0usize; n];
        loop {
            out.push(current.clone());
            // next restricted-growth string
            let mut i = n;
            loop {
                if i == 1 {
                    return out;
                }
                i -= 1;
                let max_prev = current[..i].iter().copied().max().unwrap_or(0);
                if current[i] <= max_prev {
                    current[i] += 1;
                    for x in current[i + 1..].iter_mut() {
                        *x = 0;
                    }
                    break;
                }
                current[i] = 0;
            }
        }
    }
    blocks(n)
        .into_iter()
        .map(|assignment| {
            let mut rel = Relation::empty(n);
            for i in 0..n {
                for j in 0..n {
                    if assignment[i] == assignment[j] {
                        rel.insert(i, j);
                    }
                }
            }
            rel
        })
        .collect()
}

/// Exhaustive satisfiability over all models with at most three states
/// over the formula's own signature.
fn oracle_satisfiable(f: &Formula) -> bool {
    let (fa, pa) = f.collect_atoms();
    let fa: Vec<String> = fa.into_iter().collect();
    let pa: BTreeSet<String> = pa.into_iter().collect();
    let normalized = f.normalize();
    for n in 1..=3usize {
        for rbox in all_equivalences(n) {
            let vf_bits = fa.len() * n;
            for vf_mask in 0u64..1 << vf_bits {
                let mut vf = BTreeMap::new();
                for (ai, atom) in fa.iter().enumerate() {
                    let set = StateSet::from_states(
                        n,
                        (0..n).filter(|s| vf_mask >> (ai * n + s) & 1 == 1),
                    );
                    vf.insert(atom.clone(), set);
                }
                let frame = Frame::new(n, vf, rbox.clone());
                let space = ValuationSpace::new(&frame, &pa);
                let count = space.count().expect("small spaces");
                for i in 0..count {
                    let vp = space.get(i);
                    if !pedal::kripke::eval_set_prenormalized(&frame, &vp, &normalized)
                        .is_empty()
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

const CORPUS: &[(&str, Class)] = &[
    // valid
    ("G a -> a", Class::Valid),
    ("F a -> G F a", Class::Valid),
    ("<p>a -> F a", Class::Valid),
    ("a -> F a", Class::Valid),
    ("G(a -> b) -> (G a -> G b)", Class::Valid),
    ("[p](a & b) <-> ([p]a & [p]b)", Class::Valid),
    ("[p+q]a <-> ([p]a & [q]a)", Class::Valid),
    ("[?a]b <-> (a -> b)", Class::Valid),
    ("[p;q]a <-> [p][q]a", Class::Valid),
    ("(a & [p][p*]a) <-> [p*]a", Class::Valid),
    ("(a & [p*](a -> [p]a)) -> [p*]a", Class::Valid),
    ("<p*>a <-> a | <p><p*>a", Class::Valid),
    ("<?a>b <-> a & b", Class::Valid),
    ("<p>(a | b) <-> <p>a | <p>b", Class::Valid),
    ("<p;q>a <-> <p><q>a", Class::Valid),
    ("<p+q>a <-> <p>a | <q>a", Class::Valid),
    ("[p]a -> (<p>b -> <p>a)", Class::Valid),
    ("G a -> [p]a", Class::Valid),
    ("<p><p>a -> <p*>a", Class::Valid),
    ("G a -> [p*]a", Class::Valid),
    // satisfiable but not valid
    ("a", Class::Contingent),
    ("~a", Class::Contingent),
    ("a -> [p]a", Class::Contingent),
    ("[p]#", Class::Contingent),
    ("<p>a", Class::Contingent),
    ("F a & F ~a", Class::Contingent),
    ("a & ~b", Class::Contingent),
    ("<p*>b & ~b", Class::Contingent),
    ("G a", Class::Contingent),
    ("<p>a & <q>~a", Class::Contingent),
    ("<p*>a & ~a & ~<p>a", Class::Contingent),
    ("[p](a -> b) & <p>a", Class::Contingent),
    ("G(a -> [p]b) & a", Class::Contingent),
    ("<p+q>a & [p]~a", Class::Contingent),
    ("<?a;p>b", Class::Contingent),
    ("[p*](a -> [p]a) & a", Class::Contingent),
    ("F (a & b)", Class::Contingent),
    ("~<p>~(a | b)", Class::Contingent),
    ("<p><q>a & ~<q><p>a", Class::Contingent),
    ("b & [p]~b & <p>a", Class::Contingent),
    // unsatisfiable
    ("a & ~a", Class::Unsat),
    ("#", Class::Unsat),
    ("<p>a & [p]~a", Class::Unsat),
    ("F a & G ~a", Class::Unsat),
    ("a & G ~a", Class::Unsat),
    ("<p>a & G ~a", Class::Unsat),
    ("(a & [p*](a -> [p]a)) & <p*>~a", Class::Unsat),
    ("<p*>a & G ~a", Class::Unsat),
    ("<?a>b & ~a", Class::Unsat),
    ("<?a>b & ~b", Class::Unsat),
    ("[p]a & [p]~a & <p>b", Class::Unsat),
    ("b & [p*]~b", Class::Unsat),
    ("<p;q>a & [p][q]~a", Class::Unsat),
    ("<p+q>a & [p]~a & [q]~a", Class::Unsat),
    ("~(a | ~a)", Class::Unsat),
    ("G(a -> [p]b) & a & <p>~b", Class::Unsat),
    ("F # ", Class::Unsat),
    ("<p*>~(a | ~a)", Class::Unsat),
    ("a & [p*]~a & <p><p>a", Class::Unsat),
    ("(<p>a | <q>a) & G ~a", Class::Unsat),
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Class {
    Valid,
    Contingent,
    Unsat,
}

#[test]
fn acceptance_decision_oracle_equivalence() {
    let start = Instant::now();
    assert_eq!(CORPUS.len(), 60, "the corpus is pinned at sixty formulas");

    let mut counts = BTreeMap::new();
    for (text, expected) in CORPUS {
        let f = parse_formula_raw(text).unwrap();
        let (sat, witness) = decide_satisfiable(&f, &limits()).unwrap();
        let (neg_sat, _) = decide_satisfiable(&f.clone().not(), &limits()).unwrap();

        let oracle_sat = oracle_satisfiable(&f);
        let oracle_neg_sat = oracle_satisfiable(&f.clone().not());
        assert_eq!(sat, oracle_sat, "satisfiability mismatch on `{text}`");
        assert_eq!(neg_sat, oracle_neg_sat, "validity mismatch on `{text}`");

        let class = match (sat, neg_sat) {
            (true, true) => Class::Contingent,
            (true, false) => Class::Valid,
            (false, _) => Class::Unsat,
        };
        assert_eq!(class, *expected, "classification of `{text}`");
        *counts.entry(format!("{expected:?}")).or_insert(0) += 1;

        // witnesses really witness
        if let Some(w) = witness {
            assert!(pedal::kripke::validate_model(&w).is_empty());
            assert!((0..w.frame.n_states).any(|s| w.satisfies(s, &f)));
        }
    }

    // truth lemma on every canonical model of the corpus with |FL| <= 10
    let mut checked = 0;
    for (text, _) in CORPUS {
        let f = parse_formula_raw(text).unwrap();
        let seeds: BTreeSet<Formula> = [f].into_iter().collect();
        let closure = pedal::syntax::fl_closure(&seeds);
        if closure.len() > 10 {
            continue;
        }
        let cm = canonical_model(&seeds, &limits()).unwrap();
        assert!(pedal::kripke::validate_model(&cm.model).is_empty());
        for atom in 0..cm.space.atom_count() {
            for g in cm.space.closure() {
                let truth = cm.model.satisfies(atom, g);
                assert_eq!(cm.space.atom_contains(atom, g), Some(truth));
                assert_eq!(
                    cm.space.atom_contains(atom, &g.clone().not()),
                    Some(!truth)
                );
            }
        }
        checked += 1;
    }
    assert!(checked >= 40, "most corpus members have closures <= 10");

    budget(start, Duration::from_secs(300), "decision oracle equivalence");
    println!(
        "[PASS] decision procedure: agreement with exhaustive search on 60 formulas {counts:?}; truth lemma on {checked} canonical models"
    );
}

// ---------------------------------------------------------------------
// 7. Section relocation and truth transfer, exhaustive

#[test]
fn acceptance_section_relocation() {
    let start = Instant::now();
    for text in ["[p]a", "<p*>a"] {
        let f = parse_formula_raw(text).unwrap();
        let seeds: BTreeSet<Formula> = [f].into_iter().collect();
        let space = atoms(&seeds, &limits()).unwrap();
        let sections = canonical_sections(&space, &limits()).unwrap();
        let canonical = space.canonical_kripke();

        // every program appearing in the closure
        let mut programs: Vec<pedal::syntax::Program> = Vec::new();
        for g in space.closure() {
            if let Formula::Diamond(pi, _) = g {
                if !programs.contains(pi) {
                    programs.push((**pi).clone());
                }
            }
        }
        assert!(!programs.is_empty());

        for sigma in &sections {
            let valuation = section_valuation(&space, sigma);
            let section_model = KripkeModel::new(
                Frame::new(
                    canonical.frame.n_states,
                    canonical.frame.vf.clone(),
                    canonical.frame.rbox.clone(),
                ),
                valuation,
            );
            let inv = sigma.inverse();
            for pi in &programs {
                let canonical_rel = denote(&canonical.frame, &canonical.vp, pi);
                let section_rel = denote(&section_model.frame, &section_model.vp, pi);
                for w in 0..space.atom_count() {
                    for v in 0..space.atom_count() {
                        assert_eq!(
                            canonical_rel.contains(w, v),
                            section_rel.contains(inv.apply(w), inv.apply(v)),
                            "relocation failed for {pi} over {text}"
                        );
                    }
                }
            }
            for g in space.closure() {
                for w in 0..space.atom_count() {
                    assert_eq!(
                        satisfies(&canonical, w, g),
                        satisfies(&section_model, inv.apply(w), g),
                        "truth transfer failed for {g} over {text}"
                    );
                    let ng = g.clone().not();
                    assert_eq!(
                        satisfies(&canonical, w, &ng),
                        satisfies(&section_model, inv.apply(w), &ng),
                    );
                }
            }
        }
    }
    budget(start, Duration::from_secs(60), "section relocation");
    println!("[PASS] section relocation and truth transfer: exhaustive over both pinned closures");
}

// ---------------------------------------------------------------------
// 8. Proof checker: library, fuzz, soundness

/// Semantic soundness of an accepted credence script: wherever all
/// premises hold, the conclusion holds.
fn pedal_script_sound(script: &ProofScript, models: &[PedalModel]) -> bool {
    let premises = script.premises();
    let Some(Statement::Credence(conclusion)) = script.conclusion() else {
        return true;
    };
    for pm in models {
        for s in 0..pm.frame.n_states {
            let premises_hold = premises.iter().all(|p| match p {
                Statement::Credence(c) => satisfies_credence(pm, s, c),
                Statement::Ground(_) => true,
            });
            if premises_hold && !satisfies_credence(pm, s, conclusion) {
                return false;
            }
        }
    }
    true
}

fn ground_script_sound(script: &ProofScript, models: &[KripkeModel]) -> bool {
    let premises = script.premises();
    let Some(Statement::Ground(conclusion)) = script.conclusion() else {
        return true;
    };
    for m in models {
        for s in 0..m.frame.n_states {
            let premises_hold = premises.iter().all(|p| match p {
                Statement::Ground(g) => m.satisfies(s, g),
                Statement::Credence(_) => true,
            });
            if premises_hold && !m.satisfies(s, conclusion) {
                return false;
            }
        }
    }
    true
}

#[test]
fn acceptance_proof_checker() {
    let start = Instant::now();
    let limits = limits();

    // the derived-rule library is accepted, R3-free, and semantically sound
    let suite = derived_rule_suite(&limits);
    assert!(suite.len() >= 10, "at least ten derived-rule scripts");
    let pedal_models = pedal_corpus(100, 4242);
    let kripke_models = kripke_corpus();
    for entry in &suite {
        assert_eq!(entry.verdict, Verdict::Accepted, "script {}", entry.name);
        assert!(!entry.script.uses_r3());
        match entry.script.system {
            System::Pedal => assert!(
                pedal_script_sound(&entry.script, &pedal_models),
                "accepted credence conclusion of `{}` must hold on 100 random models",
                entry.name
            ),
            System::PdlBox => assert!(
                ground_script_sound(&entry.script, &kripke_models),
                "accepted ground conclusion of `{}` must hold on the model corpus",
                entry.name
            ),
        }
    }

    // 1000 corruptions: anything still accepted must still be sound
    let mut rng = ChaCha8Rng::seed_from_u64(616);
    let scripts: Vec<ProofScript> = suite.iter().map(|e| e.script.clone()).collect();
    let mut rejected = 0;
    let mut accepted_sound = 0;
    for round in 0..1000 {
        let script = &scripts[round % scripts.len()];
        let mutant = mutate_script(&mut rng, script);
        assert_ne!(&mutant, script);
        match check_proof(&mutant, 100, &limits) {
            Verdict::Rejected { .. } => rejected += 1,
            verdict => {
                assert!(verdict.is_accepted());
                let sound = match mutant.system {
                    System::Pedal => pedal_script_sound(&mutant, &pedal_models),
                    System::PdlBox => ground_script_sound(&mutant, &kripke_models),
                };
                assert!(
                    sound,
                    "round {round}: a corrupted script was accepted with an unsound conclusion"
                );
                accepted_sound += 1;
            }
        }
    }
    assert!(rejected >= 800, "most corruptions are caught ({rejected}/1000)");

    budget(start, Duration::from_secs(120), "proof checker");
    println!(
        "[PASS] proof checker: {} library scripts accepted; 1000 mutations ({rejected} rejected, {accepted_sound} accepted-and-sound)",
        suite.len()
    );
}

// ---------------------------------------------------------------------
// 9. LP exactness against vertex enumeration

/// Gaussian elimination over the rationals: solve `m x = rhs` for square
/// systems, `None` when singular.
fn solve_square(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().cloned().collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let scale = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &scale;
        }
        b[col] /= &scale;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

/// Independent optimum: convert to standard form, enumerate every basis,
/// keep feasible basic solutions, optimize over them.
fn vertex_enumeration_min(lp: &Lp, objective: &[Rational]) -> Option<Rational> {
    // standard form: x >= 0, slack for Le, surplus for Ge
    let m = lp.constraints.len();
    let extra: usize = lp
        .constraints
        .iter()
        .filter(|c| c.cmp != Cmp::Eq)
        .count();
    let cols = lp.num_vars + extra;
    let mut a = vec![vec![Rational::zero(); cols]; m];
    let mut b = vec![Rational::zero(); m];
    let mut next = lp.num_vars;
    for (i, c) in lp.constraints.iter().enumerate() {
        for (j, x) in c.coeffs.iter().enumerate() {
            a[i][j] = x.clone();
        }
        b[i] = c.rhs.clone();
        match c.cmp {
            Cmp::Le => {
                a[i][next] = Rational::one();
                next += 1;
            }
            Cmp::Ge => {
                a[i][next] = -Rational::one();
                next += 1;
            }
            Cmp::Eq => {}
        }
    }

    // choose m basis columns out of all columns
    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..k).collect();
        if k > n {
            return out;
        }
        loop {
            out.push(current.clone());
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if current[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            current[i] += 1;
            for j in i + 1..k {
                current[j] = current[j - 1] + 1;
            }
        }
    }

    let mut best: Option<Rational> = None;
    for basis in combinations(cols, m) {
        let square: Vec<Vec<Rational>> = (0..m)
            .map(|r| basis.iter().map(|&c| a[r][c].clone()).collect())
            .collect();
        let Some(values) = solve_square(&square, &b) else {
            continue;
        };
        if values.iter().any(|v| v < &Rational::zero()) {
            continue;
        }
        let mut x = vec![Rational::zero(); cols];
        for (&c, v) in basis.iter().zip(values) {
            x[c] = v;
        }
        let value: Rational = objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c.clone() * v.clone())
            .sum();
        best = Some(match best {
            None => value,
            Some(b) if value < b => value,
            Some(b) => b,
        });
    }
    best
}

#[test]
fn acceptance_lp_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(271828);
    let mut checked = 0;

    // random small profile LPs: mass 1 plus >= and <= rows
    for round in 0..60 {
        let k = rng.gen_range(2..=8);
        let mut constraints = vec![LinearConstraint {
            coeffs: vec![Rational::one(); k],
            cmp: Cmp::Eq,
            rhs: Rational::one(),
        }];
        for _ in 0..rng.gen_range(1..=3) {
            let coeffs: Vec<Rational> = (0..k)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let cmp = if rng.gen_bool(0.5) { Cmp::Ge } else { Cmp::Le };
            constraints.push(LinearConstraint {
                coeffs,
                cmp,
                rhs: random_threshold(&mut rng),
            });
        }
        let lp = Lp {
            num_vars: k,
            constraints,
        };
        let objective: Vec<Rational> = (0..k)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();

        let expected = vertex_enumeration_min(&lp, &objective);
        match simplex::minimize(&lp, &objective) {
            LpOutcome::Optimal { value, .. } => {
                assert_eq!(
                    Some(value),
                    expected,
                    "round {round}: simplex disagrees with vertex enumeration"
                );
                checked += 1;
            }
            LpOutcome::Infeasible => {
                assert_eq!(expected, None, "round {round}: feasibility disagrees");
            }
            LpOutcome::Unbounded => panic!("mass-1 LPs are bounded"),
        }
        // the maximum too, via negation inside the oracle
        let negated: Vec<Rational> = objective.iter().map(|x| -x.clone()).collect();
        let expected_max = vertex_enumeration_min(&lp, &negated).map(|v| -v);
        if let LpOutcome::Optimal { value, .. } = simplex::maximize(&lp, &objective) {
            assert_eq!(Some(value), expected_max, "round {round}: max disagrees");
        }
    }
    assert!(checked >= 30, "enough feasible instances were exercised");

    // the reference instance itself deduplicates to <= 8 profiles; check
    // the reported optimum against the oracle on the explicit LP
    let sig = demo::signature();
    let frame = demo::frame();
    let programs: BTreeSet<String> = sig.program_atoms.clone();
    let vs = enumerate_valuations(&frame, &programs, 1 << 20).unwrap();
    let grounds = [
        parse_formula(demo::CLAIM_AB, &sig).unwrap(),
        parse_formula(demo::CLAIM_CD, &sig).unwrap(),
        parse_formula(demo::CLAIM_MIX, &sig).unwrap(),
    ];
    let mut profiles: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for v in &vs {
        let key: Vec<bool> = grounds
            .iter()
            .map(|g| pedal::kripke::eval_set(&frame, v, g).contains(0))
            .collect();
        *profiles.entry(key).or_insert(0) += 1;
    }
    let keys: Vec<Vec<bool>> = profiles.keys().cloned().collect();
    let k = keys.len();
    assert!(k <= 8, "the reference instance deduplicates to {k} profiles");
    let row = |gi: usize| -> Vec<Rational> {
        keys.iter()
            .map(|key| if key[gi] { Rational::one() } else { Rational::zero() })
            .collect()
    };
    let lp = Lp {
        num_vars: k,
        constraints: vec![
            LinearConstraint {
                coeffs: vec![Rational::one(); k],
                cmp: Cmp::Eq,
                rhs: Rational::one(),
            },
            LinearConstraint {
                coeffs: row(0),
                cmp: Cmp::Ge,
                rhs: rat(3, 5),
            },
            LinearConstraint {
                coeffs: row(1),
                cmp: Cmp::Ge,
                rhs: rat(3, 5),
            },
        ],
    };
    let objective = row(2);
    let oracle = vertex_enumeration_min(&lp, &objective).unwrap();
    assert_eq!(oracle, rat(1, 5));
    match simplex::minimize(&lp, &objective) {
        LpOutcome::Optimal { value, .. } => assert_eq!(value, oracle),
        other => panic!("unexpected {other:?}"),
    }

    budget(start, Duration::from_secs(60), "lp exactness");
    println!("[PASS] LP exactness: simplex equals vertex enumeration on {checked}+ instances and the reference LP");
}
