//! Deterministic random generators for the test harnesses: formulas,
//! programs, measured models and proof-script corruptions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::credence::{Cell, PedalModel};
use crate::kripke::{random_model, ProgramValuation, Relation};
use crate::proofcheck::{Justification, ProofScript, Statement};
use crate::rational::Rational;
use crate::syntax::{CredenceFormula, Formula, Program, Signature};

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn random_atom(rng: &mut impl Rng, sig: &Signature) -> Formula {
    let atoms: Vec<&String> = sig.formula_atoms.iter().collect();
    if atoms.is_empty() {
        Formula::Bottom
    } else {
        Formula::atom((*pick(rng, &atoms)).clone())
    }
}

/// A random formula of depth at most `depth`, over the full sugared
/// constructor set.
pub fn random_formula(rng: &mut impl Rng, sig: &Signature, depth: usize) -> Formula {
    if depth == 0 {
        return if rng.gen_bool(0.15) {
            Formula::Bottom
        } else {
            random_atom(rng, sig)
        };
    }
    match rng.gen_range(0..12) {
        0 => random_atom(rng, sig),
        1 => Formula::Bottom,
        2 | 3 => random_formula(rng, sig, depth - 1).not(),
        4 => random_formula(rng, sig, depth - 1).or(random_formula(rng, sig, depth - 1)),
        5 => random_formula(rng, sig, depth - 1).and(random_formula(rng, sig, depth - 1)),
        6 => random_formula(rng, sig, depth - 1).implies(random_formula(rng, sig, depth - 1)),
        7 => random_formula(rng, sig, depth - 1).iff(random_formula(rng, sig, depth - 1)),
        8 => Formula::diamond(
            random_program(rng, sig, depth - 1),
            random_formula(rng, sig, depth - 1),
        ),
        9 => Formula::box_(
            random_program(rng, sig, depth - 1),
            random_formula(rng, sig, depth - 1),
        ),
        10 => random_formula(rng, sig, depth - 1).gdia(),
        _ => random_formula(rng, sig, depth - 1).gbox(),
    }
}

/// A random program of depth at most `depth`.
pub fn random_program(rng: &mut impl Rng, sig: &Signature, depth: usize) -> Program {
    let atoms: Vec<&String> = sig.program_atoms.iter().collect();
    if atoms.is_empty() {
        return Program::test(random_formula(rng, sig, depth.saturating_sub(1)));
    }
    if depth == 0 {
        return Program::atom((*pick(rng, &atoms)).clone());
    }
    match rng.gen_range(0..8) {
        0 | 1 | 2 => Program::atom((*pick(rng, &atoms)).clone()),
        3 => random_program(rng, sig, depth - 1).seq(random_program(rng, sig, depth - 1)),
        4 => random_program(rng, sig, depth - 1).choice(random_program(rng, sig, depth - 1)),
        5 => random_program(rng, sig, depth - 1).star(),
        _ => Program::test(random_formula(rng, sig, depth - 1)),
    }
}

/// A random dynamic-modal-free formula (global modalities allowed).
pub fn random_dmff(rng: &mut impl Rng, sig: &Signature, depth: usize) -> Formula {
    if depth == 0 {
        return if rng.gen_bool(0.15) {
            Formula::Bottom
        } else {
            random_atom(rng, sig)
        };
    }
    match rng.gen_range(0..8) {
        0 => random_atom(rng, sig),
        1 => Formula::Bottom,
        2 => random_dmff(rng, sig, depth - 1).not(),
        3 => random_dmff(rng, sig, depth - 1).or(random_dmff(rng, sig, depth - 1)),
        4 => random_dmff(rng, sig, depth - 1).and(random_dmff(rng, sig, depth - 1)),
        5 => random_dmff(rng, sig, depth - 1).implies(random_dmff(rng, sig, depth - 1)),
        6 => random_dmff(rng, sig, depth - 1).gdia(),
        _ => random_dmff(rng, sig, depth - 1).gbox(),
    }
}

/// A random probability threshold with a small denominator.
pub fn random_threshold(rng: &mut impl Rng) -> Rational {
    let den = rng.gen_range(1..=10i64);
    let num = rng.gen_range(0..=den);
    Rational::new(num.into(), den.into())
}

/// A random credence formula over random ground formulas.
pub fn random_credence(rng: &mut impl Rng, sig: &Signature, depth: usize) -> CredenceFormula {
    if depth == 0 {
        return CredenceFormula::AtLeast(random_formula(rng, sig, 2), random_threshold(rng));
    }
    match rng.gen_range(0..6) {
        0 | 1 => CredenceFormula::AtLeast(random_formula(rng, sig, 2), random_threshold(rng)),
        2 => random_credence(rng, sig, depth - 1).not(),
        3 => random_credence(rng, sig, depth - 1).or(random_credence(rng, sig, depth - 1)),
        4 => random_credence(rng, sig, depth - 1).and(random_credence(rng, sig, depth - 1)),
        _ => random_credence(rng, sig, depth - 1).implies(random_credence(rng, sig, depth - 1)),
    }
}

fn random_relation_within(rng: &mut impl Rng, rbox: &Relation, density: f64) -> Relation {
    let n = rbox.universe();
    let mut rel = Relation::empty(n);
    for (i, j) in rbox.pairs() {
        if rng.gen_bool(density) {
            rel.insert(i, j);
        }
    }
    rel
}

/// A random measured model: a random S5 frame plus a few disjoint cells
/// of distinct valuations with positive rational weights summing to one.
/// Always passes validation.
pub fn random_pedal_model(
    rng: &mut impl Rng,
    n_states: usize,
    sig: &Signature,
    max_cells: usize,
    max_cell_size: usize,
) -> PedalModel {
    let base = random_model(rng.gen(), n_states, sig, 0.4);
    let frame = base.frame;

    // distinct valuations, each total on the signature
    let want = rng.gen_range(1..=max_cells.max(1)) * rng.gen_range(1..=max_cell_size.max(1));
    let mut pool: Vec<ProgramValuation> = Vec::new();
    for _ in 0..want * 4 {
        if pool.len() >= want {
            break;
        }
        let mut v = ProgramValuation::new();
        for name in &sig.program_atoms {
            v.insert(name.clone(), random_relation_within(rng, &frame.rbox, 0.5));
        }
        if !pool.contains(&v) {
            pool.push(v);
        }
    }

    // split the pool into cells and draw positive integer weights
    pool.shuffle(rng);
    let cell_count = rng.gen_range(1..=pool.len().min(max_cells.max(1)));
    let mut grouped: Vec<Vec<ProgramValuation>> = vec![Vec::new(); cell_count];
    for (i, v) in pool.into_iter().enumerate() {
        grouped[i % cell_count].push(v);
    }
    let weights: Vec<i64> = (0..cell_count).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let cells = grouped
        .into_iter()
        .zip(weights)
        .map(|(valuations, w)| Cell {
            weight: Rational::new(w.into(), total.into()),
            valuations,
        })
        .collect();
    PedalModel::new(frame, cells)
}

/// One structural corruption of a proof script: a citation, axiom name,
/// statement, threshold or program is changed.
pub fn mutate_script<R: Rng>(rng: &mut R, script: &ProofScript) -> ProofScript {
    let mut out = script.clone();
    let len = out.lines.len();
    for _ in 0..50 {
        let target = rng.gen_range(0..len);
        let line = &mut out.lines[target];
        let shifted = |rng: &mut R, old: usize| -> usize {
            // a different 1-based index
            1 + (old - 1 + rng.gen_range(1..len)) % len
        };
        let applied = match rng.gen_range(0..6) {
            0 if len > 1 => match &mut line.justification {
                Justification::Mp(i, j) => {
                    if rng.gen_bool(0.5) {
                        *i = shifted(rng, *i);
                    } else {
                        *j = shifted(rng, *j);
                    }
                    true
                }
                Justification::NecProgram(i, _) | Justification::NecGlobal(i) => {
                    *i = shifted(rng, *i);
                    true
                }
                _ => false,
            },
            0 => false,
            1 => match &mut line.justification {
                Justification::Axiom(name) => {
                    let pool = [
                        "k", "and-dist", "choice", "test", "seq", "unfold", "induction",
                        "k-global", "t", "five", "incl", "dual", "taut", "A1", "A2", "A3", "A4",
                        "A5", "A6", "A7",
                    ];
                    let fresh = pick(rng, &pool).to_string();
                    if fresh != *name {
                        *name = fresh;
                        true
                    } else {
                        false
                    }
                }
                _ => false,
            },
            2 => {
                if len > 1 {
                    let other = rng.gen_range(0..len);
                    if other != target && script.lines[other].statement != line.statement {
                        line.statement = script.lines[other].statement.clone();
                        true
                    } else {
                        false
                    }
                } else {
                    false
                }
            }
            3 => {
                line.statement = match &line.statement {
                    Statement::Ground(g) => Statement::Ground(g.clone().not()),
                    Statement::Credence(c) => Statement::Credence(c.clone().not()),
                };
                true
            }
            4 => match &mut line.statement {
                Statement::Credence(c) => {
                    let mutated = tweak_first_threshold(c);
                    if mutated != *c {
                        *c = mutated;
                        true
                    } else {
                        false
                    }
                }
                _ => false,
            },
            _ => match &mut line.justification {
                Justification::NecProgram(_, pi) => {
                    *pi = Program::atom("zz");
                    true
                }
                Justification::R3 { r, .. } => {
                    *r = r.clone() / Rational::new(2.into(), 1.into());
                    true
                }
                _ => false,
            },
        };
        if applied {
            return out;
        }
    }
    // nothing applied after many tries: negate the conclusion
    let last = out.lines.last_mut().expect("scripts are nonempty");
    last.statement = match &last.statement {
        Statement::Ground(g) => Statement::Ground(g.clone().not()),
        Statement::Credence(c) => Statement::Credence(c.clone().not()),
    };
    out
}

fn tweak_first_threshold(c: &CredenceFormula) -> CredenceFormula {
    fn go(c: &CredenceFormula, done: &mut bool) -> CredenceFormula {
        if *done {
            return c.clone();
        }
        match c {
            CredenceFormula::AtLeast(g, q) => {
                *done = true;
                let half = Rational::new(1.into(), 2.into());
                let fresh = if q == &Rational::new(0.into(), 1.into()) {
                    half
                } else {
                    q.clone() * half
                };
                CredenceFormula::AtLeast(g.clone(), fresh)
            }
            CredenceFormula::Not(x) => go(x, done).not(),
            CredenceFormula::Or(a, b) => go(a, done).or(go(b, done)),
            CredenceFormula::And(a, b) => go(a, done).and(go(b, done)),
            CredenceFormula::Implies(a, b) => go(a, done).implies(go(b, done)),
            CredenceFormula::Iff(a, b) => go(a, done).iff(go(b, done)),
        }
    }
    let mut done = false;
    go(c, &mut done)
}
