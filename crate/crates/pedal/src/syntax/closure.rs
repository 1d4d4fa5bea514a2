//! Fischer-Ladner closure of a formula set.
//!
//! The closure works over the primitive basis (inputs are normalized
//! first) and is the least set closed under:
//!
//! 1. the seed formulas themselves;
//! 2. immediate subformulas;
//! 3. `<?g1>g2` adds `g1`;
//! 4. `<p1;p2>g` adds `<p1><p2>g`;
//! 5. `<p1+p2>g` adds `<p1>g` and `<p2>g`;
//! 6. `<p*>g` adds `<p>g` and `<p><p*>g`.

use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Program};

/// How a closure member entered the set (first producer wins).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureOrigin {
    Seed,
    Subformula(Formula),
    TestRule(Formula),
    SeqRule(Formula),
    ChoiceRule(Formula),
    StarRule(Formula),
}

/// The closure together with the rule application that produced each member.
pub fn fl_closure_trace(seeds: &BTreeSet<Formula>) -> Vec<(Formula, ClosureOrigin)> {
    let mut origin: BTreeMap<Formula, ClosureOrigin> = BTreeMap::new();
    let mut order: Vec<Formula> = Vec::new();
    let mut work: Vec<Formula> = Vec::new();

    for seed in seeds {
        let f = seed.normalize();
        if !origin.contains_key(&f) {
            origin.insert(f.clone(), ClosureOrigin::Seed);
            order.push(f.clone());
            work.push(f);
        }
    }

    while let Some(f) = work.pop() {
        let mut produced: Vec<(Formula, ClosureOrigin)> = Vec::new();
        match &f {
            Formula::Atom(_) | Formula::Bottom => {}
            Formula::Not(g) | Formula::GlobalDiamond(g) => {
                produced.push(((**g).clone(), ClosureOrigin::Subformula(f.clone())));
            }
            Formula::Or(a, b) => {
                produced.push(((**a).clone(), ClosureOrigin::Subformula(f.clone())));
                produced.push(((**b).clone(), ClosureOrigin::Subformula(f.clone())));
            }
            Formula::Diamond(pi, g) => {
                produced.push(((**g).clone(), ClosureOrigin::Subformula(f.clone())));
                match &**pi {
                    Program::Atom(_) => {}
                    Program::Test(d) => {
                        produced.push(((**d).clone(), ClosureOrigin::TestRule(f.clone())));
                    }
                    Program::Seq(p1, p2) => {
                        let unfolded = Formula::diamond(
                            (**p1).clone(),
                            Formula::diamond((**p2).clone(), (**g).clone()),
                        );
                        produced.push((unfolded, ClosureOrigin::SeqRule(f.clone())));
                    }
                    Program::Choice(p1, p2) => {
                        produced.push((
                            Formula::diamond((**p1).clone(), (**g).clone()),
                            ClosureOrigin::ChoiceRule(f.clone()),
                        ));
                        produced.push((
                            Formula::diamond((**p2).clone(), (**g).clone()),
                            ClosureOrigin::ChoiceRule(f.clone()),
                        ));
                    }
                    Program::Star(p) => {
                        produced.push((
                            Formula::diamond((**p).clone(), (**g).clone()),
                            ClosureOrigin::StarRule(f.clone()),
                        ));
                        produced.push((
                            Formula::diamond((**p).clone(), f.clone()),
                            ClosureOrigin::StarRule(f.clone()),
                        ));
                    }
                }
            }
            // Inputs are normalized; the derived constructors cannot appear.
            Formula::And(_, _)
            | Formula::Implies(_, _)
            | Formula::Iff(_, _)
            | Formula::Box(_, _)
            | Formula::GlobalBox(_) => unreachable!("closure runs on normalized formulas"),
        }
        for (g, why) in produced {
            if !origin.contains_key(&g) {
                origin.insert(g.clone(), why);
                order.push(g.clone());
                work.push(g);
            }
        }
    }

    order
        .into_iter()
        .map(|f| {
            let why = origin.get(&f).cloned().expect("recorded");
            (f, why)
        })
        .collect()
}

/// Fischer-Ladner closure of `seeds`, normalized.
pub fn fl_closure(seeds: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    fl_closure_trace(seeds).into_iter().map(|(f, _)| f).collect()
}

/// `FL(G)` together with the negation of each member.
pub fn fl_pm(seeds: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let base = fl_closure(seeds);
    let mut out = base.clone();
    for f in base {
        out.insert(f.not());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    fn dia(p: &str, f: Formula) -> Formula {
        Formula::diamond(Program::atom(p), f)
    }

    /// Independent oracle: re-apply every closure rule over the whole set
    /// until nothing new appears.
    fn brute_force_closure(seeds: &BTreeSet<Formula>) -> BTreeSet<Formula> {
        let mut out: BTreeSet<Formula> = seeds.iter().map(|f| f.normalize()).collect();
        loop {
            let mut next = out.clone();
            for f in &out {
                match f {
                    Formula::Not(g) | Formula::GlobalDiamond(g) => {
                        next.insert((**g).clone());
                    }
                    Formula::Or(a, b) => {
                        next.insert((**a).clone());
                        next.insert((**b).clone());
                    }
                    Formula::Diamond(pi, g) => {
                        next.insert((**g).clone());
                        match &**pi {
                            Program::Atom(_) => {}
                            Program::Test(d) => {
                                next.insert((**d).clone());
                            }
                            Program::Seq(p1, p2) => {
                                next.insert(Formula::diamond(
                                    (**p1).clone(),
                                    Formula::diamond((**p2).clone(), (**g).clone()),
                                ));
                            }
                            Program::Choice(p1, p2) => {
                                next.insert(Formula::diamond((**p1).clone(), (**g).clone()));
                                next.insert(Formula::diamond((**p2).clone(), (**g).clone()));
                            }
                            Program::Star(p) => {
                                next.insert(Formula::diamond((**p).clone(), (**g).clone()));
                                next.insert(Formula::diamond((**p).clone(), f.clone()));
                            }
                        }
                    }
                    _ => {}
                }
            }
            if next == out {
                return out;
            }
            out = next;
        }
    }

    #[test]
    fn star_example() {
        let a = Formula::atom("a");
        let star = Formula::diamond(Program::atom("p").star(), a.clone());
        let got = fl_closure(&set(&[star.clone()]));
        let expected = set(&[
            star.clone(),
            a.clone(),
            dia("p", a),
            dia("p", star),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn single_atom_is_fixed() {
        let a = Formula::atom("a");
        assert_eq!(fl_closure(&set(&[a.clone()])), set(&[a]));
    }

    #[test]
    fn test_rule_example() {
        let f = Formula::diamond(Program::test(Formula::atom("b")), Formula::atom("a"));
        let got = fl_closure(&set(&[f.clone()]));
        let expected = set(&[f, Formula::atom("a"), Formula::atom("b")]);
        assert_eq!(got, expected);
    }

    #[test]
    fn matches_brute_force_on_assorted_inputs() {
        let p = Program::atom("p");
        let q = Program::atom("q");
        let samples = [
            Formula::box_(p.clone().seq(q.clone()).star(), Formula::atom("a")),
            Formula::diamond(
                Program::test(Formula::atom("A")).seq(p.clone()).choice(q.clone()),
                Formula::atom("B").or(Formula::atom("a")),
            ),
            Formula::atom("a")
                .implies(Formula::box_(p.clone(), Formula::atom("b")))
                .gbox(),
            Formula::diamond(p.choice(q).star(), Formula::atom("a").not()),
        ];
        for f in samples {
            let seeds = set(&[f]);
            assert_eq!(fl_closure(&seeds), brute_force_closure(&seeds));
        }
    }

    #[test]
    fn fl_pm_examples() {
        let a = Formula::atom("a");
        assert_eq!(fl_pm(&set(&[a.clone()])), set(&[a.clone(), a.clone().not()]));
        let star = Formula::diamond(Program::atom("p").star(), a);
        assert_eq!(fl_pm(&set(&[star])).len(), 8);
        assert_eq!(fl_pm(&BTreeSet::new()), BTreeSet::new());
    }

    #[test]
    fn monotone_and_idempotent() {
        let a = Formula::atom("a");
        let star = Formula::diamond(Program::atom("p").star(), a.clone());
        let small = set(&[a.clone()]);
        let big = set(&[a, star]);
        let c_small = fl_closure(&small);
        let c_big = fl_closure(&big);
        assert!(c_small.is_subset(&c_big));
        assert_eq!(fl_closure(&c_big), c_big);
    }

    #[test]
    fn trace_names_a_producing_rule() {
        let a = Formula::atom("a");
        let star = Formula::diamond(Program::atom("p").star(), a.clone());
        let trace = fl_closure_trace(&set(&[star.clone()]));
        let members: BTreeSet<Formula> = trace.iter().map(|(f, _)| f.clone()).collect();
        for (f, why) in &trace {
            match why {
                ClosureOrigin::Seed => assert_eq!(*f, star),
                ClosureOrigin::Subformula(parent)
                | ClosureOrigin::TestRule(parent)
                | ClosureOrigin::SeqRule(parent)
                | ClosureOrigin::ChoiceRule(parent)
                | ClosureOrigin::StarRule(parent) => {
                    assert!(members.contains(parent), "parent of {f} must be in the set");
                }
            }
        }
    }
}
