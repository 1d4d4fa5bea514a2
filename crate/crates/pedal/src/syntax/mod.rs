//! Abstract syntax for ground (dynamic) formulas, program terms and
//! credence formulas, together with parsing, printing, desugaring and the
//! Fischer-Ladner closure.
//!
//! Ground formulas keep the derived connectives (`And`, `Implies`, `Iff`,
//! boxes) as real constructors so that parsing and printing round-trip;
//! [`Formula::normalize`] rewrites into the primitive basis
//! `{atom, #, ~, |, <pi>, F}` before anything semantic happens.

mod closure;
mod parse;
mod print;

pub use closure::{fl_closure, fl_closure_trace, fl_pm, ClosureOrigin};
pub use parse::{
    parse_credence, parse_credence_raw, parse_formula, parse_formula_raw, parse_program,
    parse_program_raw, ParseError,
};

use std::collections::BTreeSet;

use crate::rational::{is_probability, Rational};

/// Ground (probability-free) formulas of dynamic logic with a global modality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Bottom,
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `<pi>f` - some execution of `pi` reaches an `f` state.
    Diamond(Box<Program>, Box<Formula>),
    /// `[pi]f` - every execution of `pi` reaches an `f` state.
    Box(Box<Program>, Box<Formula>),
    /// `F f` - true somewhere in the current equivalence class.
    GlobalDiamond(Box<Formula>),
    /// `G f` - true everywhere in the current equivalence class.
    GlobalBox(Box<Formula>),
}

/// Program terms: atomic programs, sequencing, choice, iteration, tests.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Program {
    Atom(String),
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    Star(Box<Program>),
    Test(Box<Formula>),
}

/// Credence formulas: Boolean combinations of `P(f) >= q` atoms.
///
/// Comparison sugar (`<`, `<=`, `=`, `>`) is desugared by the parser via
/// [`Comparison::desugar`], so `AtLeast` is the only primitive comparison.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CredenceFormula {
    AtLeast(Formula, Rational),
    Not(Box<CredenceFormula>),
    Or(Box<CredenceFormula>, Box<CredenceFormula>),
    And(Box<CredenceFormula>, Box<CredenceFormula>),
    Implies(Box<CredenceFormula>, Box<CredenceFormula>),
    Iff(Box<CredenceFormula>, Box<CredenceFormula>),
}

/// A comparison `P(f) REL q` before desugaring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub ground: Formula,
    pub relation: CompareOp,
    pub q: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Ge,
    Gt,
    Eq,
    Le,
    Lt,
}

/// The finite atomic-formula / atomic-program alphabet of a problem instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub formula_atoms: BTreeSet<String>,
    pub program_atoms: BTreeSet<String>,
}

impl Signature {
    pub fn new<F, P>(formula_atoms: F, program_atoms: P) -> Self
    where
        F: IntoIterator,
        F::Item: Into<String>,
        P: IntoIterator,
        P::Item: Into<String>,
    {
        Signature {
            formula_atoms: formula_atoms.into_iter().map(Into::into).collect(),
            program_atoms: program_atoms.into_iter().map(Into::into).collect(),
        }
    }

    pub fn has_formula_atom(&self, name: &str) -> bool {
        self.formula_atoms.contains(name)
    }

    pub fn has_program_atom(&self, name: &str) -> bool {
        self.program_atoms.contains(name)
    }

    /// Extend with every atom mentioned by `f`.
    pub fn absorb_formula(&mut self, f: &Formula) {
        let (fa, pa) = f.collect_atoms();
        self.formula_atoms.extend(fa);
        self.program_atoms.extend(pa);
    }

    pub fn absorb_credence(&mut self, cf: &CredenceFormula) {
        for g in cf.grounds() {
            self.absorb_formula(g);
        }
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn or(self, other: Self) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Self) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Self) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn diamond(pi: Program, f: Self) -> Self {
        Formula::Diamond(Box::new(pi), Box::new(f))
    }

    pub fn box_(pi: Program, f: Self) -> Self {
        Formula::Box(Box::new(pi), Box::new(f))
    }

    pub fn gdia(self) -> Self {
        Formula::GlobalDiamond(Box::new(self))
    }

    pub fn gbox(self) -> Self {
        Formula::GlobalBox(Box::new(self))
    }

    /// `~#`, the everywhere-true formula.
    pub fn top() -> Self {
        Formula::Bottom.not()
    }

    /// Rewrite into the primitive basis `{Atom, Bottom, Not, Or, Diamond,
    /// GlobalDiamond}`. Idempotent.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Bottom => self.clone(),
            Formula::Not(f) => f.normalize().not(),
            Formula::Or(a, b) => a.normalize().or(b.normalize()),
            Formula::And(a, b) => a.normalize().not().or(b.normalize().not()).not(),
            Formula::Implies(a, b) => a.normalize().not().or(b.normalize()),
            Formula::Iff(a, b) => {
                let a = a.normalize();
                let b = b.normalize();
                let fwd = a.clone().not().or(b.clone());
                let bwd = b.not().or(a);
                fwd.not().or(bwd.not()).not()
            }
            Formula::Diamond(pi, f) => Formula::diamond(pi.normalize(), f.normalize()),
            Formula::Box(pi, f) => {
                Formula::diamond(pi.normalize(), f.normalize().not()).not()
            }
            Formula::GlobalDiamond(f) => f.normalize().gdia(),
            Formula::GlobalBox(f) => f.normalize().not().gdia().not(),
        }
    }

    /// True iff no `<pi>`/`[pi]` occurs anywhere, including inside tests.
    /// The global modalities do not count: they are interpreted by the fixed
    /// equivalence relation, not by a program valuation.
    pub fn is_dmff(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bottom => true,
            Formula::Not(f) | Formula::GlobalDiamond(f) | Formula::GlobalBox(f) => f.is_dmff(),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_dmff() && b.is_dmff(),
            Formula::Diamond(_, _) | Formula::Box(_, _) => false,
        }
    }

    /// Node count, programs included.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 1,
            Formula::Not(f) | Formula::GlobalDiamond(f) | Formula::GlobalBox(f) => 1 + f.size(),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
            Formula::Diamond(pi, f) | Formula::Box(pi, f) => 1 + pi.size() + f.size(),
        }
    }

    /// Atom names mentioned, split into (formula atoms, program atoms).
    pub fn collect_atoms(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut fa = BTreeSet::new();
        let mut pa = BTreeSet::new();
        self.collect_atoms_into(&mut fa, &mut pa);
        (fa, pa)
    }

    fn collect_atoms_into(&self, fa: &mut BTreeSet<String>, pa: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                fa.insert(name.clone());
            }
            Formula::Bottom => {}
            Formula::Not(f) | Formula::GlobalDiamond(f) | Formula::GlobalBox(f) => {
                f.collect_atoms_into(fa, pa)
            }
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms_into(fa, pa);
                b.collect_atoms_into(fa, pa);
            }
            Formula::Diamond(pi, f) | Formula::Box(pi, f) => {
                pi.collect_atoms_into(fa, pa);
                f.collect_atoms_into(fa, pa);
            }
        }
    }

    /// Check that every mentioned atom is declared in `sig`.
    pub fn check_signature(&self, sig: &Signature) -> Result<(), ParseError> {
        let (fa, pa) = self.collect_atoms();
        for name in fa {
            if !sig.has_formula_atom(&name) {
                return Err(ParseError::UnknownFormulaAtom { name });
            }
        }
        for name in pa {
            if !sig.has_program_atom(&name) {
                return Err(ParseError::UnknownProgramAtom { name });
            }
        }
        Ok(())
    }
}

impl Program {
    pub fn atom(name: impl Into<String>) -> Self {
        Program::Atom(name.into())
    }

    pub fn seq(self, other: Self) -> Self {
        Program::Seq(Box::new(self), Box::new(other))
    }

    pub fn choice(self, other: Self) -> Self {
        Program::Choice(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Self {
        Program::Star(Box::new(self))
    }

    pub fn test(f: Formula) -> Self {
        Program::Test(Box::new(f))
    }

    pub fn normalize(&self) -> Program {
        match self {
            Program::Atom(_) => self.clone(),
            Program::Seq(a, b) => a.normalize().seq(b.normalize()),
            Program::Choice(a, b) => a.normalize().choice(b.normalize()),
            Program::Star(a) => a.normalize().star(),
            Program::Test(f) => Program::test(f.normalize()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Program::Atom(_) => 1,
            Program::Seq(a, b) | Program::Choice(a, b) => 1 + a.size() + b.size(),
            Program::Star(a) => 1 + a.size(),
            Program::Test(f) => 1 + f.size(),
        }
    }

    /// Atom names mentioned, split into (formula atoms, program atoms).
    pub fn collect_atoms(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut fa = BTreeSet::new();
        let mut pa = BTreeSet::new();
        self.collect_atoms_into(&mut fa, &mut pa);
        (fa, pa)
    }

    fn collect_atoms_into(&self, fa: &mut BTreeSet<String>, pa: &mut BTreeSet<String>) {
        match self {
            Program::Atom(name) => {
                pa.insert(name.clone());
            }
            Program::Seq(a, b) | Program::Choice(a, b) => {
                a.collect_atoms_into(fa, pa);
                b.collect_atoms_into(fa, pa);
            }
            Program::Star(a) => a.collect_atoms_into(fa, pa),
            Program::Test(f) => f.collect_atoms_into(fa, pa),
        }
    }
}

impl CredenceFormula {
    pub fn at_least(ground: Formula, q: Rational) -> Result<Self, ParseError> {
        if !is_probability(&q) {
            return Err(ParseError::RationalOutOfRange { value: q });
        }
        Ok(CredenceFormula::AtLeast(ground, q))
    }

    pub fn not(self) -> Self {
        CredenceFormula::Not(Box::new(self))
    }

    pub fn or(self, other: Self) -> Self {
        CredenceFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Self) -> Self {
        CredenceFormula::And(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        CredenceFormula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Self) -> Self {
        CredenceFormula::Iff(Box::new(self), Box::new(other))
    }

    /// Rewrite the Boolean skeleton into `{AtLeast, Not, Or}`. Ground
    /// formulas inside `AtLeast` are left untouched.
    pub fn normalize(&self) -> CredenceFormula {
        match self {
            CredenceFormula::AtLeast(_, _) => self.clone(),
            CredenceFormula::Not(c) => c.normalize().not(),
            CredenceFormula::Or(a, b) => a.normalize().or(b.normalize()),
            CredenceFormula::And(a, b) => a.normalize().not().or(b.normalize().not()).not(),
            CredenceFormula::Implies(a, b) => a.normalize().not().or(b.normalize()),
            CredenceFormula::Iff(a, b) => {
                let a = a.normalize();
                let b = b.normalize();
                let fwd = a.clone().not().or(b.clone());
                let bwd = b.not().or(a);
                fwd.not().or(bwd.not()).not()
            }
        }
    }

    /// All ground formulas under a probability operator.
    pub fn grounds(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.grounds_into(&mut out);
        out
    }

    fn grounds_into<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            CredenceFormula::AtLeast(g, _) => out.push(g),
            CredenceFormula::Not(c) => c.grounds_into(out),
            CredenceFormula::Or(a, b)
            | CredenceFormula::And(a, b)
            | CredenceFormula::Implies(a, b)
            | CredenceFormula::Iff(a, b) => {
                a.grounds_into(out);
                b.grounds_into(out);
            }
        }
    }

    pub fn check_signature(&self, sig: &Signature) -> Result<(), ParseError> {
        for g in self.grounds() {
            g.check_signature(sig)?;
        }
        Ok(())
    }
}

impl Comparison {
    pub fn new(ground: Formula, relation: CompareOp, q: Rational) -> Result<Self, ParseError> {
        if !is_probability(&q) {
            return Err(ParseError::RationalOutOfRange { value: q });
        }
        Ok(Comparison { ground, relation, q })
    }

    /// Expand to the primitive `>=` form following the abbreviation table:
    ///
    /// - `P(f) >= q` stays put;
    /// - `P(f) <  q` is `~(P(f) >= q)`;
    /// - `P(f) <= q` is `P(~f) >= 1-q`;
    /// - `P(f) =  q` is `P(f) >= q & P(~f) >= 1-q`;
    /// - `P(f) >  q` is `P(f) >= q & ~(P(f) = q)`.
    pub fn desugar(&self) -> CredenceFormula {
        let g = self.ground.clone();
        let q = self.q.clone();
        match self.relation {
            CompareOp::Ge => CredenceFormula::AtLeast(g, q),
            CompareOp::Lt => CredenceFormula::AtLeast(g, q).not(),
            CompareOp::Le => {
                CredenceFormula::AtLeast(g.not(), Rational::from_integer(1.into()) - q)
            }
            CompareOp::Eq => eq_form(&g, &q),
            CompareOp::Gt => {
                CredenceFormula::AtLeast(g.clone(), q.clone()).and(eq_form(&g, &q).not())
            }
        }
    }

    /// Recover a comparison from a primitive `>=` credence atom.
    pub fn resugar(cf: &CredenceFormula) -> Option<Comparison> {
        match cf {
            CredenceFormula::AtLeast(g, q) => Some(Comparison {
                ground: g.clone(),
                relation: CompareOp::Ge,
                q: q.clone(),
            }),
            _ => None,
        }
    }
}

/// `P(f) = q` in desugared form: `P(f) >= q & P(~f) >= 1-q`.
pub fn eq_form(ground: &Formula, q: &Rational) -> CredenceFormula {
    let hi = CredenceFormula::AtLeast(ground.clone(), q.clone());
    let lo = CredenceFormula::AtLeast(
        ground.clone().not(),
        Rational::from_integer(1.into()) - q.clone(),
    );
    hi.and(lo)
}

/// `P(f) <= q` in desugared form.
pub fn le_form(ground: &Formula, q: &Rational) -> CredenceFormula {
    CredenceFormula::AtLeast(
        ground.clone().not(),
        Rational::from_integer(1.into()) - q.clone(),
    )
}

/// `P(f) < q` in desugared form.
pub fn lt_form(ground: &Formula, q: &Rational) -> CredenceFormula {
    CredenceFormula::AtLeast(ground.clone(), q.clone()).not()
}
