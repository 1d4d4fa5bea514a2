//! Hilbert-style proof checking for the ground dynamic system and the
//! credence system, with a bounded treatment of the infinitary rule R3.
//!
//! Matching is purely syntactic over the sugared ASTs the parser
//! produces. Tautology instances are verified by truth table over the
//! statement's propositional skeleton (modal and comparison subtrees are
//! opaque leaves). Because the box is notation for the negated diamond,
//! the ground system carries explicit definitional `dual` schemas
//! (`<pi>g <-> ~[pi]~g` and the global pair); comparison sugar other than
//! `>=` is already expanded by the parser, so the credence schemas match
//! the expanded forms.

use num_traits::{One, Signed, Zero};

use crate::decision::{decide_valid, DecisionLimits};
use crate::rational::{ceil_to_int, format_rational, Rational};
use crate::syntax::{CredenceFormula, Formula, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    PdlBox,
    Pedal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Ground(Formula),
    Credence(CredenceFormula),
}

impl std::fmt::Display for Statement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Statement::Ground(g) => write!(f, "{g}"),
            Statement::Credence(c) => write!(f, "{c}"),
        }
    }
}

/// How a line discharges the `P(g) = 1` obligation of rule R2.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Let the decision procedure confirm the ground formula is valid.
    Semantic,
    /// An embedded ground proof of the formula.
    Script(ProofScript),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Justification {
    Axiom(String),
    Premise,
    /// `Mp(i, j)`: line `j` is `stmt(i) -> this`.
    Mp(usize, usize),
    /// From line `i` infer `[pi] stmt(i)`.
    NecProgram(usize, Program),
    /// From line `i` infer `G stmt(i)`.
    NecGlobal(usize),
    /// `P(g) = 1` from a certified ground validity.
    R2(Certificate),
    /// Bounded form of the infinitary rule: from
    /// `A -> P(g) >= r - 1/k` for every `ceil(1/r) <= k <= bound`,
    /// infer `A -> P(g) >= r`.
    R3 {
        premises: Vec<usize>,
        r: Rational,
        ground: Formula,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofLine {
    pub statement: Statement,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofScript {
    pub system: System,
    pub lines: Vec<ProofLine>,
}

impl ProofScript {
    /// The last line's statement.
    pub fn conclusion(&self) -> Option<&Statement> {
        self.lines.last().map(|l| &l.statement)
    }

    /// Statements justified as premises.
    pub fn premises(&self) -> Vec<&Statement> {
        self.lines
            .iter()
            .filter(|l| l.justification == Justification::Premise)
            .map(|l| &l.statement)
            .collect()
    }

    pub fn uses_r3(&self) -> bool {
        self.lines
            .iter()
            .any(|l| matches!(l.justification, Justification::R3 { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// Accepted, but at least one R3 application was checked only up to
    /// the given bound on `k`.
    AcceptedApproximate(u32),
    Rejected {
        line: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted | Verdict::AcceptedApproximate(_))
    }
}

// ---------------------------------------------------------------------
// tautology checking over propositional skeletons

const TAUT_VAR_CAP: usize = 20;

enum Skeleton {
    Const(bool),
    Var(usize),
    Not(Box<Skeleton>),
    Bin(BinOp, Box<Skeleton>, Box<Skeleton>),
}

enum BinOp {
    Or,
    And,
    Implies,
    Iff,
}

impl Skeleton {
    fn eval(&self, assignment: u32) -> bool {
        match self {
            Skeleton::Const(b) => *b,
            Skeleton::Var(i) => assignment >> i & 1 == 1,
            Skeleton::Not(x) => !x.eval(assignment),
            Skeleton::Bin(op, a, b) => {
                let (a, b) = (a.eval(assignment), b.eval(assignment));
                match op {
                    BinOp::Or => a | b,
                    BinOp::And => a & b,
                    BinOp::Implies => !a | b,
                    BinOp::Iff => a == b,
                }
            }
        }
    }

    fn is_tautology(&self, num_vars: usize) -> bool {
        (0u32..1 << num_vars).all(|assignment| self.eval(assignment))
    }
}

fn ground_skeleton<'a>(f: &'a Formula, vars: &mut Vec<&'a Formula>) -> Result<Skeleton, String> {
    Ok(match f {
        Formula::Bottom => Skeleton::Const(false),
        Formula::Not(g) => Skeleton::Not(Box::new(ground_skeleton(g, vars)?)),
        Formula::Or(a, b) => Skeleton::Bin(
            BinOp::Or,
            Box::new(ground_skeleton(a, vars)?),
            Box::new(ground_skeleton(b, vars)?),
        ),
        Formula::And(a, b) => Skeleton::Bin(
            BinOp::And,
            Box::new(ground_skeleton(a, vars)?),
            Box::new(ground_skeleton(b, vars)?),
        ),
        Formula::Implies(a, b) => Skeleton::Bin(
            BinOp::Implies,
            Box::new(ground_skeleton(a, vars)?),
            Box::new(ground_skeleton(b, vars)?),
        ),
        Formula::Iff(a, b) => Skeleton::Bin(
            BinOp::Iff,
            Box::new(ground_skeleton(a, vars)?),
            Box::new(ground_skeleton(b, vars)?),
        ),
        Formula::Atom(_)
        | Formula::Diamond(_, _)
        | Formula::Box(_, _)
        | Formula::GlobalDiamond(_)
        | Formula::GlobalBox(_) => {
            let idx = match vars.iter().position(|v| *v == f) {
                Some(i) => i,
                None => {
                    vars.push(f);
                    vars.len() - 1
                }
            };
            if vars.len() > TAUT_VAR_CAP {
                return Err(format!(
                    "tautology check needs more than {TAUT_VAR_CAP} distinct subformulas"
                ));
            }
            Skeleton::Var(idx)
        }
    })
}

fn credence_skeleton<'a>(
    c: &'a CredenceFormula,
    vars: &mut Vec<&'a CredenceFormula>,
) -> Result<Skeleton, String> {
    Ok(match c {
        CredenceFormula::Not(g) => Skeleton::Not(Box::new(credence_skeleton(g, vars)?)),
        CredenceFormula::Or(a, b) => Skeleton::Bin(
            BinOp::Or,
            Box::new(credence_skeleton(a, vars)?),
            Box::new(credence_skeleton(b, vars)?),
        ),
        CredenceFormula::And(a, b) => Skeleton::Bin(
            BinOp::And,
            Box::new(credence_skeleton(a, vars)?),
            Box::new(credence_skeleton(b, vars)?),
        ),
        CredenceFormula::Implies(a, b) => Skeleton::Bin(
            BinOp::Implies,
            Box::new(credence_skeleton(a, vars)?),
            Box::new(credence_skeleton(b, vars)?),
        ),
        CredenceFormula::Iff(a, b) => Skeleton::Bin(
            BinOp::Iff,
            Box::new(credence_skeleton(a, vars)?),
            Box::new(credence_skeleton(b, vars)?),
        ),
        CredenceFormula::AtLeast(_, _) => {
            let idx = match vars.iter().position(|v| *v == c) {
                Some(i) => i,
                None => {
                    vars.push(c);
                    vars.len() - 1
                }
            };
            if vars.len() > TAUT_VAR_CAP {
                return Err(format!(
                    "tautology check needs more than {TAUT_VAR_CAP} distinct comparisons"
                ));
            }
            Skeleton::Var(idx)
        }
    })
}

fn is_ground_tautology(f: &Formula) -> Result<bool, String> {
    let mut vars = Vec::new();
    let sk = ground_skeleton(f, &mut vars)?;
    Ok(sk.is_tautology(vars.len()))
}

fn is_credence_tautology(c: &CredenceFormula) -> Result<bool, String> {
    let mut vars = Vec::new();
    let sk = credence_skeleton(c, &mut vars)?;
    Ok(sk.is_tautology(vars.len()))
}

// ---------------------------------------------------------------------
// axiom schemas

const GROUND_SCHEMAS: &[&str] = &[
    "k", "and-dist", "choice", "test", "seq", "unfold", "induction", "k-global", "t", "five",
    "incl", "dual", "taut",
];

const PEDAL_SCHEMAS: &[&str] = &["A2", "A3", "A4", "A5", "A6", "A7", "A1"];

fn match_ground_schema(f: &Formula, schema: &str) -> Result<bool, String> {
    use Formula as F;
    let ok = match schema {
        // [pi](g1 -> g2) -> ([pi]g1 -> [pi]g2)
        "k" => matches!(f,
            F::Implies(l, r) if matches!((&**l, &**r),
                (F::Box(pi, lg), F::Implies(m1, m2)) if matches!((&**lg, &**m1, &**m2),
                    (F::Implies(g1, g2), F::Box(pa, ga), F::Box(pb, gb))
                        if pa == pi && pb == pi && ga == g1 && gb == g2))),
        // [pi](g1 & g2) <-> ([pi]g1 & [pi]g2)
        "and-dist" => matches!(f,
            F::Iff(l, r) if matches!((&**l, &**r),
                (F::Box(pi, lg), F::And(m1, m2)) if matches!((&**lg, &**m1, &**m2),
                    (F::And(g1, g2), F::Box(pa, ga), F::Box(pb, gb))
                        if pa == pi && pb == pi && ga == g1 && gb == g2))),
        // [p1+p2]g <-> ([p1]g & [p2]g)
        "choice" => matches!(f,
            F::Iff(l, r) if matches!((&**l, &**r),
                (F::Box(pi, g), F::And(m1, m2)) if matches!((&**pi, &**m1, &**m2),
                    (Program::Choice(p1, p2), F::Box(pa, ga), F::Box(pb, gb))
                        if pa == p1 && pb == p2 && ga == g && gb == g))),
        // [?A]B <-> (A -> B)
        "test" => matches!(f,
            F::Iff(l, r) if matches!((&**l, &**r),
                (F::Box(pi, b), F::Implies(a2, b2)) if matches!(&**pi,
                    Program::Test(a) if a == a2 && b == b2))),
        // [p1;p2]g <-> [p1][p2]g
        "seq" => matches!(f,
            F::Iff(l, r) if matches!((&**l, &**r),
                (F::Box(pi, g), F::Box(pa, inner)) if matches!((&**pi, &**inner),
                    (Program::Seq(p1, p2), F::Box(pb, gb))
                        if pa == p1 && pb == p2 && gb == g))),
        // (g & [p][p*]g) <-> [p*]g
        "unfold" => matches!(f,
            F::Iff(l, r) if matches!((&**l, &**r),
                (F::And(g1, step), F::Box(star, g2)) if g1 == g2 && matches!(&**star,
                    Program::Star(p) if matches!(&**step,
                        F::Box(pa, inner) if pa == p && matches!(&**inner,
                            F::Box(pb, gb) if pb == star && gb == g1))))),
        // (g & [p*](g -> [p]g)) -> [p*]g
        "induction" => matches!(f,
            F::Implies(l, r) if matches!((&**l, &**r),
                (F::And(g1, inv), F::Box(star, g2)) if g1 == g2 && matches!(&**star,
                    Program::Star(p) if matches!(&**inv,
                        F::Box(sb, body) if sb == star && matches!(&**body,
                            F::Implies(ga, step) if ga == g1 && matches!(&**step,
                                F::Box(pa, gb) if pa == p && gb == g1)))))),
        // G(g1 -> g2) -> (Gg1 -> Gg2)
        "k-global" => matches!(f,
            F::Implies(l, r) if matches!((&**l, &**r),
                (F::GlobalBox(lg), F::Implies(m1, m2)) if matches!((&**lg, &**m1, &**m2),
                    (F::Implies(g1, g2), F::GlobalBox(ga), F::GlobalBox(gb))
                        if ga == g1 && gb == g2))),
        // Gg -> g
        "t" => matches!(f,
            F::Implies(l, r) if matches!(&**l, F::GlobalBox(g) if g == r)),
        // Fg -> GFg
        "five" => matches!(f,
            F::Implies(l, r) if matches!((&**l, &**r),
                (F::GlobalDiamond(_), F::GlobalBox(inner)) if **inner == **l)),
        // <pi>g -> Fg
        "incl" => matches!(f,
            F::Implies(l, r) if matches!((&**l, &**r),
                (F::Diamond(_, g1), F::GlobalDiamond(g2)) if g1 == g2)),
        // the definitional bridges between a modality and its dual
        "dual" => match f {
            F::Iff(l, r) => match (&**l, &**r) {
                (F::Diamond(pi, g), F::Not(inner)) => matches!(&**inner,
                    F::Box(pb, gb) if pb == pi && matches!(&**gb, F::Not(h) if h == g)),
                (F::Box(pi, g), F::Not(inner)) => matches!(&**inner,
                    F::Diamond(pb, gb) if pb == pi && matches!(&**gb, F::Not(h) if h == g)),
                (F::GlobalDiamond(g), F::Not(inner)) => matches!(&**inner,
                    F::GlobalBox(gb) if matches!(&**gb, F::Not(h) if h == g)),
                (F::GlobalBox(g), F::Not(inner)) => matches!(&**inner,
                    F::GlobalDiamond(gb) if matches!(&**gb, F::Not(h) if h == g)),
                _ => false,
            },
            _ => false,
        },
        "taut" => return is_ground_tautology(f),
        _ => return Err(format!("unknown ground schema `{schema}`")),
    };
    Ok(ok)
}

/// Split `And(And(x, y), z)` the way the left-associative parser builds
/// ternary conjunctions.
fn triple_and(
    c: &CredenceFormula,
) -> Option<(&CredenceFormula, &CredenceFormula, &CredenceFormula)> {
    if let CredenceFormula::And(xy, z) = c {
        if let CredenceFormula::And(x, y) = &**xy {
            return Some((x, y, z));
        }
    }
    None
}

/// Destructure `P(g) = q`: `P(g) >= q & P(~g) >= 1-q`.
fn as_eq_form(c: &CredenceFormula) -> Option<(&Formula, &Rational)> {
    if let CredenceFormula::And(hi, lo) = c {
        if let (CredenceFormula::AtLeast(g, q), CredenceFormula::AtLeast(ng, q2)) = (&**hi, &**lo)
        {
            if let Formula::Not(inner) = ng {
                if **inner == *g && q.clone() + q2.clone() == Rational::one() {
                    return Some((g, q));
                }
            }
        }
    }
    None
}

/// Destructure `P(g) <= q`: `P(~g) >= 1-q`.
fn as_le_form(c: &CredenceFormula) -> Option<(&Formula, Rational)> {
    if let CredenceFormula::AtLeast(ng, q) = c {
        if let Formula::Not(g) = ng {
            return Some((g, Rational::one() - q.clone()));
        }
    }
    None
}

/// Destructure `P(g) < q`: `~(P(g) >= q)`.
fn as_lt_form(c: &CredenceFormula) -> Option<(&Formula, &Rational)> {
    if let CredenceFormula::Not(inner) = c {
        if let CredenceFormula::AtLeast(g, q) = &**inner {
            return Some((g, q));
        }
    }
    None
}

fn match_pedal_schema(c: &CredenceFormula, schema: &str) -> Result<bool, String> {
    use CredenceFormula as C;
    let ok = match schema {
        "A1" => return is_credence_tautology(c),
        // P(g) >= 0
        "A2" => matches!(c, C::AtLeast(_, q) if q.is_zero()),
        // P(g) = 1 | P(g) = 0, for dmff g
        "A3" => {
            if let C::Or(l, r) = c {
                match (as_eq_form(l), as_eq_form(r)) {
                    (Some((g1, q1)), Some((g2, q2))) => {
                        g1 == g2 && g1.is_dmff() && q1.is_one() && q2.is_zero()
                    }
                    _ => false,
                }
            } else {
                false
            }
        }
        // P(g) <= r1 -> P(g) < r2, when r1 < r2
        "A4" => {
            if let C::Implies(l, r) = c {
                match (as_le_form(l), as_lt_form(r)) {
                    (Some((g1, r1)), Some((g2, r2))) => g1 == g2 && r1 < *r2,
                    _ => false,
                }
            } else {
                false
            }
        }
        // P(g) < r -> P(g) <= r
        "A5" => {
            if let C::Implies(l, r) = c {
                match (as_lt_form(l), as_le_form(r)) {
                    (Some((g1, r1)), Some((g2, r2))) => g1 == g2 && *r1 == r2,
                    _ => false,
                }
            } else {
                false
            }
        }
        // (P(g1) >= r1 & P(g2) >= r2 & P(g1 & g2) = 0)
        //   -> P(g1 | g2) >= min(1, r1 + r2)
        "A6" => {
            if let C::Implies(l, r) = c {
                if let (Some((x, y, z)), C::AtLeast(disj, bound)) = (triple_and(l), &**r) {
                    if let (C::AtLeast(g1, r1), C::AtLeast(g2, r2), Some((conj, zero_q))) =
                        (x, y, as_eq_form(z))
                    {
                        if !zero_q.is_zero() {
                            return Ok(false);
                        }
                        let conj_ok = matches!(conj,
                            Formula::And(c1, c2) if **c1 == *g1 && **c2 == *g2);
                        let disj_ok = matches!(disj,
                            Formula::Or(d1, d2) if **d1 == *g1 && **d2 == *g2);
                        let expected = (r1.clone() + r2.clone()).min(Rational::one());
                        return Ok(conj_ok && disj_ok && *bound == expected);
                    }
                }
            }
            false
        }
        // (P(g1) <= r1 & P(g2) < r2) -> P(g1 | g2) < r1 + r2, r1 + r2 <= 1
        "A7" => {
            if let C::Implies(l, r) = c {
                if let C::And(x, y) = &**l {
                    if let (Some((g1, r1)), Some((g2, r2)), Some((disj, bound))) =
                        (as_le_form(x), as_lt_form(y), as_lt_form(r))
                    {
                        let disj_ok = matches!(disj,
                            Formula::Or(d1, d2) if **d1 == *g1 && **d2 == *g2);
                        let sum = r1.clone() + r2.clone();
                        return Ok(disj_ok && *bound == sum && sum <= Rational::one());
                    }
                }
            }
            false
        }
        _ => return Err(format!("unknown credence schema `{schema}`")),
    };
    Ok(ok)
}

/// The first schema of the system that `statement` instantiates.
pub fn match_axiom(statement: &Statement, system: System) -> Option<&'static str> {
    match (system, statement) {
        (System::PdlBox, Statement::Ground(f)) => GROUND_SCHEMAS
            .iter()
            .find(|s| match_ground_schema(f, s).unwrap_or(false))
            .copied(),
        (System::Pedal, Statement::Credence(c)) => PEDAL_SCHEMAS
            .iter()
            .find(|s| match_pedal_schema(c, s).unwrap_or(false))
            .copied(),
        _ => None,
    }
}

fn check_claimed_axiom(statement: &Statement, system: System, name: &str) -> Result<bool, String> {
    match (system, statement) {
        (System::PdlBox, Statement::Ground(f)) => match_ground_schema(f, name),
        (System::Pedal, Statement::Credence(c)) => match_pedal_schema(c, name),
        _ => Ok(false),
    }
}

// ---------------------------------------------------------------------
// the checker

/// Verify a script line by line. `r3_bound` is the largest `k` demanded
/// of R3 premises; any R3 use downgrades acceptance to
/// [`Verdict::AcceptedApproximate`].
pub fn check_proof(script: &ProofScript, r3_bound: u32, limits: &DecisionLimits) -> Verdict {
    if script.lines.is_empty() {
        return Verdict::Rejected {
            line: 0,
            reason: "empty script".to_string(),
        };
    }
    let mut used_r3 = false;
    for (pos, line) in script.lines.iter().enumerate() {
        let number = pos + 1;
        let wrong_type = match (script.system, &line.statement) {
            (System::PdlBox, Statement::Credence(_)) => true,
            (System::Pedal, Statement::Ground(_)) => true,
            _ => false,
        };
        if wrong_type {
            return Verdict::Rejected {
                line: number,
                reason: "statement type does not match the proof system".to_string(),
            };
        }
        let cited = |i: usize| -> Result<&Statement, String> {
            if i == 0 || i >= number {
                return Err(format!("cited line {i} is not before line {number}"));
            }
            Ok(&script.lines[i - 1].statement)
        };
        let outcome: Result<(), String> = match &line.justification {
            Justification::Premise => Ok(()),
            Justification::Axiom(name) => {
                match check_claimed_axiom(&line.statement, script.system, name) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(format!("not an instance of schema `{name}`")),
                    Err(e) => Err(e),
                }
            }
            Justification::Mp(i, j) => (|| {
                let antecedent = cited(*i)?;
                let implication = cited(*j)?;
                let fits = match (implication, antecedent, &line.statement) {
                    (
                        Statement::Ground(imp),
                        Statement::Ground(a),
                        Statement::Ground(b),
                    ) => matches!(imp, Formula::Implies(x, y) if **x == *a && **y == *b),
                    (
                        Statement::Credence(imp),
                        Statement::Credence(a),
                        Statement::Credence(b),
                    ) => {
                        matches!(imp, CredenceFormula::Implies(x, y) if **x == *a && **y == *b)
                    }
                    _ => false,
                };
                if fits {
                    Ok(())
                } else {
                    Err(format!("line {j} is not `line {i} -> this`"))
                }
            })(),
            Justification::NecProgram(i, pi) => (|| {
                if script.system != System::PdlBox {
                    return Err("program necessitation is a ground rule".to_string());
                }
                let Statement::Ground(premise) = cited(*i)? else {
                    return Err("cited line is not a ground statement".to_string());
                };
                let expected = Formula::box_(pi.clone(), premise.clone());
                if matches!(&line.statement, Statement::Ground(g) if *g == expected) {
                    Ok(())
                } else {
                    Err(format!("statement is not `[{pi}]` applied to line {i}"))
                }
            })(),
            Justification::NecGlobal(i) => (|| {
                if script.system != System::PdlBox {
                    return Err("global necessitation is a ground rule".to_string());
                }
                let Statement::Ground(premise) = cited(*i)? else {
                    return Err("cited line is not a ground statement".to_string());
                };
                let expected = premise.clone().gbox();
                if matches!(&line.statement, Statement::Ground(g) if *g == expected) {
                    Ok(())
                } else {
                    Err(format!("statement is not `G` applied to line {i}"))
                }
            })(),
            Justification::R2(certificate) => (|| {
                if script.system != System::Pedal {
                    return Err("R2 concludes in the credence system".to_string());
                }
                let Statement::Credence(c) = &line.statement else {
                    return Err("R2 lines are credence statements".to_string());
                };
                let Some((g, q)) = as_eq_form(c) else {
                    return Err("R2 lines must have the form `P(g) = 1`".to_string());
                };
                if !q.is_one() {
                    return Err("R2 lines must have the form `P(g) = 1`".to_string());
                }
                match certificate {
                    Certificate::Semantic => match decide_valid(g, limits) {
                        Ok(true) => Ok(()),
                        Ok(false) => Err(format!("`{g}` is not valid")),
                        Err(e) => Err(format!("validity check failed: {e}")),
                    },
                    Certificate::Script(inner) => {
                        if inner.system != System::PdlBox {
                            return Err("R2 certificates are ground proofs".to_string());
                        }
                        match check_proof(inner, r3_bound, limits) {
                            Verdict::Accepted => {}
                            Verdict::AcceptedApproximate(_) => {
                                return Err("ground certificates cannot use R3".to_string())
                            }
                            Verdict::Rejected { line, reason } => {
                                return Err(format!(
                                    "embedded certificate rejected at line {line}: {reason}"
                                ))
                            }
                        }
                        if !inner.premises().is_empty() {
                            return Err("R2 certificates cannot take premises".to_string());
                        }
                        match inner.conclusion() {
                            Some(Statement::Ground(conclusion)) if conclusion == g => Ok(()),
                            _ => {
                                Err("certificate conclusion differs from the statement".to_string())
                            }
                        }
                    }
                }
            })(),
            Justification::R3 { premises, r, ground } => (|| {
                if script.system != System::Pedal {
                    return Err("R3 concludes in the credence system".to_string());
                }
                if !r.is_positive() {
                    return Err("R3 requires r > 0".to_string());
                }
                let Statement::Credence(c) = &line.statement else {
                    return Err("R3 lines are credence statements".to_string());
                };
                let CredenceFormula::Implies(antecedent, target) = c else {
                    return Err("R3 lines must have the form `A -> P(g) >= r`".to_string());
                };
                let fits = matches!(&**target,
                    CredenceFormula::AtLeast(g, q) if g == ground && q == r);
                if !fits {
                    return Err("R3 lines must conclude `A -> P(g) >= r`".to_string());
                }
                let k_lo_big = ceil_to_int(&(Rational::one() / r.clone()));
                let k_lo: u32 = u32::try_from(k_lo_big)
                    .map_err(|_| "R3 threshold 1/r exceeds the supported range".to_string())?;
                if r3_bound < k_lo {
                    return Err(format!("r3 bound {r3_bound} is below ceil(1/r) = {k_lo}"));
                }
                let expected_count = (r3_bound - k_lo + 1) as usize;
                if premises.len() != expected_count {
                    return Err(format!(
                        "R3 needs one premise per k in {k_lo}..={r3_bound} ({expected_count} lines)"
                    ));
                }
                for (offset, &idx) in premises.iter().enumerate() {
                    let k = k_lo + offset as u32;
                    let want_q = r.clone() - Rational::new(1.into(), (k as i64).into());
                    let Statement::Credence(premise) = cited(idx)? else {
                        return Err("cited line is not a credence statement".to_string());
                    };
                    let fine = matches!(premise,
                        CredenceFormula::Implies(a, t)
                            if a == antecedent && matches!(&**t,
                                CredenceFormula::AtLeast(g, q) if g == ground && *q == want_q));
                    if !fine {
                        return Err(format!(
                            "line {idx} is not `A -> P(g) >= {}` (k = {k})",
                            format_rational(&want_q)
                        ));
                    }
                }
                Ok(())
            })(),
        };
        if let Err(reason) = outcome {
            return Verdict::Rejected {
                line: number,
                reason,
            };
        }
        if matches!(line.justification, Justification::R3 { .. }) {
            used_r3 = true;
        }
    }
    if used_r3 {
        Verdict::AcceptedApproximate(r3_bound)
    } else {
        Verdict::Accepted
    }
}

// ---------------------------------------------------------------------
// the derived-rule library

fn ground(text: &str) -> Statement {
    Statement::Ground(crate::syntax::parse_formula_raw(text).expect("library formula parses"))
}

fn credence(text: &str) -> Statement {
    Statement::Credence(crate::syntax::parse_credence_raw(text).expect("library formula parses"))
}

fn line(statement: Statement, justification: Justification) -> ProofLine {
    ProofLine {
        statement,
        justification,
    }
}

fn axiom(name: &str) -> Justification {
    Justification::Axiom(name.to_string())
}

fn pedal_script(lines: Vec<ProofLine>) -> ProofScript {
    ProofScript {
        system: System::Pedal,
        lines,
    }
}

fn ground_script(lines: Vec<ProofLine>) -> ProofScript {
    ProofScript {
        system: System::PdlBox,
        lines,
    }
}

/// Scripts witnessing derived rules at small instantiations. Every one
/// must be accepted, none of them through R3.
pub fn derived_rule_scripts() -> Vec<(&'static str, ProofScript)> {
    let mut out: Vec<(&'static str, ProofScript)> = Vec::new();

    // Pr(a) >= 3/5 -> Pr(a) >= 1/2: downward monotonicity in the
    // threshold, assembled from A5, A4 and two propositional steps.
    out.push((
        "ge-monotonicity",
        pedal_script(vec![
            line(credence("P(a) < 1/2 -> P(a) <= 1/2"), axiom("A5")),
            line(credence("P(a) <= 1/2 -> P(a) < 3/5"), axiom("A4")),
            line(
                credence(
                    "(P(a) < 1/2 -> P(a) <= 1/2) -> ((P(a) <= 1/2 -> P(a) < 3/5) -> (P(a) < 1/2 -> P(a) < 3/5))",
                ),
                axiom("A1"),
            ),
            line(
                credence("(P(a) <= 1/2 -> P(a) < 3/5) -> (P(a) < 1/2 -> P(a) < 3/5)"),
                Justification::Mp(1, 3),
            ),
            line(credence("P(a) < 1/2 -> P(a) < 3/5"), Justification::Mp(2, 4)),
            line(
                credence("(P(a) < 1/2 -> P(a) < 3/5) -> (P(a) >= 3/5 -> P(a) >= 1/2)"),
                axiom("A1"),
            ),
            line(credence("P(a) >= 3/5 -> P(a) >= 1/2"), Justification::Mp(5, 6)),
        ]),
    ));

    // Pr(a) <= 1/3 -> Pr(a) <= 1/2: the dual direction, upward
    // monotonicity on the complement.
    out.push((
        "le-monotonicity",
        pedal_script(vec![
            line(credence("P(~a) < 1/2 -> P(~a) <= 1/2"), axiom("A5")),
            line(credence("P(~a) <= 1/2 -> P(~a) < 2/3"), axiom("A4")),
            line(
                credence(
                    "(P(~a) < 1/2 -> P(~a) <= 1/2) -> ((P(~a) <= 1/2 -> P(~a) < 2/3) -> (P(~a) < 1/2 -> P(~a) < 2/3))",
                ),
                axiom("A1"),
            ),
            line(
                credence("(P(~a) <= 1/2 -> P(~a) < 2/3) -> (P(~a) < 1/2 -> P(~a) < 2/3)"),
                Justification::Mp(1, 3),
            ),
            line(credence("P(~a) < 1/2 -> P(~a) < 2/3"), Justification::Mp(2, 4)),
            line(
                credence("(P(~a) < 1/2 -> P(~a) < 2/3) -> (P(a) <= 1/3 -> P(a) <= 1/2)"),
                axiom("A1"),
            ),
            line(credence("P(a) <= 1/3 -> P(a) <= 1/2"), Justification::Mp(5, 6)),
        ]),
    ));

    // Finite additivity at n = 2 from premises, through A6.
    out.push((
        "additivity-pair",
        pedal_script(vec![
            line(credence("P(a) >= 1/3"), Justification::Premise),
            line(credence("P(b) >= 1/3"), Justification::Premise),
            line(credence("P(a & b) = 0"), Justification::Premise),
            line(
                credence("(P(a) >= 1/3 & P(b) >= 1/3 & P(a & b) = 0) -> P(a | b) >= 2/3"),
                axiom("A6"),
            ),
            line(
                credence(
                    "P(a) >= 1/3 -> (P(b) >= 1/3 -> (P(a & b) = 0 -> (P(a) >= 1/3 & P(b) >= 1/3 & P(a & b) = 0)))",
                ),
                axiom("A1"),
            ),
            line(
                credence(
                    "P(b) >= 1/3 -> (P(a & b) = 0 -> (P(a) >= 1/3 & P(b) >= 1/3 & P(a & b) = 0))",
                ),
                Justification::Mp(1, 5),
            ),
            line(
                credence("P(a & b) = 0 -> (P(a) >= 1/3 & P(b) >= 1/3 & P(a & b) = 0)"),
                Justification::Mp(2, 6),
            ),
            line(
                credence("P(a) >= 1/3 & P(b) >= 1/3 & P(a & b) = 0"),
                Justification::Mp(3, 7),
            ),
            line(credence("P(a | b) >= 2/3"), Justification::Mp(8, 4)),
        ]),
    ));

    // <?A>B <-> A & B from the test axiom and the dual bridge.
    out.push((
        "test-equivalence",
        ground_script(vec![
            line(ground("[?A]~B <-> (A -> ~B)"), axiom("test")),
            line(ground("<?A>B <-> ~[?A]~B"), axiom("dual")),
            line(
                ground("([?A]~B <-> (A -> ~B)) -> ((<?A>B <-> ~[?A]~B) -> (<?A>B <-> A & B))"),
                axiom("taut"),
            ),
            line(
                ground("(<?A>B <-> ~[?A]~B) -> (<?A>B <-> A & B)"),
                Justification::Mp(1, 3),
            ),
            line(ground("<?A>B <-> A & B"), Justification::Mp(2, 4)),
        ]),
    ));

    // <p+q>a <-> <p>a | <q>a.
    out.push((
        "choice-diamonds",
        ground_script(vec![
            line(ground("[p+q]~a <-> ([p]~a & [q]~a)"), axiom("choice")),
            line(ground("<p+q>a <-> ~[p+q]~a"), axiom("dual")),
            line(ground("<p>a <-> ~[p]~a"), axiom("dual")),
            line(ground("<q>a <-> ~[q]~a"), axiom("dual")),
            line(
                ground(
                    "([p+q]~a <-> ([p]~a & [q]~a)) -> ((<p+q>a <-> ~[p+q]~a) -> ((<p>a <-> ~[p]~a) -> ((<q>a <-> ~[q]~a) -> (<p+q>a <-> <p>a | <q>a))))",
                ),
                axiom("taut"),
            ),
            line(
                ground(
                    "(<p+q>a <-> ~[p+q]~a) -> ((<p>a <-> ~[p]~a) -> ((<q>a <-> ~[q]~a) -> (<p+q>a <-> <p>a | <q>a)))",
                ),
                Justification::Mp(1, 5),
            ),
            line(
                ground(
                    "(<p>a <-> ~[p]~a) -> ((<q>a <-> ~[q]~a) -> (<p+q>a <-> <p>a | <q>a))",
                ),
                Justification::Mp(2, 6),
            ),
            line(
                ground("(<q>a <-> ~[q]~a) -> (<p+q>a <-> <p>a | <q>a)"),
                Justification::Mp(3, 7),
            ),
            line(ground("<p+q>a <-> <p>a | <q>a"), Justification::Mp(4, 8)),
        ]),
    ));

    // <p;q>a <-> <p><q>a, with the congruence step done by Nec + K.
    out.push((
        "seq-diamonds",
        ground_script(vec![
            line(ground("[p;q]~a <-> [p][q]~a"), axiom("seq")),
            line(ground("<q>a <-> ~[q]~a"), axiom("dual")),
            line(
                ground("(<q>a <-> ~[q]~a) -> ([q]~a -> ~<q>a)"),
                axiom("taut"),
            ),
            line(ground("[q]~a -> ~<q>a"), Justification::Mp(2, 3)),
            line(
                ground("[p]([q]~a -> ~<q>a)"),
                Justification::NecProgram(4, Program::atom("p")),
            ),
            line(
                ground("[p]([q]~a -> ~<q>a) -> ([p][q]~a -> [p]~<q>a)"),
                axiom("k"),
            ),
            line(ground("[p][q]~a -> [p]~<q>a"), Justification::Mp(5, 6)),
            line(
                ground("(<q>a <-> ~[q]~a) -> (~<q>a -> [q]~a)"),
                axiom("taut"),
            ),
            line(ground("~<q>a -> [q]~a"), Justification::Mp(2, 8)),
            line(
                ground("[p](~<q>a -> [q]~a)"),
                Justification::NecProgram(9, Program::atom("p")),
            ),
            line(
                ground("[p](~<q>a -> [q]~a) -> ([p]~<q>a -> [p][q]~a)"),
                axiom("k"),
            ),
            line(ground("[p]~<q>a -> [p][q]~a"), Justification::Mp(10, 11)),
            line(ground("<p;q>a <-> ~[p;q]~a"), axiom("dual")),
            line(ground("<p><q>a <-> ~[p]~<q>a"), axiom("dual")),
            line(
                ground(
                    "([p;q]~a <-> [p][q]~a) -> (([p][q]~a -> [p]~<q>a) -> (([p]~<q>a -> [p][q]~a) -> ((<p;q>a <-> ~[p;q]~a) -> ((<p><q>a <-> ~[p]~<q>a) -> (<p;q>a <-> <p><q>a)))))",
                ),
                axiom("taut"),
            ),
            line(
                ground(
                    "([p][q]~a -> [p]~<q>a) -> (([p]~<q>a -> [p][q]~a) -> ((<p;q>a <-> ~[p;q]~a) -> ((<p><q>a <-> ~[p]~<q>a) -> (<p;q>a <-> <p><q>a))))",
                ),
                Justification::Mp(1, 15),
            ),
            line(
                ground(
                    "([p]~<q>a -> [p][q]~a) -> ((<p;q>a <-> ~[p;q]~a) -> ((<p><q>a <-> ~[p]~<q>a) -> (<p;q>a <-> <p><q>a)))",
                ),
                Justification::Mp(7, 16),
            ),
            line(
                ground(
                    "(<p;q>a <-> ~[p;q]~a) -> ((<p><q>a <-> ~[p]~<q>a) -> (<p;q>a <-> <p><q>a))",
                ),
                Justification::Mp(12, 17),
            ),
            line(
                ground("(<p><q>a <-> ~[p]~<q>a) -> (<p;q>a <-> <p><q>a)"),
                Justification::Mp(13, 18),
            ),
            line(ground("<p;q>a <-> <p><q>a"), Justification::Mp(14, 19)),
        ]),
    ));

    // <p*>a <-> a | <p><p*>a from the unfolding axiom.
    out.push((
        "star-unfold-diamonds",
        ground_script(vec![
            line(ground("(~a & [p][p*]~a) <-> [p*]~a"), axiom("unfold")),
            line(ground("<p*>a <-> ~[p*]~a"), axiom("dual")),
            line(
                ground("(<p*>a <-> ~[p*]~a) -> ([p*]~a -> ~<p*>a)"),
                axiom("taut"),
            ),
            line(ground("[p*]~a -> ~<p*>a"), Justification::Mp(2, 3)),
            line(
                ground("[p]([p*]~a -> ~<p*>a)"),
                Justification::NecProgram(4, Program::atom("p")),
            ),
            line(
                ground("[p]([p*]~a -> ~<p*>a) -> ([p][p*]~a -> [p]~<p*>a)"),
                axiom("k"),
            ),
            line(ground("[p][p*]~a -> [p]~<p*>a"), Justification::Mp(5, 6)),
            line(
                ground("(<p*>a <-> ~[p*]~a) -> (~<p*>a -> [p*]~a)"),
                axiom("taut"),
            ),
            line(ground("~<p*>a -> [p*]~a"), Justification::Mp(2, 8)),
            line(
                ground("[p](~<p*>a -> [p*]~a)"),
                Justification::NecProgram(9, Program::atom("p")),
            ),
            line(
                ground("[p](~<p*>a -> [p*]~a) -> ([p]~<p*>a -> [p][p*]~a)"),
                axiom("k"),
            ),
            line(ground("[p]~<p*>a -> [p][p*]~a"), Justification::Mp(10, 11)),
            line(ground("<p><p*>a <-> ~[p]~<p*>a"), axiom("dual")),
            line(
                ground(
                    "((~a & [p][p*]~a) <-> [p*]~a) -> ((<p*>a <-> ~[p*]~a) -> (([p][p*]~a -> [p]~<p*>a) -> (([p]~<p*>a -> [p][p*]~a) -> ((<p><p*>a <-> ~[p]~<p*>a) -> (<p*>a <-> a | <p><p*>a)))))",
                ),
                axiom("taut"),
            ),
            line(
                ground(
                    "(<p*>a <-> ~[p*]~a) -> (([p][p*]~a -> [p]~<p*>a) -> (([p]~<p*>a -> [p][p*]~a) -> ((<p><p*>a <-> ~[p]~<p*>a) -> (<p*>a <-> a | <p><p*>a))))",
                ),
                Justification::Mp(1, 14),
            ),
            line(
                ground(
                    "([p][p*]~a -> [p]~<p*>a) -> (([p]~<p*>a -> [p][p*]~a) -> ((<p><p*>a <-> ~[p]~<p*>a) -> (<p*>a <-> a | <p><p*>a)))",
                ),
                Justification::Mp(2, 15),
            ),
            line(
                ground(
                    "([p]~<p*>a -> [p][p*]~a) -> ((<p><p*>a <-> ~[p]~<p*>a) -> (<p*>a <-> a | <p><p*>a))",
                ),
                Justification::Mp(7, 16),
            ),
            line(
                ground("(<p><p*>a <-> ~[p]~<p*>a) -> (<p*>a <-> a | <p><p*>a)"),
                Justification::Mp(12, 17),
            ),
            line(ground("<p*>a <-> a | <p><p*>a"), Justification::Mp(13, 18)),
        ]),
    ));

    // <p>(a | b) <-> <p>a | <p>b.
    out.push((
        "dia-or-distribution",
        ground_script(vec![
            line(ground("~(a | b) -> (~a & ~b)"), axiom("taut")),
            line(
                ground("[p](~(a | b) -> (~a & ~b))"),
                Justification::NecProgram(1, Program::atom("p")),
            ),
            line(
                ground("[p](~(a | b) -> (~a & ~b)) -> ([p]~(a | b) -> [p](~a & ~b))"),
                axiom("k"),
            ),
            line(ground("[p]~(a | b) -> [p](~a & ~b)"), Justification::Mp(2, 3)),
            line(ground("(~a & ~b) -> ~(a | b)"), axiom("taut")),
            line(
                ground("[p]((~a & ~b) -> ~(a | b))"),
                Justification::NecProgram(5, Program::atom("p")),
            ),
            line(
                ground("[p]((~a & ~b) -> ~(a | b)) -> ([p](~a & ~b) -> [p]~(a | b))"),
                axiom("k"),
            ),
            line(ground("[p](~a & ~b) -> [p]~(a | b)"), Justification::Mp(6, 7)),
            line(ground("[p](~a & ~b) <-> ([p]~a & [p]~b)"), axiom("and-dist")),
            line(ground("<p>(a | b) <-> ~[p]~(a | b)"), axiom("dual")),
            line(ground("<p>a <-> ~[p]~a"), axiom("dual")),
            line(ground("<p>b <-> ~[p]~b"), axiom("dual")),
            line(
                ground(
                    "([p]~(a | b) -> [p](~a & ~b)) -> (([p](~a & ~b) -> [p]~(a | b)) -> (([p](~a & ~b) <-> ([p]~a & [p]~b)) -> ((<p>(a | b) <-> ~[p]~(a | b)) -> ((<p>a <-> ~[p]~a) -> ((<p>b <-> ~[p]~b) -> (<p>(a | b) <-> <p>a | <p>b))))))",
                ),
                axiom("taut"),
            ),
            line(
                ground(
                    "([p](~a & ~b) -> [p]~(a | b)) -> (([p](~a & ~b) <-> ([p]~a & [p]~b)) -> ((<p>(a | b) <-> ~[p]~(a | b)) -> ((<p>a <-> ~[p]~a) -> ((<p>b <-> ~[p]~b) -> (<p>(a | b) <-> <p>a | <p>b)))))",
                ),
                Justification::Mp(4, 13),
            ),
            line(
                ground(
                    "([p](~a & ~b) <-> ([p]~a & [p]~b)) -> ((<p>(a | b) <-> ~[p]~(a | b)) -> ((<p>a <-> ~[p]~a) -> ((<p>b <-> ~[p]~b) -> (<p>(a | b) <-> <p>a | <p>b))))",
                ),
                Justification::Mp(8, 14),
            ),
            line(
                ground(
                    "(<p>(a | b) <-> ~[p]~(a | b)) -> ((<p>a <-> ~[p]~a) -> ((<p>b <-> ~[p]~b) -> (<p>(a | b) <-> <p>a | <p>b)))",
                ),
                Justification::Mp(9, 15),
            ),
            line(
                ground(
                    "(<p>a <-> ~[p]~a) -> ((<p>b <-> ~[p]~b) -> (<p>(a | b) <-> <p>a | <p>b))",
                ),
                Justification::Mp(10, 16),
            ),
            line(
                ground("(<p>b <-> ~[p]~b) -> (<p>(a | b) <-> <p>a | <p>b)"),
                Justification::Mp(11, 17),
            ),
            line(ground("<p>(a | b) <-> <p>a | <p>b"), Justification::Mp(12, 18)),
        ]),
    ));

    // a -> F a: the reflexive face of the global modality.
    out.push((
        "global-reflexivity",
        ground_script(vec![
            line(ground("G~a -> ~a"), axiom("t")),
            line(ground("F a <-> ~G~a"), axiom("dual")),
            line(
                ground("(G~a -> ~a) -> ((F a <-> ~G~a) -> (a -> F a))"),
                axiom("taut"),
            ),
            line(ground("(F a <-> ~G~a) -> (a -> F a)"), Justification::Mp(1, 3)),
            line(ground("a -> F a"), Justification::Mp(2, 4)),
        ]),
    ));

    // Conjunction elimination under `=`: the deduction-theorem shape
    // replayed as a fully expanded implication chain.
    out.push((
        "eq-unpack",
        pedal_script(vec![
            line(credence("P(a) = 1"), Justification::Premise),
            line(credence("P(a) = 1 -> P(a) >= 1"), axiom("A1")),
            line(credence("P(a) >= 1"), Justification::Mp(1, 2)),
        ]),
    ));

    // Pr of a tautology is 1, by the semantic certificate.
    out.push((
        "r2-semantic-top",
        pedal_script(vec![line(
            credence("P(a | ~a) = 1"),
            Justification::R2(Certificate::Semantic),
        )]),
    ));

    // Pr of a necessitated tautology is 1, by an embedded ground proof.
    out.push((
        "r2-script-box-top",
        pedal_script(vec![line(
            credence("P([p](a -> a)) = 1"),
            Justification::R2(Certificate::Script(ground_script(vec![
                line(ground("a -> a"), axiom("taut")),
                line(
                    ground("[p](a -> a)"),
                    Justification::NecProgram(1, Program::atom("p")),
                ),
            ]))),
        )]),
    ));

    out
}

/// Result of replaying the derived-rule library.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub name: &'static str,
    pub script: ProofScript,
    pub verdict: Verdict,
}

/// Replay the derived-rule library through the checker.
pub fn derived_rule_suite(limits: &DecisionLimits) -> Vec<SuiteEntry> {
    derived_rule_scripts()
        .into_iter()
        .map(|(name, script)| {
            let verdict = check_proof(&script, 100, limits);
            SuiteEntry {
                name,
                script,
                verdict,
            }
        })
        .collect()
}

/// A small R3 demonstration: premise lines `A -> P(g) >= 1/2 - 1/k` for
/// each `k` up to `bound`, concluded by the bounded rule.
pub fn r3_demo_script(bound: u32) -> ProofScript {
    let r = Rational::new(1.into(), 2.into());
    let antecedent = crate::syntax::parse_credence_raw("P(b) >= 0").expect("parses");
    let ground = crate::syntax::parse_formula_raw("a").expect("parses");
    let mut lines = Vec::new();
    let mut premises = Vec::new();
    for k in 2..=bound {
        let q = r.clone() - Rational::new(1.into(), (k as i64).into());
        let stmt = antecedent
            .clone()
            .implies(CredenceFormula::AtLeast(ground.clone(), q));
        lines.push(line(Statement::Credence(stmt), Justification::Premise));
        premises.push(lines.len());
    }
    let conclusion = antecedent.implies(CredenceFormula::AtLeast(ground.clone(), r.clone()));
    lines.push(line(
        Statement::Credence(conclusion),
        Justification::R3 {
            premises,
            r,
            ground,
        },
    ));
    pedal_script(lines)
}
