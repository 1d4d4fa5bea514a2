//! Tight credence bounds over a fixed frame by exact linear programming.
//!
//! The valuation space of a frame is enumerated (deduplicated into truth
//! profiles over the mentioned formulas), credence constraints become
//! linear constraints on one weight variable per profile, and an exact
//! simplex computes the least and greatest achievable credence of the
//! query. Strict constraints are handled by solving the closed relaxation
//! and reporting attainment separately, so `P(g) < q` never needs an
//! epsilon.

pub mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::credence::{Cell, PedalModel};
use crate::decision::{decide_valid, DecisionError, DecisionLimits};
use crate::kripke::{eval_set_prenormalized, validate_frame, Frame, ProgramValuation, Relation, StateId};
use crate::rational::Rational;
use crate::syntax::{CredenceFormula, Formula};

use simplex::{Cmp, LinearConstraint, Lp, LpOutcome};

#[derive(Debug, Clone)]
pub struct BoundsLimits {
    /// Maximum number of valuations enumerated.
    pub valuation_cap: u128,
    /// Maximum number of DNF disjuncts expanded from the constraints.
    pub dnf_cap: usize,
}

impl Default for BoundsLimits {
    fn default() -> Self {
        BoundsLimits {
            valuation_cap: 1 << 20,
            dnf_cap: 64,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BoundsError {
    #[error("2^{bits} valuations exceed the cap {cap}")]
    ValuationCapExceeded { bits: u32, cap: u128 },
    #[error("constraint DNF has {count} disjuncts, cap is {cap}")]
    DnfCapExceeded { count: usize, cap: usize },
    #[error("{count} distinct ground formulas exceed the profile width of 64")]
    TooManyGrounds { count: usize },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}

/// A bounds problem: which credences for `query` at `state` are consistent
/// with `constraints` over the valuation space of `frame`?
#[derive(Debug, Clone)]
pub struct BoundsQuery {
    pub frame: Frame,
    pub state: StateId,
    pub constraints: Vec<CredenceFormula>,
    pub query: Formula,
}

/// Exact bounds plus attainment flags and realizing models.
#[derive(Debug, Clone)]
pub enum BoundsResult {
    /// No weighting of the valuation space satisfies the constraints.
    Infeasible,
    Bounded(Bounds),
}

#[derive(Debug, Clone)]
pub struct Bounds {
    pub minimum: Rational,
    pub maximum: Rational,
    /// False when the bound is only an infimum/supremum forced by a
    /// strict constraint.
    pub min_attained: bool,
    pub max_attained: bool,
    pub witness_min: Option<PedalModel>,
    pub witness_max: Option<PedalModel>,
}

/// The `rbox`-compatible assignments of a relation to each program atom,
/// in a fixed order: bit `p * |pairs| + k` of the index selects the
/// `k`-th `rbox` pair for the `p`-th program.
#[derive(Debug, Clone)]
pub struct ValuationSpace {
    n_states: usize,
    programs: Vec<String>,
    pairs: Vec<(StateId, StateId)>,
}

impl ValuationSpace {
    pub fn new(frame: &Frame, programs: &BTreeSet<String>) -> Self {
        let pairs: Vec<(StateId, StateId)> = frame.rbox.pairs().collect();
        ValuationSpace {
            n_states: frame.n_states,
            programs: programs.iter().cloned().collect(),
            pairs,
        }
    }

    pub fn bit_count(&self) -> u32 {
        (self.programs.len() * self.pairs.len()) as u32
    }

    /// `2^(|rbox| * |programs|)`, or `None` past `u128`.
    pub fn count(&self) -> Option<u128> {
        let bits = self.bit_count();
        if bits >= 128 {
            None
        } else {
            Some(1u128 << bits)
        }
    }

    pub fn get(&self, index: u128) -> ProgramValuation {
        let mut out = BTreeMap::new();
        for (pi, name) in self.programs.iter().enumerate() {
            let mut rel = Relation::empty(self.n_states);
            for (k, &(s, t)) in self.pairs.iter().enumerate() {
                if index >> (pi * self.pairs.len() + k) & 1 == 1 {
                    rel.insert(s, t);
                }
            }
            out.insert(name.clone(), rel);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = ProgramValuation> + '_ {
        let count = self.count().expect("iteration requires a countable space");
        (0..count).map(|i| self.get(i))
    }
}

/// Materialize every valuation, in the space's deterministic order.
pub fn enumerate_valuations(
    frame: &Frame,
    programs: &BTreeSet<String>,
    cap: u128,
) -> Result<Vec<ProgramValuation>, BoundsError> {
    let space = ValuationSpace::new(frame, programs);
    match space.count() {
        Some(count) if count <= cap => Ok(space.iter().collect()),
        _ => Err(BoundsError::ValuationCapExceeded {
            bits: space.bit_count(),
            cap,
        }),
    }
}

/// Bit `i` says whether `g` holds at `state` under `vs[i]`.
pub fn truth_profile(
    frame: &Frame,
    state: StateId,
    g: &Formula,
    vs: &[ProgramValuation],
) -> Vec<bool> {
    let g = g.normalize();
    vs.iter()
        .map(|v| eval_set_prenormalized(frame, v, &g).contains(state))
        .collect()
}

/// One LP literal: the mass of the `ground`-true profiles compared to `q`.
#[derive(Debug, Clone)]
struct Literal {
    ground: usize,
    at_least: bool,
    q: Rational,
}

enum Nnf {
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn to_nnf(cf: &CredenceFormula, positive: bool, index: &BTreeMap<Formula, usize>) -> Nnf {
    match cf {
        CredenceFormula::AtLeast(g, q) => Nnf::Lit(Literal {
            ground: index[&g.normalize()],
            at_least: positive,
            q: q.clone(),
        }),
        CredenceFormula::Not(c) => to_nnf(c, !positive, index),
        CredenceFormula::Or(a, b) => {
            let parts = vec![to_nnf(a, positive, index), to_nnf(b, positive, index)];
            if positive {
                Nnf::Or(parts)
            } else {
                Nnf::And(parts)
            }
        }
        _ => unreachable!("constraints are normalized before translation"),
    }
}

fn dnf(n: &Nnf, cap: usize) -> Result<Vec<Vec<Literal>>, BoundsError> {
    let out = match n {
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::Or(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(dnf(p, cap)?);
            }
            out
        }
        Nnf::And(parts) => {
            let mut out: Vec<Vec<Literal>> = vec![vec![]];
            for p in parts {
                let rhs = dnf(p, cap)?;
                let mut next = Vec::new();
                for left in &out {
                    for right in &rhs {
                        let mut conj = left.clone();
                        conj.extend(right.iter().cloned());
                        next.push(conj);
                    }
                }
                out = next;
                if out.len() > cap {
                    return Err(BoundsError::DnfCapExceeded {
                        count: out.len(),
                        cap,
                    });
                }
            }
            out
        }
    };
    if out.len() > cap {
        return Err(BoundsError::DnfCapExceeded {
            count: out.len(),
            cap,
        });
    }
    Ok(out)
}

/// One deduplicated truth profile: its key over the mentioned grounds, a
/// representative valuation, and how many valuations share it.
struct Profile {
    key: u64,
    repr: ProgramValuation,
}

struct DisjunctOutcome {
    value: Rational,
    attained: bool,
    witness: Option<Vec<Rational>>,
}

/// Solve one disjunct for min or max of the profile-mass objective.
fn solve_disjunct(
    profiles: &[Profile],
    lits: &[Literal],
    objective: &[Rational],
    want_max: bool,
) -> Option<DisjunctOutcome> {
    let k = profiles.len();
    let members = |ground: usize| -> Vec<usize> {
        (0..k)
            .filter(|&g| profiles[g].key >> ground & 1 == 1)
            .collect()
    };

    let mass_row = |ground: usize| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); k];
        for g in members(ground) {
            row[g] = Rational::one();
        }
        row
    };

    // closed relaxation over w only
    let mut closed = Vec::new();
    closed.push(LinearConstraint {
        coeffs: vec![Rational::one(); k],
        cmp: Cmp::Eq,
        rhs: Rational::one(),
    });
    let mut strict_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for lit in lits {
        let row = mass_row(lit.ground);
        if lit.at_least {
            closed.push(LinearConstraint {
                coeffs: row,
                cmp: Cmp::Ge,
                rhs: lit.q.clone(),
            });
        } else {
            closed.push(LinearConstraint {
                coeffs: row.clone(),
                cmp: Cmp::Le,
                rhs: lit.q.clone(),
            });
            strict_rows.push((row, lit.q.clone()));
        }
    }
    let closed_lp = Lp {
        num_vars: k,
        constraints: closed.clone(),
    };

    // With-slack program over (w, t): strict rows get `+ t <=`, and the
    // open region is nonempty iff max t > 0.
    let slack_lp = |extra: Option<(&[Rational], &Rational)>| -> Lp {
        let mut cons: Vec<LinearConstraint> = Vec::new();
        for c in &closed {
            let mut coeffs = c.coeffs.clone();
            coeffs.push(Rational::zero());
            cons.push(LinearConstraint {
                coeffs,
                cmp: c.cmp,
                rhs: c.rhs.clone(),
            });
        }
        for (row, q) in &strict_rows {
            let mut coeffs = row.clone();
            coeffs.push(Rational::one());
            cons.push(LinearConstraint {
                coeffs,
                cmp: Cmp::Le,
                rhs: q.clone(),
            });
        }
        if let Some((obj_row, value)) = extra {
            let mut coeffs = obj_row.to_vec();
            coeffs.push(Rational::zero());
            cons.push(LinearConstraint {
                coeffs,
                cmp: Cmp::Eq,
                rhs: value.clone(),
            });
        }
        Lp {
            num_vars: k + 1,
            constraints: cons,
        }
    };
    let mut slack_obj = vec![Rational::zero(); k];
    slack_obj.push(Rational::one());

    // open-feasibility
    if strict_rows.is_empty() {
        let zero_obj = vec![Rational::zero(); k];
        if simplex::minimize(&closed_lp, &zero_obj) == LpOutcome::Infeasible {
            return None;
        }
    } else {
        match simplex::maximize(&slack_lp(None), &slack_obj) {
            LpOutcome::Optimal { value, .. } if value > Rational::zero() => {}
            _ => return None,
        }
    }

    // optimum of the closed relaxation = inf/sup of the open region
    let outcome = if want_max {
        simplex::maximize(&closed_lp, objective)
    } else {
        simplex::minimize(&closed_lp, objective)
    };
    let (value, point) = match outcome {
        LpOutcome::Optimal { value, point } => (value, point),
        _ => return None,
    };

    if strict_rows.is_empty() {
        return Some(DisjunctOutcome {
            value,
            attained: true,
            witness: Some(point),
        });
    }

    // attained iff some optimal point keeps every strict row strict
    match simplex::maximize(&slack_lp(Some((objective, &value))), &slack_obj) {
        LpOutcome::Optimal { value: t, point } if t > Rational::zero() => Some(DisjunctOutcome {
            value,
            attained: true,
            witness: Some(point[..k].to_vec()),
        }),
        _ => Some(DisjunctOutcome {
            value,
            attained: false,
            witness: None,
        }),
    }
}

fn witness_model(frame: &Frame, profiles: &[Profile], weights: &[Rational]) -> PedalModel {
    let cells = profiles
        .iter()
        .zip(weights)
        .filter(|(_, w)| !w.is_zero())
        .map(|(p, w)| Cell {
            weight: w.clone(),
            valuations: vec![p.repr.clone()],
        })
        .collect();
    PedalModel::new(frame.clone(), cells)
}

/// Compute the exact min/max credence of the query compatible with the
/// constraints, with witnesses packaged as singleton-cell models.
pub fn solve_bounds(q: &BoundsQuery, limits: &BoundsLimits) -> Result<BoundsResult, BoundsError> {
    let violations = validate_frame(&q.frame);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(BoundsError::InvalidFrame(text.join("; ")));
    }

    // distinct normalized grounds: constraints first, then the query
    let normalized: Vec<CredenceFormula> = q.constraints.iter().map(|c| c.normalize()).collect();
    let mut grounds: Vec<Formula> = Vec::new();
    let mut index: BTreeMap<Formula, usize> = BTreeMap::new();
    let mut add_ground = |g: &Formula| {
        let n = g.normalize();
        if !index.contains_key(&n) {
            index.insert(n.clone(), grounds.len());
            grounds.push(n);
        }
    };
    for c in &normalized {
        for g in c.grounds() {
            add_ground(g);
        }
    }
    add_ground(&q.query);
    if grounds.len() > 64 {
        return Err(BoundsError::TooManyGrounds {
            count: grounds.len(),
        });
    }
    let query_idx = index[&q.query.normalize()];

    // program atoms mentioned anywhere
    let mut programs: BTreeSet<String> = BTreeSet::new();
    for g in &grounds {
        let (_, pa) = g.collect_atoms();
        programs.extend(pa);
    }

    let space = ValuationSpace::new(&q.frame, &programs);
    let count = match space.count() {
        Some(c) if c <= limits.valuation_cap => c,
        _ => {
            return Err(BoundsError::ValuationCapExceeded {
                bits: space.bit_count(),
                cap: limits.valuation_cap,
            })
        }
    };

    // deduplicate valuations into truth profiles
    let mut by_key: BTreeMap<u64, Profile> = BTreeMap::new();
    for i in 0..count {
        let v = space.get(i);
        let mut key = 0u64;
        for (gi, g) in grounds.iter().enumerate() {
            if eval_set_prenormalized(&q.frame, &v, g).contains(q.state) {
                key |= 1 << gi;
            }
        }
        by_key.entry(key).or_insert(Profile { key, repr: v });
    }
    let profiles: Vec<Profile> = by_key.into_values().collect();
    let k = profiles.len();

    // constraints as DNF over comparison literals
    let conjunction = Nnf::And(
        normalized
            .iter()
            .map(|c| to_nnf(c, true, &index))
            .collect(),
    );
    let disjuncts = dnf(&conjunction, limits.dnf_cap)?;

    let mut objective = vec![Rational::zero(); k];
    for (g, p) in profiles.iter().enumerate() {
        if p.key >> query_idx & 1 == 1 {
            objective[g] = Rational::one();
        }
    }

    let mut best_min: Option<(Rational, bool, Option<Vec<Rational>>)> = None;
    let mut best_max: Option<(Rational, bool, Option<Vec<Rational>>)> = None;
    for lits in &disjuncts {
        if let Some(out) = solve_disjunct(&profiles, lits, &objective, false) {
            let replace = match &best_min {
                None => true,
                Some((v, att, _)) => out.value < *v || (out.value == *v && out.attained && !att),
            };
            if replace {
                best_min = Some((out.value, out.attained, out.witness));
            }
        }
        if let Some(out) = solve_disjunct(&profiles, lits, &objective, true) {
            let replace = match &best_max {
                None => true,
                Some((v, att, _)) => out.value > *v || (out.value == *v && out.attained && !att),
            };
            if replace {
                best_max = Some((out.value, out.attained, out.witness));
            }
        }
    }

    match (best_min, best_max) {
        (Some((minimum, min_attained, wmin)), Some((maximum, max_attained, wmax))) => {
            let witness_min = wmin.map(|w| witness_model(&q.frame, &profiles, &w));
            let witness_max = wmax.map(|w| witness_model(&q.frame, &profiles, &w));
            Ok(BoundsResult::Bounded(Bounds {
                minimum,
                maximum,
                min_attained,
                max_attained,
                witness_min,
                witness_max,
            }))
        }
        _ => Ok(BoundsResult::Infeasible),
    }
}

/// The validity-based bound: when the conjunction of the constrained
/// formulas entails the query, the query's credence is at least
/// `max(0, sum(r_i) - (n - 1))`; otherwise no bound is claimed.
pub fn frechet_lower_bound(
    constraints: &[(Formula, Rational)],
    query: &Formula,
    limits: &DecisionLimits,
) -> Result<Option<Rational>, DecisionError> {
    let conjunction = constraints
        .iter()
        .map(|(g, _)| g.clone())
        .reduce(|a, b| a.and(b))
        .unwrap_or_else(Formula::top);
    if !decide_valid(&conjunction.implies(query.clone()), limits)? {
        return Ok(None);
    }
    let n = constraints.len() as i64;
    let sum: Rational = constraints.iter().map(|(_, r)| r.clone()).sum();
    let bound = sum - Rational::from_integer((n - 1).into());
    Ok(Some(bound.max(Rational::zero())))
}
