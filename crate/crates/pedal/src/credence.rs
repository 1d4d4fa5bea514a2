//! Measured partitions of program-valuation space and exact credences.
//!
//! A [`PedalModel`] is an S5 frame plus finitely many disjoint cells of
//! program valuations with rational weights summing to one. The weight of
//! a cell spreads uniformly over its members, which extends the measure to
//! every finite valuation set and gives the credence `mu(s, g)`: the mass
//! of the valuations that make `g` true at `s`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::kripke::{eval_set, validate_frame, Frame, ProgramValuation, StateId};
use crate::rational::{format_rational, Rational};
use crate::syntax::{CredenceFormula, Formula};

/// A partition cell: valuations the agent is indifferent between, plus the
/// probability mass assigned to the whole cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub weight: Rational,
    pub valuations: Vec<ProgramValuation>,
}

/// An S5 frame with a measured partition of its valuation space.
///
/// Only the listed cells are enumerable; everything else forms one
/// implicit infinite cell whose weight must be zero (an infinite cell
/// cannot carry mass under the finite-support assumption).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PedalModel {
    pub frame: Frame,
    pub cells: Vec<Cell>,
    pub implicit_rest_weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PedalViolation {
    Frame(crate::kripke::Violation),
    NegativeWeight { cell: usize },
    WeightSum { sum: Rational },
    RestWeightNonZero { weight: Rational },
    DuplicateValuation { cell: usize },
    OverlappingCells { first: usize, second: usize },
    ValuationOutsideRbox { cell: usize, program: String },
    ValuationNotTotal { cell: usize, missing: String },
    ValuationWrongUniverse { cell: usize, program: String },
}

impl fmt::Display for PedalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PedalViolation::Frame(v) => write!(f, "{v}"),
            PedalViolation::NegativeWeight { cell } => {
                write!(f, "cell {cell} has negative weight")
            }
            PedalViolation::WeightSum { sum } => {
                write!(f, "weights sum to {}", format_rational(sum))
            }
            PedalViolation::RestWeightNonZero { weight } => write!(
                f,
                "implicit rest cell is infinite and must carry zero weight, got {}",
                format_rational(weight)
            ),
            PedalViolation::DuplicateValuation { cell } => {
                write!(f, "cell {cell} lists a valuation twice")
            }
            PedalViolation::OverlappingCells { first, second } => {
                write!(f, "cells {first} and {second} share a valuation")
            }
            PedalViolation::ValuationOutsideRbox { cell, program } => {
                write!(f, "cell {cell}: v_p({program}) is not contained in rbox")
            }
            PedalViolation::ValuationNotTotal { cell, missing } => {
                write!(f, "cell {cell}: valuation missing program `{missing}`")
            }
            PedalViolation::ValuationWrongUniverse { cell, program } => {
                write!(f, "cell {cell}: v_p({program}) ranges over the wrong state count")
            }
        }
    }
}

impl PedalModel {
    pub fn new(frame: Frame, cells: Vec<Cell>) -> Self {
        PedalModel {
            frame,
            cells,
            implicit_rest_weight: Rational::zero(),
        }
    }

    /// Program atoms this model's valuations are defined on: the union of
    /// the listed valuations' domains.
    pub fn program_atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for cell in &self.cells {
            for v in &cell.valuations {
                out.extend(v.keys().cloned());
            }
        }
        out
    }

    /// Valuations in cells of nonzero weight, with their point masses.
    pub fn supported_valuations(&self) -> impl Iterator<Item = (&ProgramValuation, Rational)> {
        self.cells
            .iter()
            .filter(|cell| !cell.weight.is_zero())
            .flat_map(|cell| {
                let share = cell.weight.clone()
                    / Rational::from_integer((cell.valuations.len() as i64).into());
                cell.valuations.iter().map(move |v| (v, share.clone()))
            })
    }
}

/// Check every model invariant; empty list = valid.
pub fn validate_pedal(pm: &PedalModel) -> Vec<PedalViolation> {
    let mut out: Vec<PedalViolation> = validate_frame(&pm.frame)
        .into_iter()
        .map(PedalViolation::Frame)
        .collect();

    let programs = pm.program_atoms();
    let mut owner: Vec<(usize, ProgramValuation)> = Vec::new();

    let mut sum = pm.implicit_rest_weight.clone();
    for (ci, cell) in pm.cells.iter().enumerate() {
        if cell.weight.is_negative() {
            out.push(PedalViolation::NegativeWeight { cell: ci });
        }
        sum += &cell.weight;
        let mut local: BTreeSet<&ProgramValuation> = BTreeSet::new();
        for v in &cell.valuations {
            if !local.insert(v) {
                out.push(PedalViolation::DuplicateValuation { cell: ci });
            } else if let Some((first, _)) = owner.iter().find(|(oi, w)| *oi != ci && w == v) {
                out.push(PedalViolation::OverlappingCells {
                    first: *first,
                    second: ci,
                });
            } else {
                owner.push((ci, v.clone()));
            }
            for name in &programs {
                match v.get(name) {
                    None => out.push(PedalViolation::ValuationNotTotal {
                        cell: ci,
                        missing: name.clone(),
                    }),
                    Some(rel) => {
                        if rel.universe() != pm.frame.n_states {
                            out.push(PedalViolation::ValuationWrongUniverse {
                                cell: ci,
                                program: name.clone(),
                            });
                        } else if pm.frame.rbox.universe() == pm.frame.n_states
                            && !rel.is_subset_of(&pm.frame.rbox)
                        {
                            out.push(PedalViolation::ValuationOutsideRbox {
                                cell: ci,
                                program: name.clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    if !pm.implicit_rest_weight.is_zero() {
        out.push(PedalViolation::RestWeightNonZero {
            weight: pm.implicit_rest_weight.clone(),
        });
    }
    if !sum.is_one() {
        out.push(PedalViolation::WeightSum { sum });
    }
    out
}

/// Mass of a single valuation: its cell's weight split uniformly over the
/// cell. Unlisted valuations sit in the infinite rest cell and get zero.
pub fn point_mass(pm: &PedalModel, v: &ProgramValuation) -> Rational {
    for cell in &pm.cells {
        if cell.valuations.iter().any(|w| w == v) {
            if cell.weight.is_zero() {
                return Rational::zero();
            }
            return cell.weight.clone()
                / Rational::from_integer((cell.valuations.len() as i64).into());
        }
    }
    Rational::zero()
}

/// Mass of a finite valuation set, computed by both defining routes
/// (point masses summed, and per-cell `weight * |cell ∩ set| / |cell|`),
/// which must agree exactly.
pub fn measure_set(pm: &PedalModel, set: &BTreeSet<ProgramValuation>) -> Rational {
    let by_points: Rational = set.iter().map(|v| point_mass(pm, v)).sum();

    let mut by_cells = Rational::zero();
    for cell in &pm.cells {
        if cell.weight.is_zero() {
            continue;
        }
        let hit = cell.valuations.iter().filter(|v| set.contains(*v)).count();
        if hit > 0 {
            by_cells += cell.weight.clone()
                * Rational::new((hit as i64).into(), (cell.valuations.len() as i64).into());
        }
    }

    assert_eq!(by_points, by_cells, "the two measure routes must agree");
    by_points
}

/// The credence `mu(s, g)`: mass of the supported valuations whose model
/// makes `g` true at `s`. Unsupported valuations contribute nothing and
/// are never enumerated.
pub fn mu(pm: &PedalModel, s: StateId, g: &Formula) -> Rational {
    let g = g.normalize();
    let mut total = Rational::zero();
    for (v, mass) in pm.supported_valuations() {
        if eval_set(&pm.frame, v, &g).contains(s) {
            total += mass;
        }
    }
    total
}

/// Truth of a credence formula at a state: `P(g) >= q` holds iff
/// `mu(s, g) >= q`, Boolean structure as expected.
pub fn satisfies_credence(pm: &PedalModel, s: StateId, cf: &CredenceFormula) -> bool {
    fn go(pm: &PedalModel, s: StateId, cf: &CredenceFormula) -> bool {
        match cf {
            CredenceFormula::AtLeast(g, q) => mu(pm, s, g) >= *q,
            CredenceFormula::Not(c) => !go(pm, s, c),
            CredenceFormula::Or(a, b) => go(pm, s, a) || go(pm, s, b),
            _ => unreachable!("normalized credence formulas use AtLeast/Not/Or only"),
        }
    }
    go(pm, s, &cf.normalize())
}

impl PedalModel {
    pub fn mu(&self, s: StateId, g: &Formula) -> Rational {
        mu(self, s, g)
    }

    pub fn satisfies(&self, s: StateId, cf: &CredenceFormula) -> bool {
        satisfies_credence(self, s, cf)
    }
}
