//! Probabilistic epistemic dynamic logic on finite Kripke models.
//!
//! The crate evaluates dynamic-logic formulas on finite models, computes
//! exact credences from measured partitions of program-valuation space,
//! decides validity via Fischer-Ladner atoms, checks Hilbert-style proofs,
//! and computes tight credence bounds by exact linear programming.
//!
//! Start from the runnable examples (`cargo run --example demo_anne`) or
//! from the module docs:
//!
//! - [`syntax`]: formulas, programs, credence formulas, parsing/printing,
//!   the Fischer-Ladner closure;
//! - [`kripke`]: models, program denotations, satisfaction;
//! - [`credence`]: measured valuation partitions and exact credences;
//! - [`decision`]: satisfiability/validity, canonical models, sections;
//! - [`bounds`]: credence bounds by exact rational linear programming;
//! - [`proofcheck`]: Hilbert proof checking for the ground and credence
//!   systems;
//! - [`files`]: the JSON file formats used by the CLI.

pub mod bounds;
pub mod credence;
pub mod decision;
pub mod demo;
pub mod files;
pub mod generate;
pub mod kripke;
pub mod proofcheck;
pub mod rational;
pub mod syntax;

pub use crate::rational::Rational;
pub use crate::syntax::{CredenceFormula, Formula, Program, Signature};
