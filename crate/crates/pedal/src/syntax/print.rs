//! Precedence-aware printing. `parse(print(f))` is structurally `f`.

use std::fmt;

use crate::rational::format_rational;

use super::{CredenceFormula, Formula, Program};

// Formula precedence, loosest first: <-> , -> , | , & , unary, atomic.
const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn fmt_formula(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match f {
        Formula::Iff(_, _) => IFF,
        Formula::Implies(_, _) => IMP,
        Formula::Or(_, _) => OR,
        Formula::And(_, _) => AND,
        Formula::Not(_)
        | Formula::Diamond(_, _)
        | Formula::Box(_, _)
        | Formula::GlobalDiamond(_)
        | Formula::GlobalBox(_) => UNARY,
        Formula::Atom(_) | Formula::Bottom => UNARY + 1,
    };
    let parens = level < min;
    if parens {
        write!(out, "(")?;
    }
    match f {
        Formula::Atom(name) => write!(out, "{name}")?,
        Formula::Bottom => write!(out, "#")?,
        Formula::Not(g) => {
            write!(out, "~")?;
            fmt_formula(g, UNARY, out)?;
        }
        Formula::Or(a, b) => {
            fmt_formula(a, OR, out)?;
            write!(out, " | ")?;
            fmt_formula(b, OR + 1, out)?;
        }
        Formula::And(a, b) => {
            fmt_formula(a, AND, out)?;
            write!(out, " & ")?;
            fmt_formula(b, AND + 1, out)?;
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, IMP + 1, out)?;
            write!(out, " -> ")?;
            fmt_formula(b, IMP, out)?;
        }
        Formula::Iff(a, b) => {
            fmt_formula(a, IFF, out)?;
            write!(out, " <-> ")?;
            fmt_formula(b, IFF + 1, out)?;
        }
        Formula::Diamond(pi, g) => {
            write!(out, "<")?;
            fmt_program(pi, 0, out)?;
            write!(out, ">")?;
            fmt_formula(g, UNARY, out)?;
        }
        Formula::Box(pi, g) => {
            write!(out, "[")?;
            fmt_program(pi, 0, out)?;
            write!(out, "]")?;
            fmt_formula(g, UNARY, out)?;
        }
        Formula::GlobalDiamond(g) => {
            write!(out, "F ")?;
            fmt_formula(g, UNARY, out)?;
        }
        Formula::GlobalBox(g) => {
            write!(out, "G ")?;
            fmt_formula(g, UNARY, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

// Program precedence: + , ; , * , atomic/test.
const CHOICE: u8 = 1;
const SEQ: u8 = 2;
const STAR: u8 = 3;

fn fmt_program(p: &Program, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match p {
        Program::Choice(_, _) => CHOICE,
        Program::Seq(_, _) => SEQ,
        Program::Star(_) => STAR,
        Program::Atom(_) | Program::Test(_) => STAR + 1,
    };
    let parens = level < min;
    if parens {
        write!(out, "(")?;
    }
    match p {
        Program::Atom(name) => write!(out, "{name}")?,
        Program::Choice(a, b) => {
            fmt_program(a, CHOICE, out)?;
            write!(out, "+")?;
            fmt_program(b, CHOICE + 1, out)?;
        }
        Program::Seq(a, b) => {
            fmt_program(a, SEQ, out)?;
            write!(out, ";")?;
            fmt_program(b, SEQ + 1, out)?;
        }
        Program::Star(a) => {
            fmt_program(a, STAR, out)?;
            write!(out, "*")?;
        }
        Program::Test(f) => {
            write!(out, "?")?;
            fmt_formula(f, UNARY, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

fn fmt_credence(c: &CredenceFormula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match c {
        CredenceFormula::Iff(_, _) => IFF,
        CredenceFormula::Implies(_, _) => IMP,
        CredenceFormula::Or(_, _) => OR,
        CredenceFormula::And(_, _) => AND,
        CredenceFormula::Not(_) => UNARY,
        CredenceFormula::AtLeast(_, _) => UNARY + 1,
    };
    let parens = level < min;
    if parens {
        write!(out, "(")?;
    }
    match c {
        CredenceFormula::AtLeast(g, q) => {
            write!(out, "P({g}) >= {}", format_rational(q))?;
        }
        CredenceFormula::Not(x) => {
            write!(out, "~")?;
            fmt_credence(x, UNARY, out)?;
        }
        CredenceFormula::Or(a, b) => {
            fmt_credence(a, OR, out)?;
            write!(out, " | ")?;
            fmt_credence(b, OR + 1, out)?;
        }
        CredenceFormula::And(a, b) => {
            fmt_credence(a, AND, out)?;
            write!(out, " & ")?;
            fmt_credence(b, AND + 1, out)?;
        }
        CredenceFormula::Implies(a, b) => {
            fmt_credence(a, IMP + 1, out)?;
            write!(out, " -> ")?;
            fmt_credence(b, IMP, out)?;
        }
        CredenceFormula::Iff(a, b) => {
            fmt_credence(a, IFF, out)?;
            write!(out, " <-> ")?;
            fmt_credence(b, IFF + 1, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, out)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_program(self, 0, out)
    }
}

impl fmt::Display for CredenceFormula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_credence(self, 0, out)
    }
}
