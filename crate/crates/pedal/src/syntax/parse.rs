//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! Formulas: `#` bottom, `~` not, `&`, `|`, `->`, `<->`, `[prog]f`,
//! `<prog>f`, `G f`, `F f`. Programs: `;`, `+`, postfix `*`, `?f`.
//! Credence: `P(f) >= 3/5` with relations `>= > = <= <` and rational or
//! decimal literals. `G`, `F` and `P` are reserved words.

use thiserror::Error;

use crate::rational::{format_rational, is_probability, parse_rational, Rational};

use super::{Comparison, CompareOp, CredenceFormula, Formula, Program, Signature};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown formula atom `{name}`")]
    UnknownFormulaAtom { name: String },
    #[error("unknown program atom `{name}`")]
    UnknownProgramAtom { name: String },
    #[error("rational {} outside [0, 1]", format_rational(.value))]
    RationalOutOfRange { value: Rational },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    KwG,
    KwF,
    KwP,
    Number(String),
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Arrow,
    IffSym,
    Tilde,
    Amp,
    Pipe,
    Hash,
    Question,
    Star,
    Plus,
    Semi,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '(' => out.push((Token::LParen, start)),
            ')' => out.push((Token::RParen, start)),
            '[' => out.push((Token::LBracket, start)),
            ']' => out.push((Token::RBracket, start)),
            '~' => out.push((Token::Tilde, start)),
            '&' => out.push((Token::Amp, start)),
            '|' => out.push((Token::Pipe, start)),
            '#' => out.push((Token::Hash, start)),
            '?' => out.push((Token::Question, start)),
            '*' => out.push((Token::Star, start)),
            '+' => out.push((Token::Plus, start)),
            ';' => out.push((Token::Semi, start)),
            '/' => out.push((Token::Slash, start)),
            '=' => out.push((Token::Eq, start)),
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((Token::Arrow, start));
                    i += 1;
                } else {
                    return Err(ParseError::Syntax {
                        pos: start,
                        message: "expected `->` after `-`".to_string(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((Token::IffSym, start));
                    i += 2;
                } else if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Token::Le, start));
                    i += 1;
                } else {
                    out.push((Token::Lt, start));
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Token::Ge, start));
                    i += 1;
                } else {
                    out.push((Token::Gt, start));
                }
            }
            _ if c.is_ascii_digit() => {
                let mut j = i + 1;
                let mut seen_dot = false;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_digit() || (d == '.' && !seen_dot) {
                        seen_dot |= d == '.';
                        j += 1;
                    } else {
                        break;
                    }
                }
                out.push((Token::Number(text[i..j].to_string()), start));
                i = j;
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word = &text[i..j];
                let tok = match word {
                    "G" => Token::KwG,
                    "F" => Token::KwF,
                    "P" => Token::KwP,
                    _ => Token::Ident(word.to_string()),
                };
                out.push((tok, start));
                i = j;
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, want: &Token) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ParseError> {
        if self.eat(&want) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn err(&self, message: String) -> ParseError {
        ParseError::Syntax {
            pos: self.here(),
            message,
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input".to_string()))
        }
    }

    // ----- ground formulas -----

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_imp()?;
        while self.eat(&Token::IffSym) {
            let rhs = self.formula_imp()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn formula_imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.formula_or()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.formula_imp()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn formula_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_and()?;
        while self.eat(&Token::Pipe) {
            let rhs = self.formula_and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_unary()?;
        while self.eat(&Token::Amp) {
            let rhs = self.formula_unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Tilde) => {
                self.pos += 1;
                Ok(self.formula_unary()?.not())
            }
            Some(Token::KwG) => {
                self.pos += 1;
                Ok(self.formula_unary()?.gbox())
            }
            Some(Token::KwF) => {
                self.pos += 1;
                Ok(self.formula_unary()?.gdia())
            }
            Some(Token::Hash) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Token::LBracket) => {
                self.pos += 1;
                let pi = self.program()?;
                self.expect(Token::RBracket, "`]`")?;
                Ok(Formula::box_(pi, self.formula_unary()?))
            }
            Some(Token::Lt) => {
                self.pos += 1;
                let pi = self.program()?;
                self.expect(Token::Gt, "`>`")?;
                Ok(Formula::diamond(pi, self.formula_unary()?))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(f)
            }
            Some(Token::Ident(_)) => match self.bump() {
                Some(Token::Ident(name)) => Ok(Formula::Atom(name)),
                _ => unreachable!(),
            },
            Some(Token::KwP) => Err(self.err(
                "probability operator cannot occur inside a ground formula".to_string(),
            )),
            _ => Err(self.err("expected a formula".to_string())),
        }
    }

    // ----- programs -----

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.program_seq()?;
        while self.eat(&Token::Plus) {
            let rhs = self.program_seq()?;
            lhs = lhs.choice(rhs);
        }
        Ok(lhs)
    }

    fn program_seq(&mut self) -> Result<Program, ParseError> {
        let mut lhs = self.program_postfix()?;
        while self.eat(&Token::Semi) {
            let rhs = self.program_postfix()?;
            lhs = lhs.seq(rhs);
        }
        Ok(lhs)
    }

    fn program_postfix(&mut self) -> Result<Program, ParseError> {
        let mut p = self.program_primary()?;
        while self.eat(&Token::Star) {
            p = p.star();
        }
        Ok(p)
    }

    fn program_primary(&mut self) -> Result<Program, ParseError> {
        match self.peek() {
            Some(Token::Ident(_)) => match self.bump() {
                Some(Token::Ident(name)) => Ok(Program::Atom(name)),
                _ => unreachable!(),
            },
            Some(Token::Question) => {
                self.pos += 1;
                Ok(Program::test(self.formula_unary()?))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let p = self.program()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(p)
            }
            _ => Err(self.err("expected a program".to_string())),
        }
    }

    // ----- credence formulas -----

    fn credence(&mut self) -> Result<CredenceFormula, ParseError> {
        let mut lhs = self.credence_imp()?;
        while self.eat(&Token::IffSym) {
            let rhs = self.credence_imp()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn credence_imp(&mut self) -> Result<CredenceFormula, ParseError> {
        let lhs = self.credence_or()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.credence_imp()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn credence_or(&mut self) -> Result<CredenceFormula, ParseError> {
        let mut lhs = self.credence_and()?;
        while self.eat(&Token::Pipe) {
            let rhs = self.credence_and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn credence_and(&mut self) -> Result<CredenceFormula, ParseError> {
        let mut lhs = self.credence_unary()?;
        while self.eat(&Token::Amp) {
            let rhs = self.credence_unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn credence_unary(&mut self) -> Result<CredenceFormula, ParseError> {
        match self.peek() {
            Some(Token::Tilde) => {
                self.pos += 1;
                Ok(self.credence_unary()?.not())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let c = self.credence()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(c)
            }
            Some(Token::KwP) => {
                self.pos += 1;
                self.expect(Token::LParen, "`(` after `P`")?;
                let ground = self.formula()?;
                self.expect(Token::RParen, "`)`")?;
                let relation = match self.bump() {
                    Some(Token::Ge) => CompareOp::Ge,
                    Some(Token::Gt) => CompareOp::Gt,
                    Some(Token::Eq) => CompareOp::Eq,
                    Some(Token::Le) => CompareOp::Le,
                    Some(Token::Lt) => CompareOp::Lt,
                    _ => {
                        return Err(self.err(
                            "expected a comparison (`>=`, `>`, `=`, `<=`, `<`)".to_string(),
                        ))
                    }
                };
                let q = self.rational()?;
                if !is_probability(&q) {
                    return Err(ParseError::RationalOutOfRange { value: q });
                }
                Ok(Comparison::new(ground, relation, q)?.desugar())
            }
            _ => Err(self.err("expected a credence formula".to_string())),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let pos = self.here();
        let num = match self.bump() {
            Some(Token::Number(n)) => n,
            _ => {
                return Err(ParseError::Syntax {
                    pos,
                    message: "expected a rational literal".to_string(),
                })
            }
        };
        let text = if self.eat(&Token::Slash) {
            let den = match self.bump() {
                Some(Token::Number(d)) => d,
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        message: "expected a denominator".to_string(),
                    })
                }
            };
            format!("{num}/{den}")
        } else {
            num
        };
        parse_rational(&text).map_err(|message| ParseError::Syntax { pos, message })
    }
}

/// Parse a ground formula without checking atom names.
pub fn parse_formula_raw(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse a ground formula; every atom must be declared in `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let f = parse_formula_raw(text)?;
    f.check_signature(sig)?;
    Ok(f)
}

pub fn parse_program_raw(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let pi = p.program()?;
    p.finish()?;
    Ok(pi)
}

pub fn parse_program(text: &str, sig: &Signature) -> Result<Program, ParseError> {
    let pi = parse_program_raw(text)?;
    let (fa, pa) = pi.collect_atoms();
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
    Ok(pi)
}

pub fn parse_credence_raw(text: &str) -> Result<CredenceFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.credence()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_credence(text: &str, sig: &Signature) -> Result<CredenceFormula, ParseError> {
    let c = parse_credence_raw(text)?;
    c.check_signature(sig)?;
    Ok(c)
}
