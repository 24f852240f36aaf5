//! Formula syntax:
//!
//! ```text
//! formula := quant | impl
//! impl    := or ("->" impl)?
//! or      := and ("\/" and)*
//! and     := unary ("/\" unary)*
//! unary   := "~" unary | quant | atom | "(" formula ")"
//! atom    := term ("=" | "in") term
//! quant   := ("forall" | "exists") IDENT ("in" term)? "." formula
//! term    := IDENT
//! ```
//!
//! An identifier is a variable when bound by an enclosing quantifier or
//! declared free, and otherwise must name a constant.

use std::collections::HashMap;

use thiserror::Error;

use super::{Formula, Term};
use crate::names::NameId;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("at byte {pos}: unknown constant `{name}`")]
    UnknownConstant { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    In,
    Eq,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = bytes.get(i..i + 2);
        let (tok, len) = match c {
            b'=' => (Tok::Eq, 1),
            b'.' => (Tok::Dot, 1),
            b'~' => (Tok::Not, 1),
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            _ if two == Some(b"/\\") => (Tok::And, 2),
            _ if two == Some(b"\\/") => (Tok::Or, 2),
            _ if two == Some(b"->") => (Tok::Arrow, 2),
            _ if c.is_ascii_alphanumeric() || c == b'_' => {
                let len = bytes[i..]
                    .iter()
                    .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_' || **b == b'\'')
                    .count();
                let word = &src[i..i + len];
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "in" => Tok::In,
                    _ => Tok::Ident(word.to_string()),
                };
                (tok, len)
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: i,
                    message: format!(
                        "unexpected character `{}`",
                        src[i..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    constants: &'a HashMap<String, NameId>,
    scope: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.offset(),
            message: message.to_string(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.syntax("expected an identifier")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Forall | Tok::Exists) => self.quant(),
            _ => self.implication(),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let universal = self.peek() == Some(&Tok::Forall);
        self.pos += 1;
        let var = self.ident()?;
        let bound = if self.eat(&Tok::In) {
            Some(self.term()?)
        } else {
            None
        };
        self.expect(&Tok::Dot, "`.`")?;
        self.scope.push(var.clone());
        let body = self.formula();
        self.scope.pop();
        let body = Box::new(body?);
        Ok(match (universal, bound) {
            (true, Some(bound)) => Formula::BForall { var, bound, body },
            (false, Some(bound)) => Formula::BExists { var, bound, body },
            (true, None) => Formula::UForall { var, body },
            (false, None) => Formula::UExists { var, body },
        })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall | Tok::Exists) => self.quant(),
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => {
                let a = self.term()?;
                let f = if self.eat(&Tok::Eq) {
                    Formula::Eq(a, self.term()?)
                } else if self.eat(&Tok::In) {
                    Formula::Member(a, self.term()?)
                } else {
                    return Err(self.syntax("expected `=` or `in`"));
                };
                Ok(f)
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.offset();
        let name = self.ident()?;
        if self.scope.contains(&name) {
            return Ok(Term::Var(name));
        }
        match self.constants.get(&name) {
            Some(&id) => Ok(Term::Const(id)),
            None => Err(ParseError::UnknownConstant { pos, name }),
        }
    }
}

/// Parses a closed formula. Identifiers not bound by a quantifier are looked
/// up in `constants`.
pub fn parse_formula(
    text: &str,
    constants: &HashMap<String, NameId>,
) -> Result<Formula, ParseError> {
    parse_formula_with_free(text, constants, &[])
}

/// Like [`parse_formula`], but the identifiers in `free` are variables.
pub fn parse_formula_with_free(
    text: &str,
    constants: &HashMap<String, NameId>,
    free: &[&str],
) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        constants,
        scope: free.iter().map(|s| s.to_string()).collect(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(f)
}
