//! A small arithmetic-expression parser shared by the scalar front ends
//! (deformation functions φ(x, F) and germ coefficients).
//!
//! Grammar:
//!
//! ```text
//! expr   = term , { ("+" | "-") , term } ;
//! term   = unary , { ("*" | "/") , unary } ;
//! unary  = "-" , unary | power ;
//! power  = atom , [ "^" , natural ] ;
//! atom   = natural | ident | "(" , expr , ")" ;
//! ```
//!
//! Multiplication is always explicit (`2*F`, not `2F`). The meaning of
//! identifiers and the admissible divisions are decided by the evaluator.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ExprError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] as char {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: BigInt = text[i..j].parse().expect("digits parse");
                toks.push((Tok::Int(n), start));
                i = j;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                toks.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
            }
            c => {
                return Err(ExprError {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some((Tok::Int(n), _)) => {
                    let e = u32::try_from(&n).map_err(|_| ExprError {
                        pos,
                        message: "exponent out of range".into(),
                    })?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => {
                    return Err(ExprError {
                        pos,
                        message: "expected a natural-number exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Int(n), _)) => Ok(Expr::Num(BigRational::from(n))),
            Some((Tok::Ident(name), _)) => Ok(Expr::Var(name)),
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                let pos = self.pos();
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(ExprError {
                        pos,
                        message: "expected `)`".into(),
                    }),
                }
            }
            _ => Err(ExprError {
                pos,
                message: "expected a number, name or `(`".into(),
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if let Some((_, pos)) = p.bump() {
        return Err(ExprError {
            pos,
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_function_inputs() {
        assert!(parse("F/(x-1) + F^2/(x+1)").is_ok());
        assert!(parse("0").is_ok());
        assert!(parse("1/F").is_ok());
        assert!(parse("eps*u^2 - 3/2").is_ok());
        assert!(parse("-(x - 1)^3").is_ok());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("F +").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("x^y").is_err());
        assert!(parse("x $ y").is_err());
        assert!(parse("x 2").is_err());
    }
}
