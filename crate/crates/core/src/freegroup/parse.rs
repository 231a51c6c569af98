//! Recursive-descent parser for word expressions.
//!
//! Grammar (EBNF; whitespace separates tokens and is otherwise ignored):
//!
//! ```text
//! expr     = { factor } ;                       (* concatenation; empty = identity *)
//! factor   = atom , [ "^" , exponent ] ;
//! atom     = name
//!          | "(" , expr , ")"
//!          | "[" , expr , "," , expr , "]"
//!          | "ad" , "(" , expr , ")" , "^" , exponent , "(" , expr , ")" ;
//! exponent = [ "-" ] , natural | "m" ;
//! name     = letter , { letter | digit | "_" } ;
//! ```
//!
//! `[u, v]` is the commutator `u v u⁻¹ v⁻¹`; `ad(u)^m(v)` is the m-fold
//! iterated commutator `[u, [u, …, [u, v]]]` with `ad(u)^0(v) = v`. The
//! identifier `ad` is treated as the operator only when directly followed by
//! `(`. The exponent symbol `m` is a template parameter: `parse` rejects it,
//! configuration templates bind it per instance.

use std::sync::Arc;

use super::{Alphabet, FreeGroupError, Word};

/// Parsed word-expression template; may contain the parameter `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordExpr {
    Letter {
        name: String,
        pos: usize,
    },
    Concat(Vec<WordExpr>),
    Pow(Box<WordExpr>, Exponent),
    Commutator(Box<WordExpr>, Box<WordExpr>),
    Ad {
        base: Box<WordExpr>,
        times: Exponent,
        arg: Box<WordExpr>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Literal(i64),
    /// The template parameter `m`, recorded with its source position.
    Param {
        pos: usize,
    },
}

impl Exponent {
    fn eval(self, m: Option<i64>) -> Result<i64, FreeGroupError> {
        match self {
            Exponent::Literal(v) => Ok(v),
            Exponent::Param { pos } => m.ok_or(FreeGroupError::UnboundParameter { pos }),
        }
    }
}

impl WordExpr {
    /// Evaluates the template over `alphabet`, binding the parameter `m` if
    /// given.
    pub fn instantiate(
        &self,
        alphabet: &Arc<Alphabet>,
        m: Option<i64>,
    ) -> Result<Word, FreeGroupError> {
        match self {
            WordExpr::Letter { name, pos } => match alphabet.index_of(name) {
                Some(i) => Ok(Word::generator(alphabet.clone(), i)),
                None => Err(FreeGroupError::UnknownGenerator {
                    pos: *pos,
                    name: name.clone(),
                }),
            },
            WordExpr::Concat(parts) => {
                let mut acc = Word::identity(alphabet.clone());
                for p in parts {
                    acc = acc.multiply(&p.instantiate(alphabet, m)?)?;
                }
                Ok(acc)
            }
            WordExpr::Pow(base, e) => Ok(base.instantiate(alphabet, m)?.pow(e.eval(m)?)),
            WordExpr::Commutator(u, v) => u
                .instantiate(alphabet, m)?
                .commutator(&v.instantiate(alphabet, m)?),
            WordExpr::Ad { base, times, arg } => {
                let t = times.eval(m)?;
                if t < 0 {
                    return Err(FreeGroupError::NegativeAdPower(t));
                }
                base.instantiate(alphabet, m)?
                    .ad(t as u32, &arg.instantiate(alphabet, m)?)
            }
        }
    }

    /// True when the template mentions the parameter `m`.
    pub fn has_parameter(&self) -> bool {
        match self {
            WordExpr::Letter { .. } => false,
            WordExpr::Concat(parts) => parts.iter().any(|p| p.has_parameter()),
            WordExpr::Pow(base, e) => base.has_parameter() || matches!(e, Exponent::Param { .. }),
            WordExpr::Commutator(u, v) => u.has_parameter() || v.has_parameter(),
            WordExpr::Ad { base, times, arg } => {
                base.has_parameter()
                    || arg.has_parameter()
                    || matches!(times, Exponent::Param { .. })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Minus,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, FreeGroupError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
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
            '[' => {
                toks.push((Tok::LBracket, start));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBracket, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let value: i64 = text[i..j].parse().map_err(|_| FreeGroupError::Syntax {
                    pos: start,
                    message: "integer out of range".into(),
                })?;
                toks.push((Tok::Int(value), start));
                i = j;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                toks.push((Tok::Name(text[i..j].to_string()), start));
                i = j;
            }
            _ => {
                return Err(FreeGroupError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        at: 0,
        end: text.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, FreeGroupError> {
        let pos = self.pos();
        match self.next() {
            Some((t, p)) if t == want => Ok(p),
            _ => Err(FreeGroupError::Syntax {
                pos,
                message: format!("expected {what}"),
            }),
        }
    }
}

/// Parses a word-expression template; `m` may occur as an exponent.
pub fn parse_template(text: &str) -> Result<WordExpr, FreeGroupError> {
    let mut lx = lex(text)?;
    let expr = parse_concat(&mut lx)?;
    if let Some((_, pos)) = lx.next() {
        return Err(FreeGroupError::Syntax {
            pos,
            message: "trailing input".into(),
        });
    }
    Ok(expr)
}

fn parse_concat(lx: &mut Lexer) -> Result<WordExpr, FreeGroupError> {
    let mut parts = Vec::new();
    while matches!(
        lx.peek(),
        Some(Tok::Name(_)) | Some(Tok::LParen) | Some(Tok::LBracket)
    ) {
        parts.push(parse_factor(lx)?);
    }
    Ok(match parts.len() {
        1 => parts.pop().unwrap(),
        _ => WordExpr::Concat(parts),
    })
}

fn parse_factor(lx: &mut Lexer) -> Result<WordExpr, FreeGroupError> {
    let atom = parse_atom(lx)?;
    if lx.peek() == Some(&Tok::Caret) {
        lx.next();
        let e = parse_exponent(lx)?;
        return Ok(WordExpr::Pow(Box::new(atom), e));
    }
    Ok(atom)
}

fn parse_atom(lx: &mut Lexer) -> Result<WordExpr, FreeGroupError> {
    let pos = lx.pos();
    match lx.next() {
        Some((Tok::Name(name), p)) => {
            if name == "ad" && lx.peek() == Some(&Tok::LParen) {
                lx.next();
                let base = parse_concat(lx)?;
                lx.expect(Tok::RParen, "`)` closing ad base")?;
                lx.expect(Tok::Caret, "`^` after ad(…)")?;
                let times = parse_exponent(lx)?;
                lx.expect(Tok::LParen, "`(` opening ad argument")?;
                let arg = parse_concat(lx)?;
                lx.expect(Tok::RParen, "`)` closing ad argument")?;
                Ok(WordExpr::Ad {
                    base: Box::new(base),
                    times,
                    arg: Box::new(arg),
                })
            } else {
                Ok(WordExpr::Letter { name, pos: p })
            }
        }
        Some((Tok::LParen, _)) => {
            let inner = parse_concat(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(inner)
        }
        Some((Tok::LBracket, _)) => {
            let u = parse_concat(lx)?;
            lx.expect(Tok::Comma, "`,` inside commutator")?;
            let v = parse_concat(lx)?;
            lx.expect(Tok::RBracket, "`]`")?;
            Ok(WordExpr::Commutator(Box::new(u), Box::new(v)))
        }
        _ => Err(FreeGroupError::Syntax {
            pos,
            message: "expected a generator, `(` or `[`".into(),
        }),
    }
}

fn parse_exponent(lx: &mut Lexer) -> Result<Exponent, FreeGroupError> {
    let pos = lx.pos();
    match lx.next() {
        Some((Tok::Int(v), _)) => Ok(Exponent::Literal(v)),
        Some((Tok::Minus, _)) => match lx.next() {
            Some((Tok::Int(v), _)) => Ok(Exponent::Literal(-v)),
            _ => Err(FreeGroupError::Syntax {
                pos,
                message: "expected an integer after `-`".into(),
            }),
        },
        Some((Tok::Name(n), p)) if n == "m" => Ok(Exponent::Param { pos: p }),
        _ => Err(FreeGroupError::Syntax {
            pos,
            message: "expected an integer exponent or `m`".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_parameter_detection() {
        assert!(parse_template("ad(a)^m(b)").unwrap().has_parameter());
        assert!(parse_template("a^m").unwrap().has_parameter());
        assert!(!parse_template("[a, b]^2").unwrap().has_parameter());
    }

    #[test]
    fn template_instantiation() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let t = parse_template("[a, ad(a)^m(b)]").unwrap();
        let w0 = t.instantiate(&ab, Some(0)).unwrap();
        assert_eq!(w0, super::super::parse("[a, b]", &ab).unwrap());
        let w2 = t.instantiate(&ab, Some(2)).unwrap();
        assert_eq!(w2, super::super::parse("[a, [a, [a, b]]]", &ab).unwrap());
    }
}
