//! Polynomials in the deformation parameter ε and named formal units over
//! ℚ.
//!
//! Units stand for the transcendental constants genuine cycle integrals
//! would contribute (periods, 2πi factors); they commute, satisfy no
//! relations, and are never truncated. Only the ε-degree is truncated, and
//! only where germ arithmetic asks for it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::{self, Expr, ExprError};

/// A monomial ε^k · Π units^e; unit exponents are positive in the map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct EpsMono {
    pub eps: u32,
    pub units: BTreeMap<String, u32>,
}

impl EpsMono {
    fn mul(&self, other: &EpsMono) -> EpsMono {
        let mut units = self.units.clone();
        for (u, e) in &other.units {
            *units.entry(u.clone()).or_insert(0) += e;
        }
        EpsMono {
            eps: self.eps + other.eps,
            units,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EpsPoly {
    terms: BTreeMap<EpsMono, BigRational>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly::default()
    }

    pub fn one() -> Self {
        EpsPoly::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(EpsMono::default(), q);
        }
        EpsPoly { terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn eps() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            EpsMono {
                eps: 1,
                units: BTreeMap::new(),
            },
            BigRational::one(),
        );
        EpsPoly { terms }
    }

    pub fn unit(name: &str) -> Self {
        let mut units = BTreeMap::new();
        units.insert(name.to_string(), 1);
        let mut terms = BTreeMap::new();
        terms.insert(EpsMono { eps: 0, units }, BigRational::one());
        EpsPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<EpsMono, BigRational> {
        &self.terms
    }

    pub fn add(&self, other: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let slot = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn sub(&self, other: &EpsPoly) -> EpsPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EpsPoly {
        EpsPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    /// Product, dropping ε-degrees above `eps_cap` when given.
    pub fn mul(&self, other: &EpsPoly, eps_cap: Option<u32>) -> EpsPoly {
        let mut out = EpsPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let eps = ma.eps + mb.eps;
                if let Some(cap) = eps_cap {
                    if eps > cap {
                        continue;
                    }
                }
                let m = ma.mul(mb);
                let slot = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
                *slot += ca * cb;
                if slot.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> EpsPoly {
        if q.is_zero() {
            return EpsPoly::zero();
        }
        EpsPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn truncate_eps(&self, eps_cap: u32) -> EpsPoly {
        EpsPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.eps <= eps_cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when the polynomial is a single term (handy for unparenthesized
    /// printing).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Evaluates a parsed expression where `eps` is the deformation
    /// parameter and every other identifier is a formal unit. Division is
    /// admissible by nonzero constants only.
    pub fn eval_expr(e: &Expr) -> Result<EpsPoly, ExprError> {
        match e {
            Expr::Num(q) => Ok(EpsPoly::from_rational(q.clone())),
            Expr::Var(name) => {
                if name == "eps" {
                    Ok(EpsPoly::eps())
                } else {
                    Ok(EpsPoly::unit(name))
                }
            }
            Expr::Neg(a) => Ok(Self::eval_expr(a)?.neg()),
            Expr::Add(a, b) => Ok(Self::eval_expr(a)?.add(&Self::eval_expr(b)?)),
            Expr::Sub(a, b) => Ok(Self::eval_expr(a)?.sub(&Self::eval_expr(b)?)),
            Expr::Mul(a, b) => Ok(Self::eval_expr(a)?.mul(&Self::eval_expr(b)?, None)),
            Expr::Div(a, b) => {
                let num = Self::eval_expr(a)?;
                let den = Self::eval_expr(b)?;
                let constant = den
                    .terms
                    .iter()
                    .find(|(m, _)| **m == EpsMono::default())
                    .map(|(_, c)| c.clone());
                match constant {
                    Some(c) if den.terms.len() == 1 && !c.is_zero() => Ok(num.scale(&c.recip())),
                    _ => Err(ExprError {
                        pos: 0,
                        message: "division is only defined by nonzero rational constants here"
                            .into(),
                    }),
                }
            }
            Expr::Pow(a, e) => {
                let base = Self::eval_expr(a)?;
                let mut out = EpsPoly::one();
                for _ in 0..*e {
                    out = out.mul(&base, None);
                }
                Ok(out)
            }
        }
    }

    pub fn parse(text: &str) -> Result<EpsPoly, ExprError> {
        Self::eval_expr(&expr::parse(text)?)
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if pos == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.eps == 1 {
                factors.push("eps".to_string());
            } else if m.eps > 1 {
                factors.push(format!("eps^{}", m.eps));
            }
            for (u, e) in &m.units {
                if *e == 1 {
                    factors.push(u.clone());
                } else {
                    factors.push(format!("{u}^{e}"));
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
