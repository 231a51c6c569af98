//! Elements of ℚ(x)[F, ε] with x-only denominators, in canonical form:
//! gcd(numerator content, denominator) = 1 and the denominator monic.
//!
//! Closure under ∂_F and ∂_x is what makes this the right coefficient ring
//! for the one-form calculus: differentiating never introduces an F- or
//! ε-dependent denominator.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::{self, Expr, ExprError};

use super::polyx::PolyX;
use super::GvError;

/// Numerator: map (F-degree, ε-degree) → x-polynomial, no zero entries.
pub type FPoly = BTreeMap<(u32, u32), PolyX>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatF {
    num: FPoly,
    den: PolyX,
}

impl RatF {
    pub fn zero() -> Self {
        RatF {
            num: FPoly::new(),
            den: PolyX::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut num = FPoly::new();
        if !q.is_zero() {
            num.insert((0, 0), PolyX::constant(q));
        }
        RatF {
            num,
            den: PolyX::one(),
        }
    }

    pub fn var_x() -> Self {
        let mut num = FPoly::new();
        num.insert((0, 0), PolyX::x());
        RatF {
            num,
            den: PolyX::one(),
        }
    }

    pub fn var_f() -> Self {
        let mut num = FPoly::new();
        num.insert((1, 0), PolyX::one());
        RatF {
            num,
            den: PolyX::one(),
        }
    }

    pub fn var_eps() -> Self {
        let mut num = FPoly::new();
        num.insert((0, 1), PolyX::one());
        RatF {
            num,
            den: PolyX::one(),
        }
    }

    pub fn from_parts(num: FPoly, den: PolyX) -> Self {
        let mut r = RatF { num, den };
        r.canonicalize();
        r
    }

    pub fn num(&self) -> &FPoly {
        &self.num
    }

    pub fn den(&self) -> &PolyX {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn deg_f(&self) -> u32 {
        self.num.keys().map(|(f, _)| *f).max().unwrap_or(0)
    }

    fn canonicalize(&mut self) {
        assert!(!self.den.is_zero(), "zero denominator");
        self.num.retain(|_, p| !p.is_zero());
        if self.num.is_empty() {
            self.den = PolyX::one();
            return;
        }
        if self.den.degree() == Some(0) {
            let c = self.den.as_constant().unwrap();
            if !c.is_one() {
                let inv = c.recip();
                for p in self.num.values_mut() {
                    *p = p.scale(&inv);
                }
                self.den = PolyX::one();
            }
            return;
        }
        let mut g = self.den.clone();
        for p in self.num.values() {
            if g.degree() == Some(0) {
                break;
            }
            g = g.gcd(p);
        }
        if g.degree().unwrap_or(0) > 0 {
            self.den = self.den.div_exact(&g);
            for p in self.num.values_mut() {
                *p = p.div_exact(&g);
            }
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.den = self.den.scale(&inv);
            for p in self.num.values_mut() {
                *p = p.scale(&inv);
            }
        }
    }

    pub fn add(&self, other: &RatF) -> RatF {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&other.den);
        let la = other.den.div_exact(&g);
        let lb = self.den.div_exact(&g);
        let den = self.den.mul(&la);
        let mut num = FPoly::new();
        for (k, p) in &self.num {
            num.insert(*k, p.mul(&la));
        }
        for (k, p) in &other.num {
            let add = p.mul(&lb);
            let slot = num.entry(*k).or_insert_with(PolyX::zero);
            *slot = slot.add(&add);
        }
        RatF::from_parts(num, den)
    }

    pub fn neg(&self) -> RatF {
        RatF {
            num: self.num.iter().map(|(k, p)| (*k, p.neg())).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatF) -> RatF {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatF) -> RatF {
        if self.is_zero() || other.is_zero() {
            return RatF::zero();
        }
        let mut num = FPoly::new();
        for ((fa, ea), pa) in &self.num {
            for ((fb, eb), pb) in &other.num {
                let key = (fa + fb, ea + eb);
                let prod = pa.mul(pb);
                let slot = num.entry(key).or_insert_with(PolyX::zero);
                *slot = slot.add(&prod);
            }
        }
        RatF::from_parts(num, self.den.mul(&other.den))
    }

    pub fn scale(&self, q: &BigRational) -> RatF {
        if q.is_zero() {
            return RatF::zero();
        }
        RatF {
            num: self.num.iter().map(|(k, p)| (*k, p.scale(q))).collect(),
            den: self.den.clone(),
        }
    }

    /// Division; the divisor must be free of F and ε (its numerator a pure
    /// x-polynomial), otherwise the result would leave the ring.
    pub fn div(&self, other: &RatF) -> Result<RatF, GvError> {
        if other.is_zero() {
            return Err(GvError::DivisionByZero);
        }
        let mut it = other.num.iter();
        let ((f, e), p) = it.next().unwrap();
        if *f != 0 || it.next().is_some() {
            return Err(GvError::BadDenominator("F".into()));
        }
        if *e != 0 {
            return Err(GvError::BadDenominator("eps".into()));
        }
        // self / (p / den_other) = self * den_other / p
        let mut num = FPoly::new();
        for (k, q) in &self.num {
            num.insert(*k, q.mul(&other.den));
        }
        Ok(RatF::from_parts(num, self.den.mul(p)))
    }

    /// ∂/∂F: denominators are untouched, so the ring is closed.
    pub fn d_df(&self) -> RatF {
        let mut num = FPoly::new();
        for ((f, e), p) in &self.num {
            if *f == 0 {
                continue;
            }
            let scaled = p.scale(&BigRational::from(num_bigint::BigInt::from(*f)));
            let slot = num.entry((f - 1, *e)).or_insert_with(PolyX::zero);
            *slot = slot.add(&scaled);
        }
        RatF::from_parts(num, self.den.clone())
    }

    /// ∂/∂x by the quotient rule.
    pub fn d_dx(&self) -> RatF {
        let dden = self.den.derivative();
        let mut num = FPoly::new();
        for (k, p) in &self.num {
            let t = p.derivative().mul(&self.den).sub(&p.mul(&dden));
            if !t.is_zero() {
                num.insert(*k, t);
            }
        }
        RatF::from_parts(num, self.den.mul(&self.den))
    }

    /// Evaluates a parsed expression over the variables x and F.
    pub fn eval_expr(e: &Expr) -> Result<RatF, GvError> {
        match e {
            Expr::Num(q) => Ok(RatF::from_rational(q.clone())),
            Expr::Var(name) => match name.as_str() {
                "x" => Ok(RatF::var_x()),
                "F" => Ok(RatF::var_f()),
                other => Err(GvError::UnknownVariable(other.to_string())),
            },
            Expr::Neg(a) => Ok(Self::eval_expr(a)?.neg()),
            Expr::Add(a, b) => Ok(Self::eval_expr(a)?.add(&Self::eval_expr(b)?)),
            Expr::Sub(a, b) => Ok(Self::eval_expr(a)?.sub(&Self::eval_expr(b)?)),
            Expr::Mul(a, b) => Ok(Self::eval_expr(a)?.mul(&Self::eval_expr(b)?)),
            Expr::Div(a, b) => Self::eval_expr(a)?.div(&Self::eval_expr(b)?),
            Expr::Pow(a, e) => {
                let base = Self::eval_expr(a)?;
                let mut out = RatF::one();
                for _ in 0..*e {
                    out = out.mul(&base);
                }
                Ok(out)
            }
        }
    }

    /// Parses a deformation function φ(x, F): sums of p(F)/q(x) terms; any
    /// F- or ε-dependent denominator is rejected.
    pub fn parse_phi(text: &str) -> Result<RatF, GvError> {
        let e = expr::parse(text).map_err(GvError::from)?;
        Self::eval_expr(&e)
    }
}

impl From<ExprError> for GvError {
    fn from(e: ExprError) -> Self {
        GvError::Parse(e.to_string())
    }
}

impl fmt::Display for RatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num_str = {
            let mut parts: Vec<String> = Vec::new();
            for ((fd, ed), p) in &self.num {
                let mut factors: Vec<String> = Vec::new();
                match (p.degree(), p.as_constant()) {
                    (Some(0), Some(c)) => {
                        if !c.is_one() || (*fd == 0 && *ed == 0) {
                            factors.push(format!("{c}"));
                        }
                    }
                    _ => factors.push(format!("({p})")),
                }
                if *fd == 1 {
                    factors.push("F".into());
                } else if *fd > 1 {
                    factors.push(format!("F^{fd}"));
                }
                if *ed == 1 {
                    factors.push("eps".into());
                } else if *ed > 1 {
                    factors.push(format!("eps^{ed}"));
                }
                parts.push(factors.join("*"));
            }
            parts.join(" + ")
        };
        if self.den.is_one() {
            write!(f, "{num_str}")
        } else if self.num.len() == 1 && !num_str.contains(" + ") {
            write!(f, "{num_str}/({})", self.den)
        } else {
            write!(f, "({num_str})/({})", self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_phi_examples() {
        let phi = RatF::parse_phi("F/(x-1) + F^2/(x+1)").unwrap();
        assert_eq!(phi.deg_f(), 2);
        assert!(RatF::parse_phi("0").unwrap().is_zero());
        assert!(matches!(
            RatF::parse_phi("1/F"),
            Err(GvError::BadDenominator(v)) if v == "F"
        ));
        assert!(matches!(
            RatF::parse_phi("y + 1"),
            Err(GvError::UnknownVariable(v)) if v == "y"
        ));
        assert!(matches!(
            RatF::parse_phi("1/(x - x)"),
            Err(GvError::DivisionByZero)
        ));
    }

    #[test]
    fn canonical_form_reduces() {
        // (x² - 1)/(x - 1) = x + 1
        let p = RatF::parse_phi("(x^2 - 1)/(x - 1)").unwrap();
        assert_eq!(p, RatF::parse_phi("x + 1").unwrap());
        // denominator monic: 1/(2x - 2) = (1/2)/(x - 1)
        let q = RatF::parse_phi("1/(2*x - 2)").unwrap();
        assert_eq!(q.den().to_string(), "x - 1");
    }

    #[test]
    fn derivatives() {
        let phi = RatF::parse_phi("F/(x-1) + F^2/(x+1)").unwrap();
        let phi_f = phi.d_df();
        assert_eq!(phi_f, RatF::parse_phi("1/(x-1) + 2*F/(x+1)").unwrap());
        let phi_ff = phi_f.d_df();
        assert_eq!(phi_ff, RatF::parse_phi("2/(x+1)").unwrap());
        assert!(phi_ff.d_df().is_zero());

        // ∂x(1/(x-1)) = -1/(x-1)²
        let r = RatF::parse_phi("1/(x-1)").unwrap().d_dx();
        assert_eq!(r, RatF::parse_phi("0 - 1/((x-1)^2)").unwrap());
    }

    #[test]
    fn schwarz_symmetry() {
        let phi = RatF::parse_phi("F^3/(x-1) + x*F/(x+1) + F^2").unwrap();
        assert_eq!(phi.d_df().d_dx(), phi.d_dx().d_df());
    }

    #[test]
    fn display_forms() {
        assert_eq!(RatF::parse_phi("F/(x-1)").unwrap().to_string(), "F/(x - 1)");
        let eps_over = RatF::var_eps().mul(&RatF::parse_phi("1/(x-1)").unwrap());
        assert_eq!(eps_over.to_string(), "eps/(x - 1)");
        assert_eq!(RatF::zero().to_string(), "0");
    }
}
