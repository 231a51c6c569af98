//! Dense univariate polynomials in x over ℚ.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients ascending by power, no trailing zeros; zero is the empty
/// vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyX {
    coeffs: Vec<BigRational>,
}

impl PolyX {
    pub fn zero() -> Self {
        PolyX { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyX::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = PolyX { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn x() -> Self {
        PolyX {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = PolyX { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &PolyX) -> PolyX {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        PolyX::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &PolyX) -> PolyX {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyX {
        PolyX {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &PolyX) -> PolyX {
        if self.is_zero() || other.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyX::from_coeffs(coeffs)
    }

    pub fn scale(&self, q: &BigRational) -> PolyX {
        if q.is_zero() {
            return PolyX::zero();
        }
        PolyX {
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn derivative(&self) -> PolyX {
        if self.coeffs.len() <= 1 {
            return PolyX::zero();
        }
        PolyX::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(num_bigint::BigInt::from(i)))
                .collect(),
        )
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &PolyX) -> (PolyX, PolyX) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let dl = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quo =
            vec![BigRational::zero(); self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1];
        while let Some(rd) = rem.degree() {
            if rd < dd || rem.is_zero() {
                break;
            }
            let factor = rem.leading().unwrap() / &dl;
            let shift = rd - dd;
            quo[shift] = factor.clone();
            let mut sub = vec![BigRational::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&PolyX::from_coeffs(sub));
        }
        (PolyX::from_coeffs(quo), rem)
    }

    /// Exact division; panics when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &PolyX) -> PolyX {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (gcd(0, p) = monic p; gcd(0, 0) = 0).
    pub fn gcd(&self, other: &PolyX) -> PolyX {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> PolyX {
        match self.leading() {
            None => PolyX::zero(),
            Some(l) => self.scale(&l.clone().recip()),
        }
    }

    pub fn pow(&self, e: u32) -> PolyX {
        let mut out = PolyX::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for PolyX {
    /// Descending powers: `x^2 - 1`, `3/2*x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(coeffs: &[i64]) -> PolyX {
        PolyX::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 1]); // x - 1
        let b = p(&[1, 1]); // x + 1
        assert_eq!(a.mul(&b), p(&[-1, 0, 1])); // x² - 1
        assert_eq!(a.add(&b), p(&[0, 2]));
        assert_eq!(a.mul(&b).derivative(), p(&[0, 2]));
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[-1, 0, 1]); // (x-1)(x+1)
        let b = p(&[-1, 1]); // x - 1
        assert_eq!(a.gcd(&b), b.monic());
        assert_eq!(a.div_exact(&b), p(&[1, 1]));
        let (q, r) = p(&[1, 0, 1]).div_rem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert_eq!(r, p(&[2]));
        assert_eq!(
            p(&[2, 4]).monic(),
            p(&[1, 2]).scale(&BigRational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(p(&[1, -1]).to_string(), "-x + 1");
        assert_eq!(PolyX::zero().to_string(), "0");
        assert_eq!(
            PolyX::from_coeffs(vec![BigRational::new(3.into(), 2.into())]).to_string(),
            "3/2"
        );
    }
}
