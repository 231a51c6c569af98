//! First-integral verification for the two Liouvillian deformations, in a
//! formal differential extension of ℚ(x)[F, ε].
//!
//! The extension adjoins a unit u (standing for the ε-th power of the
//! preserved linear factor, with du = ε·u·w(x) dx) and, for the second
//! case, a primitive P with a stated dP. Both first-integral identities
//! dH = G·η₀ and dG = G·η₁ then reduce to the canonical zero, with no
//! analytic input.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::{eta0, OneForm, RatF};

/// Element of the extension ring: Σ c_{a,b}(x, F, ε) · u^a · P^b.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtElem {
    terms: BTreeMap<(u32, u32), RatF>,
}

impl ExtElem {
    fn zero() -> Self {
        ExtElem::default()
    }

    fn single(u_pow: u32, p_pow: u32, c: RatF) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((u_pow, p_pow), c);
        }
        ExtElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &ExtElem) -> ExtElem {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let slot = out.terms.entry(*k).or_insert_with(RatF::zero);
            *slot = slot.add(c);
            if slot.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    fn sub(&self, other: &ExtElem) -> ExtElem {
        self.add(&other.neg())
    }

    fn neg(&self) -> ExtElem {
        ExtElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    fn mul_ratf(&self, f: &RatF) -> ExtElem {
        if f.is_zero() {
            return ExtElem::zero();
        }
        ExtElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul(f))).collect(),
        }
    }

    fn shift_u(&self, by: u32) -> ExtElem {
        ExtElem {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((*a + by, *b), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                let mut factors = vec![format!("({c})")];
                if *a == 1 {
                    factors.push("u".into());
                } else if *a > 1 {
                    factors.push(format!("u^{a}"));
                }
                if *b == 1 {
                    factors.push("P".into());
                } else if *b > 1 {
                    factors.push(format!("P^{b}"));
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One-form with extension-ring coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtOneForm {
    pub dx: ExtElem,
    pub df: ExtElem,
}

impl ExtOneForm {
    fn zero() -> Self {
        ExtOneForm {
            dx: ExtElem::zero(),
            df: ExtElem::zero(),
        }
    }

    fn add(&self, other: &ExtOneForm) -> ExtOneForm {
        ExtOneForm {
            dx: self.dx.add(&other.dx),
            df: self.df.add(&other.df),
        }
    }

    fn sub(&self, other: &ExtOneForm) -> ExtOneForm {
        ExtOneForm {
            dx: self.dx.sub(&other.dx),
            df: self.df.sub(&other.df),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dx.is_zero() && self.df.is_zero()
    }
}

impl fmt::Display for ExtOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.dx.is_zero(), self.df.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "({}) dx", self.dx),
            (true, false) => write!(f, "({}) dF", self.df),
            (false, false) => write!(f, "({}) dx + ({}) dF", self.dx, self.df),
        }
    }
}

/// The two shipped Liouvillian deformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasaleCase {
    /// φ = F/(x−1); G = u = (x−1)^ε and H = u·F.
    Liouville1,
    /// φ = 1/(x−1) + F/(x+1); G = u = (x+1)^ε and H = u·F + P with
    /// dP = ε·u·dx/(x−1).
    Liouville2,
}

impl CasaleCase {
    pub fn name(&self) -> &'static str {
        match self {
            CasaleCase::Liouville1 => "liouville1",
            CasaleCase::Liouville2 => "liouville2",
        }
    }
}

struct ExtensionRules {
    /// du = ε·u·w_u dx
    w_u: RatF,
    /// dP = ε·u·w_p dx (absent when the case has no primitive)
    w_p: Option<RatF>,
}

impl ExtensionRules {
    /// Differential with the adjunction rules applied.
    fn d(&self, e: &ExtElem) -> ExtOneForm {
        let eps = RatF::var_eps();
        let mut out = ExtOneForm::zero();
        for ((a, b), c) in &e.terms {
            // (c_x dx + c_F dF)·u^a·P^b
            out = out.add(&ExtOneForm {
                dx: ExtElem::single(*a, *b, c.d_dx()),
                df: ExtElem::single(*a, *b, c.d_df()),
            });
            // c·a·ε·w_u·u^a·P^b dx
            if *a > 0 {
                let coeff = c
                    .mul(&eps)
                    .mul(&self.w_u)
                    .scale(&num_rational::BigRational::from(num_bigint::BigInt::from(
                        *a as i64,
                    )));
                out = out.add(&ExtOneForm {
                    dx: ExtElem::single(*a, *b, coeff),
                    df: ExtElem::zero(),
                });
            }
            // c·b·ε·w_p·u^{a+1}·P^{b−1} dx
            if *b > 0 {
                let w_p = self.w_p.as_ref().expect("case with P carries a dP rule");
                let coeff = c.mul(&eps).mul(w_p).scale(&num_rational::BigRational::from(
                    num_bigint::BigInt::from(*b as i64),
                ));
                out = out.add(&ExtOneForm {
                    dx: ExtElem::single(*a + 1, *b - 1, coeff),
                    df: ExtElem::zero(),
                });
            }
        }
        out
    }
}

/// One verified identity: name, rendered residual, and whether it is the
/// canonical zero.
#[derive(Debug, Clone)]
pub struct CasaleRecord {
    pub case: &'static str,
    pub identities: Vec<(String, String, bool)>,
    pub all_zero: bool,
}

impl CasaleRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "identities": self.identities.iter().map(|(name, residual, zero)| json!({
                "identity": name,
                "residual": residual,
                "zero": zero,
            })).collect::<Vec<_>>(),
            "all_zero": self.all_zero,
        })
    }
}

/// Verifies dH − G·η₀ = 0 and G·η₁ − dG = 0 in the extension ring, plus
/// the sanity identity u·(du/u) − du = 0.
pub fn casale_verify(case: CasaleCase) -> CasaleRecord {
    let (phi, w_u, w_p) = match case {
        CasaleCase::Liouville1 => (
            RatF::parse_phi("F/(x-1)").unwrap(),
            RatF::parse_phi("1/(x-1)").unwrap(),
            None,
        ),
        CasaleCase::Liouville2 => (
            RatF::parse_phi("1/(x-1) + F/(x+1)").unwrap(),
            RatF::parse_phi("1/(x+1)").unwrap(),
            Some(RatF::parse_phi("1/(x-1)").unwrap()),
        ),
    };
    let rules = ExtensionRules {
        w_u: w_u.clone(),
        w_p: w_p.clone(),
    };

    let u = ExtElem::single(1, 0, RatF::one());
    let g = u.clone();
    let h = match case {
        CasaleCase::Liouville1 => ExtElem::single(1, 0, RatF::var_f()),
        CasaleCase::Liouville2 => {
            ExtElem::single(1, 0, RatF::var_f()).add(&ExtElem::single(0, 1, RatF::one()))
        }
    };

    let e0 = eta0(&phi);
    let eta1 = OneForm {
        dx: RatF::var_eps().mul(&phi.d_df()),
        df: RatF::zero(),
    };

    // dH − G·η₀
    let g_eta0 = ExtOneForm {
        dx: g.mul_ratf(&e0.dx),
        df: g.mul_ratf(&e0.df),
    };
    let r1 = rules.d(&h).sub(&g_eta0);

    // G·η₁ − dG (the divided form of η₁ = dG/G)
    let g_eta1 = ExtOneForm {
        dx: g.mul_ratf(&eta1.dx),
        df: g.mul_ratf(&eta1.df),
    };
    let r2 = g_eta1.sub(&rules.d(&g));

    // u·(du/u) − du, with du/u the stated one-form ε·w_u dx
    let du_over_u = ExtOneForm {
        dx: ExtElem::single(0, 0, RatF::var_eps().mul(&w_u)),
        df: ExtElem::zero(),
    };
    let r3 = ExtOneForm {
        dx: du_over_u.dx.shift_u(1),
        df: ExtElem::zero(),
    }
    .sub(&rules.d(&u));

    let identities = vec![
        ("dH - G*eta0".to_string(), r1.to_string(), r1.is_zero()),
        ("G*eta1 - dG".to_string(), r2.to_string(), r2.is_zero()),
        ("u*(du/u) - du".to_string(), r3.to_string(), r3.is_zero()),
    ];
    let all_zero = identities.iter().all(|(_, _, z)| *z);
    CasaleRecord {
        case: case.name(),
        identities,
        all_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn liouville1_identities_vanish() {
        let r = casale_verify(CasaleCase::Liouville1);
        assert!(r.all_zero, "{:?}", r.identities);
    }

    #[test]
    fn liouville2_identities_vanish() {
        let r = casale_verify(CasaleCase::Liouville2);
        assert!(r.all_zero, "{:?}", r.identities);
    }

    #[test]
    fn tampered_h_fails() {
        // With H = u·F but the second case's φ, dH ≠ G·η₀: the dP term is
        // missing, so the residual keeps an ε·u/(x−1) dx part.
        let phi = RatF::parse_phi("1/(x-1) + F/(x+1)").unwrap();
        let rules = ExtensionRules {
            w_u: RatF::parse_phi("1/(x+1)").unwrap(),
            w_p: None,
        };
        let h = ExtElem::single(1, 0, RatF::var_f());
        let g = ExtElem::single(1, 0, RatF::one());
        let e0 = eta0(&phi);
        let g_eta0 = ExtOneForm {
            dx: g.mul_ratf(&e0.dx),
            df: g.mul_ratf(&e0.df),
        };
        let r = rules.d(&h).sub(&g_eta0);
        assert!(!r.is_zero());
    }
}
