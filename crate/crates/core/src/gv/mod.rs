//! One-form calculus in the coordinates (x, F) and Godbillon-Vey sequences
//! for the deformation η₀ = dF + εφ dx.
//!
//! The sequence construction is the derivative ladder η_k = ε ∂_F^k φ dx:
//! every GV equation residual reduces to the canonical zero because
//! dη_k = ε ∂_F^{k+1}φ dF∧dx = η₀ ∧ η_{k+1} and all η_k with k ≥ 1 are
//! dx-proportional, so their pairwise wedges vanish.

mod casale;
mod polyx;
mod ratf;

pub use casale::{casale_verify, CasaleCase, CasaleRecord};
pub use polyx::PolyX;
pub use ratf::{FPoly, RatF};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GvError {
    #[error("{0}")]
    Parse(String),
    #[error("denominator depends on {0}; only x-dependent denominators are allowed")]
    BadDenominator(String),
    #[error("unknown variable `{0}` (allowed: x, F)")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("max too small: the sequence needs {needed} forms, got max = {max}")]
    MaxTooSmall { needed: usize, max: usize },
    #[error("the Riccati system requires deg_F phi = 2, got {0}")]
    WrongDegree(u32),
}

/// A one-form A dx + B dF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    pub dx: RatF,
    pub df: RatF,
}

impl OneForm {
    pub fn zero() -> Self {
        OneForm {
            dx: RatF::zero(),
            df: RatF::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dx.is_zero() && self.df.is_zero()
    }

    /// d of a function: f_x dx + f_F dF.
    pub fn differential_of(f: &RatF) -> OneForm {
        OneForm {
            dx: f.d_dx(),
            df: f.d_df(),
        }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        OneForm {
            dx: self.dx.sub(&other.dx),
            df: self.df.sub(&other.df),
        }
    }

    pub fn scale(&self, q: &BigRational) -> OneForm {
        OneForm {
            dx: self.dx.scale(q),
            df: self.df.scale(q),
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.dx.is_zero(), self.df.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "({}) dx", self.dx),
            (true, false) => write!(f, "({}) dF", self.df),
            (false, false) => write!(f, "({}) dx + ({}) dF", self.dx, self.df),
        }
    }
}

/// A two-form S·dF∧dx.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoForm {
    pub s: RatF,
}

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm { s: RatF::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero()
    }

    pub fn sub(&self, other: &TwoForm) -> TwoForm {
        TwoForm {
            s: self.s.sub(&other.s),
        }
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({}) dF^dx", self.s)
        }
    }
}

/// Exterior derivative of A dx + B dF: (∂_F A − ∂_x B) dF∧dx.
pub fn exterior_d(w: &OneForm) -> TwoForm {
    TwoForm {
        s: w.dx.d_df().sub(&w.df.d_dx()),
    }
}

/// Wedge α∧β = (B_α A_β − A_α B_β) dF∧dx.
pub fn wedge(a: &OneForm, b: &OneForm) -> TwoForm {
    TwoForm {
        s: a.df.mul(&b.dx).sub(&a.dx.mul(&b.df)),
    }
}

/// Integrability classification by the constructed length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// η₀ is closed.
    Closed,
    /// Length 2: Liouvillian first integral.
    Liouvillian,
    /// Length 3: first integral of Riccati type.
    Riccati,
    /// Longer finite length.
    Length(usize),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Closed => write!(f, "closed"),
            Classification::Liouvillian => write!(f, "Liouvillian"),
            Classification::Riccati => write!(f, "Riccati"),
            Classification::Length(n) => write!(f, "length-{n}"),
        }
    }
}

pub fn classify(length: usize) -> Classification {
    match length {
        0 | 1 => Classification::Closed,
        2 => Classification::Liouvillian,
        3 => Classification::Riccati,
        n => Classification::Length(n),
    }
}

/// A verified Godbillon-Vey sequence η₀, …, η_L (the last stored form is
/// the first zero one). Length ℓ means η_j = 0 for all j ≥ ℓ.
#[derive(Debug, Clone)]
pub struct GvSequence {
    pub phi: RatF,
    pub forms: Vec<OneForm>,
    pub length: usize,
    pub classification: Classification,
    /// Residual of GV equation n, for n = 0..forms.len(); all canonically
    /// zero by construction.
    pub residuals: Vec<TwoForm>,
    pub note: Option<String>,
}

impl GvSequence {
    pub fn to_json(&self) -> Value {
        json!({
            "phi": self.phi.to_string(),
            "deg_F": self.phi.deg_f(),
            "forms": self.forms.iter().enumerate().map(|(k, w)| json!({
                "index": k,
                "form": w.to_string(),
            })).collect::<Vec<_>>(),
            "length": self.length,
            "classification": self.classification.to_string(),
            "residuals": self.residuals.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "residuals_all_zero": self.residuals.iter().all(|r| r.is_zero()),
            "note": self.note,
        })
    }
}

/// η₀ = dF + εφ dx.
pub fn eta0(phi: &RatF) -> OneForm {
    OneForm {
        dx: RatF::var_eps().mul(phi),
        df: RatF::one(),
    }
}

/// Constructs the sequence η₀ = dF + εφ dx, η_k = ε ∂_F^k φ dx, stores
/// through the first identically zero form and verifies every GV equation.
pub fn gv_sequence(phi: &RatF, max: usize) -> Result<GvSequence, GvError> {
    let needed = if phi.is_zero() {
        2
    } else {
        phi.deg_f() as usize + 2
    };
    if needed > max {
        return Err(GvError::MaxTooSmall { needed, max });
    }

    let mut forms = vec![eta0(phi)];
    let mut derivative = phi.clone();
    loop {
        derivative = derivative.d_df();
        let form = OneForm {
            dx: RatF::var_eps().mul(&derivative),
            df: RatF::zero(),
        };
        let last = form.is_zero();
        forms.push(form);
        if last {
            break;
        }
    }

    let residuals = verify_gv(&forms);
    debug_assert!(residuals.iter().all(|r| r.is_zero()));
    let length = forms.len() - 1;
    let note = if phi.is_zero() {
        Some("eta0 = dF is closed; the sequence is trivial from eta1 on".to_string())
    } else {
        None
    };
    Ok(GvSequence {
        phi: phi.clone(),
        length,
        classification: classify(length),
        residuals,
        forms,
        note,
    })
}

/// Residuals of the GV equations
/// dη_n − η₀∧η_{n+1} − Σ_{k=1}^{n} C(n,k) η_k∧η_{n−k+1}
/// for n = 0..=forms.len()-1, reading η_j = 0 beyond the stored range.
pub fn verify_gv(forms: &[OneForm]) -> Vec<TwoForm> {
    let get = |j: usize| -> OneForm { forms.get(j).cloned().unwrap_or_else(OneForm::zero) };
    (0..forms.len())
        .map(|n| {
            let mut rhs = wedge(&get(0), &get(n + 1));
            for k in 1..=n {
                let coeff = BigRational::from(binomial(n, k));
                let term = wedge(&get(k), &get(n - k + 1));
                rhs = TwoForm {
                    s: rhs.s.add(&term.s.scale(&coeff)),
                };
            }
            exterior_d(&get(n)).sub(&rhs)
        })
        .collect()
}

/// All pairwise wedges η_k∧η_l for k, l ≥ 1 (zero whenever the tail forms
/// are dx-proportional).
pub fn tail_wedges_vanish(forms: &[OneForm]) -> bool {
    for (i, a) in forms.iter().enumerate().skip(1) {
        for b in forms.iter().skip(i) {
            if !wedge(a, b).is_zero() {
                return false;
            }
        }
    }
    true
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::from(1);
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Length of the constructed sequence: deg_F φ + 1 (φ = 0 gives 1, with
/// η₀ closed). Minimality over all sequences is not claimed.
pub fn gv_length(phi: &RatF) -> (usize, Option<String>) {
    if phi.is_zero() {
        (1, Some("eta0 = dF is closed".to_string()))
    } else {
        (phi.deg_f() as usize + 1, None)
    }
}

/// The three-equation first-integral system for a degree-2 deformation,
/// emitted with the concrete forms substituted. It is emitted, not solved.
#[derive(Debug, Clone)]
pub struct RiccatiSystem {
    pub eta0: OneForm,
    pub eta1: OneForm,
    pub eta2: OneForm,
    pub equations: Vec<String>,
}

impl RiccatiSystem {
    pub fn to_json(&self) -> Value {
        json!({
            "eta0": self.eta0.to_string(),
            "eta1": self.eta1.to_string(),
            "eta2": self.eta2.to_string(),
            "equations": self.equations,
            "note": "system emitted, not solved",
        })
    }
}

pub fn riccati_system(phi: &RatF) -> Result<RiccatiSystem, GvError> {
    if phi.deg_f() != 2 || phi.is_zero() {
        return Err(GvError::WrongDegree(phi.deg_f()));
    }
    let seq = gv_sequence(phi, 4)?;
    let eta0 = seq.forms[0].clone();
    let eta1 = seq.forms[1].clone();
    let eta2 = seq.forms[2].clone();
    let equations = vec![
        format!("dH = G1*eta0, eta0 = {eta0}"),
        format!("dG1 = G1*(eta1 + (2/G2)*eta0), eta1 = {eta1}"),
        format!("dG2 = (G2^2/2)*eta2 + G1*eta1 + eta0, eta2 = {eta2}"),
    ];
    Ok(RiccatiSystem {
        eta0,
        eta1,
        eta2,
        equations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phi(text: &str) -> RatF {
        RatF::parse_phi(text).unwrap()
    }

    #[test]
    fn exterior_d_examples() {
        // η₀ with φ = F/(x−1): dη₀ = ε/(x−1) dF∧dx
        let w = eta0(&phi("F/(x-1)"));
        let d = exterior_d(&w);
        assert_eq!(d.s, RatF::var_eps().mul(&phi("1/(x-1)")));

        // dF is closed
        let df = OneForm {
            dx: RatF::zero(),
            df: RatF::one(),
        };
        assert!(exterior_d(&df).is_zero());

        // f(x) dx is closed
        let fdx = OneForm {
            dx: phi("x^2/(x-1)"),
            df: RatF::zero(),
        };
        assert!(exterior_d(&fdx).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let a = eta0(&phi("F/(x-1)"));
        assert!(wedge(&a, &a).is_zero());

        // dF ∧ (ε φ_F dx) = ε φ_F dF∧dx
        let df = OneForm {
            dx: RatF::zero(),
            df: RatF::one(),
        };
        let phi_f = phi("F/(x-1)").d_df();
        let b = OneForm {
            dx: RatF::var_eps().mul(&phi_f),
            df: RatF::zero(),
        };
        assert_eq!(wedge(&df, &b).s, RatF::var_eps().mul(&phi_f));

        // (a dx) ∧ (b dx) = 0
        let adx = OneForm {
            dx: phi("1/(x-1)"),
            df: RatF::zero(),
        };
        let bdx = OneForm {
            dx: phi("x^3"),
            df: RatF::zero(),
        };
        assert!(wedge(&adx, &bdx).is_zero());
    }

    #[test]
    fn liouvillian_case_length_two() {
        let seq = gv_sequence(&phi("F/(x-1)"), 12).unwrap();
        assert_eq!(seq.length, 2);
        assert_eq!(seq.classification, Classification::Liouvillian);
        assert_eq!(seq.forms.len(), 3);
        assert!(seq.forms[2].is_zero());
        // η₁ = ε dx/(x−1)
        assert_eq!(
            seq.forms[1],
            OneForm {
                dx: RatF::var_eps().mul(&phi("1/(x-1)")),
                df: RatF::zero(),
            }
        );
        assert!(seq.residuals.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn riccati_case_length_three() {
        let seq = gv_sequence(&phi("F/(x-1) + F^2/(x+1)"), 12).unwrap();
        assert_eq!(seq.length, 3);
        assert_eq!(seq.classification, Classification::Riccati);
        // η₂ = 2ε dx/(x+1), η₃ = 0
        assert_eq!(
            seq.forms[2],
            OneForm {
                dx: RatF::var_eps().mul(&phi("2/(x+1)")),
                df: RatF::zero(),
            }
        );
        assert!(seq.forms[3].is_zero());
    }

    #[test]
    fn length_four_case() {
        let seq = gv_sequence(&phi("F^2/(x-1) + F^3/(x+1)"), 12).unwrap();
        assert_eq!(seq.length, 4);
        assert_eq!(seq.classification, Classification::Length(4));
        assert!(tail_wedges_vanish(&seq.forms));
    }

    #[test]
    fn zero_phi_is_closed() {
        let seq = gv_sequence(&RatF::zero(), 12).unwrap();
        assert_eq!(seq.length, 1);
        assert_eq!(seq.classification, Classification::Closed);
        assert!(seq.note.is_some());
        assert_eq!(gv_length(&RatF::zero()).0, 1);
    }

    #[test]
    fn gv_length_examples() {
        assert_eq!(gv_length(&phi("F/(x-1)")).0, 2);
        assert_eq!(gv_length(&phi("F/(x-1) + F^2/(x+1)")).0, 3);
        assert_eq!(gv_length(&phi("F^2/(x-1) + F^3/(x+1)")).0, 4);
    }

    #[test]
    fn max_too_small() {
        assert!(matches!(
            gv_sequence(&phi("F^3/(x-1)"), 4),
            Err(GvError::MaxTooSmall { needed: 5, max: 4 })
        ));
    }

    #[test]
    fn tampered_sequence_fails() {
        let seq = gv_sequence(&phi("F/(x-1)"), 12).unwrap();

        // η₁ scaled by 2 → nonzero residual at n = 0
        let mut forms = seq.forms.clone();
        forms[1] = forms[1].scale(&BigRational::from(BigInt::from(2)));
        let residuals = verify_gv(&forms);
        assert!(!residuals[0].is_zero());

        // all-zero tail with dη₀ ≠ 0 → nonzero residual
        let forms = vec![seq.forms[0].clone(), OneForm::zero()];
        let residuals = verify_gv(&forms);
        assert!(!residuals[0].is_zero());
    }

    #[test]
    fn riccati_system_emission() {
        let sys = riccati_system(&phi("F/(x-1) + F^2/(x+1)")).unwrap();
        assert_eq!(sys.eta2.dx, RatF::var_eps().mul(&phi("2/(x+1)")));
        assert_eq!(sys.equations.len(), 3);
        assert!(sys.equations[2].contains("(G2^2/2)*eta2"));

        assert!(matches!(
            riccati_system(&phi("F/(x-1)")),
            Err(GvError::WrongDegree(1))
        ));
        assert!(matches!(
            riccati_system(&phi("F^3/(x-1)")),
            Err(GvError::WrongDegree(3))
        ));
    }

    /// Derivative ladder: η_{k+1} = ε ∂_F(η_k.dx / ε) dx for k ≥ 1.
    #[test]
    fn derivative_ladder() {
        let seq = gv_sequence(&phi("F^3/(x-1) + F^2/(x+1) + F"), 12).unwrap();
        for k in 1..seq.forms.len() - 1 {
            let lifted = seq.forms[k].dx.d_df();
            assert_eq!(seq.forms[k + 1].dx, lifted, "ladder step {k}");
        }
    }

    fn arb_phi() -> impl Strategy<Value = RatF> {
        // sums of c*F^a/(x±1)^b with small parts
        prop::collection::vec((-3i64..=3, 0u32..=3, 0u32..=2, prop::bool::ANY), 1..4).prop_map(
            |terms| {
                let mut out = RatF::zero();
                for (c, fa, xb, plus) in terms {
                    let num = RatF::from_rational(BigRational::from(BigInt::from(c)))
                        .mul(&RatF::var_f().pow_u(fa));
                    let den = if plus { "x+1" } else { "x-1" };
                    let d = RatF::parse_phi(&format!("({den})^{xb}")).unwrap();
                    out = out.add(&num.div(&d).unwrap());
                }
                out
            },
        )
    }

    impl RatF {
        fn pow_u(&self, e: u32) -> RatF {
            let mut out = RatF::one();
            for _ in 0..e {
                out = out.mul(self);
            }
            out
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// d∘d = 0 on functions.
        #[test]
        fn d_squared_zero(f in arb_phi()) {
            let df = OneForm::differential_of(&f);
            prop_assert!(exterior_d(&df).is_zero());
        }

        /// Wedge antisymmetry.
        #[test]
        fn wedge_antisymmetry(f in arb_phi(), g in arb_phi()) {
            let a = OneForm { dx: f.clone(), df: g.clone() };
            let b = OneForm { dx: g, df: f };
            let ab = wedge(&a, &b);
            let ba = wedge(&b, &a);
            prop_assert!(ab.s.add(&ba.s).is_zero());
        }

        /// For every φ with deg_F φ = n, the sequence has exactly n+1
        /// nonzero forms, zero residuals, and a dx-proportional tail.
        #[test]
        fn sequence_shape(f in arb_phi()) {
            prop_assume!(!f.is_zero());
            let n = f.deg_f() as usize;
            let seq = gv_sequence(&f, n + 4).unwrap();
            prop_assert_eq!(seq.length, n + 1);
            let nonzero = seq.forms.iter().filter(|w| !w.is_zero()).count();
            prop_assert_eq!(nonzero, n + 1);
            prop_assert!(seq.residuals.iter().all(|r| r.is_zero()));
            prop_assert!(tail_wedges_vanish(&seq.forms));
        }
    }
}
