//! Truncated parabolic-germ arithmetic: z + Σ a_i z^i with ε-polynomial
//! coefficients, the commutator-level lemma, the abelian/non-solvable
//! dichotomy and the Poincaré representation of free-group words.
//!
//! A germ is tracked through order N in z and order M in ε; composition,
//! inversion and commutators are exact to those orders. "Identity" always
//! means identity to the truncation orders.

mod epspoly;

pub use epspoly::{EpsMono, EpsPoly};

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::freegroup::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("truncation order mismatch: ({0}, {1}) vs ({2}, {3})")]
    OrderMismatch(usize, u32, usize, u32),
    #[error("truncation too small: need z-order {needed}, have {have}")]
    TruncationTooSmall { needed: usize, have: usize },
    #[error("truncation exhausted after {achieved} of {budget} commutator steps")]
    TruncationExhausted { achieved: usize, budget: usize },
    #[error("no germ assigned to generator `{0}`")]
    UnassignedGenerator(String),
    #[error("operation undefined for the identity germ")]
    IdentityGerm,
    #[error("z-order must be at least 2, got {0}")]
    OrderTooSmall(usize),
}

/// Level of a parabolic germ: the least p with z-coefficient a_{p+1} ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Identity to the truncation order N.
    IdentityToOrder,
    At(usize),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::IdentityToOrder => write!(f, "identity-to-order-N"),
            Level::At(p) => write!(f, "{p}"),
        }
    }
}

/// A parabolic germ z + a_2 z² + … + a_N z^N with ε-polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    z_order: usize,
    eps_order: u32,
    /// coeffs[i] is the coefficient of z^{i+2}; length z_order - 1.
    coeffs: Vec<EpsPoly>,
}

impl Germ {
    pub fn identity(z_order: usize, eps_order: u32) -> Result<Germ, GermError> {
        if z_order < 2 {
            return Err(GermError::OrderTooSmall(z_order));
        }
        Ok(Germ {
            z_order,
            eps_order,
            coeffs: vec![EpsPoly::zero(); z_order - 1],
        })
    }

    /// Builds from (power, coefficient) pairs; powers must lie in 2..=N.
    pub fn from_terms(
        z_order: usize,
        eps_order: u32,
        terms: impl IntoIterator<Item = (usize, EpsPoly)>,
    ) -> Result<Germ, GermError> {
        let mut g = Germ::identity(z_order, eps_order)?;
        for (k, c) in terms {
            if k < 2 || k > z_order {
                return Err(GermError::TruncationTooSmall {
                    needed: k,
                    have: z_order,
                });
            }
            g.coeffs[k - 2] = c.truncate_eps(eps_order);
        }
        Ok(g)
    }

    pub fn z_order(&self) -> usize {
        self.z_order
    }

    pub fn eps_order(&self) -> u32 {
        self.eps_order
    }

    /// Coefficient of z^k (2 ≤ k ≤ N).
    pub fn coeff(&self, k: usize) -> &EpsPoly {
        &self.coeffs[k - 2]
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn level(&self) -> Level {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Level::At(i + 1),
            None => Level::IdentityToOrder,
        }
    }

    /// (level, leading coefficient) for a non-identity germ.
    pub fn leading(&self) -> Option<(usize, &EpsPoly)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| (i + 1, &self.coeffs[i]))
    }

    fn check_orders(&self, other: &Germ) -> Result<(), GermError> {
        if self.z_order != other.z_order || self.eps_order != other.eps_order {
            return Err(GermError::OrderMismatch(
                self.z_order,
                self.eps_order,
                other.z_order,
                other.eps_order,
            ));
        }
        Ok(())
    }

    /// Dense z-polynomial 0 + 1·z + a_2 z² + …, index = power.
    fn poly(&self) -> Vec<EpsPoly> {
        let mut p = vec![EpsPoly::zero(); self.z_order + 1];
        p[1] = EpsPoly::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i + 2] = c.clone();
        }
        p
    }

    fn from_poly(z_order: usize, eps_order: u32, p: &[EpsPoly]) -> Germ {
        debug_assert!(p[0].is_zero());
        debug_assert_eq!(p[1], EpsPoly::one());
        Germ {
            z_order,
            eps_order,
            coeffs: (2..=z_order)
                .map(|i| p.get(i).cloned().unwrap_or_default())
                .collect(),
        }
    }

    /// Composition (f ∘ g)(z) = f(g(z)), truncated to the shared orders.
    pub fn compose(&self, g: &Germ) -> Result<Germ, GermError> {
        self.check_orders(g)?;
        let n = self.z_order;
        let cap = self.eps_order;
        let gp = g.poly();
        let mut acc = gp.clone();
        let mut gpow = gp.clone();
        for j in 2..=n {
            gpow = poly_mul(&gpow, &gp, n, cap);
            let a_j = &self.coeffs[j - 2];
            if a_j.is_zero() {
                continue;
            }
            for (d, c) in gpow.iter().enumerate() {
                if !c.is_zero() {
                    acc[d] = acc[d].add(&a_j.mul(c, Some(cap)));
                }
            }
        }
        Ok(Germ::from_poly(n, cap, &acc))
    }

    /// Compositional inverse: the germ h with (self ∘ h) = id to order N.
    pub fn invert(&self) -> Germ {
        let n = self.z_order;
        let cap = self.eps_order;
        let mut b = vec![EpsPoly::zero(); n + 1];
        b[1] = EpsPoly::one();
        for i in 2..=n {
            // coefficient of z^i of Σ_{j≥2} a_j h(z)^j, using b[<i] only
            let mut hpow = b[..=i].to_vec();
            let mut s = EpsPoly::zero();
            for j in 2..=i {
                hpow = poly_mul(&hpow, &b[..=i], i, cap);
                let a_j = &self.coeffs[j - 2];
                if !a_j.is_zero() && !hpow[i].is_zero() {
                    s = s.add(&a_j.mul(&hpow[i], Some(cap)));
                }
            }
            b[i] = s.neg();
        }
        Germ::from_poly(n, cap, &b)
    }

    /// Group commutator f ∘ g ∘ f⁻¹ ∘ g⁻¹.
    pub fn commutator(&self, g: &Germ) -> Result<Germ, GermError> {
        self.check_orders(g)?;
        self.compose(g)?
            .compose(&self.invert())?
            .compose(&g.invert())
    }
}

fn poly_mul(p: &[EpsPoly], q: &[EpsPoly], n: usize, cap: u32) -> Vec<EpsPoly> {
    let mut out = vec![EpsPoly::zero(); n + 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() || i > n {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if i + j > n {
                break;
            }
            if !b.is_zero() {
                out[i + j] = out[i + j].add(&a.mul(b, Some(cap)));
            }
        }
    }
    out
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = i + 2;
            if c.is_monomial() {
                let s = c.to_string();
                if let Some(rest) = s.strip_prefix('-') {
                    write!(f, " - {rest}*z^{k}")?;
                } else {
                    write!(f, " + {s}*z^{k}")?;
                }
            } else {
                write!(f, " + ({c})*z^{k}")?;
            }
        }
        Ok(())
    }
}

/// Outcome of checking the commutator-level lemma on a pair: the leading
/// term of [f, g] must be a·b·(p−q)·z^{p+q+1}, and everything below must
/// cancel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    pub level_f: usize,
    pub level_g: usize,
    pub predicted: EpsPoly,
    pub computed: EpsPoly,
    pub commutator_level: Level,
    pub lower_terms_vanish: bool,
    pub matches: bool,
}

impl LevelCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "level_f": self.level_f,
            "level_g": self.level_g,
            "predicted_leading": self.predicted.to_string(),
            "computed_leading": self.computed.to_string(),
            "commutator_level": self.commutator_level.to_string(),
            "lower_terms_vanish": self.lower_terms_vanish,
            "matches": self.matches,
        })
    }
}

/// Verifies the level lemma on a pair of non-identity germs.
pub fn commutator_level_check(f: &Germ, g: &Germ) -> Result<LevelCheck, GermError> {
    let (p, a) = f.leading().ok_or(GermError::IdentityGerm)?;
    let (q, b) = g.leading().ok_or(GermError::IdentityGerm)?;
    let needed = p + q + 1;
    if f.z_order() < needed {
        return Err(GermError::TruncationTooSmall {
            needed,
            have: f.z_order(),
        });
    }
    let a = a.clone();
    let b = b.clone();
    let c = f.commutator(g)?;
    let predicted =
        a.mul(&b, Some(f.eps_order()))
            .scale(&BigRational::from(num_bigint::BigInt::from(
                p as i64 - q as i64,
            )));
    let computed = c.coeff(needed).clone();
    let lower_terms_vanish = (2..needed).all(|k| c.coeff(k).is_zero());
    Ok(LevelCheck {
        level_f: p,
        level_g: q,
        matches: predicted == computed && lower_terms_vanish,
        commutator_level: c.level(),
        predicted,
        computed,
        lower_terms_vanish,
    })
}

/// One step of a non-solvability witness chain: a nested commutator, its
/// level, and its leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub expr: String,
    pub level: usize,
    pub leading: EpsPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy {
    Abelian,
    /// A chain of nested commutators, each non-identity, with strictly
    /// increasing levels: a non-solvability witness at the truncation.
    NonAbelian {
        chain: Vec<WitnessStep>,
    },
}

impl Dichotomy {
    pub fn to_json(&self) -> Value {
        match self {
            Dichotomy::Abelian => json!({"verdict": "abelian"}),
            Dichotomy::NonAbelian { chain } => json!({
                "verdict": "non-abelian",
                "non_solvability_witness": chain.iter().map(|s| json!({
                    "commutator": s.expr,
                    "level": s.level,
                    "leading_coefficient": s.leading.to_string(),
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

/// The abelian / non-solvable dichotomy for a finitely generated group of
/// parabolic germs, decided at the truncation: either all pairwise
/// commutators vanish to order N, or a chain of `budget` nested commutators
/// with strictly increasing levels witnesses non-solvability.
pub fn group_dichotomy(gens: &[(String, Germ)], budget: usize) -> Result<Dichotomy, GermError> {
    let mut first_pair: Option<(usize, usize, Germ)> = None;
    'outer: for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            gens[i].1.check_orders(&gens[j].1)?;
            let c = gens[i].1.commutator(&gens[j].1)?;
            if !c.is_identity() {
                first_pair = Some((i, j, c));
                break 'outer;
            }
        }
    }
    let Some((i, j, h0)) = first_pair else {
        return Ok(Dichotomy::Abelian);
    };

    let mut chain = Vec::with_capacity(budget);
    let mut current = h0;
    let mut expr = format!("[{},{}]", gens[i].0, gens[j].0);
    loop {
        let Some((level, leading)) = current.leading() else {
            unreachable!("chain germs are non-identity");
        };
        chain.push(WitnessStep {
            expr: expr.clone(),
            level,
            leading: leading.clone(),
        });
        if chain.len() == budget {
            return Ok(Dichotomy::NonAbelian { chain });
        }
        // Extend: first partner giving a non-identity commutator of higher
        // level. The lemma makes any non-identity extension strictly deeper.
        let prev_level = level;
        let mut extended = false;
        for (name, g) in gens {
            let c = current.commutator(g)?;
            if c.is_identity() {
                continue;
            }
            if let Some((lv, _)) = c.leading() {
                if lv > prev_level {
                    expr = format!("[{expr},{name}]");
                    current = c;
                    extended = true;
                    break;
                }
            }
        }
        if !extended {
            return Err(GermError::TruncationExhausted {
                achieved: chain.len(),
                budget,
            });
        }
    }
}

/// Assignment of germs to free-group generators, the representation the
/// holonomy of a deformation induces.
#[derive(Debug, Clone)]
pub struct GermAssignment {
    z_order: usize,
    eps_order: u32,
    map: BTreeMap<String, Germ>,
}

impl GermAssignment {
    pub fn new(
        z_order: usize,
        eps_order: u32,
        map: impl IntoIterator<Item = (String, Germ)>,
    ) -> Result<GermAssignment, GermError> {
        let probe = Germ::identity(z_order, eps_order)?;
        let map: BTreeMap<String, Germ> = map.into_iter().collect();
        for g in map.values() {
            probe.check_orders(g)?;
        }
        Ok(GermAssignment {
            z_order,
            eps_order,
            map,
        })
    }

    /// The display assignment for vanishing-cycle generators: names
    /// alternate between z + eps·u·z² and z + eps·u·z³, sharing the single
    /// formal unit u that stands for the (nonzero) cycle integrals.
    pub fn standard_vanishing_cycles(
        names: &[&str],
        z_order: usize,
        eps_order: u32,
    ) -> Result<GermAssignment, GermError> {
        let eps_u = EpsPoly::eps().mul(&EpsPoly::unit("u"), None);
        let map: Result<Vec<(String, Germ)>, GermError> = names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let power = 2 + (i % 2);
                Ok((
                    name.to_string(),
                    Germ::from_terms(z_order, eps_order, [(power, eps_u.clone())])?,
                ))
            })
            .collect();
        GermAssignment::new(z_order, eps_order, map?)
    }

    pub fn z_order(&self) -> usize {
        self.z_order
    }

    pub fn eps_order(&self) -> u32 {
        self.eps_order
    }

    pub fn germs(&self) -> &BTreeMap<String, Germ> {
        &self.map
    }

    pub fn get(&self, name: &str) -> Option<&Germ> {
        self.map.get(name)
    }

    /// Image of a word under the homomorphism extending the assignment:
    /// letters compose left to right with the leftmost letter outermost,
    /// so that rep(uv) = rep(u) ∘ rep(v).
    pub fn poincare_rep(&self, w: &Word) -> Result<Germ, GermError> {
        let mut acc = Germ::identity(self.z_order, self.eps_order)?;
        for letter in w.letters() {
            let name = w.alphabet().name(letter.gen);
            let img = self
                .map
                .get(name)
                .ok_or_else(|| GermError::UnassignedGenerator(name.to_string()))?;
            let img = if letter.inverse {
                img.invert()
            } else {
                img.clone()
            };
            acc = acc.compose(&img)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{parse, Alphabet};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> EpsPoly {
        EpsPoly::from_rational(BigRational::new(n.into(), d.into()))
    }

    fn simple(n: usize, terms: &[(usize, i64)]) -> Germ {
        Germ::from_terms(
            n,
            4,
            terms.iter().map(|&(k, c)| (k, EpsPoly::from_integer(c))),
        )
        .unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Germ::identity(6, 4).unwrap();
        let g = simple(6, &[(2, 1), (4, 3)]);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&id).unwrap(), g);

        // (z+z²) ∘ (z+z²) = z + 2z² + 2z³ + z⁴
        let f = simple(6, &[(2, 1)]);
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff, simple(6, &[(2, 2), (3, 2), (4, 1)]));
    }

    #[test]
    fn compose_with_eps_coefficients() {
        // (z+εz²) ∘ (z−εz²) = z − 2ε²z³ + ε³z⁴
        let f = Germ::from_terms(4, 4, [(2, EpsPoly::parse("eps").unwrap())]).unwrap();
        let g = Germ::from_terms(4, 4, [(2, EpsPoly::parse("-eps").unwrap())]).unwrap();
        let c = f.compose(&g).unwrap();
        assert!(c.coeff(2).is_zero());
        assert_eq!(*c.coeff(3), EpsPoly::parse("-2*eps^2").unwrap());
        assert_eq!(*c.coeff(4), EpsPoly::parse("eps^3").unwrap());
        // and the ε-truncation at order 2 drops the z⁴ term
        let f2 = Germ::from_terms(4, 2, [(2, EpsPoly::parse("eps").unwrap())]).unwrap();
        let g2 = Germ::from_terms(4, 2, [(2, EpsPoly::parse("-eps").unwrap())]).unwrap();
        assert!(f2.compose(&g2).unwrap().coeff(4).is_zero());
    }

    #[test]
    fn invert_examples() {
        let id = Germ::identity(5, 4).unwrap();
        assert_eq!(id.invert(), id);

        // (z+z²)⁻¹ = z − z² + 2z³ − 5z⁴ + 14z⁵ …
        let f = simple(5, &[(2, 1)]);
        let inv = f.invert();
        assert_eq!(inv, simple(5, &[(2, -1), (3, 2), (4, -5), (5, 14)]));
        assert!(f.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&f).unwrap().is_identity());
        assert_eq!(inv.invert(), f);
    }

    #[test]
    fn level_examples() {
        assert_eq!(simple(6, &[(2, 1)]).level(), Level::At(1));
        assert_eq!(simple(6, &[(5, 3)]).level(), Level::At(4));
        assert_eq!(
            Germ::identity(6, 4).unwrap().level(),
            Level::IdentityToOrder
        );
    }

    #[test]
    fn commutator_matches_level_lemma() {
        // f = z+z² (p=1, a=1), g = z+z³ (q=2, b=1):
        // [f,g] = z − z⁴ + O(z⁵), ab(p−q) = −1.
        let f = simple(8, &[(2, 1)]);
        let g = simple(8, &[(3, 1)]);
        let c = f.commutator(&g).unwrap();
        assert!(c.coeff(2).is_zero() && c.coeff(3).is_zero());
        assert_eq!(*c.coeff(4), EpsPoly::from_integer(-1));

        let check = commutator_level_check(&f, &g).unwrap();
        assert!(check.matches);
        assert_eq!(check.predicted, EpsPoly::from_integer(-1));
        assert_eq!(check.commutator_level, Level::At(3));
    }

    #[test]
    fn same_level_commutator_is_deep_or_identity() {
        // same level: leading term at z-degree ≥ 2p+2 or identity
        let f = simple(8, &[(2, 1), (3, 1)]);
        let g = simple(8, &[(2, 1)]);
        let c = f.commutator(&g).unwrap();
        match c.level() {
            Level::IdentityToOrder => {}
            Level::At(lv) => assert!(lv + 1 >= 4),
        }
        // [f, id] = id
        let id = Germ::identity(8, 4).unwrap();
        assert!(f.commutator(&id).unwrap().is_identity());
    }

    #[test]
    fn truncation_too_small_detected() {
        let f = simple(4, &[(3, 1)]); // p = 2
        let g = simple(4, &[(4, 1)]); // q = 3, needs N ≥ 6
        assert!(matches!(
            commutator_level_check(&f, &g),
            Err(GermError::TruncationTooSmall { needed: 6, have: 4 })
        ));
    }

    #[test]
    fn dichotomy_abelian_cases() {
        // powers of one germ commute
        let f = simple(8, &[(2, 1)]);
        let f2 = f.compose(&f).unwrap();
        let gens = vec![("f".to_string(), f.clone()), ("f2".to_string(), f2)];
        assert_eq!(group_dichotomy(&gens, 3).unwrap(), Dichotomy::Abelian);
        // empty and singleton sets
        assert_eq!(group_dichotomy(&[], 3).unwrap(), Dichotomy::Abelian);
        assert_eq!(
            group_dichotomy(&[("f".to_string(), f)], 3).unwrap(),
            Dichotomy::Abelian
        );
    }

    #[test]
    fn dichotomy_witness_chain() {
        let gens = vec![
            ("f".to_string(), simple(12, &[(2, 1)])),
            ("g".to_string(), simple(12, &[(3, 1)])),
        ];
        match group_dichotomy(&gens, 3).unwrap() {
            Dichotomy::NonAbelian { chain } => {
                assert_eq!(chain.len(), 3);
                for w in chain.windows(2) {
                    assert!(w[1].level > w[0].level);
                }
                assert_eq!(chain[0].level, 3); // p+q = 1+2
            }
            Dichotomy::Abelian => panic!("expected a witness chain"),
        }
    }

    #[test]
    fn dichotomy_truncation_exhaustion() {
        let gens = vec![
            ("f".to_string(), simple(5, &[(2, 1)])),
            ("g".to_string(), simple(5, &[(3, 1)])),
        ];
        assert!(matches!(
            group_dichotomy(&gens, 4),
            Err(GermError::TruncationExhausted { .. })
        ));
    }

    #[test]
    fn poincare_rep_examples() {
        let ab = Alphabet::new(["d1", "d2"]).unwrap();
        let asgn = GermAssignment::standard_vanishing_cycles(&["d1", "d2"], 12, 4).unwrap();

        // e → id
        let e = parse("", &ab).unwrap();
        assert!(asgn.poincare_rep(&e).unwrap().is_identity());

        // d1 d1⁻¹ → id
        let w = parse("d1 d1^-1", &ab).unwrap();
        assert!(asgn.poincare_rep(&w).unwrap().is_identity());

        // [d1, d2] → z − ε²·u²·z⁴ + …, the Wronskian-shaped leading term
        let w = parse("[d1, d2]", &ab).unwrap();
        let img = asgn.poincare_rep(&w).unwrap();
        assert!(img.coeff(2).is_zero() && img.coeff(3).is_zero());
        assert_eq!(*img.coeff(4), EpsPoly::parse("-(eps^2*u^2)").unwrap());
    }

    #[test]
    fn poincare_unassigned_generator() {
        let ab = Alphabet::new(["d1", "x"]).unwrap();
        let asgn = GermAssignment::standard_vanishing_cycles(&["d1"], 8, 2).unwrap();
        let w = parse("x", &ab).unwrap();
        assert!(matches!(
            asgn.poincare_rep(&w),
            Err(GermError::UnassignedGenerator(name)) if name == "x"
        ));
    }

    #[test]
    fn display_forms() {
        let g = Germ::from_terms(
            5,
            4,
            [
                (2, EpsPoly::parse("eps*u").unwrap()),
                (3, q(-1, 2)),
                (4, EpsPoly::parse("1 - eps").unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(g.to_string(), "z + eps*u*z^2 - 1/2*z^3 + (1 - eps)*z^4");
    }

    fn arb_germ(n: usize) -> impl Strategy<Value = Germ> {
        prop::collection::vec(-3i64..=3, n - 1).prop_map(move |cs| {
            Germ::from_terms(
                n,
                4,
                cs.into_iter()
                    .enumerate()
                    .map(|(i, c)| (i + 2, EpsPoly::from_integer(c))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Group axioms to truncation.
        #[test]
        fn germ_group_axioms(f in arb_germ(7), g in arb_germ(7), h in arb_germ(7)) {
            let fg_h = f.compose(&g).unwrap().compose(&h).unwrap();
            let f_gh = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(fg_h, f_gh);
            prop_assert!(f.compose(&f.invert()).unwrap().is_identity());
            prop_assert!(f.invert().compose(&f).unwrap().is_identity());
            prop_assert_eq!(f.invert().invert(), f);
        }

        /// The Poincaré representation is a homomorphism.
        #[test]
        fn poincare_homomorphism(
            letters_u in prop::collection::vec((0usize..2, any::<bool>()), 0..6),
            letters_v in prop::collection::vec((0usize..2, any::<bool>()), 0..6),
        ) {
            let names = ["d1", "d2"];
            let alphabet = Alphabet::new(names).unwrap();
            let asgn = GermAssignment::standard_vanishing_cycles(&names, 8, 3).unwrap();
            let mk = |ls: &[(usize, bool)]| Word::from_letters(
                alphabet.clone(),
                ls.iter().map(|&(gen, inverse)| crate::freegroup::Letter { gen, inverse }),
            );
            let u = mk(&letters_u);
            let v = mk(&letters_v);
            let uv = u.multiply(&v).unwrap();
            let lhs = asgn.poincare_rep(&uv).unwrap();
            let rhs = asgn.poincare_rep(&u).unwrap().compose(&asgn.poincare_rep(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
