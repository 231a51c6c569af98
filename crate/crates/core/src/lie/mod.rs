//! Truncated free Lie algebra over ℚ with a Hall (Lyndon) basis.
//!
//! This module decides the graded questions the orbit computations reduce
//! to: lower-central degree of a word (via Magnus), leading Lie term of its
//! logarithm, Baker-Campbell-Hausdorff products, and exact linear algebra on
//! graded subspaces. All coefficients are exact rationals.

mod hall;
mod series;
pub mod subspace;

pub use hall::{witt_number, HallBasis, HallElem, HallError};
pub use series::{magnus, NcSeries};
pub use subspace::{ideal_closure, Echelon, GradedSubspace};

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freegroup::Word;

/// Default cap on the number of Hall basis elements; override per call (the
/// CLI wires `MOL_MAX_BASIS` through to this).
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// Default truncation class used by the front ends.
pub const DEFAULT_CLASS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Hall(#[from] HallError),
    #[error("log_leading is undefined for the identity word")]
    IdentityWord,
    #[error("word lies in lower-central degree beyond the truncation class {class}")]
    ExceedsClass { class: usize },
    #[error("component is not a Lie element: nonzero residual after Hall elimination")]
    NotLieElement,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// Homogeneous noncommutative polynomial with integer coefficients
/// (associative expansion of Lie monomials).
type NcPoly = BTreeMap<Box<[u8]>, BigInt>;

/// A memoized adjoint column: Hall coordinates of `[e, X_g]`.
type AdColumn = std::sync::Arc<Vec<(usize, BigInt)>>;

/// Lower-central-series degree of a word, decided by the Magnus expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcsDegree {
    /// The word is the identity; it lies in every L_j.
    Identity,
    Degree(usize),
    /// Magnus expansion is 1 through the truncation class.
    ExceedsClass,
}

/// Element of the truncated free Lie algebra in Hall-basis coordinates;
/// zero coefficients are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    rank: usize,
    class: usize,
    coords: BTreeMap<usize, BigRational>,
}

impl LieElement {
    pub fn zero(rank: usize, class: usize) -> Self {
        LieElement {
            rank,
            class,
            coords: BTreeMap::new(),
        }
    }

    pub fn from_coords(
        rank: usize,
        class: usize,
        coords: impl IntoIterator<Item = (usize, BigRational)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in coords {
            if !c.is_zero() {
                map.insert(i, c);
            }
        }
        LieElement {
            rank,
            class,
            coords: map,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn coords(&self) -> &BTreeMap<usize, BigRational> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.class, other.class);
        let mut coords = self.coords.clone();
        for (i, c) in &other.coords {
            let slot = coords.entry(*i).or_insert_with(BigRational::zero);
            *slot += c;
            if slot.is_zero() {
                coords.remove(i);
            }
        }
        LieElement {
            rank: self.rank,
            class: self.class,
            coords,
        }
    }

    pub fn scale(&self, factor: &BigRational) -> LieElement {
        if factor.is_zero() {
            return LieElement::zero(self.rank, self.class);
        }
        LieElement {
            rank: self.rank,
            class: self.class,
            coords: self.coords.iter().map(|(i, c)| (*i, c * factor)).collect(),
        }
    }

    pub fn negate(&self) -> LieElement {
        self.scale(&-BigRational::one())
    }

    /// Splits into homogeneous components, lowest degree first.
    pub fn homogeneous_components(
        &self,
        basis: &HallBasis,
    ) -> Vec<(usize, BTreeMap<usize, BigRational>)> {
        let mut by_degree: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for (i, c) in &self.coords {
            by_degree
                .entry(basis.degree_of(*i))
                .or_default()
                .insert(*i, c.clone());
        }
        by_degree.into_iter().collect()
    }

    pub fn min_degree(&self, basis: &HallBasis) -> Option<usize> {
        self.coords.keys().map(|&i| basis.degree_of(i)).min()
    }

    /// Renders coefficients against Hall bracket notation, e.g.
    /// `[d1,d2] - 1/2*[d1,[d1,d3]]`.
    pub fn display_with(&self, basis: &HallBasis, name: &dyn Fn(usize) -> String) -> String {
        if self.coords.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (pos, (i, c)) in self.coords.iter().enumerate() {
            let tree = basis.bracket_notation(*i, name);
            let mag = c.abs();
            let sign = c.is_negative();
            if pos == 0 {
                if sign {
                    out.push('-');
                }
            } else if sign {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mag.is_one() {
                let _ = write!(out, "{tree}");
            } else {
                let _ = write!(out, "{mag}*{tree}");
            }
        }
        out
    }
}

/// The truncated free Lie algebra: Hall basis plus memoized associative
/// expansions and adjoint columns. All methods are mathematically pure; the
/// internal mutexes only guard memo tables.
#[derive(Debug)]
pub struct LieAlgebra {
    basis: HallBasis,
    expansions: Mutex<HashMap<usize, std::sync::Arc<NcPoly>>>,
    ad_columns: Mutex<HashMap<(usize, usize), AdColumn>>,
}

impl LieAlgebra {
    pub fn new(rank: usize, class: usize, cap: usize) -> Result<Self, LieError> {
        Ok(LieAlgebra {
            basis: HallBasis::new(rank, class, cap)?,
            expansions: Mutex::new(HashMap::new()),
            ad_columns: Mutex::new(HashMap::new()),
        })
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn class(&self) -> usize {
        self.basis.class()
    }

    /// Associative expansion of a basis element (integer coefficients,
    /// leading word equal to the element's Lyndon word with coefficient 1).
    fn expansion(&self, index: usize) -> std::sync::Arc<NcPoly> {
        if let Some(p) = self.expansions.lock().unwrap().get(&index) {
            return p.clone();
        }
        let poly = match self.basis.elem(index).factorization {
            None => {
                let mut p = NcPoly::new();
                p.insert(self.basis.elem(index).word.clone(), BigInt::one());
                p
            }
            Some((l, r)) => {
                let pl = self.expansion(l);
                let pr = self.expansion(r);
                let mut p = nc_mul(&pl, &pr);
                for (w, c) in nc_mul(&pr, &pl) {
                    let slot = p.entry(w).or_insert_with(BigInt::zero);
                    *slot -= c;
                    if slot.is_zero() {
                        // removal handled below by retain
                    }
                }
                p.retain(|_, c| !c.is_zero());
                p
            }
        };
        let arc = std::sync::Arc::new(poly);
        self.expansions.lock().unwrap().insert(index, arc.clone());
        arc
    }

    /// Expresses a homogeneous rational word-polynomial in Hall coordinates.
    /// Fails with `NotLieElement` when a nonzero residual survives the
    /// triangular elimination (the Friedrichs test, in effect).
    pub fn lie_coords(
        &self,
        degree: usize,
        poly: &BTreeMap<Box<[u8]>, BigRational>,
    ) -> Result<BTreeMap<usize, BigRational>, LieError> {
        let mut rest: BTreeMap<Box<[u8]>, BigRational> = poly
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        let mut out = BTreeMap::new();
        for index in self.basis.degree_range(degree) {
            let word = &self.basis.elem(index).word;
            let Some(c) = rest.get(word as &[u8] as &[u8]).cloned() else {
                continue;
            };
            if c.is_zero() {
                continue;
            }
            let expansion = self.expansion(index);
            for (w, e) in expansion.iter() {
                let delta = &c * BigRational::from(e.clone());
                let slot = rest.entry(w.clone()).or_insert_with(BigRational::zero);
                *slot -= delta;
                if slot.is_zero() {
                    rest.remove(w);
                }
            }
            out.insert(index, c);
        }
        if rest.is_empty() {
            Ok(out)
        } else {
            Err(LieError::NotLieElement)
        }
    }

    /// The element as a noncommutative series (sum of expansions).
    pub fn element_to_series(&self, x: &LieElement) -> NcSeries {
        assert_eq!(x.rank, self.rank());
        assert_eq!(x.class, self.class());
        let mut s = NcSeries::zero(self.rank(), self.class());
        for (i, c) in &x.coords {
            let expansion = self.expansion(*i);
            for (w, e) in expansion.iter() {
                s.insert_term(w, c * BigRational::from(e.clone()));
            }
        }
        s
    }

    /// Lie bracket of two elements, truncated at the class.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let sx = self.element_to_series(x);
        let sy = self.element_to_series(y);
        let prod = sx.mul(&sy).sub(&sy.mul(&sx));
        self.series_to_element(&prod)
            .expect("bracket of Lie elements is a Lie element")
    }

    /// Converts a series that happens to be a Lie polynomial back to Hall
    /// coordinates, degree by degree.
    pub fn series_to_element(&self, s: &NcSeries) -> Result<LieElement, LieError> {
        let mut coords = BTreeMap::new();
        for d in 1..=self.class() {
            if s.degree_terms(d).is_empty() {
                continue;
            }
            coords.extend(self.lie_coords(d, s.degree_terms(d))?);
        }
        if !s.constant_term().is_zero() {
            return Err(LieError::NotLieElement);
        }
        Ok(LieElement::from_coords(self.rank(), self.class(), coords))
    }

    /// Memoized adjoint column: `[e, X_g]` in Hall coordinates of the next
    /// degree. Empty when the degree would exceed the class.
    pub fn ad_column(&self, index: usize, g: usize) -> AdColumn {
        if let Some(col) = self.ad_columns.lock().unwrap().get(&(index, g)) {
            return col.clone();
        }
        let degree = self.basis.degree_of(index);
        let col = if degree + 1 > self.class() {
            Vec::new()
        } else {
            let expansion = self.expansion(index);
            let mut poly: BTreeMap<Box<[u8]>, BigRational> = BTreeMap::new();
            for (w, c) in expansion.iter() {
                let mut right = w.to_vec();
                right.push(g as u8);
                let mut left = vec![g as u8];
                left.extend_from_slice(w);
                let rc = BigRational::from(c.clone());
                *poly
                    .entry(right.into_boxed_slice())
                    .or_insert_with(BigRational::zero) += &rc;
                *poly
                    .entry(left.into_boxed_slice())
                    .or_insert_with(BigRational::zero) -= &rc;
            }
            poly.retain(|_, c| !c.is_zero());
            let coords = self
                .lie_coords(degree + 1, &poly)
                .expect("bracket with generator is a Lie element");
            coords
                .into_iter()
                .map(|(i, c)| {
                    debug_assert!(c.is_integer());
                    (i, c.to_integer())
                })
                .collect()
        };
        let arc = std::sync::Arc::new(col);
        self.ad_columns
            .lock()
            .unwrap()
            .insert((index, g), arc.clone());
        arc
    }

    /// Leading graded term of log∘magnus, in Hall coordinates. The result is
    /// homogeneous of degree `lcs_degree(w)`.
    pub fn log_leading(&self, w: &Word) -> Result<LieElement, LieError> {
        if w.alphabet().rank() != self.rank() {
            return Err(LieError::RankMismatch {
                expected: self.rank(),
                got: w.alphabet().rank(),
            });
        }
        if w.is_identity() {
            return Err(LieError::IdentityWord);
        }
        let m = magnus(w, self.class());
        let l = m.log();
        let Some(d) = l.min_nonconstant_degree() else {
            return Err(LieError::ExceedsClass {
                class: self.class(),
            });
        };
        let coords = self.lie_coords(d, l.degree_terms(d))?;
        Ok(LieElement::from_coords(self.rank(), self.class(), coords))
    }

    /// Baker-Campbell-Hausdorff product: the Z with exp(Z) = exp(X)·exp(Y)
    /// in the truncated series algebra.
    pub fn bch(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let ex = self.element_to_series(x).exp();
        let ey = self.element_to_series(y).exp();
        let z = ex.mul(&ey).log();
        self.series_to_element(&z)
            .expect("BCH of Lie elements is a Lie element")
    }

    /// The degree-1 element of a single generator.
    pub fn generator_element(&self, g: usize) -> LieElement {
        let idx = self
            .basis
            .index_of_word(&[g as u8])
            .expect("generator in basis");
        LieElement::from_coords(self.rank(), self.class(), [(idx, BigRational::one())])
    }
}

fn nc_mul(a: &NcPoly, b: &NcPoly) -> NcPoly {
    let mut out = NcPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = Vec::with_capacity(wa.len() + wb.len());
            w.extend_from_slice(wa);
            w.extend_from_slice(wb);
            let slot = out.entry(w.into_boxed_slice()).or_insert_with(BigInt::zero);
            *slot += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Largest j ≤ class with w ∈ L_j: the minimal degree of a nonconstant term
/// of the Magnus expansion.
pub fn lcs_degree(w: &Word, class: usize) -> LcsDegree {
    if w.is_identity() {
        return LcsDegree::Identity;
    }
    match magnus(w, class).min_nonconstant_degree() {
        Some(d) => LcsDegree::Degree(d),
        None => LcsDegree::ExceedsClass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{parse, Alphabet, Word};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn algebra(rank: usize, class: usize) -> LieAlgebra {
        LieAlgebra::new(rank, class, DEFAULT_BASIS_CAP).unwrap()
    }

    fn ab2() -> Arc<Alphabet> {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn lcs_degree_examples() {
        let ab = ab2();
        assert_eq!(
            lcs_degree(&parse("a", &ab).unwrap(), 4),
            LcsDegree::Degree(1)
        );
        assert_eq!(
            lcs_degree(&parse("[a, b]", &ab).unwrap(), 4),
            LcsDegree::Degree(2)
        );
        assert_eq!(
            lcs_degree(&parse("[[a, b], a]", &ab).unwrap(), 4),
            LcsDegree::Degree(3)
        );
        assert_eq!(lcs_degree(&parse("", &ab).unwrap(), 4), LcsDegree::Identity);
        assert_eq!(
            lcs_degree(&parse("[[a, b], [a, [a, b]]]", &ab).unwrap(), 4),
            LcsDegree::ExceedsClass
        );
    }

    #[test]
    fn log_leading_examples() {
        let ab = ab2();
        let alg = algebra(2, 4);
        // a → A
        let x = alg.log_leading(&parse("a", &ab).unwrap()).unwrap();
        let a_idx = alg.basis().index_of_word(&[0]).unwrap();
        assert_eq!(
            x,
            LieElement::from_coords(2, 4, [(a_idx, BigRational::one())])
        );
        // [a,b] → Hall element [A,B] with coefficient 1
        let x = alg.log_leading(&parse("[a, b]", &ab).unwrap()).unwrap();
        let ab_idx = alg.basis().index_of_word(&[0, 1]).unwrap();
        assert_eq!(
            x,
            LieElement::from_coords(2, 4, [(ab_idx, BigRational::one())])
        );
        // ab → A + B (degree-1 homology class)
        let x = alg.log_leading(&parse("a b", &ab).unwrap()).unwrap();
        let b_idx = alg.basis().index_of_word(&[1]).unwrap();
        assert_eq!(
            x,
            LieElement::from_coords(
                2,
                4,
                [(a_idx, BigRational::one()), (b_idx, BigRational::one())]
            )
        );
        // identity errors
        assert_eq!(
            alg.log_leading(&parse("", &ab).unwrap()),
            Err(LieError::IdentityWord)
        );
    }

    #[test]
    fn bch_examples() {
        let alg = algebra(2, 2);
        let a = alg.generator_element(0);
        let b = alg.generator_element(1);
        let zero = LieElement::zero(2, 2);

        assert_eq!(alg.bch(&a, &zero), a);
        assert_eq!(alg.bch(&a, &a.negate()), zero);

        // bch(A, B) at class 2 = A + B + 1/2 [A,B]
        let z = alg.bch(&a, &b);
        let ab_idx = alg.basis().index_of_word(&[0, 1]).unwrap();
        let expected = a.add(&b).add(&LieElement::from_coords(
            2,
            2,
            [(ab_idx, BigRational::new(1.into(), 2.into()))],
        ));
        assert_eq!(z, expected);
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi() {
        let alg = algebra(2, 5);
        let a = alg.generator_element(0);
        let b = alg.generator_element(1);
        let ab = alg.bracket(&a, &b);
        assert_eq!(alg.bracket(&b, &a), ab.negate());
        // Jacobi on (a, b, [a,b])
        let c = ab.clone();
        let j = alg
            .bracket(&a, &alg.bracket(&b, &c))
            .add(&alg.bracket(&b, &alg.bracket(&c, &a)))
            .add(&alg.bracket(&c, &alg.bracket(&a, &b)));
        assert!(j.is_zero());
    }

    #[test]
    fn ad_column_matches_bracket() {
        let alg = algebra(3, 4);
        for idx in alg
            .basis()
            .degree_range(2)
            .chain(alg.basis().degree_range(3))
        {
            for g in 0..3usize {
                let e = LieElement::from_coords(3, 4, [(idx, BigRational::one())]);
                let expect = alg.bracket(&e, &alg.generator_element(g));
                let col = alg.ad_column(idx, g);
                let got = LieElement::from_coords(
                    3,
                    4,
                    col.iter().map(|(i, c)| (*i, BigRational::from(c.clone()))),
                );
                assert_eq!(got, expect);
            }
        }
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..rank, any::<bool>()), 0..max_len).prop_map(move |ls| {
            let names: Vec<String> = (0..rank).map(|i| format!("g{i}")).collect();
            let alphabet = Alphabet::new(names).unwrap();
            Word::from_letters(
                alphabet,
                ls.into_iter()
                    .map(|(gen, inverse)| crate::freegroup::Letter { gen, inverse }),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// magnus is a homomorphism to the truncated series algebra.
        #[test]
        fn magnus_homomorphism(u in arb_word(2, 8), v in arb_word(2, 8)) {
            let uv = u.multiply(&v).unwrap();
            prop_assert_eq!(magnus(&uv, 4), magnus(&u, 4).mul(&magnus(&v, 4)));
        }

        /// lcs_degree([u,v]) ≥ lcs_degree(u) + lcs_degree(v).
        #[test]
        fn lcs_superadditivity(u in arb_word(2, 6), v in arb_word(2, 6)) {
            let class = 6;
            let c = u.commutator(&v).unwrap();
            let (du, dv, dc) = (lcs_degree(&u, class), lcs_degree(&v, class), lcs_degree(&c, class));
            if let (LcsDegree::Degree(du), LcsDegree::Degree(dv)) = (du, dv) {
                match dc {
                    LcsDegree::Degree(dc) => prop_assert!(dc >= du + dv || du + dv > class),
                    LcsDegree::Identity | LcsDegree::ExceedsClass => {}
                }
            }
        }

        /// Friedrichs: log of a group-like series is primitive, so Hall
        /// elimination leaves no residual in any degree. Group-like elements
        /// here are products of exp(±X_g) along a random word. (The Magnus
        /// image 1 + X_g is not group-like; only its leading term is Lie.)
        #[test]
        fn log_of_group_like_is_lie(w in arb_word(2, 8)) {
            let alg = algebra(2, 4);
            let mut s = NcSeries::one(2, 4);
            for letter in w.letters() {
                let x = NcSeries::gen(2, 4, letter.gen);
                let factor = if letter.inverse {
                    x.scale(&-BigRational::one()).exp()
                } else {
                    x.exp()
                };
                s = s.mul(&factor);
            }
            let l = s.log();
            prop_assert!(alg.series_to_element(&l).is_ok());
        }

        /// exp(bch(X,Y)) = exp(X)exp(Y) as truncated series.
        #[test]
        fn bch_consistency(coeffs in prop::collection::vec(-3i64..=3, 4)) {
            let alg = algebra(2, 4);
            let a = alg.generator_element(0);
            let b = alg.generator_element(1);
            let ab = alg.bracket(&a, &b);
            let x = a.scale(&BigRational::from(BigInt::from(coeffs[0])))
                .add(&b.scale(&BigRational::from(BigInt::from(coeffs[1]))));
            let y = b.scale(&BigRational::from(BigInt::from(coeffs[2])))
                .add(&ab.scale(&BigRational::from(BigInt::from(coeffs[3]))));
            let z = alg.bch(&x, &y);
            let lhs = alg.element_to_series(&z).exp();
            let rhs = alg.element_to_series(&x).exp().mul(&alg.element_to_series(&y).exp());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
