//! Truncated noncommutative power series over the rationals.
//!
//! Words in the generators index the monomials; everything above the
//! truncation degree is dropped. This is the carrier for the Magnus
//! embedding `g ↦ 1 + X_g` and for exp/log, which turn group-side
//! questions into graded linear algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::freegroup::Word;

/// A noncommutative polynomial/series truncated at `class`: one coefficient
/// map per degree, keyed by the word of generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSeries {
    rank: usize,
    class: usize,
    terms: Vec<BTreeMap<Box<[u8]>, BigRational>>,
}

impl NcSeries {
    pub fn zero(rank: usize, class: usize) -> Self {
        NcSeries {
            rank,
            class,
            terms: vec![BTreeMap::new(); class + 1],
        }
    }

    pub fn one(rank: usize, class: usize) -> Self {
        let mut s = Self::zero(rank, class);
        s.terms[0].insert(Vec::new().into_boxed_slice(), BigRational::one());
        s
    }

    /// The generator series `X_g` (a single degree-1 word).
    pub fn gen(rank: usize, class: usize, g: usize) -> Self {
        assert!(g < rank, "generator index out of range");
        let mut s = Self::zero(rank, class);
        if class >= 1 {
            s.terms[1].insert(vec![g as u8].into_boxed_slice(), BigRational::one());
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|m| m.is_empty())
    }

    pub fn is_one(&self) -> bool {
        self.constant_term().is_one() && self.terms[1..].iter().all(|m| m.is_empty())
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms[0]
            .get(&Vec::new().into_boxed_slice() as &Box<[u8]>)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree_terms(&self, degree: usize) -> &BTreeMap<Box<[u8]>, BigRational> {
        &self.terms[degree]
    }

    pub fn coefficient(&self, word: &[u8]) -> BigRational {
        if word.len() > self.class {
            return BigRational::zero();
        }
        self.terms[word.len()]
            .get(word)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn insert_term(&mut self, word: &[u8], coeff: BigRational) {
        if word.len() > self.class || coeff.is_zero() {
            return;
        }
        let entry = self.terms[word.len()].entry(word.to_vec().into_boxed_slice());
        let slot = entry.or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms[word.len()].remove(word);
        }
    }

    /// Lowest degree ≥ 1 carrying a nonzero term, if any.
    pub fn min_nonconstant_degree(&self) -> Option<usize> {
        (1..=self.class).find(|&d| !self.terms[d].is_empty())
    }

    fn check_compatible(&self, other: &NcSeries) {
        assert!(
            self.rank == other.rank && self.class == other.class,
            "series rank/class mismatch"
        );
    }

    pub fn add(&self, other: &NcSeries) -> NcSeries {
        self.check_compatible(other);
        let mut out = self.clone();
        for d in 0..=self.class {
            for (w, c) in &other.terms[d] {
                let slot = out.terms[d]
                    .entry(w.clone())
                    .or_insert_with(BigRational::zero);
                *slot += c;
                if slot.is_zero() {
                    out.terms[d].remove(w);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &NcSeries) -> NcSeries {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, factor: &BigRational) -> NcSeries {
        if factor.is_zero() {
            return NcSeries::zero(self.rank, self.class);
        }
        let mut out = self.clone();
        for m in &mut out.terms {
            for c in m.values_mut() {
                *c *= factor;
            }
        }
        out
    }

    pub fn mul(&self, other: &NcSeries) -> NcSeries {
        self.check_compatible(other);
        let mut out = NcSeries::zero(self.rank, self.class);
        for da in 0..=self.class {
            if self.terms[da].is_empty() {
                continue;
            }
            for db in 0..=(self.class - da) {
                if other.terms[db].is_empty() {
                    continue;
                }
                for (wa, ca) in &self.terms[da] {
                    for (wb, cb) in &other.terms[db] {
                        let mut w = Vec::with_capacity(da + db);
                        w.extend_from_slice(wa);
                        w.extend_from_slice(wb);
                        let c = ca * cb;
                        let slot = out.terms[da + db]
                            .entry(w.into_boxed_slice())
                            .or_insert_with(BigRational::zero);
                        *slot += c;
                        if slot.is_zero() {
                            // re-borrow to remove; rebuild the key
                            let mut key = Vec::with_capacity(da + db);
                            key.extend_from_slice(wa);
                            key.extend_from_slice(wb);
                            out.terms[da + db].remove(key.as_slice());
                        }
                    }
                }
            }
        }
        out
    }

    /// Multiplies by the generator series `X_g` on the right (degree shift).
    fn mul_gen_right(&self, g: u8, negate: bool) -> NcSeries {
        let mut out = NcSeries::zero(self.rank, self.class);
        for d in 0..self.class {
            for (w, c) in &self.terms[d] {
                let mut word = Vec::with_capacity(d + 1);
                word.extend_from_slice(w);
                word.push(g);
                let coeff = if negate { -c.clone() } else { c.clone() };
                out.terms[d + 1].insert(word.into_boxed_slice(), coeff);
            }
        }
        out
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> NcSeries {
        assert!(
            self.constant_term().is_zero() && self.terms[0].is_empty(),
            "exp requires zero constant term"
        );
        let mut out = NcSeries::one(self.rank, self.class);
        let mut power = NcSeries::one(self.rank, self.class);
        let mut factorial = BigInt::one();
        for k in 1..=self.class {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            factorial *= BigInt::from(k);
            out = out.add(&power.scale(&BigRational::new(BigInt::one(), factorial.clone())));
        }
        out
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> NcSeries {
        assert!(
            self.constant_term().is_one(),
            "log requires constant term 1"
        );
        let mut u = self.clone();
        u.terms[0].clear();
        let mut out = NcSeries::zero(self.rank, self.class);
        let mut power = NcSeries::one(self.rank, self.class);
        for k in 1..=self.class {
            power = power.mul(&u);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            out = out.add(&power.scale(&BigRational::new(sign, BigInt::from(k))));
        }
        out
    }
}

/// Magnus embedding of a reduced word, truncated at `class`:
/// `g ↦ 1 + X_g`, `g⁻¹ ↦ 1 − X_g + X_g² − …`.
pub fn magnus(word: &Word, class: usize) -> NcSeries {
    let rank = word.alphabet().rank();
    let mut s = NcSeries::one(rank, class);
    for letter in word.letters() {
        let g = letter.gen as u8;
        if !letter.inverse {
            // s · (1 + X_g)
            let shifted = s.mul_gen_right(g, false);
            s = s.add(&shifted);
        } else {
            // s · (1 − X_g + X_g² − …): repeated right-append with sign flips
            let mut acc = s.clone();
            let mut tail = s.clone();
            for _ in 0..class {
                tail = tail.mul_gen_right(g, true);
                if tail.is_zero() {
                    break;
                }
                acc = acc.add(&tail);
            }
            s = acc;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{parse, Alphabet};

    /// Independent brute-force series multiplication oracle: string-keyed
    /// maps, no degree bucketing.
    fn naive_mul(
        a: &[(&str, i64)],
        b: &[(&str, i64)],
        class: usize,
    ) -> std::collections::HashMap<String, i64> {
        let mut out = std::collections::HashMap::new();
        for (wa, ca) in a {
            for (wb, cb) in b {
                let w = format!("{wa}{wb}");
                if w.len() <= class {
                    *out.entry(w).or_insert(0) += ca * cb;
                }
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    #[test]
    fn magnus_identity_is_one() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let e = parse("", &ab).unwrap();
        assert!(magnus(&e, 4).is_one());
    }

    #[test]
    fn magnus_single_generator() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let a = parse("a", &ab).unwrap();
        let s = magnus(&a, 3);
        assert!(s.constant_term().is_one());
        assert_eq!(s.coefficient(&[0]), BigRational::one());
        assert!(s.degree_terms(2).is_empty());
        assert!(s.degree_terms(3).is_empty());
    }

    #[test]
    fn magnus_inverse_is_geometric_series() {
        let ab = Alphabet::new(["a"]).unwrap();
        let ainv = parse("a^-1", &ab).unwrap();
        let s = magnus(&ainv, 4);
        // 1 - A + A^2 - A^3 + A^4
        for d in 0..=4usize {
            let word = vec![0u8; d];
            let expected = if d % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                s.coefficient(&word),
                BigRational::from(BigInt::from(expected))
            );
        }
    }

    #[test]
    fn magnus_commutator_degree_two() {
        // [a,b] → 1 + (AB − BA) + higher terms; degree-2 part frozen from the
        // naive multiplication oracle.
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let w = parse("[a, b]", &ab).unwrap();
        let s = magnus(&w, 2);

        // Oracle: (1+A)(1+B)(1−A+A²)(1−B+B²) truncated at degree 2.
        let one_a = [("", 1), ("a", 1)];
        let one_b = [("", 1), ("b", 1)];
        let inv_a = [("", 1), ("a", -1), ("aa", 1)];
        let inv_b = [("", 1), ("b", -1), ("bb", 1)];
        let m1 = naive_mul(&one_a, &one_b, 2);
        let m1v: Vec<(String, i64)> = m1.into_iter().collect();
        let m1r: Vec<(&str, i64)> = m1v.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        let m2 = naive_mul(&m1r, &inv_a, 2);
        let m2v: Vec<(String, i64)> = m2.into_iter().collect();
        let m2r: Vec<(&str, i64)> = m2v.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        let oracle = naive_mul(&m2r, &inv_b, 2);

        for (word_str, coeff) in &oracle {
            let word: Vec<u8> = word_str.bytes().map(|b| b - b'a').collect();
            assert_eq!(
                s.coefficient(&word),
                BigRational::from(BigInt::from(*coeff)),
                "coefficient of {word_str}"
            );
        }
        assert_eq!(s.coefficient(&[0, 1]), BigRational::one());
        assert_eq!(s.coefficient(&[1, 0]), -BigRational::one());
        assert!(s.coefficient(&[0, 0]).is_zero());
    }

    #[test]
    fn exp_log_round_trip() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let w = parse("a b a^-1", &ab).unwrap();
        let s = magnus(&w, 5);
        assert_eq!(s.log().exp(), s);
    }
}
