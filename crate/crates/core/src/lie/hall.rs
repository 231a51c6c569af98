//! Hall basis of the free Lie algebra, realized by Lyndon words.
//!
//! The basis elements of degree d are the Lyndon words of length d over the
//! generator alphabet, listed degree-first and lexicographically within a
//! degree; the bracketing of a word is its standard (Chen–Fox–Lyndon)
//! factorization. This is a classical Hall family; the per-degree counts are
//! the Witt numbers. The key property used throughout: the associative
//! expansion of the bracketing of a Lyndon word w is w plus an integer
//! combination of lexicographically larger words of the same degree, which
//! makes coordinate extraction triangular.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("Hall basis for rank {rank} through degree {class} has {required} elements, over the cap of {cap}")]
    BasisTooLarge {
        rank: usize,
        class: usize,
        required: u128,
        cap: usize,
    },
    #[error("truncation degree must be at least 1")]
    ClassZero,
}

/// One basis element: a Lyndon word plus its standard factorization into
/// earlier basis elements (`None` for the degree-1 leaves).
#[derive(Debug, Clone)]
pub struct HallElem {
    pub word: Box<[u8]>,
    pub factorization: Option<(usize, usize)>,
}

impl HallElem {
    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

#[derive(Debug)]
pub struct HallBasis {
    rank: usize,
    class: usize,
    elems: Vec<HallElem>,
    /// `offsets[d]..offsets[d+1]` indexes the degree-d elements (d from 1).
    offsets: Vec<usize>,
    index_by_word: HashMap<Box<[u8]>, usize>,
}

/// Number of degree-`degree` basis elements by the Witt formula
/// (1/d)·Σ_{e|d} μ(e)·rank^(d/e).
pub fn witt_number(rank: usize, degree: usize) -> u128 {
    assert!(degree >= 1);
    let mut sum: i128 = 0;
    for e in 1..=degree {
        if !degree.is_multiple_of(e) {
            continue;
        }
        let mu = moebius(e);
        if mu == 0 {
            continue;
        }
        let mut pw: i128 = 1;
        for _ in 0..degree / e {
            pw = pw.checked_mul(rank as i128).expect("witt overflow");
        }
        sum += mu as i128 * pw;
    }
    debug_assert!(sum >= 0 && sum % degree as i128 == 0);
    (sum / degree as i128) as u128
}

fn moebius(n: usize) -> i32 {
    let mut n = n;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

impl HallBasis {
    /// Builds the basis through degree `class`, refusing to exceed `cap`
    /// elements.
    pub fn new(rank: usize, class: usize, cap: usize) -> Result<Self, HallError> {
        if class == 0 {
            return Err(HallError::ClassZero);
        }
        let mut required: u128 = 0;
        if rank > 0 {
            for d in 1..=class {
                required += witt_number(rank, d);
                if required > cap as u128 {
                    return Err(HallError::BasisTooLarge {
                        rank,
                        class,
                        required,
                        cap,
                    });
                }
            }
        }

        // Duval's algorithm: all Lyndon words of length ≤ class, then sort
        // degree-first (Duval emits them in lexicographic order).
        let mut words: Vec<Vec<u8>> = Vec::with_capacity(required as usize);
        if rank > 0 {
            let mut w = vec![0u8];
            loop {
                if w.len() <= class {
                    words.push(w.clone());
                }
                let mut next = Vec::with_capacity(class);
                while next.len() < class {
                    next.push(w[next.len() % w.len()]);
                }
                while let Some(&last) = next.last() {
                    if last as usize == rank - 1 {
                        next.pop();
                    } else {
                        break;
                    }
                }
                match next.last_mut() {
                    Some(last) => *last += 1,
                    None => break,
                }
                w = next;
            }
        }
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let mut elems: Vec<HallElem> = Vec::with_capacity(words.len());
        let mut index_by_word: HashMap<Box<[u8]>, usize> = HashMap::with_capacity(words.len());
        let mut offsets = vec![0usize; class + 2];
        let mut degree_cursor = 1usize;
        for w in words {
            while w.len() > degree_cursor {
                degree_cursor += 1;
                offsets[degree_cursor] = elems.len();
            }
            let factorization = if w.len() == 1 {
                None
            } else {
                let split = standard_split(&w);
                let left = index_by_word[&w[..split] as &[u8]];
                let right = index_by_word[&w[split..] as &[u8]];
                Some((left, right))
            };
            let boxed: Box<[u8]> = w.into_boxed_slice();
            index_by_word.insert(boxed.clone(), elems.len());
            elems.push(HallElem {
                word: boxed,
                factorization,
            });
        }
        while degree_cursor <= class {
            degree_cursor += 1;
            offsets[degree_cursor] = elems.len();
        }

        let basis = HallBasis {
            rank,
            class,
            elems,
            offsets,
            index_by_word,
        };
        if rank > 0 {
            debug_assert_eq!(basis.len() as u128, required);
        }
        Ok(basis)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elem(&self, index: usize) -> &HallElem {
        &self.elems[index]
    }

    pub fn degree_of(&self, index: usize) -> usize {
        self.elems[index].word.len()
    }

    /// Index range of the degree-d elements.
    pub fn degree_range(&self, degree: usize) -> std::ops::Range<usize> {
        assert!(degree >= 1 && degree <= self.class);
        self.offsets[degree]..self.offsets[degree + 1]
    }

    pub fn degree_size(&self, degree: usize) -> usize {
        self.degree_range(degree).len()
    }

    pub fn degree_sizes(&self) -> Vec<usize> {
        (1..=self.class).map(|d| self.degree_size(d)).collect()
    }

    pub fn index_of_word(&self, word: &[u8]) -> Option<usize> {
        self.index_by_word.get(word).copied()
    }

    /// Bracket notation for an element, e.g. `[d1,[d1,d2]]`.
    pub fn bracket_notation(&self, index: usize, name: &dyn Fn(usize) -> String) -> String {
        let e = &self.elems[index];
        match e.factorization {
            None => name(e.word[0] as usize),
            Some((l, r)) => format!(
                "[{},{}]",
                self.bracket_notation(l, name),
                self.bracket_notation(r, name)
            ),
        }
    }
}

/// Split point of the standard factorization: the lexicographically smallest
/// proper suffix of a Lyndon word is its right factor.
fn standard_split(w: &[u8]) -> usize {
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_small_values() {
        assert_eq!(witt_number(2, 1), 2);
        assert_eq!(witt_number(2, 2), 1);
        assert_eq!(witt_number(2, 3), 2);
        assert_eq!(witt_number(2, 4), 3);
        assert_eq!(witt_number(3, 2), 3);
        assert_eq!(witt_number(1, 2), 0);
    }

    #[test]
    fn basis_sizes_match_examples() {
        let b = HallBasis::new(2, 2, 1_000_000).unwrap();
        assert_eq!(b.degree_sizes(), vec![2, 1]);

        let b = HallBasis::new(2, 8, 1_000_000).unwrap();
        assert_eq!(b.degree_sizes(), vec![2, 1, 2, 3, 6, 9, 18, 30]);

        let b = HallBasis::new(1, 3, 1_000_000).unwrap();
        assert_eq!(b.degree_sizes(), vec![1, 0, 0]);
    }

    /// Independent Witt oracle across the whole acceptance window.
    #[test]
    fn witt_dimension_formula() {
        for rank in 1..=4usize {
            let b = HallBasis::new(rank, 8, 1_000_000).unwrap();
            for d in 1..=8usize {
                assert_eq!(
                    b.degree_size(d) as u128,
                    witt_number(rank, d),
                    "rank {rank} degree {d}"
                );
            }
        }
    }

    #[test]
    fn basis_is_degree_then_lex_ordered() {
        let b = HallBasis::new(3, 5, 1_000_000).unwrap();
        for i in 1..b.len() {
            let (a, c) = (&b.elem(i - 1).word, &b.elem(i).word);
            assert!(a.len() < c.len() || (a.len() == c.len() && a < c));
        }
    }

    #[test]
    fn factorization_parts_are_basis_elements() {
        let b = HallBasis::new(3, 6, 1_000_000).unwrap();
        for i in 0..b.len() {
            if let Some((l, r)) = b.elem(i).factorization {
                let mut joined = b.elem(l).word.to_vec();
                joined.extend_from_slice(&b.elem(r).word);
                assert_eq!(joined.as_slice(), &*b.elem(i).word);
                // left factor strictly smaller than right in lex order
                assert!(b.elem(l).word < b.elem(r).word);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            HallBasis::new(9, 8, 1000),
            Err(HallError::BasisTooLarge { .. })
        ));
    }

    #[test]
    fn bracket_notation_examples() {
        let b = HallBasis::new(2, 3, 1_000_000).unwrap();
        let names = |i: usize| format!("g{i}");
        let idx = b.index_of_word(&[0, 0, 1]).unwrap();
        assert_eq!(b.bracket_notation(idx, &names), "[g0,[g0,g1]]");
        let idx = b.index_of_word(&[0, 1, 1]).unwrap();
        assert_eq!(b.bracket_notation(idx, &names), "[[g0,g1],g1]");
    }
}
