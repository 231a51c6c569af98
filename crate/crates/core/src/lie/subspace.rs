//! Graded subspaces of the truncated free Lie algebra with exact linear
//! algebra over ℚ, stored as primitive integer echelon rows per degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{HallBasis, LieAlgebra, LieElement};

/// Row space in echelon form: rows carry coprime integer entries, pivot
/// columns strictly increase, and each row's pivot entry is positive.
#[derive(Debug, Clone)]
pub struct Echelon {
    width: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// The full space: identity rows.
    pub fn full(width: usize) -> Self {
        let rows = (0..width)
            .map(|i| {
                let mut r = vec![BigInt::zero(); width];
                r[i] = BigInt::one();
                r
            })
            .collect();
        Echelon {
            width,
            rows,
            pivots: (0..width).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Reduces `row` against the echelon in place; afterwards every pivot
    /// column of the echelon is zero in `row`.
    fn reduce_in_place(&self, row: &mut [BigInt]) {
        for (k, &p) in self.pivots.iter().enumerate() {
            if row[p].is_zero() {
                continue;
            }
            let a = self.rows[k][p].clone();
            let b = row[p].clone();
            let g = a.gcd(&b);
            let (sa, sb) = (&a / &g, &b / &g);
            for (x, y) in row.iter_mut().zip(self.rows[k].iter()) {
                *x = &*x * &sa - y * &sb;
            }
            debug_assert!(row[p].is_zero());
        }
    }

    /// Inserts a row; returns true when the rank grew.
    pub fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.width);
        if self.is_full() {
            return false;
        }
        self.reduce_in_place(&mut row);
        let Some(lead) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        strip_content(&mut row);
        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, row);
        true
    }

    /// True when `row` lies in the row space.
    pub fn contains(&self, row: &[BigInt]) -> bool {
        if self.is_full() {
            return true;
        }
        let mut r = row.to_vec();
        self.reduce_in_place(&mut r);
        r.iter().all(|c| c.is_zero())
    }

    pub fn contains_all(&self, other: &Echelon) -> bool {
        assert_eq!(self.width, other.width);
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Primitive form: divide by the gcd of the entries and normalize the sign
/// of the leading entry to positive.
fn strip_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in row.iter() {
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if g.is_zero() {
        return;
    }
    let lead_negative = row
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.is_negative())
        .unwrap_or(false);
    if lead_negative {
        g = -g;
    }
    if !g.is_one() {
        for c in row.iter_mut() {
            if !c.is_zero() {
                *c = &*c / &g;
            }
        }
    }
}

/// Clears denominators of sparse rational Hall coordinates into a dense
/// integer row over the degree-d slice of the basis.
fn coords_to_row(
    basis: &HallBasis,
    degree: usize,
    coords: &BTreeMap<usize, BigRational>,
) -> Vec<BigInt> {
    let range = basis.degree_range(degree);
    let mut lcm = BigInt::one();
    for c in coords.values() {
        lcm = lcm.lcm(c.denom());
    }
    let mut row = vec![BigInt::zero(); range.len()];
    for (i, c) in coords {
        debug_assert_eq!(basis.degree_of(*i), degree);
        row[i - range.start] = c.numer() * (&lcm / c.denom());
    }
    row
}

/// A graded subspace: one row space per degree 1..=class.
#[derive(Debug, Clone)]
pub struct GradedSubspace {
    rank: usize,
    class: usize,
    levels: Vec<Echelon>,
}

impl GradedSubspace {
    pub fn zero(algebra: &LieAlgebra) -> Self {
        let basis = algebra.basis();
        let mut levels = vec![Echelon::new(0)];
        for d in 1..=basis.class() {
            levels.push(Echelon::new(basis.degree_size(d)));
        }
        GradedSubspace {
            rank: basis.rank(),
            class: basis.class(),
            levels,
        }
    }

    pub fn rank_param(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn level(&self, degree: usize) -> &Echelon {
        &self.levels[degree]
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.class).map(|d| self.levels[d].rank()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.rank() == 0)
    }

    /// Marks a whole degree as the full space.
    pub fn set_full(&mut self, degree: usize) {
        let width = self.levels[degree].width();
        self.levels[degree] = Echelon::full(width);
    }

    pub fn insert_row(&mut self, degree: usize, row: Vec<BigInt>) -> bool {
        self.levels[degree].insert(row)
    }

    /// Inserts every homogeneous component of the element.
    pub fn insert_element(&mut self, algebra: &LieAlgebra, x: &LieElement) -> bool {
        assert_eq!(x.rank(), self.rank);
        assert_eq!(x.class(), self.class);
        let mut grew = false;
        for (degree, comp) in x.homogeneous_components(algebra.basis()) {
            let row = coords_to_row(algebra.basis(), degree, &comp);
            grew |= self.levels[degree].insert(row);
        }
        grew
    }

    /// True when every homogeneous component lies in the corresponding row
    /// space (exact rational elimination).
    pub fn contains_element(&self, algebra: &LieAlgebra, x: &LieElement) -> bool {
        x.homogeneous_components(algebra.basis())
            .into_iter()
            .all(|(degree, comp)| {
                let row = coords_to_row(algebra.basis(), degree, &comp);
                self.levels[degree].contains(&row)
            })
    }

    /// Closes the subspace under bracketing with the degree-1 generators,
    /// degree by degree. Together with `insert_element` this computes the
    /// ideal generated by a family: new rows at degree d+1 come only from
    /// rows at degree d, so one ascending sweep saturates.
    pub fn saturate(&mut self, algebra: &LieAlgebra) {
        let rank = self.rank;
        for d in 1..self.class {
            let (lower, upper) = self.levels.split_at_mut(d + 1);
            let (src, dst) = (&lower[d], &mut upper[0]);
            'rows: for row in src.rows() {
                if dst.is_full() {
                    break 'rows;
                }
                for g in 0..rank {
                    dst.insert(bracket_row_with_generator(algebra, d, row, g));
                }
            }
        }
    }

    /// The graded bracket `[S, L¹]`: spans of `[row, generator]` over all
    /// echelon rows. When S is an ideal the result is one too (rows span S,
    /// and `[[S,g],h] ⊆ [S,g]` since `[S,g] ⊆ S`), so no re-saturation pass
    /// is needed beyond the sweep itself.
    pub fn bracket_with_generators(&self, algebra: &LieAlgebra) -> GradedSubspace {
        let mut out = GradedSubspace::zero(algebra);
        for d in 1..self.class {
            for row in self.levels[d].rows() {
                if out.levels[d + 1].is_full() {
                    break;
                }
                for g in 0..self.rank {
                    out.levels[d + 1].insert(bracket_row_with_generator(algebra, d, row, g));
                }
            }
        }
        out
    }

    /// Degreewise containment of another subspace.
    pub fn contains_subspace(&self, other: &GradedSubspace) -> bool {
        (1..=self.class).all(|d| self.levels[d].contains_all(&other.levels[d]))
    }

    /// First row of `other` at `degree` that is not contained in `self`.
    pub fn missing_row(&self, other: &GradedSubspace, degree: usize) -> Option<Vec<BigInt>> {
        other.levels[degree]
            .rows()
            .iter()
            .find(|r| !self.levels[degree].contains(r))
            .cloned()
    }

    /// JSON report: per degree, the Hall trees and the matrix rows.
    pub fn to_json(&self, algebra: &LieAlgebra, name: &dyn Fn(usize) -> String) -> Value {
        let basis = algebra.basis();
        let degrees: Vec<Value> = (1..=self.class)
            .map(|d| {
                let trees: Vec<String> = basis
                    .degree_range(d)
                    .map(|i| basis.bracket_notation(i, &name))
                    .collect();
                let rows: Vec<Vec<String>> = self.levels[d]
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(|c| c.to_string()).collect())
                    .collect();
                json!({
                    "degree": d,
                    "dimension": self.levels[d].rank(),
                    "ambient_dimension": self.levels[d].width(),
                    "hall_basis": trees,
                    "rows": rows,
                })
            })
            .collect();
        json!({
            "rank": self.rank,
            "class": self.class,
            "dimensions": self.dims(),
            "degrees": degrees,
        })
    }
}

/// `[row, X_g]` as a dense integer row one degree up.
pub fn bracket_row_with_generator(
    algebra: &LieAlgebra,
    degree: usize,
    row: &[BigInt],
    g: usize,
) -> Vec<BigInt> {
    let basis = algebra.basis();
    let src = basis.degree_range(degree);
    let dst = basis.degree_range(degree + 1);
    let mut out = vec![BigInt::zero(); dst.len()];
    for (offset, c) in row.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let col = algebra.ad_column(src.start + offset, g);
        for (target, coeff) in col.iter() {
            out[target - dst.start] += c * coeff;
        }
    }
    out
}

/// Row of a `LieElement` that is homogeneous of `degree`.
pub fn element_to_row(algebra: &LieAlgebra, degree: usize, x: &LieElement) -> Vec<BigInt> {
    coords_to_row(algebra.basis(), degree, x.coords())
}

/// Row back to a (rational, primitive-integer) element.
pub fn row_to_element(algebra: &LieAlgebra, degree: usize, row: &[BigInt]) -> LieElement {
    let range = algebra.basis().degree_range(degree);
    LieElement::from_coords(
        algebra.rank(),
        algebra.class(),
        row.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (range.start + i, BigRational::from(c.clone()))),
    )
}

/// Smallest graded subspace containing all homogeneous components of the
/// generators and closed under bracketing with the degree-1 generators.
pub fn ideal_closure(gens: &[LieElement], algebra: &LieAlgebra) -> GradedSubspace {
    let mut s = GradedSubspace::zero(algebra);
    for g in gens {
        s.insert_element(algebra, g);
    }
    s.saturate(algebra);
    s
}
