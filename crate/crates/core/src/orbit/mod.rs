//! Orbit depth, nilpotence class and derived length of the orbit-complement
//! abelianization, computed at the graded-rational level.
//!
//! Everything here works in the associated graded picture over ℚ: the orbit
//! ideal is the Lie ideal generated by the leading log terms of the orbit
//! words, and the subgroup questions become exact linear algebra per degree.
//! Reports carry the `rational` qualifier for that reason; torsion is
//! invisible at this level.

mod config;

pub use config::{Configuration, FamilyRange, OrbitFamily, BUILTIN_NAMES};

/// The embedded JSON text of a built-in configuration, byte-for-byte what
/// `config export` dumps.
pub fn builtin_config_json(name: &str) -> Option<&'static str> {
    config::builtin_json(name)
}

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::freegroup::FreeGroupError;
use crate::lie::{ideal_closure, subspace, witt_number, GradedSubspace, LieAlgebra, LieError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("`{0}` is neither a built-in configuration nor an existing file")]
    UnknownBuiltin(String),
    #[error("cannot read configuration: {0}")]
    Io(String),
    #[error(transparent)]
    Word(#[from] FreeGroupError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("class cutoff too small: depth analysis needs class >= 2, got {0}")]
    ClassTooSmall(usize),
    #[error("configuration rank {cfg} does not match algebra rank {algebra}")]
    RankMismatch { cfg: usize, algebra: usize },
    #[error("inconsistent depth report: {0}")]
    InconsistentReport(String),
}

/// A computed invariant: exact, a lower bound at the cutoff, or the
/// trivial-group marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    TrivialGroup,
    Certified(usize),
    AtLeast(usize),
}

impl Bound {
    pub fn certified(&self) -> Option<usize> {
        match self {
            Bound::Certified(v) => Some(*v),
            Bound::TrivialGroup => Some(0),
            Bound::AtLeast(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Bound::TrivialGroup => json!({"kind": "trivial-group"}),
            Bound::Certified(v) => json!({"kind": "certified", "value": v}),
            Bound::AtLeast(v) => json!({"kind": "at-least", "value": v}),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::TrivialGroup => write!(f, "trivial group"),
            Bound::Certified(v) => write!(f, "{v}"),
            Bound::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// Witness that a containment test failed: a graded orbit element outside
/// the commutator ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub degree: usize,
    pub element: String,
}

/// Verdict of the per-j test "orbit ∩ L_{j+1} ⊆ [orbit, π₁]" at the graded
/// level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthVerdict {
    pub j: usize,
    pub contained: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub config: String,
    pub class: usize,
    /// Always "rational": subgroup questions are answered over ℚ.
    pub qualifier: &'static str,
    pub orbit_dims: Vec<usize>,
    pub commutator_dims: Vec<usize>,
    pub ambient_dims: Vec<usize>,
    /// One verdict per tested j = 1..=class-2.
    pub verdicts: Vec<DepthVerdict>,
    /// Whether verdicts are monotone (once contained, contained for larger j).
    pub monotone: bool,
    pub k: Bound,
    pub n: Bound,
    pub d: Bound,
}

impl DepthReport {
    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "class": self.class,
            "qualifier": self.qualifier,
            "ambient_dimensions": self.ambient_dims,
            "orbit_ideal_dimensions": self.orbit_dims,
            "commutator_ideal_dimensions": self.commutator_dims,
            "tests": self.verdicts.iter().map(|v| json!({
                "j": v.j,
                "contained": v.contained,
                "witness": v.witness.as_ref().map(|w| json!({
                    "degree": w.degree,
                    "element": w.element,
                })),
            })).collect::<Vec<_>>(),
            "undetermined_beyond_j": self.class.saturating_sub(2),
            "monotone": self.monotone,
            "k": self.k.to_json(),
            "n": self.n.to_json(),
            "d": self.d.to_json(),
        })
    }
}

/// Result of checking the depth report against k ≤ n+1 and d ≤ n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityCheck {
    pub holds: bool,
    pub explanation: String,
    /// ℓ ≤ k: the implied bound on the length of the first nonzero Melnikov
    /// function, when k is certified.
    pub melnikov_length_bound: Option<usize>,
}

impl InequalityCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "explanation": self.explanation,
            "melnikov_length_bound": self.melnikov_length_bound,
        })
    }
}

fn check_rank(cfg: &Configuration, algebra: &LieAlgebra) -> Result<(), OrbitError> {
    if cfg.alphabet.rank() != algebra.rank() {
        return Err(OrbitError::RankMismatch {
            cfg: cfg.alphabet.rank(),
            algebra: algebra.rank(),
        });
    }
    Ok(())
}

/// The graded orbit ideal: the Lie ideal generated by the leading log terms
/// of the cycle and of every instantiated orbit-family word. Words whose
/// lower-central degree exceeds the class contribute nothing visible and
/// are skipped.
pub fn orbit_ideal(
    cfg: &Configuration,
    algebra: &LieAlgebra,
) -> Result<GradedSubspace, OrbitError> {
    check_rank(cfg, algebra)?;
    let mut gens = Vec::new();
    for word in cfg.orbit_words(algebra.class())? {
        match algebra.log_leading(&word) {
            Ok(x) => gens.push(x),
            Err(LieError::IdentityWord) | Err(LieError::ExceedsClass { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(ideal_closure(&gens, algebra))
}

/// The graded bracket [orbit ideal, whole algebra]: spans of brackets of
/// ideal rows with the degree-1 generators. Since the orbit ideal is an
/// ideal, this is itself an ideal and needs no further saturation.
pub fn commutator_ideal(
    cfg: &Configuration,
    algebra: &LieAlgebra,
) -> Result<GradedSubspace, OrbitError> {
    Ok(orbit_ideal(cfg, algebra)?.bracket_with_generators(algebra))
}

fn names_fn(cfg: &Configuration) -> impl Fn(usize) -> String + '_ {
    |i| cfg.alphabet.name(i).to_string()
}

/// Full depth analysis: per-j verdicts, k, n and d from one ideal
/// computation.
pub fn orbit_depth(cfg: &Configuration, algebra: &LieAlgebra) -> Result<DepthReport, OrbitError> {
    let class = algebra.class();
    if class < 2 {
        return Err(OrbitError::ClassTooSmall(class));
    }
    check_rank(cfg, algebra)?;

    let ideal = orbit_ideal(cfg, algebra)?;
    let comm = ideal.bracket_with_generators(algebra);

    // Failing degrees: d with ideal_d ⊄ comm_d, each with a witness row.
    let mut failing: Vec<(usize, Witness)> = Vec::new();
    for d in 2..=class {
        if let Some(row) = comm.missing_row(&ideal, d) {
            let element = subspace::row_to_element(algebra, d, &row)
                .display_with(algebra.basis(), &names_fn(cfg));
            failing.push((d, Witness { degree: d, element }));
        }
    }

    let verdicts: Vec<DepthVerdict> = (1..=class.saturating_sub(2))
        .map(|j| {
            let fail = failing.iter().find(|(d, _)| *d > j);
            DepthVerdict {
                j,
                contained: fail.is_none(),
                witness: fail.map(|(_, w)| w.clone()),
            }
        })
        .collect();
    let monotone = verdicts
        .windows(2)
        .all(|w| !w[0].contained || w[1].contained);

    let k = match failing.last().map(|(d, _)| *d) {
        None => Bound::Certified(1),
        Some(dmax) if dmax <= class - 2 => Bound::Certified(dmax),
        Some(_) => Bound::AtLeast(class - 1),
    };

    let n = nilpotence_from_ideal(&ideal, algebra);
    let d = derived_from_ideal(&ideal, algebra, n);

    let report = DepthReport {
        config: cfg.name.clone(),
        class,
        qualifier: "rational",
        orbit_dims: ideal.dims(),
        commutator_dims: comm.dims(),
        ambient_dims: (1..=class)
            .map(|d| witt_number(algebra.rank(), d) as usize)
            .collect(),
        verdicts,
        monotone,
        k,
        n,
        d,
    };
    debug_assert!(verify_inequalities(&report).is_ok());
    Ok(report)
}

/// Nilpotence class of the quotient by the ideal generated by the orbit's
/// degree ≥ 2 part.
pub fn nilpotence_class(cfg: &Configuration, algebra: &LieAlgebra) -> Result<Bound, OrbitError> {
    if algebra.class() < 2 {
        return Err(OrbitError::ClassTooSmall(algebra.class()));
    }
    let ideal = orbit_ideal(cfg, algebra)?;
    Ok(nilpotence_from_ideal(&ideal, algebra))
}

/// Derived length of the same quotient; degree doubling limits the testable
/// range to 2^j ≤ class.
pub fn derived_length(cfg: &Configuration, algebra: &LieAlgebra) -> Result<Bound, OrbitError> {
    if algebra.class() < 2 {
        return Err(OrbitError::ClassTooSmall(algebra.class()));
    }
    let ideal = orbit_ideal(cfg, algebra)?;
    let n = nilpotence_from_ideal(&ideal, algebra);
    Ok(derived_from_ideal(&ideal, algebra, n))
}

/// The quotient is the graded algebra divided by J = ideal(orbit ∩ degrees
/// ≥ 2); because the orbit ideal is an ideal, J agrees with it in every
/// degree ≥ 2 and is zero in degree 1. The quotient's lower central series
/// term j+1 is its degree ≥ j+1 part, so the class is the largest degree
/// where the quotient survives. Once a degree dies, all higher degrees die
/// with it (the ideal swallows them), which is what certifies finiteness.
fn nilpotence_from_ideal(ideal: &GradedSubspace, algebra: &LieAlgebra) -> Bound {
    let class = algebra.class();
    if algebra.rank() == 0 {
        return Bound::TrivialGroup;
    }
    let quotient_alive = |d: usize| -> bool { d == 1 || !ideal.level(d).is_full() };
    debug_assert!(
        (1..class).all(|d| quotient_alive(d) || !quotient_alive(d + 1)),
        "quotient fullness must propagate upward"
    );
    let top_alive = (1..=class).rev().find(|&d| quotient_alive(d)).unwrap_or(0);
    if top_alive == class {
        Bound::AtLeast(class)
    } else {
        Bound::Certified(top_alive.max(1))
    }
}

/// Derived length of the quotient. V_j denotes the preimage in the free
/// algebra of the j-th derived subalgebra: V_1 = J + [L, L], V_{j+1} =
/// J + [V_j, V_j]. A nonzero quotient at level j certifies d ≥ j+1; a
/// visibly zero level certifies d = j only when n is certified (otherwise
/// components beyond the cutoff could survive).
fn derived_from_ideal(ideal: &GradedSubspace, algebra: &LieAlgebra, n: Bound) -> Bound {
    let class = algebra.class();
    if algebra.rank() == 0 {
        return Bound::TrivialGroup;
    }
    let n_certified = n.certified().is_some();

    // Level 1: [q, q] is the quotient in degrees ≥ 2.
    let level1_alive = (2..=class).any(|d| !ideal.level(d).is_full());
    if !level1_alive {
        // Dead at every visible degree; fullness propagates beyond the
        // cutoff, so this is a genuine certificate.
        return Bound::Certified(1);
    }

    let mut witnessed = 2; // q^1 ≠ 0 ⇒ d ≥ 2
    let mut current: Option<GradedSubspace> = None; // V_{j-1}, None means V_1
    let mut j = 2usize;
    loop {
        if (1usize << j) > class {
            return Bound::AtLeast(witnessed);
        }

        // Candidate brackets spanning [V_{j-1}, V_{j-1}], streamed so the
        // witness search can stop early.
        let mut alive = false;
        let mut materialized = ideal.clone_levels_from_degree_2(algebra);
        let keep_building = (1usize << (j + 1)) <= class;
        let mut candidates = bracket_pair_candidates(algebra, current.as_ref(), class);
        while let Some((degree, row)) = candidates.next_candidate(algebra) {
            if !alive && !ideal.level(degree).contains(&row) {
                alive = true;
                if !keep_building {
                    break;
                }
            }
            if keep_building {
                materialized.insert_row(degree, row);
            }
        }

        if !alive {
            return if n_certified {
                Bound::Certified(j)
            } else {
                Bound::AtLeast(witnessed)
            };
        }
        witnessed = j + 1;
        if !keep_building {
            return Bound::AtLeast(witnessed);
        }
        current = Some(materialized);
        j += 1;
    }
}

impl GradedSubspace {
    /// Copy with degree 1 cleared: the quotient-defining ideal J.
    fn clone_levels_from_degree_2(&self, algebra: &LieAlgebra) -> GradedSubspace {
        let mut out = GradedSubspace::zero(algebra);
        for d in 2..=self.class() {
            for row in self.level(d).rows() {
                out.insert_row(d, row.clone());
            }
        }
        out
    }
}

/// Streams the bracket rows spanning [V, V] for the derived-series step.
/// `previous = None` stands for V_1, whose degree ≥ 2 levels are full, so
/// basis-element pairs span its brackets.
struct PairCandidates {
    pairs: Vec<(PairSource, PairSource)>,
    at: usize,
}

#[derive(Clone)]
enum PairSource {
    Basis(usize),
    Row(usize, Vec<num_bigint::BigInt>),
}

fn bracket_pair_candidates(
    algebra: &LieAlgebra,
    previous: Option<&GradedSubspace>,
    class: usize,
) -> PairCandidates {
    let mut sources: Vec<(usize, PairSource)> = Vec::new();
    match previous {
        None => {
            for d in 2..=class {
                for i in algebra.basis().degree_range(d) {
                    sources.push((d, PairSource::Basis(i)));
                }
            }
        }
        Some(v) => {
            for d in 2..=class {
                for row in v.level(d).rows() {
                    sources.push((d, PairSource::Row(d, row.clone())));
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for (i, (da, a)) in sources.iter().enumerate() {
        for (db, b) in sources.iter().skip(i + 1) {
            if da + db <= class {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    PairCandidates { pairs, at: 0 }
}

impl PairCandidates {
    fn next_candidate(&mut self, algebra: &LieAlgebra) -> Option<(usize, Vec<num_bigint::BigInt>)> {
        use num_traits::Zero;
        while self.at < self.pairs.len() {
            let (a, b) = &self.pairs[self.at];
            self.at += 1;
            let xa = pair_source_element(algebra, a);
            let xb = pair_source_element(algebra, b);
            let bracket = algebra.bracket(&xa, &xb);
            if bracket.is_zero() {
                continue;
            }
            let degree = bracket
                .min_degree(algebra.basis())
                .expect("nonzero bracket has a degree");
            let row = subspace::element_to_row(algebra, degree, &bracket);
            if row.iter().any(|c| !c.is_zero()) {
                return Some((degree, row));
            }
        }
        None
    }
}

fn pair_source_element(algebra: &LieAlgebra, s: &PairSource) -> crate::lie::LieElement {
    use num_rational::BigRational;
    match s {
        PairSource::Basis(i) => crate::lie::LieElement::from_coords(
            algebra.rank(),
            algebra.class(),
            [(*i, BigRational::from(num_bigint::BigInt::from(1)))],
        ),
        PairSource::Row(d, row) => subspace::row_to_element(algebra, *d, row),
    }
}

/// Checks k ≤ n+1 and d ≤ n on certified values; a certified violation is an
/// implementation bug and comes back as an error.
pub fn verify_inequalities(report: &DepthReport) -> Result<InequalityCheck, OrbitError> {
    let mut notes: Vec<String> = Vec::new();

    match (report.k.certified(), report.n.certified(), &report.n) {
        (Some(k), Some(n), _) => {
            if k > n + 1 {
                return Err(OrbitError::InconsistentReport(format!(
                    "k = {k} exceeds n + 1 = {}",
                    n + 1
                )));
            }
            notes.push(format!("k = {k} <= n + 1 = {}", n + 1));
        }
        (Some(k), None, Bound::AtLeast(n_lb)) if k <= n_lb + 1 => {
            // The true n only grows, so the inequality holds vacuously.
            notes.push(format!("k = {k} <= n + 1 holds vacuously (n >= {n_lb})"));
        }
        _ => notes.push(format!(
            "k <= n + 1 not comparable at cutoff (k {}, n {})",
            report.k, report.n
        )),
    }

    match (report.d.certified(), report.n.certified(), &report.n) {
        (Some(d), Some(n), _) => {
            if d > n {
                return Err(OrbitError::InconsistentReport(format!(
                    "d = {d} exceeds n = {n}"
                )));
            }
            notes.push(format!("d = {d} <= n = {n}"));
        }
        (Some(d), None, Bound::AtLeast(n_lb)) if d <= *n_lb => {
            notes.push(format!("d = {d} <= n holds vacuously (n >= {n_lb})"));
        }
        _ => notes.push(format!(
            "d <= n not comparable at cutoff (d {}, n {})",
            report.d, report.n
        )),
    }

    let melnikov_length_bound = report.k.certified();
    match melnikov_length_bound {
        Some(k) => notes.push(format!(
            "implied Melnikov length bound: l <= k = {k} (bound only; l itself is out of scope)"
        )),
        None => notes.push(format!(
            "Melnikov length bound l <= k unresolved at cutoff ({})",
            report.k
        )),
    }

    Ok(InequalityCheck {
        holds: true,
        explanation: notes.join("; "),
        melnikov_length_bound,
    })
}
