//! Infinite subspaces of a good semigroup or ideal complement.
//!
//! A subspace is rendered as a point with `inf` at the unconstrained
//! coordinates; the finite coordinates form its pattern `U` and its dimension
//! is the number of `inf` entries. The conductor a subspace saturates at
//! depends on the ambient object, so the pattern is carried explicitly.

use thiserror::Error;

use crate::ideal::GoodIdeal;
use crate::lattice::{ExtPoint, IndexSet};
use crate::levels::LevelPartition;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("{0} is not in the ideal complement")]
    NotInComplement(ExtPoint),
    #[error("subspace sum requires equal finite patterns")]
    MixedPatterns,
    #[error("coordinate {0} is not in the subspace pattern")]
    IndexNotInPattern(usize),
}

/// A `U`-subspace in representative form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subspace {
    point: ExtPoint,
    pattern: IndexSet,
}

impl Subspace {
    /// Wraps a representative point; the pattern is its finite coordinates.
    pub fn from_point(point: ExtPoint) -> Subspace {
        let pattern = point.finite_pattern();
        Subspace { point, pattern }
    }

    pub fn point(&self) -> &ExtPoint {
        &self.point
    }

    /// The set `U` of finite coordinates.
    pub fn pattern(&self) -> IndexSet {
        self.pattern
    }

    /// `d − |U|`, the number of free directions.
    pub fn dimension(&self) -> usize {
        self.point.dim() - self.pattern.len()
    }

    /// Componentwise meet; the result is an `(U ∪ V)`-subspace.
    pub fn meet(&self, other: &Subspace) -> Subspace {
        Subspace::from_point(self.point.meet(&other.point))
    }

    /// Sum of two subspaces with the same pattern: coordinate sums on `U`,
    /// the conductor value (rendered `inf`) elsewhere.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        if self.pattern != other.pattern {
            return Err(SubspaceError::MixedPatterns);
        }
        Ok(Subspace::from_point(self.point.add(&other.point)))
    }

    /// Point-set containment between subspaces saturating at `conductor`:
    /// every point of `other` lies in `self`. A free direction of `self`
    /// starts at the conductor value, so a finite coordinate of `other`
    /// there must reach it.
    pub fn contains_in(&self, other: &Subspace, conductor: &ExtPoint) -> bool {
        if !self.pattern.is_subset_of(&other.pattern) {
            return false;
        }
        for i in 0..self.point.dim() {
            let (s, o) = (self.point.coord(i), other.point.coord(i));
            if self.pattern.contains(i) {
                if s != o {
                    return false;
                }
            } else if other.pattern.contains(i) && o < conductor.coord(i) {
                return false;
            }
        }
        true
    }
}

/// The canonical representative of a complement element: truncate at `c_E`,
/// then mark every coordinate that reached it as `inf`. Idempotent, and
/// defined exactly on `S ∖ E`.
pub fn canonical_representative(e: &GoodIdeal, a: &ExtPoint) -> Result<ExtPoint, SubspaceError> {
    let base = a.meet(e.conductor());
    if !e.parent().contains(&base) || e.contains(&base) {
        return Err(SubspaceError::NotInComplement(a.clone()));
    }
    Ok(base.saturate_at(e.conductor()))
}

/// All representatives of the level `A_i` as subspaces, finite points
/// included with dimension zero. Sorted by descending dimension, then
/// lexicographically.
pub fn subspaces_of_level(p: &LevelPartition, i: usize) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = p
        .level(i)
        .iter()
        .cloned()
        .map(Subspace::from_point)
        .collect();
    out.sort_by(|a, b| {
        b.dimension()
            .cmp(&a.dimension())
            .then_with(|| a.point.cmp(&b.point))
    });
    out
}

/// Representatives of the same pattern as `x` sharing its `k`-th coordinate.
pub fn h_k_set(reps: &[ExtPoint], x: &Subspace, k: usize) -> Result<Vec<Subspace>, SubspaceError> {
    if !x.pattern().contains(k) {
        return Err(SubspaceError::IndexNotInPattern(k));
    }
    let mut out: Vec<Subspace> = reps
        .iter()
        .filter(|r| r.finite_pattern() == x.pattern() && r.coord(k) == x.point().coord(k))
        .cloned()
        .map(Subspace::from_point)
        .collect();
    out.sort();
    Ok(out)
}

/// Outcome of checking the level-count and dimension-occupancy statement for
/// the Apéry partition of `ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainTheoremReport {
    pub n: usize,
    pub expected: u64,
    /// First `(k, level)` where occupancy disagrees with the threshold,
    /// one-based.
    pub first_violation: Option<(usize, usize)>,
    pub pass: bool,
}

impl MainTheoremReport {
    pub fn render(&self) -> String {
        let mut line = format!(
            "N={} expected={} {}",
            self.n,
            self.expected,
            if self.pass { "PASS" } else { "FAIL" }
        );
        if let Some((k, i)) = self.first_violation {
            line.push_str(&format!(" first-violation=(k={k},i={i})"));
        }
        line
    }
}

/// Verifies, on a partition computed from the principal ideal `ω + S`, that
/// the level count equals the coordinate sum of `ω` and that the level `A_i`
/// contains a subspace of dimension `d − k` exactly when `i ≥ N − s_k + 1`,
/// where `s_k` sums the `k` largest coordinates of `ω`.
pub fn theorem_main_check(p: &LevelPartition, omega: &ExtPoint) -> MainTheoremReport {
    let d = p.dim();
    let mut w: Vec<u64> = omega
        .coords()
        .iter()
        .map(|c| c.finite().expect("ω must be fully finite"))
        .collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    let expected: u64 = w.iter().sum();
    let n = p.n_levels();
    let mut pass = n as u64 == expected;

    let mut first_violation = None;
    let mut s_k = 0u64;
    'outer: for (k, wk) in w.iter().enumerate() {
        s_k += wk;
        let min_dim = d - (k + 1);
        for i in 1..=n {
            let occupied = p.level(i).iter().any(|r| r.inf_pattern().len() >= min_dim);
            let threshold = (n as i64) - (s_k as i64) + 1;
            let wanted = (i as i64) >= threshold;
            if occupied != wanted {
                first_violation = Some((k + 1, i));
                pass = false;
                break 'outer;
            }
        }
    }
    MainTheoremReport {
        n,
        expected,
        first_violation,
        pass,
    }
}
