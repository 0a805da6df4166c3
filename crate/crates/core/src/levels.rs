//! The level partition of an ideal complement.
//!
//! The partition peels the complement from the top: take the elements that
//! are maximal for strict domination, keep temporarily those that are a
//! complete infimum of other maximal elements, remove the rest, repeat, then
//! number the removed layers bottom-up. The computation runs on the finite
//! canonical representatives; a representative with `inf` coordinates stands
//! for a whole subspace, and domination and part candidacy between
//! representatives are defined so that they hold for the underlying points
//! exactly when they hold for the representatives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::ideal::{ComplementSet, GoodIdeal, IdealError};
use crate::lattice::{ExtNat, ExtPoint, IndexSet};
use crate::semigroup::GoodSemigroup;

#[derive(Debug, Error)]
pub enum LevelsError {
    #[error("{0} is not in the ideal complement")]
    NotInComplement(ExtPoint),
    #[error("level iteration failed to make progress; extended-order invariant broken")]
    InternalInconsistency,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// The ordered levels `A_1, …, A_N` of a complement, as canonical
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    dim: usize,
    c_e: ExtPoint,
    levels: Vec<Vec<ExtPoint>>,
}

impl LevelPartition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The ideal conductor the representatives saturate at.
    pub fn conductor(&self) -> &ExtPoint {
        &self.c_e
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// All levels, `levels()[0]` being `A_1`.
    pub fn levels(&self) -> &[Vec<ExtPoint>] {
        &self.levels
    }

    /// The level `A_i` (one-based).
    pub fn level(&self, i: usize) -> &[ExtPoint] {
        &self.levels[i - 1]
    }

    /// The one-based level index of an arbitrary complement element, reduced
    /// to its canonical representative first.
    pub fn level_of(&self, a: &ExtPoint) -> Result<usize, LevelsError> {
        let rep = canonical_rep(&self.c_e, a);
        for (k, level) in self.levels.iter().enumerate() {
            if level.binary_search(&rep).is_ok() {
                return Ok(k + 1);
            }
        }
        Err(LevelsError::NotInComplement(a.clone()))
    }

    /// Golden-file rendering: per level a `A<i> (<count>)` header followed by
    /// the sorted representatives.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, level) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "A{} ({})", k + 1, level.len());
            for p in level {
                let _ = writeln!(out, "{p}");
            }
        }
        out
    }
}

/// Truncate at `c_e` and replace saturated coordinates by `inf`.
pub(crate) fn canonical_rep(c_e: &ExtPoint, a: &ExtPoint) -> ExtPoint {
    a.meet(c_e).saturate_at(c_e)
}

/// Runs the peeling iteration on the canonical representatives of `a`.
pub fn compute_levels(a: &ComplementSet, e: &GoodIdeal) -> Result<LevelPartition, LevelsError> {
    if a.conductor() != e.conductor() || a.dim() != e.dim() {
        return Err(LevelsError::PreconditionViolated(
            "complement does not belong to the ideal".into(),
        ));
    }
    let mut remaining: Vec<ExtPoint> = a.reps().to_vec();
    let cap = remaining.len() + 1;
    let mut layers: Vec<Vec<ExtPoint>> = Vec::new();
    while !remaining.is_empty() {
        if layers.len() >= cap {
            return Err(LevelsError::InternalInconsistency);
        }
        let maximal: Vec<ExtPoint> = remaining
            .iter()
            .filter(|p| !remaining.iter().any(|q| q.dominates(p)))
            .cloned()
            .collect();
        let removed: Vec<ExtPoint> = maximal
            .iter()
            .filter(|p| complete_infimum_witness(&maximal, p).is_none())
            .cloned()
            .collect();
        if removed.is_empty() {
            return Err(LevelsError::InternalInconsistency);
        }
        remaining.retain(|p| removed.binary_search(p).is_err());
        layers.push(removed);
    }
    layers.reverse();
    Ok(LevelPartition {
        dim: a.dim(),
        c_e: a.conductor().clone(),
        levels: layers,
    })
}

/// The Apéry partition of `S` with respect to `ω`: the levels of the
/// complement of the principal ideal `ω + S`.
pub fn apery(s: &GoodSemigroup, omega: &ExtPoint) -> Result<LevelPartition, LevelsError> {
    let e = GoodIdeal::principal(s, omega)?;
    compute_levels(&e.complement(), &e)
}

/// A decomposition of `center` as a complete infimum: at least two parts,
/// each agreeing with the center exactly on its set `F_k`, pairwise meeting
/// back to the center, with `⋂ F_k = ∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteInfimumWitness {
    pub center: ExtPoint,
    pub parts: Vec<(ExtPoint, IndexSet)>,
}

impl CompleteInfimumWitness {
    /// Checks every condition of the decomposition against `reference`.
    /// Between representatives an `inf` coordinate of the center is matched
    /// by an `inf` coordinate of the part, standing for points of the part
    /// subspace chosen level with or strictly above the center point.
    pub fn verify(&self, reference: &[ExtPoint]) -> bool {
        let d = self.center.dim();
        if self.parts.len() < 2 {
            return false;
        }
        let mut inter = IndexSet::full(d);
        for (p, f) in &self.parts {
            if !reference.contains(p) {
                return false;
            }
            if f.is_empty() || f.is_full() {
                return false;
            }
            for i in 0..d {
                let (pi, ci) = (p.coord(i), self.center.coord(i));
                if f.contains(i) {
                    if pi != ci {
                        return false;
                    }
                } else {
                    match (pi, ci) {
                        (ExtNat::Inf, _) => {}
                        (ExtNat::Fin(x), ExtNat::Fin(y)) if x > y => {}
                        _ => return false,
                    }
                }
            }
            inter = inter.intersection(f);
        }
        for (j, (pj, fj)) in self.parts.iter().enumerate() {
            for (pk, fk) in self.parts.iter().skip(j + 1) {
                if !fj.union(fk).is_full() {
                    return false;
                }
                if pj.meet(pk) != self.center {
                    return false;
                }
            }
        }
        inter.is_empty()
    }
}

/// The coordinates of `center` (restricted to its finite pattern) that a
/// candidate part strictly exceeds; `None` when the candidate cannot sit
/// weakly above the center at all.
fn part_base(center: &ExtPoint, cand: &ExtPoint) -> Option<u32> {
    let mut base = 0u32;
    for i in 0..center.dim() {
        match (cand.coord(i), center.coord(i)) {
            (ExtNat::Fin(s), ExtNat::Fin(r)) => {
                if s < r {
                    return None;
                }
                if s > r {
                    base |= 1 << i;
                }
            }
            (ExtNat::Inf, ExtNat::Fin(_)) => base |= 1 << i,
            (ExtNat::Fin(_), ExtNat::Inf) => return None,
            (ExtNat::Inf, ExtNat::Inf) => {}
        }
    }
    Some(base)
}

/// Searches a complete-infimum decomposition of `center` with parts drawn
/// from `reference`. Deterministic: parts are scanned in sorted order and
/// the first partition found in ascending block order wins.
pub fn complete_infimum_witness(
    reference: &[ExtPoint],
    center: &ExtPoint,
) -> Option<CompleteInfimumWitness> {
    let d = center.dim();
    let w_mask = center.finite_pattern().bits();
    let inf_mask = IndexSet::full(d).bits() & !w_mask;
    let center_in_reference = reference.contains(center);

    // Group usable candidates by the exceeded-coordinate set; keep the
    // lexicographically first candidate of each group as the printed part.
    let mut groups: BTreeMap<u32, ExtPoint> = BTreeMap::new();
    let mut sorted: Vec<&ExtPoint> = reference.iter().collect();
    sorted.sort();
    sorted.dedup();
    for cand in sorted {
        if *cand == *center {
            continue;
        }
        if let Some(base) = part_base(center, cand) {
            if base != 0 {
                groups.entry(base).or_insert_with(|| cand.clone());
            }
        }
    }

    // A decomposition exists iff the finite pattern splits into at least two
    // candidate bases, or into one full base with the center's own subspace
    // providing the second part.
    let bases: Vec<u32> = groups.keys().copied().collect();
    let blocks = find_partition(w_mask, &bases)?;
    let own_allowed = inf_mask != 0 && center_in_reference;
    if blocks.len() == 1 && !own_allowed {
        return None;
    }

    let mut parts: Vec<(ExtPoint, IndexSet)> = Vec::new();
    let full = IndexSet::full(d).bits();
    if blocks.len() >= 2 {
        // Assign every inf coordinate of the center to the first block.
        for (k, b) in blocks.iter().enumerate() {
            let block_full = if k == 0 { b | inf_mask } else { *b };
            let f = IndexSet::from_bits(d, full & !block_full);
            parts.push((groups[b].clone(), f));
        }
    } else {
        // Single base covering the whole finite pattern: the second part is
        // a deeper point of the center's own subspace.
        let b = blocks[0];
        parts.push((groups[&b].clone(), IndexSet::from_bits(d, full & !b)));
        parts.push((center.clone(), IndexSet::from_bits(d, w_mask)));
    }
    let witness = CompleteInfimumWitness {
        center: center.clone(),
        parts,
    };
    debug_assert!(witness.verify(reference));
    Some(witness)
}

/// Splits `mask` into disjoint nonempty blocks drawn from `bases`. Prefers
/// more than one block; falls back to the single full-mask base. Returns
/// blocks in the order found (ascending by the bit they cover first).
fn find_partition(mask: u32, bases: &[u32]) -> Option<Vec<u32>> {
    fn rec(
        mask: u32,
        bases: &[u32],
        memo: &mut BTreeMap<u32, Option<Vec<u32>>>,
    ) -> Option<Vec<u32>> {
        if mask == 0 {
            return Some(Vec::new());
        }
        if let Some(hit) = memo.get(&mask) {
            return hit.clone();
        }
        let low = mask & mask.wrapping_neg();
        let mut found = None;
        for &b in bases {
            if b & low != 0 && b & !mask == 0 {
                if let Some(mut rest) = rec(mask & !b, bases, memo) {
                    let mut blocks = vec![b];
                    blocks.append(&mut rest);
                    found = Some(blocks);
                    break;
                }
            }
        }
        memo.insert(mask, found.clone());
        found
    }

    // Look for a ≥2-block split first: pick a proper first block containing
    // the lowest bit, then partition the rest.
    let mut memo = BTreeMap::new();
    let low = mask & mask.wrapping_neg();
    for &b in bases {
        if b & low != 0 && b & !mask == 0 && b != mask {
            if let Some(mut rest) = rec(mask & !b, bases, &mut memo) {
                let mut blocks = vec![b];
                blocks.append(&mut rest);
                return Some(blocks);
            }
        }
    }
    if bases.contains(&mask) {
        return Some(vec![mask]);
    }
    None
}

/// The constructive form of the (G2) decomposition: given `b ∈ Δ_F(a)` in
/// `reference`, expresses `a` as the complete infimum of `b` and one element
/// per maximal agreement set above the orthogonal of `F`.
pub fn propg2_decomposition(
    reference: &[ExtPoint],
    a: &ExtPoint,
    b: &ExtPoint,
) -> Result<CompleteInfimumWitness, LevelsError> {
    let d = a.dim();
    let precondition = |msg: &str| LevelsError::PreconditionViolated(msg.to_string());
    if !reference.contains(a) || !reference.contains(b) {
        return Err(precondition("both points must lie in the reference set"));
    }
    let f = a.agreement(b);
    if f.is_empty() || f.is_full() {
        return Err(precondition(
            "points must agree on a non-trivial coordinate set",
        ));
    }
    if !crate::lattice::in_delta(b, f, a, false) {
        return Err(precondition(
            "second point must strictly exceed the first off the agreement set",
        ));
    }
    let f_hat = f.orthogonal();

    // For each i in F, the maximal G with F̂ ⊆ G ⊆ I∖{i} whose Δ-set is
    // inhabited; it is the union of all inhabited ones.
    let mut parts: BTreeSet<(IndexSet, ExtPoint)> = BTreeSet::new();
    for i in f.iter() {
        let mut g_max: Option<IndexSet> = None;
        for extra in f.difference(&IndexSet::singleton(d, i)).subsets() {
            let g = f_hat.union(&extra);
            let hits = crate::lattice::delta(reference, g, a, false);
            if hits.is_empty() {
                continue;
            }
            g_max = Some(match g_max {
                None => g,
                Some(prev) => prev.union(&g),
            });
        }
        let g = g_max.ok_or_else(|| {
            precondition("no inhabited agreement set above the orthogonal; reference is not good")
        })?;
        let hits = crate::lattice::delta(reference, g, a, false);
        let witness = hits.first().ok_or_else(|| {
            precondition("maximal agreement sets are not union-closed; reference is not good")
        })?;
        parts.insert((g, witness.clone()));
    }

    let mut all_parts = vec![(b.clone(), f)];
    all_parts.extend(parts.into_iter().map(|(g, p)| (p, g)));
    let witness = CompleteInfimumWitness {
        center: a.clone(),
        parts: all_parts,
    };
    if !witness.verify(reference) {
        return Err(precondition(
            "decomposition does not verify; reference is not good",
        ));
    }
    Ok(witness)
}
