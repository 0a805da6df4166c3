//! Brute-force oracles and corpus generation.
//!
//! Everything here exists to check the main code path from a second angle:
//! the level partition is recomputed point by point on a finite padded grid
//! with the plain order and the literal complete-infimum definition, the
//! semigroup axioms are re-verified by direct box enumeration, and product /
//! randomly repaired instances supply test subjects whose membership has an
//! independent description.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ideal::GoodIdeal;
use crate::lattice::{ExtNat, ExtPoint};
use crate::semigroup::{grid_points, GoodSemigroup};

/// Default cell cap for grid construction.
pub const DEFAULT_CELL_CAP: usize = 4_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid of {cells} cells exceeds the cap of {cap}")]
    GridTooLarge { cells: usize, cap: usize },
    #[error("invalid numerical semigroup: {0}")]
    InvalidNumericalSemigroup(String),
    #[error("random generation exhausted its retry budget")]
    GenerationExhausted,
}

/// Finite membership tables for `S` and `E` over the box `[0, bound]`.
pub struct PaddedGrid {
    bound: ExtPoint,
    dims: Vec<usize>,
    strides: Vec<usize>,
    in_s: Vec<bool>,
    in_e: Vec<bool>,
}

impl PaddedGrid {
    pub fn new(
        s: &GoodSemigroup,
        e: &GoodIdeal,
        padding: &[u64],
        cap: usize,
    ) -> Result<PaddedGrid, OracleError> {
        assert_eq!(padding.len(), s.dim());
        assert!(
            padding.iter().all(|&p| p >= 1),
            "padding must be ≥ 1 per axis"
        );
        let bound = ExtPoint::new(
            e.conductor()
                .coords()
                .iter()
                .zip(padding)
                .map(|(c, p)| ExtNat::Fin(c.finite().unwrap() + p))
                .collect(),
        );
        let dims: Vec<usize> = bound
            .coords()
            .iter()
            .map(|c| c.finite().unwrap() as usize + 1)
            .collect();
        let cells: usize = dims.iter().product();
        if cells > cap {
            return Err(OracleError::GridTooLarge { cells, cap });
        }
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut in_s = vec![false; cells];
        let mut in_e = vec![false; cells];
        for (idx, p) in grid_points(&bound).into_iter().enumerate() {
            in_s[idx] = s.contains(&p);
            in_e[idx] = e.contains(&p);
        }
        Ok(PaddedGrid {
            bound,
            dims,
            strides,
            in_s,
            in_e,
        })
    }

    pub fn bound(&self) -> &ExtPoint {
        &self.bound
    }

    pub fn cells(&self) -> usize {
        self.in_s.len()
    }

    fn index(&self, p: &ExtPoint) -> usize {
        p.coords()
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| c.finite().unwrap() as usize * s)
            .sum()
    }

    pub fn member_s(&self, p: &ExtPoint) -> bool {
        self.in_s[self.index(p)]
    }

    pub fn member_e(&self, p: &ExtPoint) -> bool {
        self.in_e[self.index(p)]
    }
}

/// Levels of the grid points of `A`, computed by the literal peeling
/// definition with the plain strict order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPartition {
    bound: ExtPoint,
    levels: Vec<Vec<ExtPoint>>,
}

impl GridPartition {
    pub fn bound(&self) -> &ExtPoint {
        &self.bound
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<ExtPoint>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &[ExtPoint] {
        &self.levels[i - 1]
    }

    pub fn level_of(&self, p: &ExtPoint) -> Option<usize> {
        for (k, level) in self.levels.iter().enumerate() {
            if level.binary_search(p).is_ok() {
                return Some(k + 1);
            }
        }
        None
    }

    /// Per-level points inside `[0, gamma]`; trailing levels may be empty.
    pub fn interior_levels(&self, gamma: &ExtPoint) -> Vec<Vec<ExtPoint>> {
        self.levels
            .iter()
            .map(|l| l.iter().filter(|p| p.leq(gamma)).cloned().collect())
            .collect()
    }
}

/// Runs the full peeling iteration on `A ∩ [0, c_E + padding]` with plain
/// domination and the literal complete-infimum search.
pub fn brute_force_partition(
    s: &GoodSemigroup,
    e: &GoodIdeal,
    padding: &[u64],
) -> Result<GridPartition, OracleError> {
    brute_force_partition_with_cap(s, e, padding, DEFAULT_CELL_CAP)
}

pub fn brute_force_partition_with_cap(
    s: &GoodSemigroup,
    e: &GoodIdeal,
    padding: &[u64],
    cap: usize,
) -> Result<GridPartition, OracleError> {
    let grid = PaddedGrid::new(s, e, padding, cap)?;
    let d = s.dim();
    let cells = grid.cells();
    let points = grid_points(grid.bound());
    let mut alive: Vec<bool> = (0..cells).map(|i| grid.in_s[i] && !grid.in_e[i]).collect();
    let mut layer_of: Vec<usize> = vec![0; cells];
    let mut n_alive = alive.iter().filter(|&&a| a).count();
    let mut layer = 0usize;
    let diag: usize = grid.strides.iter().sum();

    while n_alive > 0 {
        layer += 1;
        if layer > cells + 1 {
            unreachable!("peeling failed to terminate");
        }
        // Count of alive points in the closed up-set of each cell.
        let mut cnt: Vec<u32> = alive.iter().map(|&a| a as u32).collect();
        for axis in 0..d {
            let stride = grid.strides[axis];
            let width = grid.dims[axis];
            for idx in (0..cells).rev() {
                let pos = idx / stride % width;
                if pos + 1 < width {
                    cnt[idx] += cnt[idx + stride];
                }
            }
        }
        let on_boundary = |idx: usize| {
            (0..d).any(|axis| idx / grid.strides[axis] % grid.dims[axis] + 1 == grid.dims[axis])
        };
        let maximal: Vec<usize> = (0..cells)
            .filter(|&idx| alive[idx] && (on_boundary(idx) || cnt[idx + diag] == 0))
            .collect();
        let b_points: Vec<&ExtPoint> = maximal.iter().map(|&i| &points[i]).collect();
        let mut removed = Vec::new();
        for &idx in &maximal {
            if !plain_complete_infimum(&points[idx], &b_points) {
                removed.push(idx);
            }
        }
        assert!(!removed.is_empty(), "a maximal layer always loses its top");
        for idx in removed {
            alive[idx] = false;
            layer_of[idx] = layer;
            n_alive -= 1;
        }
    }

    let n = layer;
    let mut levels: Vec<Vec<ExtPoint>> = vec![Vec::new(); n];
    for (idx, &l) in layer_of.iter().enumerate() {
        if l > 0 {
            levels[n - l].push(points[idx].clone());
        }
    }
    for level in &mut levels {
        level.sort();
    }
    Ok(GridPartition {
        bound: grid.bound().clone(),
        levels,
    })
}

/// Literal complete-infimum test on plain points: some family of candidates
/// above the center, one per distinct agreement set, pairwise meeting back to
/// the center with nothing shared by all agreement sets. Candidate agreement
/// complements must tile the full index set, and the chosen points are
/// re-verified numerically.
fn plain_complete_infimum(center: &ExtPoint, b_points: &[&ExtPoint]) -> bool {
    let d = center.dim();
    let full: u32 = (1 << d) - 1;
    let mut reps: Vec<Option<&ExtPoint>> = vec![None; (full + 1) as usize];
    let mut blocks: Vec<u32> = Vec::new();
    for q in b_points {
        if *q == center || !center.leq(q) {
            continue;
        }
        let mut eq = 0u32;
        for i in 0..d {
            if q.coord(i) == center.coord(i) {
                eq |= 1 << i;
            }
        }
        if eq == 0 || eq == full {
            continue;
        }
        let block = full & !eq;
        if reps[block as usize].is_none() {
            reps[block as usize] = Some(q);
            blocks.push(block);
        }
    }
    blocks.sort_unstable();

    fn cover(mask: u32, blocks: &[u32], chosen: &mut Vec<u32>, found: &mut Option<Vec<u32>>) {
        if found.is_some() {
            return;
        }
        if mask == 0 {
            *found = Some(chosen.clone());
            return;
        }
        let low = mask & mask.wrapping_neg();
        for &b in blocks {
            if b & low != 0 && b & !mask == 0 {
                chosen.push(b);
                cover(mask & !b, blocks, chosen, found);
                chosen.pop();
                if found.is_some() {
                    return;
                }
            }
        }
    }

    let mut found = None;
    cover(full, &blocks, &mut Vec::new(), &mut found);
    match found {
        None => false,
        Some(chosen) => {
            assert!(chosen.len() >= 2);
            for (j, &bj) in chosen.iter().enumerate() {
                for &bk in chosen.iter().skip(j + 1) {
                    let (pj, pk) = (reps[bj as usize].unwrap(), reps[bk as usize].unwrap());
                    assert_eq!(pj.meet(pk), *center, "tiling violates the meet law");
                }
            }
            true
        }
    }
}

/// Checks level constancy along every saturated representative direction.
///
/// The grid peeling distorts the last `N − ℓ` cells before the artificial
/// boundary (each cell there peels one iteration early, a staircase up to
/// `N` at the edge), so a representative of level `ℓ` is checked on the
/// cells at least `N − ℓ` away from the boundary in every saturated
/// direction. Returns one message per violation.
pub fn check_ray_constancy(
    grid: &GridPartition,
    partition: &crate::levels::LevelPartition,
) -> Vec<String> {
    let c_e = partition.conductor();
    let n = partition.n_levels();
    let mut msgs = Vec::new();
    for (k, level) in partition.levels().iter().enumerate() {
        let margin = (n - (k + 1)) as u64;
        for rep in level.iter().filter(|r| !r.is_finite()) {
            let base = rep.meet(c_e);
            let mut cells = vec![base.clone()];
            for i in 0..rep.dim() {
                if rep.coord(i).is_finite() {
                    continue;
                }
                let lo = base.coord(i).finite().unwrap();
                let hi = grid
                    .bound()
                    .coord(i)
                    .finite()
                    .unwrap()
                    .saturating_sub(margin);
                if hi < lo {
                    // The staircase swallows the whole ray at this padding.
                    cells.clear();
                    break;
                }
                let mut next = Vec::new();
                for cell in &cells {
                    for v in lo..=hi {
                        let mut coords: Vec<u64> =
                            cell.coords().iter().map(|c| c.finite().unwrap()).collect();
                        coords[i] = v;
                        next.push(ExtPoint::from_finite(&coords));
                    }
                }
                cells = next;
            }
            for cell in cells {
                if grid.level_of(&cell) != Some(k + 1) {
                    msgs.push(format!(
                        "{rep} should hold level {} at {cell}, grid says {:?}",
                        k + 1,
                        grid.level_of(&cell)
                    ));
                }
            }
        }
    }
    msgs
}

/// Gaps of the numerical semigroup generated by `gens`, or `None` when the
/// generators do not yield a cofinite set.
pub fn numerical_semigroup_gaps(gens: &[u64]) -> Option<Vec<u64>> {
    let gens: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
    if gens.is_empty() {
        return None;
    }
    let min = *gens.iter().min().unwrap();
    let max = *gens.iter().max().unwrap();
    if min == 1 {
        return Some(Vec::new());
    }
    let bound = (min * max + max + 1) as usize;
    let mut reach = vec![false; bound + 1];
    reach[0] = true;
    for n in 1..=bound {
        reach[n] = gens
            .iter()
            .any(|&g| (g as usize) <= n && reach[n - g as usize]);
    }
    // Conductor: first point opening a run of `min` consecutive members.
    let run = min as usize;
    let conductor = (0..=bound.saturating_sub(run)).find(|&n| (n..n + run).all(|m| reach[m]))?;
    Some(
        (1..conductor as u64)
            .filter(|&n| !reach[n as usize])
            .collect(),
    )
}

/// The direct product of numerical semigroups given by their gap lists,
/// truncated at the componentwise conductor and fully validated.
pub fn product_semigroup(gap_lists: &[Vec<u64>]) -> Result<GoodSemigroup, OracleError> {
    let dim = gap_lists.len();
    let invalid = |msg: String| OracleError::InvalidNumericalSemigroup(msg);
    if dim == 0 || dim > crate::lattice::MAX_DIM {
        return Err(invalid(format!("{dim} axes")));
    }
    let mut axes: Vec<Vec<u64>> = Vec::new();
    for gaps in gap_lists {
        let mut gaps = gaps.clone();
        gaps.sort_unstable();
        gaps.dedup();
        if gaps.contains(&0) {
            return Err(invalid("0 cannot be a gap".into()));
        }
        let c = gaps.last().map(|&g| g + 1).unwrap_or(0);
        for a in 1..=c {
            for b in a..=c {
                if a + b <= c && !gaps.contains(&a) && !gaps.contains(&b) && gaps.contains(&(a + b))
                {
                    return Err(invalid(format!("not closed: {a} + {b}")));
                }
            }
        }
        axes.push((0..=c).filter(|n| !gaps.contains(n)).collect());
    }
    let mut smalls = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::new();
        for prefix in &smalls {
            for &v in axis {
                let mut p: Vec<u64> = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        smalls = next;
    }
    let elements: Vec<ExtPoint> = smalls.iter().map(|c| ExtPoint::from_finite(c)).collect();
    GoodSemigroup::from_small_elements(dim, elements)
        .map_err(|e| invalid(format!("product failed validation: {e}")))
}

/// Independent membership for product semigroups: componentwise gap check.
pub fn product_membership(gap_lists: &[Vec<u64>], x: &ExtPoint) -> bool {
    x.coords()
        .iter()
        .zip(gap_lists)
        .all(|(c, gaps)| c.finite().map(|v| !gaps.contains(&v)).unwrap_or(false))
}

/// How corpus instances are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Products of random numerical semigroups.
    Product,
    /// Random points closed under meet and truncated sum, with (G2) repaired
    /// by minimal insertions.
    ClosureRepair,
}

/// Deterministic corpus description: the same spec always reproduces the
/// same instances, bit for bit.
#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub seed: u64,
    pub dim: usize,
    pub count: usize,
    pub kind: GeneratorKind,
    /// Per-axis conductor caps.
    pub caps: Vec<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index as u64)))
}

/// One validated random instance; `index` selects the corpus member.
pub fn random_good_semigroup(
    spec: &CorpusSpec,
    index: usize,
) -> Result<GoodSemigroup, OracleError> {
    assert_eq!(spec.caps.len(), spec.dim);
    let mut rng = instance_rng(spec.seed, index);
    match spec.kind {
        GeneratorKind::Product => random_product(&mut rng, &spec.caps),
        GeneratorKind::ClosureRepair => random_closure_repair(&mut rng, &spec.caps),
    }
}

/// The whole corpus described by `spec`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<GoodSemigroup>, OracleError> {
    (0..spec.count)
        .map(|i| random_good_semigroup(spec, i))
        .collect()
}

fn random_product(rng: &mut ChaCha8Rng, caps: &[u64]) -> Result<GoodSemigroup, OracleError> {
    let mut gap_lists = Vec::new();
    for &cap in caps {
        let mut chosen: Option<Vec<u64>> = None;
        for _ in 0..64 {
            let k = rng.random_range(2..=3usize);
            let gens: Vec<u64> = (0..k)
                .map(|_| rng.random_range(2..=(cap.max(2) + 2)))
                .collect();
            if let Some(gaps) = numerical_semigroup_gaps(&gens) {
                let conductor = gaps.last().map(|&g| g + 1).unwrap_or(0);
                if conductor <= cap {
                    chosen = Some(gaps);
                    break;
                }
            }
        }
        gap_lists.push(chosen.unwrap_or_default());
    }
    product_semigroup(&gap_lists)
}

fn random_closure_repair(rng: &mut ChaCha8Rng, caps: &[u64]) -> Result<GoodSemigroup, OracleError> {
    let dim = caps.len();
    let cap_pt = ExtPoint::from_finite(caps);
    for _ in 0..40 {
        let mut set: BTreeSet<ExtPoint> = BTreeSet::new();
        set.insert(ExtPoint::zero(dim));
        set.insert(cap_pt.clone());
        let samples = rng.random_range(2..=4usize);
        for _ in 0..samples {
            let coords: Vec<u64> = caps.iter().map(|&c| rng.random_range(0..=c)).collect();
            set.insert(ExtPoint::from_finite(&coords));
        }

        // Close under meet, truncated sum and minimal (G2) insertions.
        loop {
            let items: Vec<ExtPoint> = set.iter().cloned().collect();
            let before = set.len();
            for a in &items {
                for b in &items {
                    set.insert(a.meet(b));
                    set.insert(a.add(b).meet(&cap_pt));
                }
            }
            let items: Vec<ExtPoint> = set.iter().cloned().collect();
            for a in &items {
                for b in &items {
                    if a == b {
                        continue;
                    }
                    for i in 0..dim {
                        if a.coord(i) != b.coord(i) {
                            continue;
                        }
                        if crate::semigroup::g2_witness_exists(&items, &cap_pt, a, b, i) {
                            continue;
                        }
                        let coords: Vec<ExtNat> = caps
                            .iter()
                            .enumerate()
                            .map(|(j, &cap)| {
                                if j == i {
                                    let v = a.coord(j).finite().unwrap();
                                    ExtNat::Fin((v + 1).min(cap))
                                } else {
                                    a.coord(j).min(b.coord(j))
                                }
                            })
                            .collect();
                        set.insert(ExtPoint::new(coords));
                    }
                }
            }
            if set.len() == before {
                break;
            }
        }

        // Tighten to the minimal conductor inside the box and retruncate.
        let cells = grid_points(&cap_pt);
        let member: Vec<bool> = cells.iter().map(|x| set.contains(x)).collect();
        let mut full = member.clone();
        for (idx, x) in cells.iter().enumerate().rev() {
            if !full[idx] {
                continue;
            }
            for i in 0..dim {
                if x.coord(i) < cap_pt.coord(i) {
                    let mut up = x.coords().to_vec();
                    up[i] = ExtNat::Fin(x.coord(i).finite().unwrap() + 1);
                    if !full[grid_offset(&cap_pt, &ExtPoint::new(up))] {
                        full[idx] = false;
                        break;
                    }
                }
            }
        }
        let mut conductor = cap_pt.clone();
        for (idx, x) in cells.iter().enumerate() {
            if full[idx] {
                conductor = conductor.meet(x);
            }
        }
        if !full[grid_offset(&cap_pt, &conductor)] {
            continue; // incomparable minimal candidates; resample
        }
        let small: BTreeSet<ExtPoint> = set.iter().map(|x| x.meet(&conductor)).collect();
        if let Ok(s) = GoodSemigroup::from_small_elements(dim, small.into_iter().collect()) {
            return Ok(s);
        }
    }
    Err(OracleError::GenerationExhausted)
}

fn grid_offset(bound: &ExtPoint, x: &ExtPoint) -> usize {
    let mut idx = 0usize;
    for i in 0..bound.dim() {
        let width = bound.coord(i).finite().unwrap() as usize + 1;
        idx = idx * width + x.coord(i).finite().unwrap() as usize;
    }
    idx
}

/// Independent re-check of every construction axiom by direct enumeration.
/// Returns one message per violation; an empty list means the element set
/// presents a good semigroup.
pub fn axiom_scan(dim: usize, elements: &[ExtPoint]) -> Vec<String> {
    let mut set: Vec<ExtPoint> = elements.to_vec();
    set.sort();
    set.dedup();
    let mut msgs = Vec::new();
    if !set.contains(&ExtPoint::zero(dim)) {
        msgs.push("zero element missing".to_string());
    }
    let unique_max = set.iter().find(|c| set.iter().all(|s| s.leq(c))).cloned();
    let conductor = match unique_max {
        Some(c) => c,
        None => {
            msgs.push("no unique maximum".to_string());
            let mut coords = vec![0u64; dim];
            for p in &set {
                for (i, c) in coords.iter_mut().enumerate() {
                    *c = (*c).max(p.coord(i).finite().unwrap_or(0));
                }
            }
            ExtPoint::from_finite(&coords)
        }
    };
    let member = |x: &ExtPoint| set.binary_search(&x.meet(&conductor)).is_ok();

    for a in &set {
        for b in &set {
            if !member(&a.meet(b)) {
                msgs.push(format!("meet escapes: {a} ∧ {b}"));
            }
            if !member(&a.add(b)) {
                msgs.push(format!("sum escapes: {a} + {b}"));
            }
        }
    }

    let one = ExtPoint::from_finite(&vec![1; dim]);
    let search_box: Vec<ExtPoint> = grid_points(&conductor.add(&one))
        .into_iter()
        .filter(|x| member(x))
        .collect();
    for a in &set {
        for b in &set {
            if a == b {
                continue;
            }
            for i in 0..dim {
                if a.coord(i) != b.coord(i) {
                    continue;
                }
                let ok = search_box.iter().any(|e| {
                    (0..dim).all(|j| {
                        if j == i {
                            e.coord(j) > a.coord(j)
                        } else if a.coord(j) != b.coord(j) {
                            e.coord(j) == a.coord(j).min(b.coord(j))
                        } else {
                            e.coord(j) >= a.coord(j)
                        }
                    })
                });
                if !ok {
                    msgs.push(format!(
                        "lifting fails for {a}, {b} at coordinate {}",
                        i + 1
                    ));
                }
            }
        }
    }

    for i in 0..dim {
        if let Some(v) = conductor.coord(i).finite() {
            if v >= 1 {
                let mut coords = conductor.coords().to_vec();
                coords[i] = ExtNat::Fin(v - 1);
                if set.contains(&ExtPoint::new(coords)) {
                    msgs.push(format!("conductor not minimal at coordinate {}", i + 1));
                }
            }
        }
    }
    msgs
}
