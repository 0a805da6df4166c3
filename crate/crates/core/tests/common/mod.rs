//! Shared fixtures and enumeration helpers for the integration suites.
//! Not every test target uses every helper.
#![allow(dead_code)]


use goodsemi::semigroup::grid_points;
use goodsemi::*;

pub const EX3_FILE: &str = include_str!("../data/branches3.gs");

pub fn pt(s: &str) -> ExtPoint {
    s.parse().unwrap()
}

pub fn ex3() -> GoodSemigroup {
    GoodSemigroup::from_file_str(EX3_FILE).unwrap()
}

pub fn add_scalar(p: &ExtPoint, k: u64) -> ExtPoint {
    let coords: Vec<u64> = p.coords().iter().map(|c| c.finite().unwrap() + k).collect();
    ExtPoint::from_finite(&coords)
}

/// `S ∩ [0, c_E + extra]`.
pub fn s_box(s: &GoodSemigroup, e: &GoodIdeal, extra: u64) -> Vec<ExtPoint> {
    s.elements_up_to(&add_scalar(e.conductor(), extra))
}

/// `E ∩ [0, c_E + extra]`.
pub fn e_box(e: &GoodIdeal, extra: u64) -> Vec<ExtPoint> {
    e.elements_up_to(&add_scalar(e.conductor(), extra))
}

/// `A ∩ [0, c_E + extra]`.
pub fn a_box(s: &GoodSemigroup, e: &GoodIdeal, extra: u64) -> Vec<ExtPoint> {
    grid_points(&add_scalar(e.conductor(), extra))
        .into_iter()
        .filter(|x| s.contains(x) && !e.contains(x))
        .collect()
}

/// Per-mask inhabitation of the open and closed Δ sets of `center` against
/// `reference`: `open[m]` says some reference point sits above the center
/// with agreement set exactly `m`; `closed[f]` allows agreement supersets.
pub fn delta_bitmaps(reference: &[ExtPoint], center: &ExtPoint) -> (Vec<bool>, Vec<bool>) {
    let d = center.dim();
    let full = (1usize << d) - 1;
    let mut open = vec![false; full + 1];
    for q in reference {
        if q == center || !center.leq(q) {
            continue;
        }
        let mut m = 0usize;
        for i in 0..d {
            if q.coord(i) == center.coord(i) {
                m |= 1 << i;
            }
        }
        open[m] = true;
    }
    let closed: Vec<bool> = (0..=full)
        .map(|f| (0..=full).any(|m| m & f == f && open[m]))
        .collect();
    (open, closed)
}

/// `≤`-minimal elements of `Δ_F(center)` within `reference`.
pub fn delta_minimals(reference: &[ExtPoint], f: IndexSet, center: &ExtPoint) -> Vec<ExtPoint> {
    let hits = delta(reference, f, center, false);
    hits.iter()
        .filter(|p| !hits.iter().any(|q| q != *p && q.leq(p)))
        .cloned()
        .collect()
}

/// True when some member strictly between `a` and `b` exists.
pub fn strictly_between(member: &dyn Fn(&ExtPoint) -> bool, a: &ExtPoint, b: &ExtPoint) -> bool {
    let diff = match b.checked_sub(a) {
        Some(d) => d,
        None => return false,
    };
    for off in grid_points(&diff) {
        let x = a.add(&off);
        if x != *a && x != *b && member(&x) {
            return true;
        }
    }
    false
}

/// Deterministic ω choices: spread picks over the nonzero small elements,
/// topped up with members beyond the conductor when the small set is tiny.
pub fn omegas(s: &GoodSemigroup, k: usize) -> Vec<ExtPoint> {
    let zero = ExtPoint::zero(s.dim());
    let nonzero: Vec<ExtPoint> = s
        .small_elements()
        .iter()
        .filter(|p| **p != zero)
        .cloned()
        .collect();
    let mut out = Vec::new();
    for j in 0..k.min(nonzero.len()) {
        let idx = if k <= 1 {
            0
        } else {
            j * (nonzero.len() - 1) / (k - 1)
        };
        out.push(nonzero[idx.min(nonzero.len() - 1)].clone());
    }
    out.sort();
    out.dedup();
    top_up_omegas(s, &mut out, k);
    out
}

/// The lexicographically smallest nonzero generators keep the oracle grids
/// small; topped up the same way for degenerate instances.
pub fn smallest_omegas(s: &GoodSemigroup, k: usize) -> Vec<ExtPoint> {
    let zero = ExtPoint::zero(s.dim());
    let mut out: Vec<ExtPoint> = s
        .small_elements()
        .iter()
        .filter(|p| **p != zero)
        .take(k)
        .cloned()
        .collect();
    top_up_omegas(s, &mut out, k);
    out
}

fn top_up_omegas(s: &GoodSemigroup, out: &mut Vec<ExtPoint>, k: usize) {
    let d = s.dim();
    let mut extra = 0usize;
    while out.len() < k && extra <= d {
        let mut coords: Vec<u64> = s
            .conductor()
            .coords()
            .iter()
            .map(|c| c.finite().unwrap() + 1)
            .collect();
        if extra > 0 {
            coords[extra - 1] += 1;
        }
        let candidate = ExtPoint::from_finite(&coords);
        if !out.contains(&candidate) {
            out.push(candidate);
        }
        extra += 1;
    }
    out.sort();
    out.dedup();
}

/// Hand-picked plus generated instances for the exhaustive invariant suite.
pub fn small_corpus() -> Vec<GoodSemigroup> {
    let mut out = vec![
        ex3(),
        GoodSemigroup::from_small_elements(2, vec![pt("(0,0)")]).unwrap(),
        product_semigroup(&[vec![1], vec![1]]).unwrap(),
        product_semigroup(&[vec![1], vec![1, 2, 5]]).unwrap(),
        product_semigroup(&[vec![1, 2], vec![1]]).unwrap(),
    ];
    for (seed, dim, count, kind, cap) in [
        (11u64, 2usize, 4usize, GeneratorKind::Product, 8u64),
        (12, 2, 6, GeneratorKind::ClosureRepair, 7),
        (13, 3, 3, GeneratorKind::Product, 4),
        (14, 3, 5, GeneratorKind::ClosureRepair, 4),
    ] {
        let spec = CorpusSpec {
            seed,
            dim,
            count,
            kind,
            caps: vec![cap; dim],
        };
        out.extend(generate_corpus(&spec).expect("corpus generation"));
    }
    out
}

/// The large corpus behind the sweep criteria: ≥ 100 validated instances in
/// dimensions 2 and 3 with conductor coordinates ≤ 12.
pub fn full_corpus() -> Vec<GoodSemigroup> {
    let mut out = Vec::new();
    for (seed, dim, count, kind, cap) in [
        (21u64, 2usize, 33usize, GeneratorKind::ClosureRepair, 10u64),
        (22, 2, 30, GeneratorKind::Product, 10),
        (23, 3, 22, GeneratorKind::ClosureRepair, 4),
        (24, 3, 20, GeneratorKind::Product, 4),
    ] {
        let spec = CorpusSpec {
            seed,
            dim,
            count,
            kind,
            caps: vec![cap; dim],
        };
        out.extend(generate_corpus(&spec).expect("corpus generation"));
    }
    out
}
