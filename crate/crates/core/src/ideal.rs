//! Good ideals of a good semigroup and the finite representative form of
//! their complements.
//!
//! An ideal is stored truncated at its conductor `c_E`; membership of any
//! point reduces to the truncated set. The complement `A = S ∖ E` is finite
//! once every coordinate that reaches `c_E` is replaced by `inf`: each such
//! representative stands for a whole subspace that lies level-constant
//! inside `A`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::lattice::{ExtNat, ExtPoint};
use crate::semigroup::{grid_points, GoodSemigroup};

/// Why a generator set fails to present a good ideal.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IdealViolation {
    #[error("E + S leaves the ideal: {e} + {s}")]
    NotClosed { e: ExtPoint, s: ExtPoint },
    #[error("(G1) fails in the ideal: {a} ∧ {b}")]
    G1 { a: ExtPoint, b: ExtPoint },
    #[error("(G2) fails in the ideal for {a}, {b} at coordinate {index}")]
    G2 {
        a: ExtPoint,
        b: ExtPoint,
        index: usize,
    },
    #[error("the ideal has incomparable minimal conductor candidates {a} and {b}")]
    ConductorNotUnique { a: ExtPoint, b: ExtPoint },
    #[error("ideal conductor is not minimal at coordinate {index}")]
    ConductorNotMinimal { index: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("generator {0} is not in the semigroup")]
    NotInSemigroup(ExtPoint),
    #[error("the zero element does not generate a proper ideal")]
    ZeroGenerator,
    #[error("at least one generator is required")]
    EmptyGenerators,
    #[error("the ideal is not proper")]
    NotProper,
    #[error("not a good ideal: {0}")]
    NotGood(IdealViolation),
}

/// A validated proper good ideal `E ⊆ S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodIdeal {
    parent: GoodSemigroup,
    generators: Vec<ExtPoint>,
    c_e: ExtPoint,
    gamma_e: ExtPoint,
    truncated: Vec<ExtPoint>,
}

impl GoodIdeal {
    /// The principal ideal `ω + S`. Its conductor is `c + ω` and goodness
    /// holds by construction; validation is re-run defensively anyway.
    pub fn principal(s: &GoodSemigroup, omega: &ExtPoint) -> Result<GoodIdeal, IdealError> {
        assert!(omega.is_finite(), "generators must be fully finite");
        if *omega == ExtPoint::zero(s.dim()) {
            return Err(IdealError::ZeroGenerator);
        }
        if !s.contains(omega) {
            return Err(IdealError::NotInSemigroup(omega.clone()));
        }
        let c_e = s.conductor().add(omega);
        let member = |x: &ExtPoint| {
            x.checked_sub(omega)
                .map(|y| s.contains(&y))
                .unwrap_or(false)
        };
        let truncated: Vec<ExtPoint> = grid_points(&c_e)
            .into_iter()
            .filter(|x| member(x))
            .collect();
        let ideal = GoodIdeal {
            parent: s.clone(),
            generators: vec![omega.clone()],
            gamma_e: sub_ones(&c_e),
            c_e,
            truncated,
        };
        debug_assert_eq!(ideal.validate(), None, "principal ideal failed validation");
        Ok(ideal)
    }

    /// Builds `E = ⋃ (g + S)` from finitely many generators and validates
    /// goodness. Unions of translates need not be good; failures are
    /// reported with a witness rather than repaired.
    pub fn from_generators(
        s: &GoodSemigroup,
        generators: &[ExtPoint],
    ) -> Result<GoodIdeal, IdealError> {
        if generators.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        let mut gens: Vec<ExtPoint> = generators.to_vec();
        gens.sort();
        gens.dedup();
        for g in &gens {
            assert!(g.is_finite(), "generators must be fully finite");
            if !s.contains(g) {
                return Err(IdealError::NotInSemigroup(g.clone()));
            }
            if *g == ExtPoint::zero(s.dim()) {
                return Err(IdealError::NotProper);
            }
        }
        let member = |x: &ExtPoint| {
            gens.iter()
                .any(|g| x.checked_sub(g).map(|y| s.contains(&y)).unwrap_or(false))
        };

        // Search the minimal conductor on a box reaching one past every
        // translate corner: membership is truncation-stable only beyond the
        // largest one, and the corner join is always cone-full.
        let dim = s.dim();
        let mut corner = gens[0].add(s.conductor());
        for g in &gens[1..] {
            corner = join(&corner, &g.add(s.conductor()));
        }
        let bound = add_scalar(&corner, 1);
        let cells = grid_points(&bound);
        let in_e: Vec<bool> = cells.iter().map(member).collect();
        let full = cone_full_table(&bound, &in_e);
        let mut minimal: Vec<ExtPoint> = Vec::new();
        for (idx, x) in cells.iter().enumerate() {
            if !full[idx] {
                continue;
            }
            let is_min = (0..dim).all(|i| match step_down(x, i) {
                Some(y) => !full[grid_index(&bound, &y)],
                None => true,
            });
            if is_min {
                minimal.push(x.clone());
            }
        }
        let c_e = match minimal.as_slice() {
            [c] => c.clone(),
            [a, b, ..] => {
                return Err(IdealError::NotGood(IdealViolation::ConductorNotUnique {
                    a: a.clone(),
                    b: b.clone(),
                }))
            }
            [] => unreachable!("the corner join is cone-full and in the box"),
        };

        let truncated: Vec<ExtPoint> = grid_points(&c_e)
            .into_iter()
            .filter(|x| member(x))
            .collect();
        let ideal = GoodIdeal {
            parent: s.clone(),
            generators: gens,
            gamma_e: sub_ones(&c_e),
            c_e,
            truncated,
        };
        if let Some(violation) = ideal.validate() {
            return Err(IdealError::NotGood(violation));
        }
        Ok(ideal)
    }

    pub fn parent(&self) -> &GoodSemigroup {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.parent.dim()
    }

    pub fn generators(&self) -> &[ExtPoint] {
        &self.generators
    }

    pub fn conductor(&self) -> &ExtPoint {
        &self.c_e
    }

    pub fn gamma(&self) -> &ExtPoint {
        &self.gamma_e
    }

    /// `E ∩ [0, c_E]`, sorted.
    pub fn truncated_elements(&self) -> &[ExtPoint] {
        &self.truncated
    }

    /// Ideal membership of a fully finite point by truncation at `c_E`.
    pub fn contains(&self, x: &ExtPoint) -> bool {
        assert!(
            x.is_finite(),
            "membership of extended points is decided at the subspace level"
        );
        let t = x.meet(&self.c_e);
        self.truncated.binary_search(&t).is_ok()
    }

    /// All members of the ideal inside `[0, bound]`, sorted.
    pub fn elements_up_to(&self, bound: &ExtPoint) -> Vec<ExtPoint> {
        grid_points(bound)
            .into_iter()
            .filter(|p| self.contains(p))
            .collect()
    }

    /// The finite representative form of `A = S ∖ E`: every member of the
    /// box `[0, c_E]` that lies in `S` but not in `E`, with coordinates that
    /// reach `c_E` replaced by `inf`.
    pub fn complement(&self) -> ComplementSet {
        let mut reps: Vec<ExtPoint> = grid_points(&self.c_e)
            .into_iter()
            .filter(|x| self.parent.contains(x) && !self.contains(x))
            .map(|x| x.saturate_at(&self.c_e))
            .collect();
        reps.sort();
        reps.dedup();
        ComplementSet {
            dim: self.dim(),
            c_e: self.c_e.clone(),
            reps,
        }
    }

    /// Runs the ideal axioms on the truncated set; `None` means all pass.
    pub fn validate(&self) -> Option<IdealViolation> {
        let c_e = &self.c_e;
        let in_e = |x: &ExtPoint| self.truncated.binary_search(&x.meet(c_e)).is_ok();

        for e in &self.truncated {
            for s in self.parent.small_elements() {
                if !in_e(&e.add(s)) {
                    return Some(IdealViolation::NotClosed {
                        e: e.clone(),
                        s: s.clone(),
                    });
                }
            }
        }
        for a in &self.truncated {
            for b in &self.truncated {
                if !in_e(&a.meet(b)) {
                    return Some(IdealViolation::G1 {
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
        for a in &self.truncated {
            for b in &self.truncated {
                if a == b {
                    continue;
                }
                for i in 0..self.dim() {
                    if a.coord(i) != b.coord(i) {
                        continue;
                    }
                    if !g2_exists(&self.truncated, c_e, a, b, i) {
                        return Some(IdealViolation::G2 {
                            a: a.clone(),
                            b: b.clone(),
                            index: i,
                        });
                    }
                }
            }
        }
        for i in 0..self.dim() {
            if let Some(p) = step_down(c_e, i) {
                if self.truncated.binary_search(&p).is_ok() {
                    return Some(IdealViolation::ConductorNotMinimal { index: i });
                }
            }
        }
        None
    }
}

/// Same pattern search as the semigroup (G2) check, against the ideal.
fn g2_exists(truncated: &[ExtPoint], c_e: &ExtPoint, a: &ExtPoint, b: &ExtPoint, i: usize) -> bool {
    truncated.iter().any(|s| {
        for j in 0..a.dim() {
            let (sj, aj, bj, cj) = (s.coord(j), a.coord(j), b.coord(j), c_e.coord(j));
            if j == i {
                if !(sj > aj || sj == cj) {
                    return false;
                }
            } else if aj != bj {
                if sj != aj.min(bj) {
                    return false;
                }
            } else if sj < aj {
                return false;
            }
        }
        true
    })
}

/// The complement `A = S ∖ E` in canonical representative form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementSet {
    dim: usize,
    c_e: ExtPoint,
    reps: Vec<ExtPoint>,
}

impl ComplementSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The ideal conductor the representatives saturate at.
    pub fn conductor(&self) -> &ExtPoint {
        &self.c_e
    }

    /// Sorted canonical representatives; `inf` marks a saturated coordinate.
    pub fn reps(&self) -> &[ExtPoint] {
        &self.reps
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    /// One representative per line, lexicographic with `inf` last.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.reps {
            let _ = writeln!(out, "{r}");
        }
        out
    }

    /// True when `rep` denotes a subspace wholly contained in the one
    /// denoted by `outer`, both in canonical form over the same conductor.
    /// Canonical finite coordinates sit strictly below the conductor, so a
    /// finite coordinate can never land inside a saturated one.
    pub fn subsumed(outer: &ExtPoint, rep: &ExtPoint) -> bool {
        if outer == rep {
            return false;
        }
        outer
            .coords()
            .iter()
            .zip(rep.coords())
            .all(|(o, r)| match (o, r) {
                (ExtNat::Inf, ExtNat::Inf) => true,
                (ExtNat::Inf, ExtNat::Fin(_)) => false,
                (ExtNat::Fin(a), ExtNat::Fin(b)) => a == b,
                (ExtNat::Fin(_), ExtNat::Inf) => false,
            })
    }
}

fn join(a: &ExtPoint, b: &ExtPoint) -> ExtPoint {
    ExtPoint::new(
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| *x.max(y))
            .collect(),
    )
}

fn sub_ones(c: &ExtPoint) -> ExtPoint {
    ExtPoint::new(
        c.coords()
            .iter()
            .map(|x| ExtNat::Fin(x.finite().unwrap().saturating_sub(1)))
            .collect(),
    )
}

fn add_scalar(p: &ExtPoint, k: u64) -> ExtPoint {
    ExtPoint::new(
        p.coords()
            .iter()
            .map(|x| ExtNat::Fin(x.finite().unwrap() + k))
            .collect(),
    )
}

fn step_down(c: &ExtPoint, i: usize) -> Option<ExtPoint> {
    let v = c.coord(i).finite()?;
    if v == 0 {
        return None;
    }
    let mut coords: Vec<ExtNat> = c.coords().to_vec();
    coords[i] = ExtNat::Fin(v - 1);
    Some(ExtPoint::new(coords))
}

/// Linear index of `x` in the lexicographic enumeration of `[0, bound]`.
pub(crate) fn grid_index(bound: &ExtPoint, x: &ExtPoint) -> usize {
    let mut idx = 0usize;
    for i in 0..bound.dim() {
        let width = bound.coord(i).finite().unwrap() as usize + 1;
        idx = idx * width + x.coord(i).finite().unwrap() as usize;
    }
    idx
}

/// `full[x]` ⟺ every box point `≥ x` is a member; cells beyond the box are
/// treated as members, which matches truncation-stable membership.
fn cone_full_table(bound: &ExtPoint, members: &[bool]) -> Vec<bool> {
    let cells = grid_points(bound);
    let mut full = members.to_vec();
    for (idx, x) in cells.iter().enumerate().rev() {
        if !full[idx] {
            continue;
        }
        for i in 0..bound.dim() {
            if x.coord(i) < bound.coord(i) {
                let mut up = x.coords().to_vec();
                up[i] = ExtNat::Fin(x.coord(i).finite().unwrap() + 1);
                if !full[grid_index(bound, &ExtPoint::new(up))] {
                    full[idx] = false;
                    break;
                }
            }
        }
    }
    full
}
