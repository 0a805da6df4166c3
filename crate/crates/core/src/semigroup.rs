//! Finite representation of a good subsemigroup of `N^d`.
//!
//! A semigroup is stored as its set of small elements (members `≤ c`) plus
//! the conductor `c` inferred as their unique maximum. Construction validates
//! the monoid closure, the (G1)/(G2) axioms and conductor minimality;
//! membership of arbitrary points reduces to the small set by truncation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::lattice::{ExtNat, ExtPoint, MAX_DIM};

/// Validation failure for a small-element set.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("the zero element is missing from the small set")]
    MissingZero,
    #[error("the small set has no unique maximum element to act as conductor")]
    NoUniqueMaximum,
    #[error("not a monoid: {a} + {b} truncates outside the small set")]
    NotAMonoid { a: ExtPoint, b: ExtPoint },
    #[error("(G1) fails: {a} ∧ {b} is not in the small set")]
    G1Violation { a: ExtPoint, b: ExtPoint },
    #[error("(G2) fails for {a}, {b} at coordinate {index}")]
    G2Violation {
        a: ExtPoint,
        b: ExtPoint,
        index: usize,
    },
    #[error("conductor is not minimal at coordinate {index}")]
    ConductorNotMinimal { index: usize },
    #[error("dimension {dim} out of range 1..={MAX_DIM}")]
    DimensionOutOfRange { dim: usize },
    #[error("small element {point} has dimension {} instead of {dim}", point.dim())]
    WrongDimension { point: ExtPoint, dim: usize },
    #[error("small element {point} is not fully finite")]
    NotFinite { point: ExtPoint },
}

/// Error reading the semigroup file format.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("declared conductor {declared} differs from inferred maximum {inferred}")]
    ConductorMismatch {
        declared: ExtPoint,
        inferred: ExtPoint,
    },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// Per-axiom validation outcome with the lexicographically first witness of
/// each failure. Every axiom is evaluated even after an earlier one fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: usize,
    pub conductor: ExtPoint,
    pub zero_ok: bool,
    pub maximum_ok: bool,
    pub g1: Option<(ExtPoint, ExtPoint)>,
    pub closure: Option<(ExtPoint, ExtPoint)>,
    pub g2: Option<(ExtPoint, ExtPoint, usize)>,
    pub conductor_minimal: Option<usize>,
    pub local: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.zero_ok
            && self.maximum_ok
            && self.g1.is_none()
            && self.closure.is_none()
            && self.g2.is_none()
            && self.conductor_minimal.is_none()
    }

    /// The first failure in validation order, if any.
    pub fn first_error(&self) -> Option<SemigroupError> {
        if !self.zero_ok {
            return Some(SemigroupError::MissingZero);
        }
        if !self.maximum_ok {
            return Some(SemigroupError::NoUniqueMaximum);
        }
        if let Some((a, b)) = &self.g1 {
            return Some(SemigroupError::G1Violation {
                a: a.clone(),
                b: b.clone(),
            });
        }
        if let Some((a, b)) = &self.closure {
            return Some(SemigroupError::NotAMonoid {
                a: a.clone(),
                b: b.clone(),
            });
        }
        if let Some((a, b, index)) = &self.g2 {
            return Some(SemigroupError::G2Violation {
                a: a.clone(),
                b: b.clone(),
                index: *index,
            });
        }
        if let Some(index) = self.conductor_minimal {
            return Some(SemigroupError::ConductorNotMinimal { index });
        }
        None
    }

    /// Plain-text report, one line per axiom.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, name: &str, body: String| {
            let _ = writeln!(out, "{name}: {body}");
        };
        line(&mut out, "zero", ok_or(self.zero_ok, "missing".into()));
        line(
            &mut out,
            "maximum",
            ok_or(self.maximum_ok, "not unique".into()),
        );
        line(
            &mut out,
            "G1",
            match &self.g1 {
                None => "ok".into(),
                Some((a, b)) => format!("FAIL witness {a} ∧ {b} = {}", a.meet(b)),
            },
        );
        line(
            &mut out,
            "monoid-closure",
            match &self.closure {
                None => "ok".into(),
                Some((a, b)) => format!("FAIL witness {a} + {b}"),
            },
        );
        line(
            &mut out,
            "G2",
            match &self.g2 {
                None => "ok".into(),
                Some((a, b, i)) => format!("FAIL witness {a}, {b} at coordinate {}", i + 1),
            },
        );
        line(
            &mut out,
            "conductor-minimal",
            match self.conductor_minimal {
                None => "ok".into(),
                Some(i) => format!("FAIL at coordinate {}", i + 1),
            },
        );
        let _ = writeln!(out, "local: {}", self.local);
        out
    }
}

fn ok_or(ok: bool, fail: String) -> String {
    if ok {
        "ok".into()
    } else {
        format!("FAIL {fail}")
    }
}

/// A validated good subsemigroup of `N^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSemigroup {
    dim: usize,
    small: Vec<ExtPoint>,
    conductor: ExtPoint,
    gamma: ExtPoint,
    local: bool,
}

impl GoodSemigroup {
    /// Builds and fully validates a semigroup from its small elements. The
    /// conductor is inferred as the unique `≤`-maximum of the input.
    pub fn from_small_elements(
        dim: usize,
        elements: Vec<ExtPoint>,
    ) -> Result<GoodSemigroup, SemigroupError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(SemigroupError::DimensionOutOfRange { dim });
        }
        let mut small: Vec<ExtPoint> = elements;
        for p in &small {
            if p.dim() != dim {
                return Err(SemigroupError::WrongDimension {
                    point: p.clone(),
                    dim,
                });
            }
            if !p.is_finite() {
                return Err(SemigroupError::NotFinite { point: p.clone() });
            }
        }
        small.sort();
        small.dedup();
        let report = validate_elements(dim, &small);
        if let Some(err) = report.first_error() {
            return Err(err);
        }
        let conductor = report.conductor;
        let gamma = sub_ones(&conductor);
        Ok(GoodSemigroup {
            dim,
            small,
            conductor,
            gamma,
            local: report.local,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The small elements, sorted, including zero and the conductor.
    pub fn small_elements(&self) -> &[ExtPoint] {
        &self.small
    }

    pub fn conductor(&self) -> &ExtPoint {
        &self.conductor
    }

    /// `γ = c - 1` componentwise, clamped at zero for zero conductor axes.
    pub fn gamma(&self) -> &ExtPoint {
        &self.gamma
    }

    pub fn is_local(&self) -> bool {
        self.local
    }

    /// Membership of a fully finite point: truncate at the conductor and look
    /// the result up among the small elements. Extended points belong to the
    /// subspace machinery, not here.
    pub fn contains(&self, a: &ExtPoint) -> bool {
        assert!(
            a.is_finite(),
            "membership of extended points is decided at the subspace level"
        );
        assert_eq!(a.dim(), self.dim, "dimension mismatch");
        let t = a.meet(&self.conductor);
        self.small.binary_search(&t).is_ok()
    }

    /// The unique minimal nonzero element, present exactly in the local case.
    pub fn minimal_nonzero(&self) -> Option<ExtPoint> {
        if !self.local {
            return None;
        }
        let nonzero: Vec<&ExtPoint> = self
            .small
            .iter()
            .filter(|p| **p != ExtPoint::zero(self.dim))
            .collect();
        if nonzero.is_empty() {
            // The whole line (dimension one, zero conductor): e = 1.
            return Some(ExtPoint::from_finite(&[1]));
        }
        let minimal: Vec<&ExtPoint> = nonzero
            .iter()
            .filter(|p| !nonzero.iter().any(|q| q != *p && q.leq(p)))
            .copied()
            .collect();
        match minimal.as_slice() {
            [e] => Some((*e).clone()),
            _ => None,
        }
    }

    /// Re-runs the full validation on the stored small set.
    pub fn validate(&self) -> ValidationReport {
        validate_elements(self.dim, &self.small)
    }

    /// All members of the semigroup inside the box `[0, bound]`, sorted.
    pub fn elements_up_to(&self, bound: &ExtPoint) -> Vec<ExtPoint> {
        grid_points(bound)
            .into_iter()
            .filter(|p| self.contains(p))
            .collect()
    }

    /// Parses the textual semigroup format: a `d <dim>` line, an optional
    /// `c (…)` line that must match the inferred maximum, then one small
    /// element per line. `#` starts a comment; blank lines are skipped.
    pub fn from_file_str(text: &str) -> Result<GoodSemigroup, FileError> {
        let parsed = parse_small_file(text)?;
        let s = GoodSemigroup::from_small_elements(parsed.dim, parsed.elements)?;
        if let Some(declared) = parsed.declared_conductor {
            if declared != *s.conductor() {
                return Err(FileError::ConductorMismatch {
                    declared,
                    inferred: s.conductor().clone(),
                });
            }
        }
        Ok(s)
    }

    /// Canonical textual form: dimension, conductor, sorted small elements.
    /// `parse ∘ serialize` is the identity on validated semigroups.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "d {}", self.dim);
        let _ = writeln!(out, "c {}", self.conductor);
        for p in &self.small {
            let _ = writeln!(out, "{p}");
        }
        out
    }
}

/// A semigroup file after syntactic parsing, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFile {
    pub dim: usize,
    pub declared_conductor: Option<ExtPoint>,
    pub elements: Vec<ExtPoint>,
}

/// Syntactic half of [`GoodSemigroup::from_file_str`]; lets callers run the
/// validator on files that would not construct.
pub fn parse_small_file(text: &str) -> Result<ParsedFile, FileError> {
    let mut dim: Option<usize> = None;
    let mut declared_c: Option<ExtPoint> = None;
    let mut elements: Vec<ExtPoint> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |msg: String| FileError::Syntax { line, msg };
        if let Some(rest) = content.strip_prefix("d ").or(content.strip_prefix("d\t")) {
            if dim.is_some() {
                return Err(syntax("duplicate dimension line".into()));
            }
            let d: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad dimension `{}`", rest.trim())))?;
            dim = Some(d);
            continue;
        }
        if dim.is_none() {
            return Err(syntax(
                "expected `d <dimension>` before any other content".into(),
            ));
        }
        if let Some(rest) = content.strip_prefix("c ").or(content.strip_prefix("c\t")) {
            if declared_c.is_some() {
                return Err(syntax("duplicate conductor line".into()));
            }
            if !elements.is_empty() {
                return Err(syntax("conductor line must precede the elements".into()));
            }
            let c: ExtPoint = rest.trim().parse().map_err(|e| syntax(format!("{e}")))?;
            declared_c = Some(c);
            continue;
        }
        let p: ExtPoint = content.parse().map_err(|e| syntax(format!("{e}")))?;
        elements.push(p);
    }
    let dim = dim.ok_or(FileError::Syntax {
        line: 0,
        msg: "missing `d <dimension>` line".into(),
    })?;
    Ok(ParsedFile {
        dim,
        declared_conductor: declared_c,
        elements,
    })
}

/// Validates an arbitrary finite set of fully finite points as the small set
/// of a would-be good semigroup. All witnesses are lexicographically first.
pub fn validate_elements(dim: usize, elements: &[ExtPoint]) -> ValidationReport {
    let mut small: Vec<ExtPoint> = elements.to_vec();
    small.sort();
    small.dedup();
    let set: BTreeSet<&ExtPoint> = small.iter().collect();

    let zero = ExtPoint::zero(dim);
    let zero_ok = set.contains(&zero);

    // Unique maximum; fall back to the componentwise ceiling so that the
    // remaining axioms can still be evaluated for the report.
    let unique_max = small.iter().find(|c| small.iter().all(|s| s.leq(c)));
    let maximum_ok = unique_max.is_some();
    let conductor = unique_max
        .cloned()
        .unwrap_or_else(|| componentwise_max(dim, &small));

    let contains = |p: &ExtPoint| set.contains(&p.meet(&conductor));

    let mut g1 = None;
    'g1: for a in &small {
        for b in &small {
            if !set.contains(&a.meet(b)) {
                g1 = Some((a.clone(), b.clone()));
                break 'g1;
            }
        }
    }

    let mut closure = None;
    'cl: for a in &small {
        for b in &small {
            if !contains(&a.add(b)) {
                closure = Some((a.clone(), b.clone()));
                break 'cl;
            }
        }
    }

    let mut g2 = None;
    'g2: for a in &small {
        for b in &small {
            if a == b {
                continue;
            }
            for i in 0..dim {
                if a.coord(i) != b.coord(i) {
                    continue;
                }
                if !g2_witness_exists(&small, &conductor, a, b, i) {
                    g2 = Some((a.clone(), b.clone(), i));
                    break 'g2;
                }
            }
        }
    }

    // c is minimal iff no axis can be lowered: lowering axis i keeps the
    // cone inside the semigroup exactly when c - e_i truncates into the set.
    let mut conductor_minimal = None;
    for i in 0..dim {
        if let Some(p) = step_down(&conductor, i) {
            if set.contains(&p) {
                conductor_minimal = Some(i);
                break;
            }
        }
    }

    // Local: zero is the only member of S with a zero component. A zero
    // conductor axis puts a whole coordinate ray inside S, which in d ≥ 2
    // yields nonzero members with zero components.
    let nonzero_small_with_zero_comp = small
        .iter()
        .filter(|p| **p != zero)
        .any(|p| p.coords().contains(&ExtNat::Fin(0)));
    let zero_conductor_axis = conductor.coords().contains(&ExtNat::Fin(0));
    let local = !nonzero_small_with_zero_comp && !(dim >= 2 && zero_conductor_axis);

    ValidationReport {
        dim,
        conductor,
        zero_ok,
        maximum_ok,
        g1,
        closure,
        g2,
        conductor_minimal,
        local,
    }
}

/// Decides the (G2) instance for `a`, `b` at shared coordinate `i`: an ε of
/// the semigroup with `ε_i > a_i`, equality at the coordinates where `a` and
/// `b` differ, and `ε_j ≥ a_j` elsewhere. By truncation an ε exists in the
/// full semigroup iff a small element matches the pattern below.
pub(crate) fn g2_witness_exists(
    small: &[ExtPoint],
    conductor: &ExtPoint,
    a: &ExtPoint,
    b: &ExtPoint,
    i: usize,
) -> bool {
    small.iter().any(|s| {
        for j in 0..a.dim() {
            let (sj, aj, bj, cj) = (s.coord(j), a.coord(j), b.coord(j), conductor.coord(j));
            if j == i {
                // Strictly larger, or saturated at the conductor so that a
                // member beyond the box realises the strict step.
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

fn componentwise_max(dim: usize, points: &[ExtPoint]) -> ExtPoint {
    let mut coords = vec![0u64; dim];
    for p in points {
        for (i, c) in coords.iter_mut().enumerate() {
            if let Some(v) = p.coord(i).finite() {
                *c = (*c).max(v);
            }
        }
    }
    ExtPoint::from_finite(&coords)
}

fn sub_ones(c: &ExtPoint) -> ExtPoint {
    ExtPoint::new(
        c.coords()
            .iter()
            .map(|x| match x.finite() {
                Some(v) => ExtNat::Fin(v.saturating_sub(1)),
                None => ExtNat::Inf,
            })
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

/// All fully finite points of the box `[0, bound]` in lexicographic order.
pub fn grid_points(bound: &ExtPoint) -> Vec<ExtPoint> {
    assert!(bound.is_finite(), "grid bound must be finite");
    let dims: Vec<u64> = bound.coords().iter().map(|c| c.finite().unwrap()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; dims.len()];
    loop {
        out.push(ExtPoint::from_finite(&cur));
        let mut k = dims.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < dims[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
        }
    }
}

/// Queries Δ-emptiness style predicates against a semigroup on a padded box.
/// Emptiness of `Δ^S_F(α)` for α inside `[0, c]` is decidable on `[0, c+1]`
/// because every member clamps into that box without leaving the semigroup.
pub fn padded_box(s: &GoodSemigroup, extra: u64) -> Vec<ExtPoint> {
    let bound = ExtPoint::new(
        s.conductor()
            .coords()
            .iter()
            .map(|c| ExtNat::Fin(c.finite().unwrap() + extra))
            .collect(),
    );
    s.elements_up_to(&bound)
}
