//! Coordinate arithmetic over `(N ∪ {∞})^d`.
//!
//! Points carry a fixed dimension `d` and coordinates that are either finite
//! naturals or the symbol `inf`. The module provides the componentwise meet,
//! the natural partial order, strict domination, index-set bookkeeping and the
//! Δ-set queries used everywhere else. Δ queries always run against an
//! explicit finite reference set; there is no implicit ambient semigroup.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Maximum supported dimension. Index sets fit in one machine word and the
/// real limitation is grid volume long before this bound.
pub const MAX_DIM: usize = 16;

/// A natural number extended with infinity.
///
/// The derived order puts every finite value below `Inf`, so `Ord::min` is the
/// extended minimum used by [`ExtPoint::meet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    /// A finite coordinate.
    Fin(u64),
    /// The coordinate `∞`.
    Inf,
}

impl ExtNat {
    /// Returns the finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    /// True when the coordinate is not `∞`.
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    fn add(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

/// A point of `(N ∪ {∞})^d`.
///
/// The derived `Ord` is the lexicographic order with `inf` sorting after every
/// finite value; it is the order used for all deterministic output. The
/// *componentwise* partial order of the ambient monoid is [`ExtPoint::leq`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtPoint {
    coords: Vec<ExtNat>,
}

impl ExtPoint {
    /// Builds a point from extended coordinates. Panics on dimension 0 or
    /// above [`MAX_DIM`].
    pub fn new(coords: Vec<ExtNat>) -> Self {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_DIM,
            "dimension must be in 1..={MAX_DIM}"
        );
        ExtPoint { coords }
    }

    /// Builds a fully finite point.
    pub fn from_finite(coords: &[u64]) -> Self {
        ExtPoint::new(coords.iter().map(|&n| ExtNat::Fin(n)).collect())
    }

    /// The origin of `N^d`.
    pub fn zero(dim: usize) -> Self {
        ExtPoint::from_finite(&vec![0; dim])
    }

    /// The `i`-th standard unit vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut coords = vec![0; dim];
        coords[i] = 1;
        ExtPoint::from_finite(&coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[ExtNat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> ExtNat {
        self.coords[i]
    }

    /// True when no coordinate is `∞`.
    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// The set of indices carrying finite coordinates.
    pub fn finite_pattern(&self) -> IndexSet {
        let mut s = IndexSet::empty(self.dim());
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_finite() {
                s = s.with(i);
            }
        }
        s
    }

    /// The set of indices carrying `∞`.
    pub fn inf_pattern(&self) -> IndexSet {
        self.finite_pattern().orthogonal()
    }

    fn assert_same_dim(&self, other: &ExtPoint) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch: {} vs {}",
            self.dim(),
            other.dim()
        );
    }

    /// Componentwise minimum, the infimum for [`ExtPoint::leq`].
    pub fn meet(&self, other: &ExtPoint) -> ExtPoint {
        self.assert_same_dim(other);
        ExtPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }

    /// The natural partial order: `self ≤ other` componentwise.
    pub fn leq(&self, other: &ExtPoint) -> bool {
        self.assert_same_dim(other);
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// Strict domination: `self` exceeds `other` in every coordinate. An
    /// `inf` coordinate of `self` exceeds anything (including `inf`, where
    /// arbitrarily deep points stand behind it), while a finite coordinate
    /// never exceeds `inf`. Read on representatives, `self` dominates
    /// `other` exactly when every point of the `other` subspace is
    /// dominated by a point of the `self` subspace.
    pub fn dominates(&self, other: &ExtPoint) -> bool {
        self.assert_same_dim(other);
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(b, a)| match (b, a) {
                (ExtNat::Inf, _) => true,
                (ExtNat::Fin(x), ExtNat::Fin(y)) => x > y,
                (ExtNat::Fin(_), ExtNat::Inf) => false,
            })
    }

    /// Componentwise sum; `inf` absorbs.
    pub fn add(&self, other: &ExtPoint) -> ExtPoint {
        self.assert_same_dim(other);
        ExtPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| a.add(b))
                .collect(),
        )
    }

    /// Componentwise difference of fully finite points; `None` when any
    /// coordinate would go negative or is `inf`.
    pub fn checked_sub(&self, other: &ExtPoint) -> Option<ExtPoint> {
        self.assert_same_dim(other);
        let mut coords = Vec::with_capacity(self.dim());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match (a.finite(), b.finite()) {
                (Some(x), Some(y)) if x >= y => coords.push(ExtNat::Fin(x - y)),
                _ => return None,
            }
        }
        Some(ExtPoint::new(coords))
    }

    /// Indices where the two points agree (extended equality).
    pub fn agreement(&self, other: &ExtPoint) -> IndexSet {
        self.assert_same_dim(other);
        let mut s = IndexSet::empty(self.dim());
        for (i, (a, b)) in self.coords.iter().zip(&other.coords).enumerate() {
            if a == b {
                s = s.with(i);
            }
        }
        s
    }

    /// Replaces every coordinate equal to the corresponding coordinate of
    /// `bound` by `inf`. Coordinates above `bound` are left untouched, so
    /// callers meet with `bound` first.
    pub fn saturate_at(&self, bound: &ExtPoint) -> ExtPoint {
        self.assert_same_dim(bound);
        ExtPoint::new(
            self.coords
                .iter()
                .zip(&bound.coords)
                .map(|(&a, &b)| if a == b { ExtNat::Inf } else { a })
                .collect(),
        )
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Error produced when parsing the textual point form.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid point `{input}`: {reason}")]
pub struct ParsePointError {
    pub input: String,
    pub reason: String,
}

impl FromStr for ExtPoint {
    type Err = ParsePointError;

    /// Parses the textual form `(3,inf,11)`. Whitespace around the whole
    /// token and around each coordinate is accepted; output never carries any.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParsePointError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err("expected surrounding parentheses"))?;
        let mut coords = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part == "inf" {
                coords.push(ExtNat::Inf);
            } else {
                let n: u64 = part
                    .parse()
                    .map_err(|_| err(&format!("bad coordinate `{part}`")))?;
                coords.push(ExtNat::Fin(n));
            }
        }
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(err(&format!("dimension must be in 1..={MAX_DIM}")));
        }
        Ok(ExtPoint::new(coords))
    }
}

/// A subset of the coordinate indices `{0, …, d-1}`, stored as a bitmask.
///
/// Rendered one-based to match the usual mathematical convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet {
    bits: u32,
    dim: u8,
}

impl IndexSet {
    pub fn empty(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        IndexSet {
            bits: 0,
            dim: dim as u8,
        }
    }

    pub fn full(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        IndexSet {
            bits: ((1u32 << dim) - 1),
            dim: dim as u8,
        }
    }

    pub fn singleton(dim: usize, i: usize) -> Self {
        IndexSet::empty(dim).with(i)
    }

    pub fn from_indices(dim: usize, indices: &[usize]) -> Self {
        indices.iter().fold(IndexSet::empty(dim), |s, &i| s.with(i))
    }

    /// Rebuilds an index set from a raw bitmask over `dim` coordinates.
    pub fn from_bits(dim: usize, bits: u32) -> Self {
        let full = IndexSet::full(dim);
        assert_eq!(bits & !full.bits, 0, "bits outside dimension");
        IndexSet {
            bits,
            dim: dim as u8,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with(self, i: usize) -> Self {
        assert!(i < self.dim());
        IndexSet {
            bits: self.bits | (1 << i),
            dim: self.dim,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.dim() && self.bits & (1 << i) != 0
    }

    /// The orthogonal set: the complement within `{0, …, d-1}`.
    pub fn orthogonal(&self) -> IndexSet {
        IndexSet {
            bits: !self.bits & IndexSet::full(self.dim()).bits,
            dim: self.dim,
        }
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        assert_eq!(self.dim, other.dim);
        IndexSet {
            bits: self.bits | other.bits,
            dim: self.dim,
        }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        assert_eq!(self.dim, other.dim);
        IndexSet {
            bits: self.bits & other.bits,
            dim: self.dim,
        }
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        assert_eq!(self.dim, other.dim);
        IndexSet {
            bits: self.bits & !other.bits,
            dim: self.dim,
        }
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == IndexSet::full(self.dim()).bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| self.contains(i))
    }

    /// All subsets of this set, in increasing bitmask order.
    pub fn subsets(&self) -> Vec<IndexSet> {
        let dim = self.dim;
        let mask = self.bits;
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = 0u32;
        loop {
            out.push(IndexSet { bits: sub, dim });
            if sub == mask {
                break;
            }
            sub = (sub.wrapping_sub(mask)) & mask;
        }
        out.sort();
        out
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// `Δ_F(a)` (or `Δ̃_F(a)` when `closed`) computed against `reference`:
/// members agreeing with `a` exactly on `F` and strictly (resp. weakly)
/// exceeding it elsewhere, the center itself excluded in the closed form.
/// `inf` coordinates compare per the extended order.
pub fn delta(
    reference: &[ExtPoint],
    f: IndexSet,
    center: &ExtPoint,
    closed: bool,
) -> Vec<ExtPoint> {
    let mut out: Vec<ExtPoint> = reference
        .iter()
        .filter(|p| p.dim() == center.dim() && in_delta(p, f, center, closed))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Membership test behind [`delta`], exposed for callers that scan without
/// materialising the set.
pub fn in_delta(p: &ExtPoint, f: IndexSet, center: &ExtPoint, closed: bool) -> bool {
    if closed && p == center {
        return false;
    }
    for i in 0..center.dim() {
        let (pi, ci) = (p.coord(i), center.coord(i));
        if f.contains(i) {
            if pi != ci {
                return false;
            }
        } else if closed {
            if pi < ci {
                return false;
            }
        } else if pi <= ci {
            return false;
        }
    }
    true
}

/// `Δ(a) = ⋃_i Δ_{{i}}(a)` against `reference`.
pub fn delta_union(reference: &[ExtPoint], center: &ExtPoint) -> Vec<ExtPoint> {
    let mut out = Vec::new();
    for i in 0..center.dim() {
        out.extend(delta(
            reference,
            IndexSet::singleton(center.dim(), i),
            center,
            false,
        ));
    }
    out.sort();
    out.dedup();
    out
}
