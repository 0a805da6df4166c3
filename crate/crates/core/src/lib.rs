//! Good subsemigroups of `N^d` and the level partition of their ideal
//! complements.
//!
//! A good semigroup is a submonoid of `N^d` closed under componentwise
//! minimum, satisfying a coordinate-lifting axiom and owning a conductor; it
//! is represented finitely by its small elements. The crate validates such
//! representations, builds good ideals and their complements (Apéry sets for
//! principal ideals), partitions the complement into levels, enumerates the
//! infinite subspaces each level contains, and checks that the Apéry set of
//! `ω` has exactly `Σ ωᵢ` levels — with an independent brute-force oracle to
//! cross-check the whole pipeline on finite grids.

pub mod ideal;
pub mod lattice;
pub mod levels;
pub mod oracle;
pub mod semigroup;
pub mod subspace;

pub use ideal::{ComplementSet, GoodIdeal, IdealError, IdealViolation};
pub use lattice::{delta, delta_union, ExtNat, ExtPoint, IndexSet, ParsePointError};
pub use levels::{
    apery, complete_infimum_witness, compute_levels, propg2_decomposition, CompleteInfimumWitness,
    LevelPartition, LevelsError,
};
pub use oracle::{
    axiom_scan, brute_force_partition, generate_corpus, product_membership, product_semigroup,
    random_good_semigroup, CorpusSpec, GeneratorKind, GridPartition, OracleError, PaddedGrid,
};
pub use semigroup::{
    parse_small_file, validate_elements, FileError, GoodSemigroup, ParsedFile, SemigroupError,
    ValidationReport,
};
pub use subspace::{
    canonical_representative, h_k_set, subspaces_of_level, theorem_main_check, MainTheoremReport,
    Subspace, SubspaceError,
};

/// The three-branch worked example used across the unit tests.
#[cfg(test)]
pub(crate) const EX3_FILE: &str = include_str!("../tests/data/branches3.gs");
