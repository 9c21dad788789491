//! Exact computations with graded-commutative DG-algebras over ℚ and over
//! finite-dimensional DG-Artin coefficient rings.
//!
//! Layout:
//! - [`artin`], [`algebra`], [`morphism`], [`parse`]: algebras, elements, maps, text format.
//! - [`linalg`], [`homology`]: exact linear algebra, truncated complexes, cohomology.
//! - [`model`]: model-structure predicates, factorizations and lifts.
//! - [`idempotents`]: fixed loci and idempotent lifting over small extensions.
//! - [`deform`]: derivation complexes, Maurer–Cartan elements, gauge action.
//! - [`verify`]: scripted example pipelines, randomized suites, reports.

pub mod algebra;
pub mod artin;
pub mod deform;
pub mod error;
pub mod groebner;
pub mod homology;
pub mod idempotents;
pub mod linalg;
pub mod model;
pub mod morphism;
pub mod parse;
pub mod verify;

pub use algebra::{Algebra, Elem, Gen, Key, Mono, Regime};
pub use artin::{ArtinMap, ArtinRing, SmallExtension};
pub use error::{Error, Result};
pub use homology::{FiniteComplex, Truncation};
pub use morphism::{Derivation, Morphism};

/// One verified (or refuted) claim with its witness.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Check {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    pub fn new(claim: impl Into<String>, holds: bool, detail: impl Into<String>) -> Check {
        Check { claim: claim.into(), holds, detail: detail.into() }
    }
}

/// Exact rational numbers.
pub type Q = num_rational::BigRational;

/// Shorthand for small integer rationals.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `n / d` as a rational.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
