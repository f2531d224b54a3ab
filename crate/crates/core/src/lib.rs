//! Exact decision procedures for quadratic pairs `(f, alpha)` over the
//! rationals and the finite shadows of their arboreal Galois groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`f2`]: sparse vectors over GF(2) and the elimination kernel shared by
//!   square-class spans and index-set spans.
//! * [`square`], [`factor`], [`coprime`], [`quad`]: square classes of
//!   rationals and of elements of real/imaginary quadratic fields.
//! * [`tree`]: the truncated automorphism groups of the binary rooted tree.
//! * [`dynamics`]: normal forms, adjusted post-critical orbits, PCF and
//!   exceptional-point decisions, orbit valuations.
//! * [`galois`]: maximal-subgroup containment, level-2 Galois groups,
//!   Frobenius sampling, local ramification and the abelian classifier.
//! * [`index_sets`]: finite stand-ins for infinite families of index vectors.
//! * [`curves`]: the hyperelliptic curves built from orbit relations.

pub mod coprime;
pub mod curves;
pub mod dynamics;
pub mod error;
pub mod f2;
pub mod factor;
pub mod galois;
pub mod index_sets;
pub mod poly;
pub mod quad;
pub mod rational;
pub mod square;
pub mod tree;

pub use dynamics::{AdjustedOrbit, PcfVerdict, QuadPair};
pub use error::{Error, Result};
pub use f2::{F2Vector, Label};
pub use galois::{AbelianVerdict, Certificate, GroupId};
pub use index_sets::{IndexFamily, IndexVector};
pub use quad::QuadElement;
pub use rational::Rational;
pub use square::SquareClass;
pub use tree::TreeAut;
