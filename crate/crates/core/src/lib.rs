//! Exact-arithmetic graph cohomology.
//!
//! The crate builds, over the rationals or a prime field, the chain complexes
//! attached to a finite graph `Γ` and a graded commutative Frobenius algebra
//! `A`:
//!
//! - the edge-adding complex with chain groups `e_S ⊗ A^{⊗l(S)}` over edge
//!   subsets `S`, whose graded Euler characteristic recovers the chromatic
//!   polynomial of `Γ` at the graded dimension of `A`;
//! - its edge-removing dual, graded by total degree;
//! - the quotient of the dual by the ideal of cycle (Arnold) relations, a
//!   small model with forest-supported representatives; the quotient map is a
//!   quasi-equivalence, checked by exact Betti number computations;
//! - the connected-subgraph complex, whose homology is concentrated in degree
//!   `|V| - 1`.
//!
//! All arithmetic is exact: [`Rational`] coefficients with big integers, or a
//! prime field [`Fp`] chosen at runtime. There is no floating point.

pub mod chromatic;
pub mod complexes;
pub mod exterior;
pub mod field;
pub mod frobenius;
pub mod graph;
pub mod homology;

pub use field::{Field, FieldSpec, Fp};

/// Exact rational scalar used throughout when no prime field is requested.
pub type Rational = num_rational::BigRational;
