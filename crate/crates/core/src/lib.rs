//! Exact-arithmetic toolkit for multiple point spaces of corank-1 map germs
//! and the rational homology of disentanglement images.
//!
//! The crate is organized bottom-up:
//!
//! * [`rational`] — the scalar type: arbitrary-precision rationals.
//! * [`linalg`] — deterministic sparse linear algebra over ℚ (rank, kernel,
//!   image, subquotients, exact solves).
//! * [`poly`] — multivariate polynomials over ℚ: parsing, canonical
//!   printing, exact division, iterated divided differences, corank.
//! * [`groebner`] — a small exact Buchberger engine with grevlex/lex
//!   orders, normal forms, and Krull dimension via leading monomials.
//! * [`multipoint`] — map germs in corank-1 normal form, their multiple
//!   point space ideals `D^k`, and dimensional-correctness reports.
//! * [`equivariant`] — chain complexes with symmetric group actions, the
//!   alternating projector, and alternating homology.
//! * [`image`] — multiple point diagrams, the associated double complex,
//!   its spectral sequence, and Betti numbers of the image.
//! * [`bounds`] — closed-form first-page support masks and admissible
//!   total degrees for a germ profile `(n, N, d)`, plus Betti vector
//!   consistency checks.
//!
//! All computation is exact; nothing in this crate rounds. Any two runs on
//! the same input produce identical output (basis vectors, generator
//! orders, report text), which the test suite relies on.

pub mod bounds;
pub mod equivariant;
pub mod groebner;
pub mod image;
pub mod linalg;
pub mod multipoint;
pub mod poly;
pub mod rational;

pub use rational::Rat;
