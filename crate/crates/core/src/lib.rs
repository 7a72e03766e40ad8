//! Exact computer algebra for supercommutative rings, supermatrices and Lie
//! superalgebras, with coadjoint-orbit diagonalization and the enveloping-algebra
//! quantization of orbit algebras.

pub mod deform;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod orbit;
pub mod random;
pub mod ring;
pub mod scalar;
pub mod text;

pub use ring::{Generator, Monomial, Parity, PolyParity, RingError, RingSignature, SuperPolynomial};
pub use scalar::Scalar;
