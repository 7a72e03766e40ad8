//! Free supercommutative rings over the rationals.
//!
//! `k[x1..xM, t1..tN]` with even `x` (optionally truncated, `x^(cap+1) = 0`) and odd,
//! mutually anticommuting `t`. Elements are sparse maps from [`Monomial`] to [`Scalar`].
//!
//! [`Scalar`]: crate::scalar::Scalar

mod monomial;
mod poly;
mod signature;

use thiserror::Error;

pub use monomial::{odd_normalize, Monomial, OddSign};
pub use poly::{Parity, PolyParity, SuperPolynomial};
pub use signature::{Generator, RingSignature, MAX_ODD};

pub(crate) use poly::same_ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("operands live in different rings")]
    SignatureMismatch,
    #[error("generator {generator:?} is outside the ring signature")]
    IndexOutOfRange { generator: Generator },
    #[error("element is not invertible (constant term zero or non-nilpotent remainder)")]
    NotInvertible,
    #[error("substitution for {generator:?} does not preserve parity")]
    ParityMismatch { generator: Generator },
    #[error("at most {} odd generators are supported, got {0}", MAX_ODD)]
    TooManyOddGenerators(usize),
    #[error("exponent caps must be at least 1")]
    InvalidCap,
    #[error("generator names must be distinct, non-empty and match the generator counts")]
    InvalidNames,
}
