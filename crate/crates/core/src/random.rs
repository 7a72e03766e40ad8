//! Seeded random generators for ring elements and supermatrices.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::linalg::{self, QMatrix};
use crate::matrix::{BlockShape, DeclaredParity, SuperMatrix};
use crate::ring::{Monomial, Parity, RingSignature, SuperPolynomial};
use crate::scalar::{frac, int, Scalar};

/// Small nonzero rational with numerator in `-3..=3` and denominator in `1..=2`.
pub fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let num: i64 = rng.gen_range(-3..=3);
        if num != 0 {
            return frac(num, rng.gen_range(1..=2));
        }
    }
}

/// Exponent data `(even, odd)` of a random nonvanishing monomial with total degree at
/// most `max_degree` and odd degree of the given parity.
pub fn random_monomial<R: Rng>(
    sig: &RingSignature,
    rng: &mut R,
    max_degree: u32,
    parity: Option<Parity>,
) -> Option<(Vec<u32>, Vec<usize>)> {
    for _ in 0..32 {
        let mut even = vec![0u32; sig.even_count()];
        let mut odd = Vec::new();
        let degree = rng.gen_range(0..=max_degree);
        for _ in 0..degree {
            let total = sig.even_count() + sig.odd_count();
            if total == 0 {
                break;
            }
            let g = rng.gen_range(0..total);
            if g < sig.even_count() {
                even[g] += 1;
            } else {
                odd.push(g - sig.even_count());
            }
        }
        odd.sort_unstable();
        odd.dedup();
        if let Some(p) = parity {
            if Parity::from_bit(odd.len() % 2) != p {
                continue;
            }
        }
        if let Ok(Some(_)) = Monomial::from_exponents(sig, &even, &odd) {
            return Some((even, odd));
        }
    }
    None
}

/// Random polynomial with at most `terms` terms, optionally of fixed parity.
pub fn random_poly<R: Rng>(
    sig: &Arc<RingSignature>,
    rng: &mut R,
    max_degree: u32,
    terms: usize,
    parity: Option<Parity>,
) -> SuperPolynomial {
    let mut acc = SuperPolynomial::zero(sig);
    for _ in 0..terms {
        if let Some((even, odd)) = random_monomial(sig, rng, max_degree, parity) {
            let t = SuperPolynomial::term(sig, small_scalar(rng), &even, &odd).expect("in range");
            acc = &acc + &t;
        }
    }
    acc
}

/// Random element of the ideal generated by the odd generators, of the given parity.
pub fn random_nilpotent<R: Rng>(
    sig: &Arc<RingSignature>,
    rng: &mut R,
    terms: usize,
    parity: Parity,
) -> SuperPolynomial {
    let mut acc = SuperPolynomial::zero(sig);
    let n = sig.odd_count();
    if n == 0 {
        return acc;
    }
    for _ in 0..terms {
        let k = rng.gen_range(1..=n.min(3));
        let mut idx: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        idx.sort_unstable();
        idx.dedup();
        if Parity::from_bit(idx.len() % 2) != parity {
            continue;
        }
        let even = vec![0u32; sig.even_count()];
        let t = SuperPolynomial::term(sig, small_scalar(rng), &even, &idx).expect("in range");
        acc = &acc + &t;
    }
    acc
}

/// Random invertible rational `k x k` matrix with small integer entries.
pub fn random_invertible_scalar<R: Rng>(rng: &mut R, k: usize) -> QMatrix {
    loop {
        let m: QMatrix = (0..k)
            .map(|_| (0..k).map(|_| int(rng.gen_range(-2..=2))).collect())
            .collect();
        if !linalg::determinant(&m).is_zero() {
            return m;
        }
    }
}

/// Random invertible even supermatrix: an invertible block-diagonal rational body plus
/// a nilpotent part built from the odd generators.
pub fn random_invertible<R: Rng>(
    shape: BlockShape,
    sig: &Arc<RingSignature>,
    rng: &mut R,
    terms: usize,
) -> SuperMatrix {
    let size = shape.size();
    let p = random_invertible_scalar(rng, shape.m);
    let s = random_invertible_scalar(rng, shape.n);
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let block = shape.block_parity(i, j);
            let body = match (i < shape.m, j < shape.m) {
                (true, true) => p[i][j].clone(),
                (false, false) => s[i - shape.m][j - shape.m].clone(),
                _ => Scalar::zero(),
            };
            let nil = random_nilpotent(sig, rng, terms, block);
            entries.push(&SuperPolynomial::constant(sig, body) + &nil);
        }
    }
    SuperMatrix::new(shape, sig, entries, DeclaredParity::Even).expect("even pattern")
}

/// Random even supermatrix whose entries are general polynomials.
pub fn random_even<R: Rng>(
    shape: BlockShape,
    sig: &Arc<RingSignature>,
    rng: &mut R,
    max_degree: u32,
    terms: usize,
) -> SuperMatrix {
    let size = shape.size();
    let entries = (0..size * size)
        .map(|idx| {
            let block = shape.block_parity(idx / size, idx % size);
            random_poly(sig, rng, max_degree, terms, Some(block))
        })
        .collect();
    SuperMatrix::new(shape, sig, entries, DeclaredParity::Even).expect("even pattern")
}

/// `k` distinct small rationals.
pub fn distinct_scalars<R: Rng>(rng: &mut R, k: usize) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::with_capacity(k);
    while out.len() < k {
        let v = frac(rng.gen_range(-9..=9), rng.gen_range(1..=3));
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}
