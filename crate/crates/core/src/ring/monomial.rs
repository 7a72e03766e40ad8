use std::cmp::Ordering;

use super::{Generator, RingError, RingSignature};

/// A monomial `x^e * t_{i1} * ... * t_{ik}` with odd indices in ascending order.
///
/// Odd generators are stored as a bitmask; bit `i` set means `t_{i+1}` is present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    even: Vec<u32>,
    odd: u64,
}

/// Sign of a sort, or vanishing because an odd index repeats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddSign {
    Plus,
    Minus,
    Zero,
}

/// Sort a word of odd generator indices (0-based) into ascending order.
///
/// Returns the permutation sign together with the sorted list, or `OddSign::Zero` when an
/// index repeats (`t^2 = 0`).
pub fn odd_normalize(
    indices: &[usize],
    odd_count: usize,
) -> Result<(OddSign, Vec<usize>), RingError> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= odd_count) {
        return Err(RingError::IndexOutOfRange {
            generator: Generator::Odd(bad),
        });
    }
    let mut sorted = indices.to_vec();
    let mut inversions = 0usize;
    // insertion sort, counting adjacent transpositions
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            inversions += 1;
            j -= 1;
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok((OddSign::Zero, Vec::new()));
    }
    let sign = if inversions % 2 == 0 {
        OddSign::Plus
    } else {
        OddSign::Minus
    };
    Ok((sign, sorted))
}

/// Parity of the number of pairs `(i in a, j in b)` with `i > j`: the Koszul sign of
/// moving the odd factors of `b` to their sorted place after those of `a`.
pub(crate) fn merge_sign(a: u64, b: u64) -> bool {
    let mut rest = b;
    let mut flips = 0u32;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 63 { 0 } else { a >> (j + 1) };
        flips += above.count_ones();
    }
    flips % 2 == 1
}

impl Monomial {
    pub fn one(sig: &RingSignature) -> Self {
        Monomial {
            even: vec![0; sig.even_count()],
            odd: 0,
        }
    }

    pub(crate) fn from_parts(even: Vec<u32>, odd: u64) -> Self {
        Monomial { even, odd }
    }

    pub fn generator(sig: &RingSignature, g: Generator) -> Self {
        let mut m = Monomial::one(sig);
        match g {
            Generator::Even(i) => m.even[i] = 1,
            Generator::Odd(i) => m.odd = 1 << i,
        }
        m
    }

    /// Build from even exponents and a list of odd indices (0-based, any order).
    ///
    /// Returns the monomial and the sign picked up by sorting the odd part, or `None` if the
    /// monomial vanishes (repeated odd index or an exceeded cap).
    pub fn from_exponents(
        sig: &RingSignature,
        even: &[u32],
        odd: &[usize],
    ) -> Result<Option<(Self, bool)>, RingError> {
        if even.len() != sig.even_count() {
            return Err(RingError::SignatureMismatch);
        }
        let (sign, sorted) = odd_normalize(odd, sig.odd_count())?;
        if sign == OddSign::Zero {
            return Ok(None);
        }
        for (i, &e) in even.iter().enumerate() {
            if let Some(cap) = sig.cap(i) {
                if e > cap {
                    return Ok(None);
                }
            }
        }
        let mask = sorted.iter().fold(0u64, |m, &i| m | (1 << i));
        Ok(Some((
            Monomial {
                even: even.to_vec(),
                odd: mask,
            },
            sign == OddSign::Minus,
        )))
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    /// Odd generator indices (0-based), ascending.
    pub fn odd_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.odd.count_ones() as usize);
        let mut rest = self.odd;
        while rest != 0 {
            out.push(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        out
    }

    pub fn odd_degree(&self) -> usize {
        self.odd.count_ones() as usize
    }

    pub fn even_degree(&self) -> u32 {
        self.even.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.even_degree() + self.odd.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.odd.count_ones() % 2 == 1
    }

    /// Nilpotent iff it contains an odd generator or a capped even generator.
    pub fn is_nilpotent(&self, sig: &RingSignature) -> bool {
        self.odd != 0
            || self
                .even
                .iter()
                .enumerate()
                .any(|(i, &e)| e > 0 && sig.cap(i).is_some())
    }

    /// Product `self * other`; `None` if it vanishes, otherwise the monomial and whether
    /// the Koszul sign is negative.
    pub fn mul(&self, other: &Monomial, sig: &RingSignature) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut even = Vec::with_capacity(self.even.len());
        for (i, (a, b)) in self.even.iter().zip(&other.even).enumerate() {
            let e = a + b;
            if let Some(cap) = sig.cap(i) {
                if e > cap {
                    return None;
                }
            }
            even.push(e);
        }
        Some((
            Monomial {
                even,
                odd: self.odd | other.odd,
            },
            merge_sign(self.odd, other.odd),
        ))
    }

    /// The factor sequence `x1^e1 ... xM^eM t_i1 ... t_ik` written out generator by
    /// generator; multiplying these in order reproduces the monomial with sign +1.
    pub fn factors(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for (i, &e) in self.even.iter().enumerate() {
            for _ in 0..e {
                out.push(Generator::Even(i));
            }
        }
        out.extend(self.odd_indices().into_iter().map(Generator::Odd));
        out
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree, then even exponents, then odd mask.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| {
                // lexicographic on the ascending index lists, reversed so t1 sorts above t2
                let a = self.odd.reverse_bits();
                let b = other.odd.reverse_bits();
                a.cmp(&b)
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
