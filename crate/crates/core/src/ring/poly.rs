use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::{Generator, RingError, RingSignature};
use crate::scalar::{self, Scalar};

/// Parity of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: usize) -> Self {
        if bit % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        Parity::from_bit(self.bit() + 1)
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

/// Parity report for a possibly inhomogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyParity {
    Even,
    Odd,
    Mixed,
}

impl PolyParity {
    pub fn homogeneous(self) -> Option<Parity> {
        match self {
            PolyParity::Even => Some(Parity::Even),
            PolyParity::Odd => Some(Parity::Odd),
            PolyParity::Mixed => None,
        }
    }
}

/// Element of a free supercommutative ring with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` under the graded-lex monomial order and zero
/// coefficients are never stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperPolynomial {
    sig: Arc<RingSignature>,
    terms: BTreeMap<Monomial, Scalar>,
}

pub(crate) fn same_ring(a: &Arc<RingSignature>, b: &Arc<RingSignature>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SuperPolynomial {
    pub fn zero(sig: &Arc<RingSignature>) -> Self {
        SuperPolynomial {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: &Arc<RingSignature>, c: Scalar) -> Self {
        let mut p = Self::zero(sig);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(sig), c);
        }
        p
    }

    pub fn one(sig: &Arc<RingSignature>) -> Self {
        Self::constant(sig, Scalar::one())
    }

    pub fn generator(sig: &Arc<RingSignature>, g: Generator) -> Result<Self, RingError> {
        if !sig.contains(g) {
            return Err(RingError::IndexOutOfRange { generator: g });
        }
        let m = Monomial::generator(sig, g);
        // x with cap >= 1 always survives; nothing to check
        let mut p = Self::zero(sig);
        p.terms.insert(m, Scalar::one());
        Ok(p)
    }

    /// `x_{i+1}` (0-based index). Panics if out of range.
    pub fn even_gen(sig: &Arc<RingSignature>, i: usize) -> Self {
        Self::generator(sig, Generator::Even(i)).expect("even generator in range")
    }

    /// `t_{i+1}` (0-based index). Panics if out of range.
    pub fn odd_gen(sig: &Arc<RingSignature>, i: usize) -> Self {
        Self::generator(sig, Generator::Odd(i)).expect("odd generator in range")
    }

    /// `c * x^even * t_{odd[0]} * t_{odd[1]} * ...`, signs from sorting absorbed.
    pub fn term(
        sig: &Arc<RingSignature>,
        c: Scalar,
        even: &[u32],
        odd: &[usize],
    ) -> Result<Self, RingError> {
        let mut p = Self::zero(sig);
        if let Some((m, neg)) = Monomial::from_exponents(sig, even, odd)? {
            p.add_term(m, if neg { -c } else { c });
        }
        Ok(p)
    }

    /// Sum of the given terms; repeated monomials are combined.
    pub fn from_terms(
        sig: &Arc<RingSignature>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(sig);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn signature(&self) -> &Arc<RingSignature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(&self.sig))
    }

    /// `Some(c)` iff the element is the constant `c`.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if same_ring(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(RingError::SignatureMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.sig);
        }
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    /// Supercommutative product. Terms with a repeated odd generator or an exceeded
    /// cap vanish; interleaving odd factors contributes the Koszul sign.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut out = Self::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb, &self.sig) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.sig);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn parity(&self) -> PolyParity {
        let mut even = false;
        let mut odd = false;
        for m in self.terms.keys() {
            if m.is_odd() {
                odd = true;
            } else {
                even = true;
            }
        }
        match (even, odd) {
            (_, false) => PolyParity::Even,
            (false, true) => PolyParity::Odd,
            (true, true) => PolyParity::Mixed,
        }
    }

    /// Projection onto the ordinary algebra: drop every term containing an odd generator.
    pub fn body(&self) -> Self {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.odd_mask() == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The part of odd degree exactly `k`.
    pub fn odd_component(&self, k: usize) -> Self {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.odd_degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous component of the given parity.
    pub fn parity_component(&self, p: Parity) -> Self {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Parity::from_bit(m.odd_degree()) == p)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The part of total degree exactly `k`.
    pub fn degree_component(&self, k: u32) -> Self {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Inverse of `c + eta` with `c` a nonzero constant and `eta` nilpotent, by the
    /// terminating series `c^-1 * sum (-eta/c)^k`.
    pub fn invert(&self) -> Result<Self, RingError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(RingError::NotInvertible);
        }
        let mut eta = self.clone();
        eta.add_term(Monomial::one(&self.sig), -c.clone());
        if eta.terms.keys().any(|m| !m.is_nilpotent(&self.sig)) {
            return Err(RingError::NotInvertible);
        }
        let inv_c = c.recip();
        let u = eta.scale(&-inv_c.clone());
        let mut acc = Self::one(&self.sig);
        let mut power = Self::one(&self.sig);
        for _ in 0..=self.sig.nilpotency_bound() {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        debug_assert!(power.is_zero(), "nilpotent series failed to terminate");
        Ok(acc.scale(&inv_c))
    }

    /// Image under the parity-preserving ring morphism sending each listed generator to
    /// the given element of `target`. Unlisted generators go to the generator with the
    /// same index in `target`.
    pub fn substitute(
        &self,
        target: &Arc<RingSignature>,
        assignment: &[(Generator, SuperPolynomial)],
    ) -> Result<Self, RingError> {
        let image = |g: Generator| -> Result<SuperPolynomial, RingError> {
            if let Some((_, p)) = assignment.iter().find(|(h, _)| *h == g) {
                return Ok(p.clone());
            }
            SuperPolynomial::generator(target, g)
        };
        for (g, p) in assignment {
            if !self.sig.contains(*g) {
                return Err(RingError::IndexOutOfRange { generator: *g });
            }
            if !same_ring(p.signature(), target) {
                return Err(RingError::SignatureMismatch);
            }
            let want = match g {
                Generator::Even(_) => PolyParity::Even,
                Generator::Odd(_) => PolyParity::Odd,
            };
            if !p.is_zero() && p.parity() != want {
                return Err(RingError::ParityMismatch { generator: *g });
            }
        }
        let even_images = (0..self.sig.even_count())
            .map(|i| image(Generator::Even(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let odd_images = (0..self.sig.odd_count())
            .map(|i| image(Generator::Odd(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut powers: Vec<Vec<SuperPolynomial>> =
            even_images.iter().map(|p| vec![Self::one(target), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(target, c.clone());
            for (i, &e) in m.even_exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &even_images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    acc = &acc * &powers[i][e];
                }
            }
            for j in m.odd_indices() {
                acc = &acc * &odd_images[j];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Same element viewed in a larger ring whose first generators match this ring's.
    pub fn embed(&self, target: &Arc<RingSignature>) -> Result<Self, RingError> {
        if target.even_count() < self.sig.even_count() || target.odd_count() < self.sig.odd_count()
        {
            return Err(RingError::SignatureMismatch);
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut even = m.even_exponents().to_vec();
            even.resize(target.even_count(), 0);
            match Monomial::from_exponents(target, &even, &m.odd_indices())? {
                Some((mm, neg)) => out.add_term(mm, if neg { -c.clone() } else { c.clone() }),
                None => {}
            }
        }
        Ok(out)
    }

    /// Formal left derivative with respect to an odd generator or ordinary derivative
    /// with respect to an even one.
    pub fn derivative(&self, g: Generator) -> Self {
        let mut out = Self::zero(&self.sig);
        for (m, c) in &self.terms {
            match g {
                Generator::Even(i) => {
                    let e = m.even_exponents()[i];
                    if e == 0 {
                        continue;
                    }
                    let mut even = m.even_exponents().to_vec();
                    even[i] -= 1;
                    out.add_term(
                        Monomial::from_parts(even, m.odd_mask()),
                        c * Scalar::from_integer(e.into()),
                    );
                }
                Generator::Odd(j) => {
                    let bit = 1u64 << j;
                    if m.odd_mask() & bit == 0 {
                        continue;
                    }
                    let below = (m.odd_mask() & (bit - 1)).count_ones();
                    let coeff = if below % 2 == 1 { -c.clone() } else { c.clone() };
                    out.add_term(
                        Monomial::from_parts(m.even_exponents().to_vec(), m.odd_mask() & !bit),
                        coeff,
                    );
                }
            }
        }
        out
    }
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPolynomial({self})")
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_poly(self))
    }
}

impl<'a> Add<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    /// Panics on mismatched rings; use `checked_add` to handle that case.
    fn add(self, rhs: &'a SuperPolynomial) -> SuperPolynomial {
        self.checked_add(rhs).expect("ring mismatch in add")
    }
}

impl<'a> Sub<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &'a SuperPolynomial) -> SuperPolynomial {
        self.checked_sub(rhs).expect("ring mismatch in sub")
    }
}

impl<'a> Mul<&'a SuperPolynomial> for &'a SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &'a SuperPolynomial) -> SuperPolynomial {
        self.checked_mul(rhs).expect("ring mismatch in mul")
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.scale(&-scalar::one())
    }
}

impl Add for SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self + &rhs
    }
}

impl Sub for SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self - &rhs
    }
}

impl Mul for SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self * &rhs
    }
}

impl Neg for SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        -&self
    }
}
