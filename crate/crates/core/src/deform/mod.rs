//! The enveloping algebra `U_h` of `g_h` (bracket scaled by `h`), truncated at a
//! global order `h^H`, with PBW normal forms, the supersymmetrizer, star products and
//! quotients by central ideals.

mod hscalar;
mod quotient;
mod tau;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::lie::{LieError, LieSuperAlgebra};
use crate::ring::{Parity, RingError};
use crate::scalar::Scalar;

pub use hscalar::{HPoly, HScalar};
pub use quotient::{classical_slice, ClassicalSlice, IdealSpec, QuotientBasis};
pub use tau::{
    casimir_element, centrality_check, star_axiom_check, star_product, symmetrize,
    symmetrize_h, unsymmetrize, StarAxiomReport, MAX_TAU_DEGREE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("elements belong to different algebras or truncation orders")]
    AlgebraMismatch,
    #[error("symmetrization is capped at degree {max}; got degree {degree}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("element of degree {degree} exceeds the cutoff {cutoff}")]
    DegreeOverflow { degree: usize, cutoff: usize },
    #[error("slice dimensions did not stabilize up to degree {0}")]
    InconsistentSlices(usize),
    #[error("polynomial involves a generator that is not a coordinate of the algebra")]
    NotACoordinate,
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("ideal data has {generators} generators but {values} values")]
    IdealShape { generators: usize, values: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Which adjacent inversion the rewriting engine resolves first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Nondecreasing sequence of basis indices (0-based) with no repeated odd index.
pub type NormalWord = Vec<usize>;

/// Element of `U_h` mod `h^{H+1}` in PBW normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct EnvElement {
    algebra: Arc<LieSuperAlgebra>,
    order: usize,
    terms: BTreeMap<NormalWord, HScalar>,
}

fn same_algebra(a: &Arc<LieSuperAlgebra>, b: &Arc<LieSuperAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Position of the adjacent pair to rewrite, if the word is not normal.
fn redex(algebra: &LieSuperAlgebra, word: &[usize], strategy: Strategy) -> Option<usize> {
    let bad = |k: &usize| {
        let (a, b) = (word[*k], word[*k + 1]);
        a > b || (a == b && algebra.parity(a) == Parity::Odd)
    };
    let n = word.len().saturating_sub(1);
    match strategy {
        Strategy::Leftmost => (0..n).find(bad),
        Strategy::Rightmost => (0..n).rev().find(bad),
    }
}

fn inversions(word: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                count += 1;
            }
        }
    }
    count
}

pub fn is_normal(algebra: &LieSuperAlgebra, word: &[usize]) -> bool {
    redex(algebra, word, Strategy::Leftmost).is_none()
}

/// Rewrite a linear combination of arbitrary words to normal form with
/// `X_J X_I -> (-1)^{p_I p_J} X_I X_J + h [X_J, X_I]` for `J > I` and
/// `X_a X_a -> (h/2) [X_a, X_a]` for odd `a`. Words are processed in decreasing
/// `(length, inversions)` order so that partial results merge.
pub fn normal_form_many(
    algebra: &Arc<LieSuperAlgebra>,
    order: usize,
    items: impl IntoIterator<Item = (Vec<usize>, HScalar)>,
    strategy: Strategy,
) -> EnvElement {
    let mut pending: BTreeMap<(usize, usize, Vec<usize>), HScalar> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(usize, usize, Vec<usize>), HScalar>,
                    word: Vec<usize>,
                    c: HScalar| {
        if c.is_zero() {
            return;
        }
        let key = (word.len(), inversions(&word), word);
        match pending.get_mut(&key) {
            Some(existing) => {
                existing.add_assign(&c);
                if existing.is_zero() {
                    pending.remove(&key);
                }
            }
            None => {
                pending.insert(key, c);
            }
        }
    };
    for (w, c) in items {
        push(&mut pending, w, c.truncate(order));
    }
    let mut done: BTreeMap<NormalWord, HScalar> = BTreeMap::new();
    let half = Scalar::new(1.into(), 2.into());
    while let Some(((_, _, word), c)) = pending.pop_last() {
        let Some(k) = redex(algebra, &word, strategy) else {
            let slot = done.entry(word).or_insert_with(|| HScalar::zero(order));
            slot.add_assign(&c);
            continue;
        };
        let (j, i) = (word[k], word[k + 1]);
        let replaced = |kk: usize| {
            let mut w = Vec::with_capacity(word.len() - 1);
            w.extend_from_slice(&word[..k]);
            w.push(kk);
            w.extend_from_slice(&word[k + 2..]);
            w
        };
        let shifted = c.shift(1);
        if j == i {
            for (kk, v) in algebra.bracket(j, j) {
                push(&mut pending, replaced(*kk), shifted.scale(&(v * &half)));
            }
        } else {
            let mut swapped = word.clone();
            swapped.swap(k, k + 1);
            let both_odd = algebra.parity(i) == Parity::Odd && algebra.parity(j) == Parity::Odd;
            push(&mut pending, swapped, if both_odd { c.neg() } else { c.clone() });
            for (kk, v) in algebra.bracket(j, i) {
                push(&mut pending, replaced(*kk), shifted.scale(v));
            }
        }
    }
    done.retain(|_, c| !c.is_zero());
    EnvElement {
        algebra: algebra.clone(),
        order,
        terms: done,
    }
}

/// Normal form of a single word with the given coefficient.
pub fn normal_form(
    algebra: &Arc<LieSuperAlgebra>,
    word: &[usize],
    coeff: HScalar,
    strategy: Strategy,
) -> EnvElement {
    let order = coeff.order();
    normal_form_many(algebra, order, [(word.to_vec(), coeff)], strategy)
}

/// All normal words of length at most `max_degree`, shortest first.
pub fn normal_words(algebra: &LieSuperAlgebra, max_degree: usize) -> Vec<NormalWord> {
    let dim = algebra.dim();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<NormalWord> = vec![Vec::new()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for w in &frontier {
            let start = w.last().copied().unwrap_or(0);
            for i in start..dim {
                if w.last() == Some(&i) && algebra.parity(i) == Parity::Odd {
                    continue;
                }
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl EnvElement {
    pub fn zero(algebra: &Arc<LieSuperAlgebra>, order: usize) -> Self {
        EnvElement {
            algebra: algebra.clone(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<LieSuperAlgebra>, order: usize) -> Self {
        Self::constant(algebra, HScalar::one(order))
    }

    pub fn constant(algebra: &Arc<LieSuperAlgebra>, c: HScalar) -> Self {
        let order = c.order();
        let mut e = Self::zero(algebra, order);
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    /// The basis element `X_i` (0-based).
    pub fn generator(
        algebra: &Arc<LieSuperAlgebra>,
        order: usize,
        i: usize,
    ) -> Result<Self, DeformError> {
        if i >= algebra.dim() {
            return Err(DeformError::IndexOutOfRange(i));
        }
        let mut e = Self::zero(algebra, order);
        e.terms.insert(vec![i], HScalar::one(order));
        Ok(e)
    }

    /// Product `X_{w_1} ... X_{w_k}` of an arbitrary word, normalized.
    pub fn word(
        algebra: &Arc<LieSuperAlgebra>,
        order: usize,
        word: &[usize],
    ) -> Result<Self, DeformError> {
        if let Some(&bad) = word.iter().find(|&&i| i >= algebra.dim()) {
            return Err(DeformError::IndexOutOfRange(bad));
        }
        Ok(normal_form(algebra, word, HScalar::one(order), Strategy::Leftmost))
    }

    /// Build from `(word, coefficient)` pairs; words need not be normal.
    pub fn from_terms(
        algebra: &Arc<LieSuperAlgebra>,
        order: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, HScalar)>,
    ) -> Result<Self, DeformError> {
        let terms: Vec<_> = terms.into_iter().collect();
        for (w, _) in &terms {
            if let Some(&bad) = w.iter().find(|&&i| i >= algebra.dim()) {
                return Err(DeformError::IndexOutOfRange(bad));
            }
        }
        Ok(normal_form_many(algebra, order, terms, Strategy::Leftmost))
    }

    pub fn algebra(&self) -> &Arc<LieSuperAlgebra> {
        &self.algebra
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<NormalWord, HScalar> {
        &self.terms
    }

    pub fn coefficient(&self, word: &[usize]) -> HScalar {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| HScalar::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Parity when homogeneous.
    pub fn parity(&self) -> Option<Parity> {
        let mut found = None;
        for w in self.terms.keys() {
            let odd = w
                .iter()
                .filter(|i| self.algebra.parity(**i) == Parity::Odd)
                .count();
            let p = Parity::from_bit(odd % 2);
            match found {
                None => found = Some(p),
                Some(f) if f != p => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    fn check(&self, other: &EnvElement) -> Result<(), DeformError> {
        if self.order != other.order || !same_algebra(&self.algebra, &other.algebra) {
            return Err(DeformError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &EnvElement) -> Result<EnvElement, DeformError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let slot = out
                .terms
                .entry(w.clone())
                .or_insert_with(|| HScalar::zero(self.order));
            slot.add_assign(c);
            if slot.is_zero() {
                out.terms.remove(w);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &EnvElement) -> Result<EnvElement, DeformError> {
        self.add(&other.scale(&HScalar::constant(self.order, -Scalar::one())))
    }

    pub fn scale(&self, c: &HScalar) -> EnvElement {
        let terms = self
            .terms
            .iter()
            .map(|(w, v)| (w.clone(), v.mul(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        EnvElement {
            algebra: self.algebra.clone(),
            order: self.order,
            terms,
        }
    }

    /// Multiply by `h^k`.
    pub fn shift(&self, k: usize) -> EnvElement {
        let terms = self
            .terms
            .iter()
            .map(|(w, v)| (w.clone(), v.shift(k)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        EnvElement {
            algebra: self.algebra.clone(),
            order: self.order,
            terms,
        }
    }

    pub fn mul(&self, other: &EnvElement) -> Result<EnvElement, DeformError> {
        self.mul_with(other, Strategy::Leftmost)
    }

    pub fn mul_with(&self, other: &EnvElement, strategy: Strategy) -> Result<EnvElement, DeformError> {
        self.check(other)?;
        let mut items = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let c = ca.mul(cb);
                if c.is_zero() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                items.push((w, c));
            }
        }
        Ok(normal_form_many(&self.algebra, self.order, items, strategy))
    }

    /// `ab - (-1)^{|a||b|} ba` for homogeneous elements.
    pub fn super_commutator(&self, other: &EnvElement) -> Result<EnvElement, DeformError> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        let both_odd = self.parity() == Some(Parity::Odd) && other.parity() == Some(Parity::Odd);
        if both_odd {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    /// Keep only the coefficients of `h^0..h^k`.
    pub fn truncate(&self, k: usize) -> EnvElement {
        let terms = self
            .terms
            .iter()
            .map(|(w, v)| (w.clone(), v.truncate_to(k)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        EnvElement {
            algebra: self.algebra.clone(),
            order: self.order,
            terms,
        }
    }
}

impl fmt::Display for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(w, c)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter()
                        .map(|i| format!("X{}", i + 1))
                        .collect::<Vec<_>>()
                        .join("*")
                };
                format!("({c})*{word}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EnvElement[{}, H={}]({self})", self.algebra.name(), self.order)
    }
}
