use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::{normal_words, DeformError, EnvElement, HScalar, NormalWord};
use crate::lie::PoissonRing;
use crate::orbit::{orbit_invariants, OrbitSpec};
use crate::ring::{Parity, SuperPolynomial};
use crate::scalar::Scalar;

/// Extra degrees explored beyond the cutoff before giving up on stabilization.
const MAX_EXTRA_DEGREE: usize = 6;

/// Generators `P_i - c_i(h)` of a two-sided ideal of `U_h`, with classical shadows
/// `p_i - c_i(0)`.
#[derive(Clone, Debug)]
pub struct IdealSpec {
    pub generators: Vec<EnvElement>,
    pub values: Vec<HScalar>,
    pub shadows: Vec<SuperPolynomial>,
    pub cutoff: usize,
}

impl IdealSpec {
    /// Ideal from central elements `P_i` with classical symbols `p_i` and values `c_i(h)`.
    pub fn new(
        generators: Vec<EnvElement>,
        symbols: Vec<SuperPolynomial>,
        values: Vec<HScalar>,
        cutoff: usize,
    ) -> Result<Self, DeformError> {
        if generators.len() != values.len() || symbols.len() != values.len() {
            return Err(DeformError::IdealShape {
                generators: generators.len(),
                values: values.len(),
            });
        }
        let shadows = symbols
            .iter()
            .zip(&values)
            .map(|(p, c)| p - &SuperPolynomial::constant(p.signature(), c.coeff(0)))
            .collect();
        Ok(IdealSpec {
            generators,
            values,
            shadows,
            cutoff,
        })
    }

    /// The zero ideal.
    pub fn zero(cutoff: usize) -> Self {
        IdealSpec {
            generators: Vec::new(),
            values: Vec::new(),
            shadows: Vec::new(),
            cutoff,
        }
    }

    /// `(P_i - c_i)` for the orbit invariants, with `c_i(h) = c_i`; identically zero
    /// generators are skipped.
    pub fn from_orbit(
        ring: &PoissonRing,
        spec: &OrbitSpec,
        order: usize,
        cutoff: usize,
    ) -> Result<Self, DeformError> {
        let values = orbit_invariants(spec);
        let mut gens = Vec::new();
        let mut symbols = Vec::new();
        let mut vals = Vec::new();
        for (k, c) in spec.exponents().into_iter().zip(values) {
            let (p, big_p) = super::casimir_element(ring, k, order)?;
            if p.is_zero() && c.is_zero() {
                continue;
            }
            gens.push(big_p);
            symbols.push(p);
            vals.push(HScalar::constant(order, c));
        }
        Self::new(gens, symbols, vals, cutoff)
    }
}

/// Sparse row echelon form over columns numbered in elimination priority.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: HashMap<usize, BTreeMap<usize, Scalar>>,
}

fn axpy(target: &mut BTreeMap<usize, Scalar>, factor: &Scalar, row: &BTreeMap<usize, Scalar>) {
    for (c, v) in row {
        let entry = target.entry(*c).or_insert_with(Scalar::zero);
        *entry -= factor * v;
        if entry.is_zero() {
            target.remove(c);
        }
    }
}

impl Echelon {
    fn insert(&mut self, mut v: BTreeMap<usize, Scalar>) {
        while let Some((&c, lead)) = v.first_key_value() {
            match self.rows.get(&c) {
                Some(row) => {
                    let f = lead.clone();
                    axpy(&mut v, &f, row);
                }
                None => {
                    let inv = lead.recip();
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    self.rows.insert(c, v);
                    return;
                }
            }
        }
    }

    /// Remainder of `v` after eliminating every pivot column.
    fn reduce(&self, mut v: BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out = BTreeMap::new();
        while let Some((c, x)) = v.pop_first() {
            match self.rows.get(&c) {
                Some(row) => {
                    let mut tail = row.clone();
                    tail.remove(&c);
                    axpy(&mut v, &x, &tail);
                }
                None => {
                    out.insert(c, x);
                }
            }
        }
        out
    }

    fn pivots_from(&self, first: usize) -> usize {
        self.rows.keys().filter(|c| **c >= first).count()
    }
}

fn even_degree(ring: &PoissonRing, word: &[usize]) -> usize {
    word.iter()
        .filter(|i| ring.algebra().parity(**i) == Parity::Even)
        .count()
}

/// Elimination priority inside the cutoff slice: even degree dominates, so that
/// standard monomials prefer odd coordinates.
fn low_key(ring: &PoissonRing, word: &NormalWord) -> (Reverse<usize>, Reverse<usize>, Reverse<NormalWord>) {
    (
        Reverse(even_degree(ring, word)),
        Reverse(word.len()),
        Reverse(word.clone()),
    )
}

/// Words of length at most `top`, split into the high part (length above `cutoff`)
/// followed by the low part in elimination order.
fn ordered_words(ring: &PoissonRing, cutoff: usize, top: usize) -> (Vec<NormalWord>, usize) {
    let words = normal_words(ring.algebra(), top);
    let mut high: Vec<NormalWord> = words.iter().filter(|w| w.len() > cutoff).cloned().collect();
    let mut low: Vec<NormalWord> = words.into_iter().filter(|w| w.len() <= cutoff).collect();
    high.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    low.sort_by_key(|w| low_key(ring, w));
    let split = high.len();
    high.extend(low);
    (high, split)
}

/// Normal word and sign of a coordinate monomial.
fn polynomial_columns(
    ring: &PoissonRing,
    f: &SuperPolynomial,
    index: &HashMap<NormalWord, usize>,
) -> Result<BTreeMap<usize, Scalar>, DeformError> {
    let mut out = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut word: Vec<usize> = m
            .factors()
            .into_iter()
            .map(|g| ring.basis_index(g).ok_or(DeformError::NotACoordinate))
            .collect::<Result<_, _>>()?;
        word.sort_unstable();
        let product = word
            .iter()
            .fold(SuperPolynomial::one(ring.signature()), |acc, i| &acc * &ring.coordinate(*i));
        let sign = product.coefficient(m);
        let col = index[&word];
        let v = c / sign;
        let entry = out.entry(col).or_insert_with(Scalar::zero);
        *entry += v;
        if entry.is_zero() {
            out.remove(&col);
        }
    }
    Ok(out)
}

/// Standard monomials of `k[g*]_{<=d} / (J cap k[g*]_{<=d})` for the ideal `J` generated
/// by `shadows`. The intersection is computed from multiples of degree at most `D`,
/// with `D` raised until its dimension is stable for two steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSlice {
    pub cutoff: usize,
    pub standard: Vec<NormalWord>,
    /// `dim k[g*]_{<=d}`.
    pub slice_dim: usize,
    /// `dim (J cap k[g*]_{<=d})`.
    pub ideal_dim: usize,
    /// Degree of the multiples needed for stabilization.
    pub saturation: usize,
}

pub fn classical_slice(
    ring: &PoissonRing,
    shadows: &[SuperPolynomial],
    cutoff: usize,
) -> Result<ClassicalSlice, DeformError> {
    let shadows: Vec<&SuperPolynomial> = shadows.iter().filter(|q| !q.is_zero()).collect();
    let mut history: Vec<usize> = Vec::new();
    for top in cutoff..=cutoff + MAX_EXTRA_DEGREE {
        let (words, split) = ordered_words(ring, cutoff, top);
        let index: HashMap<NormalWord, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut ech = Echelon::default();
        for q in &shadows {
            let dq = q.degree().unwrap_or(0) as usize;
            if dq > top {
                continue;
            }
            for w in normal_words(ring.algebra(), top - dq) {
                let mono = w
                    .iter()
                    .fold(SuperPolynomial::one(ring.signature()), |acc, i| &acc * &ring.coordinate(*i));
                let row = polynomial_columns(ring, &(&mono * *q), &index)?;
                if !row.is_empty() {
                    ech.insert(row);
                }
            }
        }
        let ideal_dim = ech.pivots_from(split);
        history.push(ideal_dim);
        let n = history.len();
        let stable = shadows.is_empty() || (n >= 3 && history[n - 1] == history[n - 2] && history[n - 2] == history[n - 3]);
        if stable {
            let standard = words[split..]
                .iter()
                .enumerate()
                .filter(|(i, _)| !ech.rows.contains_key(&(split + i)))
                .map(|(_, w)| w.clone())
                .collect();
            return Ok(ClassicalSlice {
                cutoff,
                standard,
                slice_dim: words.len() - split,
                ideal_dim,
                saturation: top,
            });
        }
    }
    Err(DeformError::InconsistentSlices(cutoff + MAX_EXTRA_DEGREE))
}

/// Monomial basis of `U_h / I_h` in filtration degree at most `d`, with a reduction map
/// onto it.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    ring: PoissonRing,
    order: usize,
    cutoff: usize,
    classical: ClassicalSlice,
    /// Standard words found at each power of `h`.
    standard_by_order: Vec<Vec<NormalWord>>,
    /// Standard-set sizes of the classical slices of cutoff `0..=d`.
    slice_dims: Vec<usize>,
    columns: HashMap<(usize, NormalWord), usize>,
    keys: Vec<(usize, NormalWord)>,
    echelon: Echelon,
}

impl QuotientBasis {
    pub fn compute(
        ring: &PoissonRing,
        ideal: &IdealSpec,
        order: usize,
    ) -> Result<Self, DeformError> {
        let cutoff = ideal.cutoff;
        let classical = classical_slice(ring, &ideal.shadows, cutoff)?;
        let slice_dims = (0..=cutoff)
            .map(|k| {
                if k == cutoff {
                    Ok(classical.standard.len())
                } else {
                    classical_slice(ring, &ideal.shadows, k).map(|s| s.standard.len())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let alg = ring.algebra().clone();
        let generators: Vec<EnvElement> = ideal
            .generators
            .iter()
            .zip(&ideal.values)
            .map(|(p, c)| {
                let p = EnvElement::from_terms(
                    &alg,
                    order,
                    p.terms().iter().map(|(w, v)| (w.clone(), v.truncate(order))),
                )?;
                p.sub(&EnvElement::constant(&alg, c.truncate(order)))
            })
            .collect::<Result<_, _>>()?;
        let generators: Vec<EnvElement> = generators.into_iter().filter(|g| !g.is_zero()).collect();

        let mut history: Vec<usize> = Vec::new();
        for top in cutoff..=cutoff + MAX_EXTRA_DEGREE {
            let (words, split) = ordered_words(ring, cutoff, top);
            let mut keys: Vec<(usize, NormalWord)> = Vec::new();
            for w in &words[..split] {
                for j in 0..=order {
                    keys.push((j, w.clone()));
                }
            }
            let high_count = keys.len();
            for j in 0..=order {
                for w in &words[split..] {
                    keys.push((j, w.clone()));
                }
            }
            let columns: HashMap<(usize, NormalWord), usize> =
                keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
            let mut ech = Echelon::default();
            for g in &generators {
                let dg = g.degree().unwrap_or(0);
                if dg > top {
                    continue;
                }
                for w in normal_words(&alg, top - dg) {
                    let prod = EnvElement::word(&alg, order, &w)?.mul(g)?;
                    for j in 0..=order {
                        let row = vectorize(&prod.shift(j), &columns)?;
                        if !row.is_empty() {
                            ech.insert(row);
                        }
                    }
                }
            }
            let ideal_dim = ech.pivots_from(high_count);
            history.push(ideal_dim);
            let n = history.len();
            let stable = generators.is_empty()
                || (n >= 3 && history[n - 1] == history[n - 2] && history[n - 2] == history[n - 3]);
            if !stable {
                continue;
            }
            let mut standard_by_order = vec![Vec::new(); order + 1];
            for (i, (j, w)) in keys.iter().enumerate().skip(high_count) {
                if !ech.rows.contains_key(&i) {
                    standard_by_order[*j].push(w.clone());
                }
            }
            ech.rows.retain(|c, _| *c >= high_count);
            let low_keys = keys[high_count..].to_vec();
            let columns = low_keys
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, k)| (k, i + high_count))
                .collect();
            return Ok(QuotientBasis {
                ring: ring.clone(),
                order,
                cutoff,
                classical,
                standard_by_order,
                slice_dims,
                columns,
                keys,
                echelon: ech,
            });
        }
        Err(DeformError::InconsistentSlices(cutoff + MAX_EXTRA_DEGREE))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Standard words, i.e. the basis of the quotient as a free `k[[h]]`-module.
    pub fn basis(&self) -> &[NormalWord] {
        &self.classical.standard
    }

    pub fn classical(&self) -> &ClassicalSlice {
        &self.classical
    }

    pub fn standard_by_order(&self) -> &[Vec<NormalWord>] {
        &self.standard_by_order
    }

    /// Standard-set sizes of the classical slices with cutoff `0, 1, ..., d`.
    pub fn slice_dims(&self) -> &[usize] {
        &self.slice_dims
    }

    /// Every power of `h` has the classical standard set.
    pub fn is_free(&self) -> bool {
        let mut base = self.classical.standard.clone();
        base.sort();
        self.standard_by_order.iter().all(|s| {
            let mut s = s.clone();
            s.sort();
            s == base
        })
    }

    pub fn rank(&self) -> usize {
        self.classical.standard.len()
    }

    /// Representative of `a` modulo `I_h` on the standard words.
    pub fn reduce(&self, a: &EnvElement) -> Result<EnvElement, DeformError> {
        if a.order() != self.order {
            return Err(DeformError::AlgebraMismatch);
        }
        if let Some(degree) = a.degree() {
            if degree > self.cutoff {
                return Err(DeformError::DegreeOverflow {
                    degree,
                    cutoff: self.cutoff,
                });
            }
        }
        let v = vectorize(a, &self.columns)?;
        let r = self.echelon.reduce(v);
        let alg = self.ring.algebra();
        let mut terms: BTreeMap<NormalWord, HScalar> = BTreeMap::new();
        for (c, x) in r {
            let (j, w) = &self.keys[c];
            let slot = terms
                .entry(w.clone())
                .or_insert_with(|| HScalar::zero(self.order));
            slot.add_assign(&HScalar::constant(self.order, x).shift(*j));
        }
        EnvElement::from_terms(alg, self.order, terms)
    }
}

fn vectorize(
    a: &EnvElement,
    columns: &HashMap<(usize, NormalWord), usize>,
) -> Result<BTreeMap<usize, Scalar>, DeformError> {
    let mut out = BTreeMap::new();
    for (w, c) in a.terms() {
        for (j, x) in c.coeffs().iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let col = columns
                .get(&(j, w.clone()))
                .ok_or(DeformError::DegreeOverflow {
                    degree: w.len(),
                    cutoff: 0,
                })?;
            out.insert(*col, x.clone());
        }
    }
    Ok(out)
}
