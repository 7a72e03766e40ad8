use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{normal_form_many, DeformError, EnvElement, HPoly, HScalar, QuotientBasis, Strategy};
use crate::lie::PoissonRing;
use crate::random;
use crate::ring::{Monomial, Parity, PolyParity, SuperPolynomial};
use crate::scalar::{factorial, Scalar};

/// Largest monomial degree accepted by [`symmetrize`].
pub const MAX_TAU_DEGREE: usize = 6;

/// Basis indices of the factors of a monomial, in the order that multiplies back to
/// the monomial with sign `+1`.
fn monomial_word(ring: &PoissonRing, m: &Monomial) -> Result<Vec<usize>, DeformError> {
    m.factors()
        .into_iter()
        .map(|g| ring.basis_index(g).ok_or(DeformError::NotACoordinate))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Signed average of all orderings of `word`: the Koszul sign counts transposed
/// pairs of odd letters.
fn symmetrized_words(ring: &PoissonRing, word: &[usize], c: &Scalar) -> Vec<(Vec<usize>, Scalar)> {
    let alg = ring.algebra();
    let p = word.len();
    let weight = c / factorial(p);
    let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for perm in permutations(p) {
        let mut odd_swaps = 0usize;
        for a in 0..p {
            for b in a + 1..p {
                if perm[a] > perm[b]
                    && alg.parity(word[perm[a]]) == Parity::Odd
                    && alg.parity(word[perm[b]]) == Parity::Odd
                {
                    odd_swaps += 1;
                }
            }
        }
        let w: Vec<usize> = perm.iter().map(|&i| word[i]).collect();
        let v = if odd_swaps % 2 == 1 { -weight.clone() } else { weight.clone() };
        *acc.entry(w).or_insert_with(Scalar::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// The supersymmetrizer `tau(y_1...y_p) = 1/p! sum_s sign(s) X_{y_s(1)} ... X_{y_s(p)}`,
/// extended linearly.
pub fn symmetrize(
    ring: &PoissonRing,
    f: &SuperPolynomial,
    order: usize,
) -> Result<EnvElement, DeformError> {
    symmetrize_h(ring, &HPoly::classical(f, order))
}

/// `tau` extended `h`-linearly to polynomials with series coefficients.
pub fn symmetrize_h(ring: &PoissonRing, f: &HPoly) -> Result<EnvElement, DeformError> {
    let order = f.order();
    let mut items = Vec::new();
    for (k, part) in f.parts().iter().enumerate() {
        if part.signature() != ring.signature() {
            return Err(DeformError::NotACoordinate);
        }
        for (m, c) in part.terms() {
            let degree = m.degree() as usize;
            if degree > MAX_TAU_DEGREE {
                return Err(DeformError::DegreeTooLarge {
                    degree,
                    max: MAX_TAU_DEGREE,
                });
            }
            let word = monomial_word(ring, m)?;
            for (w, v) in symmetrized_words(ring, &word, c) {
                items.push((w, HScalar::constant(order, v).shift(k)));
            }
        }
    }
    Ok(normal_form_many(ring.algebra(), order, items, Strategy::Leftmost))
}

/// Product of the coordinates along a word.
fn word_monomial(ring: &PoissonRing, word: &[usize]) -> SuperPolynomial {
    word.iter().fold(SuperPolynomial::one(ring.signature()), |acc, i| {
        &acc * &ring.coordinate(*i)
    })
}

/// Inverse of [`symmetrize`] by back-substitution on word length: the longest word `w`
/// of the remainder is the leading term of `tau(x_w)`, which adds only shorter words.
pub fn unsymmetrize(ring: &PoissonRing, a: &EnvElement) -> Result<HPoly, DeformError> {
    let order = a.order();
    let mut out = HPoly::zero(ring.signature(), order);
    let mut rest = a.clone();
    let mut cache: HashMap<Vec<usize>, EnvElement> = HashMap::new();
    while let Some((word, c)) = rest
        .terms()
        .iter()
        .max_by_key(|(w, _)| (w.len(), (*w).clone()))
        .map(|(w, c)| (w.clone(), c.clone()))
    {
        let mono = word_monomial(ring, &word);
        out.add_scaled(&c, &mono);
        let image = match cache.get(&word) {
            Some(e) => e.clone(),
            None => {
                let e = symmetrize(ring, &mono, order)?;
                cache.insert(word.clone(), e.clone());
                e
            }
        };
        debug_assert_eq!(image.coefficient(&word), HScalar::one(order));
        rest = rest.sub(&image.scale(&c))?;
    }
    Ok(out)
}

/// `f * g = tau^-1(tau(f) tau(g))`.
pub fn star_product(
    ring: &PoissonRing,
    f: &SuperPolynomial,
    g: &SuperPolynomial,
    order: usize,
) -> Result<HPoly, DeformError> {
    let tf = symmetrize(ring, f, order)?;
    let tg = symmetrize(ring, g, order)?;
    unsymmetrize(ring, &tf.mul(&tg)?)
}

/// The invariant polynomial of degree `i` and its image `P_i = tau(p_i)` in `U_h`.
pub fn casimir_element(
    ring: &PoissonRing,
    i: u32,
    order: usize,
) -> Result<(SuperPolynomial, EnvElement), DeformError> {
    let p = ring.invariant(i)?;
    let big_p = symmetrize(ring, &p, order)?;
    Ok((p, big_p))
}

/// Basis indices `I` for which `P X_I - X_I P` does not vanish.
pub fn centrality_check(p: &EnvElement) -> Result<Vec<usize>, DeformError> {
    let alg = p.algebra().clone();
    let mut failures = Vec::new();
    for i in 0..alg.dim() {
        let x = EnvElement::generator(&alg, p.order(), i)?;
        if !p.super_commutator(&x)?.is_zero() {
            failures.push(i);
        }
    }
    Ok(failures)
}

/// Outcome of [`star_axiom_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarAxiomReport {
    pub pairs: usize,
    /// Human-readable descriptions of failed identities.
    pub failures: Vec<String>,
}

impl StarAxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn parity_of(f: &SuperPolynomial) -> Parity {
    match f.parity() {
        PolyParity::Odd => Parity::Odd,
        _ => Parity::Even,
    }
}

/// Check `f * g = fg mod h` and `f * g - (-1)^{|f||g|} g * f = h{f, g} mod h^2` on all
/// coordinate pairs plus `samples` random homogeneous pairs of degree at most 2. With
/// a quotient, both sides are compared after reduction.
pub fn star_axiom_check(
    ring: &PoissonRing,
    quotient: Option<&QuotientBasis>,
    samples: usize,
    order: usize,
    seed: u64,
) -> Result<StarAxiomReport, DeformError> {
    let order = order.max(1);
    let dim = ring.algebra().dim();
    let mut pairs: Vec<(SuperPolynomial, SuperPolynomial)> = Vec::new();
    let one = SuperPolynomial::one(ring.signature());
    for i in 0..dim {
        pairs.push((ring.coordinate(i), one.clone()));
        for j in 0..dim {
            pairs.push((ring.coordinate(i), ring.coordinate(j)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = ring.signature().clone();
    for _ in 0..samples {
        use rand::Rng;
        let pf = Parity::from_bit(rng.gen_range(0..2));
        let pg = Parity::from_bit(rng.gen_range(0..2));
        let f = random::random_poly(&sig, &mut rng, 2, 3, Some(pf));
        let g = random::random_poly(&sig, &mut rng, 2, 3, Some(pg));
        pairs.push((f, g));
    }
    let mut report = StarAxiomReport {
        pairs: pairs.len(),
        failures: Vec::new(),
    };
    for (f, g) in &pairs {
        let tf = symmetrize(ring, f, order)?;
        let tg = symmetrize(ring, g, order)?;
        let fg = tf.mul(&tg)?;
        let gf = tg.mul(&tf)?;
        let sign_neg = parity_of(f) == Parity::Odd && parity_of(g) == Parity::Odd;
        let comm = if sign_neg { fg.add(&gf)? } else { fg.sub(&gf)? };
        let bracket = ring.bracket(f, g)?;
        match quotient {
            None => {
                let star = unsymmetrize(ring, &fg)?;
                if star.part(0) != &(f * g) {
                    report.failures.push(format!("({f}) * ({g}) differs from fg mod h"));
                }
                let c = unsymmetrize(ring, &comm)?;
                if !c.part(0).is_zero() || c.part(1) != &bracket {
                    report
                        .failures
                        .push(format!("commutator of ({f}) and ({g}) differs from h{{f,g}} mod h^2"));
                }
            }
            Some(q) => {
                let classical = q.reduce(&symmetrize(ring, &(f * g), order)?)?.truncate(0);
                if q.reduce(&fg)?.truncate(0) != classical {
                    report.failures.push(format!("({f}) * ({g}) differs from fg mod (h, I)"));
                }
                let lhs = q.reduce(&comm)?.truncate(1);
                let rhs = q
                    .reduce(&symmetrize(ring, &bracket, order)?.shift(1))?
                    .truncate(1);
                if lhs != rhs {
                    report.failures.push(format!(
                        "commutator of ({f}) and ({g}) differs from h{{f,g}} mod (h^2, I)"
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lie::{build_gl, build_osp, build_sl};
    use crate::scalar::{frac, int};
    use crate::text::parse_poly;

    fn gl11() -> PoissonRing {
        PoissonRing::new(Arc::new(build_gl(1, 1).unwrap())).unwrap()
    }

    fn p(ring: &PoissonRing, s: &str) -> SuperPolynomial {
        parse_poly(s, ring.signature()).unwrap()
    }

    fn hs(order: usize, c: &[Scalar]) -> HScalar {
        HScalar::new(order, c.to_vec())
    }

    #[test]
    fn tau_examples() {
        let r = gl11();
        let t = symmetrize(&r, &p(&r, "x1*x3"), 2).unwrap();
        assert_eq!(t.coefficient(&[0, 2]), HScalar::one(2));
        assert_eq!(t.coefficient(&[2]), hs(2, &[int(0), frac(-1, 2)]));
        assert_eq!(t.terms().len(), 2);

        let t = symmetrize(&r, &p(&r, "x3*x4"), 2).unwrap();
        assert_eq!(t.coefficient(&[2, 3]), HScalar::one(2));
        assert_eq!(t.coefficient(&[0]), hs(2, &[int(0), frac(-1, 2)]));
        assert_eq!(t.coefficient(&[1]), hs(2, &[int(0), frac(-1, 2)]));

        let t = symmetrize(&r, &p(&r, "x1"), 2).unwrap();
        assert_eq!(t, EnvElement::generator(r.algebra(), 2, 0).unwrap());
    }

    #[test]
    fn unsymmetrize_examples() {
        let r = gl11();
        let f = p(&r, "x1*x3 + x2");
        let back = unsymmetrize(&r, &symmetrize(&r, &f, 3).unwrap()).unwrap();
        assert_eq!(back, HPoly::classical(&f, 3));

        let w = EnvElement::word(r.algebra(), 2, &[2, 3]).unwrap();
        let u = unsymmetrize(&r, &w).unwrap();
        assert_eq!(u.part(0), &p(&r, "x3*x4"));
        assert_eq!(u.part(1), &p(&r, "1/2*x1 + 1/2*x2"));

        let one = EnvElement::one(r.algebra(), 2);
        assert_eq!(unsymmetrize(&r, &one).unwrap(), HPoly::classical(&p(&r, "1"), 2));
    }

    #[test]
    fn star_examples() {
        let r = gl11();
        let x3 = p(&r, "x3");
        let x4 = p(&r, "x4");
        let f = p(&r, "x1*x3 + x2^2");
        let one = p(&r, "1");
        assert_eq!(star_product(&r, &f, &one, 2).unwrap(), HPoly::classical(&f, 2));
        let anti = star_product(&r, &x3, &x4, 2)
            .unwrap()
            .add(&star_product(&r, &x4, &x3, 2).unwrap());
        assert_eq!(anti, HPoly::classical(&p(&r, "x1 + x2"), 2).shift(1));
        let x1 = p(&r, "x1");
        assert_eq!(star_product(&r, &x1, &x1, 2).unwrap(), HPoly::classical(&p(&r, "x1^2"), 2));
    }

    #[test]
    fn casimirs_are_central() {
        let r = gl11();
        let (p1, big1) = casimir_element(&r, 1, 3).unwrap();
        assert_eq!(p1, p(&r, "x1 + x2"));
        assert!(centrality_check(&big1).unwrap().is_empty());
        let (_, big2) = casimir_element(&r, 2, 3).unwrap();
        assert!(centrality_check(&big2).unwrap().is_empty());
        let x3 = EnvElement::generator(r.algebra(), 3, 2).unwrap();
        assert!(!centrality_check(&x3).unwrap().is_empty());

        let sl = PoissonRing::new(Arc::new(build_sl(2, 1).unwrap())).unwrap();
        let (_, big2) = casimir_element(&sl, 2, 3).unwrap();
        assert!(centrality_check(&big2).unwrap().is_empty());
        let osp = PoissonRing::new(Arc::new(build_osp(1, 1).unwrap())).unwrap();
        let (_, big2) = casimir_element(&osp, 2, 3).unwrap();
        assert!(centrality_check(&big2).unwrap().is_empty());
    }

    #[test]
    fn tau_round_trip_on_low_degree() {
        let r = gl11();
        let sig = r.signature().clone();
        for m in [
            "x1^3", "x1*x2*x3", "x2*x3*x4", "x1^2*x4", "x3*x4", "x1*x2", "1",
        ] {
            let f = parse_poly(m, &sig).unwrap();
            let back = unsymmetrize(&r, &symmetrize(&r, &f, 3).unwrap()).unwrap();
            assert_eq!(back, HPoly::classical(&f, 3), "{m}");
        }
    }

    #[test]
    fn axioms_without_ideal() {
        let r = gl11();
        let report = star_axiom_check(&r, None, 10, 2, 1).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }
}
