//! Acceptance suite: one line per criterion with its verdict and timing.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superorbit_core::deform::{
    casimir_element, centrality_check, normal_form, normal_words, star_axiom_check, symmetrize,
    unsymmetrize, EnvElement, HPoly, HScalar, IdealSpec, NormalWord, QuotientBasis, Strategy,
};
use superorbit_core::lie::{
    build_gl, build_osp, build_sl, check_axioms, killing_form, LieSuperAlgebra, PoissonRing,
};
use superorbit_core::matrix::{BlockShape, SuperMatrix};
use superorbit_core::orbit::{
    superdiagonalize, vandermonde_criterion, AlgebraKind, OrbitSpec,
};
use superorbit_core::random::{
    distinct_scalars, random_invertible, random_nilpotent, random_poly, small_scalar,
};
use superorbit_core::scalar::int;
use superorbit_core::text::{parse_poly, print_poly};
use superorbit_core::{Parity, RingSignature, Scalar, SuperPolynomial};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sign(a: Parity, b: Parity) -> i64 {
    if a == Parity::Odd && b == Parity::Odd {
        -1
    } else {
        1
    }
}

fn shape(m: usize, n: usize) -> BlockShape {
    BlockShape::new(m, n).unwrap()
}

// ---------------------------------------------------------------------------
// Independent oracles.

/// Polynomials as `(even exponents, odd mask) -> coefficient`, multiplied term by term
/// with the sign counted from pairwise transpositions.
type Naive = BTreeMap<(Vec<u32>, u64), Scalar>;

fn naive(p: &SuperPolynomial) -> Naive {
    p.terms()
        .map(|(m, c)| ((m.even_exponents().to_vec(), m.odd_mask()), c.clone()))
        .collect()
}

fn naive_mul(a: &Naive, b: &Naive) -> Naive {
    let mut out = Naive::new();
    for ((ea, oa), ca) in a {
        for ((eb, ob), cb) in b {
            if oa & ob != 0 {
                continue;
            }
            let mut swaps = 0;
            for i in 0..64 {
                if oa >> i & 1 == 1 {
                    swaps += (ob & ((1u64 << i) - 1)).count_ones();
                }
            }
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let mut c = ca * cb;
            if swaps % 2 == 1 {
                c = -c;
            }
            *out.entry((e, oa | ob)).or_insert_with(Scalar::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rank by plain row reduction over sparse rows keyed by column.
fn rank(rows: &[BTreeMap<usize, Scalar>]) -> usize {
    let mut pivots: Vec<(usize, BTreeMap<usize, Scalar>)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (col, p) in &pivots {
            if let Some(f) = r.get(col).cloned() {
                for (c, v) in p {
                    let e = r.entry(*c).or_insert_with(Scalar::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        r.remove(c);
                    }
                }
            }
        }
        if let Some((&col, lead)) = r.iter().next() {
            let inv = lead.recip();
            for v in r.values_mut() {
                *v *= &inv;
            }
            // Keep earlier pivots reduced against the new one so lookups stay valid.
            for (_, p) in pivots.iter_mut() {
                if let Some(f) = p.get(&col).cloned() {
                    for (c, v) in &r {
                        let e = p.entry(*c).or_insert_with(Scalar::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            p.remove(c);
                        }
                    }
                }
            }
            pivots.push((col, r));
        }
    }
    pivots.len()
}

/// Coefficients `a` with `target - sum a_s basis_s` in the row span, if any.
fn solve_modulo(
    rows: &[BTreeMap<usize, Scalar>],
    basis: &[BTreeMap<usize, Scalar>],
    target: &BTreeMap<usize, Scalar>,
) -> Option<Vec<Scalar>> {
    // Unknowns: one per row and per basis vector; equations: one per column.
    let unknowns = rows.len() + basis.len();
    let mut eqs: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
    for (u, vec) in rows.iter().chain(basis).enumerate() {
        for (c, v) in vec {
            eqs.entry(*c)
                .or_insert_with(|| vec![Scalar::zero(); unknowns + 1])[u] = v.clone();
        }
    }
    for (c, v) in target {
        eqs.entry(*c)
            .or_insert_with(|| vec![Scalar::zero(); unknowns + 1])[unknowns] = v.clone();
    }
    let mut m: Vec<Vec<Scalar>> = eqs.into_values().collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut sol = vec![Scalar::zero(); unknowns];
    for (i, col) in pivot_cols.iter().enumerate() {
        sol[*col] = m[i][unknowns].clone();
    }
    Some(sol[rows.len()..].to_vec())
}

/// Determinant by fraction-based elimination on a dense copy.
fn det(a: &[Vec<Scalar>]) -> Scalar {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let sub = &f * &m[c][j];
                m[i][j] -= sub;
            }
        }
    }
    d
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim` of polynomials of degree at most `d` in `e` even and `o` odd variables.
fn monomial_count(e: usize, o: usize, d: usize) -> usize {
    (0..=d)
        .flat_map(|a| (0..=d - a).map(move |b| (a, b)))
        .map(|(a, b)| if e == 0 { usize::from(a == 0) } else { binomial(e + a - 1, a) } * binomial(o, b))
        .sum()
}

/// Monomials in the coordinate ring as `(polynomial, degree)`, by exponent enumeration.
fn coordinate_monomials(ring: &PoissonRing, max_degree: usize) -> Vec<(SuperPolynomial, usize)> {
    let dim = ring.algebra().dim();
    let mut out = vec![(SuperPolynomial::one(ring.signature()), 0)];
    let mut frontier = vec![(SuperPolynomial::one(ring.signature()), 0usize, 0usize)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (p, deg, start) in &frontier {
            for i in *start..dim {
                let q = p * &ring.coordinate(i);
                if q.is_zero() {
                    continue;
                }
                out.push((q.clone(), deg + 1));
                next.push((q, deg + 1, i));
            }
        }
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria.

fn c1_ring_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases = 500;
    for case in 0..cases {
        let sig = Arc::new(RingSignature::new(rng.gen_range(0..=3), rng.gen_range(0..=4)).unwrap());
        let pf = Parity::from_bit(rng.gen_range(0..2));
        let pg = Parity::from_bit(rng.gen_range(0..2));
        let f = random_poly(&sig, &mut rng, 3, 4, Some(pf));
        let g = random_poly(&sig, &mut rng, 3, 4, Some(pg));
        let h = random_poly(&sig, &mut rng, 2, 3, None);
        let fg = &f * &g;
        ensure(naive(&fg) == naive_mul(&naive(&f), &naive(&g)), || format!("case {case}: product"))?;
        ensure(fg == (&g * &f).scale(&int(sign(pf, pg))), || format!("case {case}: supercommutativity"))?;
        ensure(&fg * &h == &f * &(&g * &h), || format!("case {case}: associativity"))?;
        ensure(fg.body() == &f.body() * &g.body(), || format!("case {case}: body"))?;
        if sig.odd_count() > 0 {
            let u = &SuperPolynomial::constant(&sig, small_scalar(&mut rng))
                + &random_nilpotent(&sig, &mut rng, 4, Parity::Even);
            let inv = u.invert().map_err(|e| format!("case {case}: {e}"))?;
            ensure((&u * &inv).is_one(), || format!("case {case}: inverse"))?;
        }
    }
    Ok(format!("{cases} cases each: product oracle, supercommutativity, associativity, body, inversion"))
}

fn c2_ber_multiplicative() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sig = Arc::new(RingSignature::new(0, 3).unwrap());
    let mut count = 0;
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        for _ in 0..70 {
            let a = random_invertible(shape(m, n), &sig, &mut rng, 2);
            let b = random_invertible(shape(m, n), &sig, &mut rng, 2);
            let lhs = a.mul(&b).unwrap().berezinian().unwrap();
            let rhs = &a.berezinian().unwrap() * &b.berezinian().unwrap();
            ensure(lhs == rhs, || format!("{m}|{n}: Ber(AB) != Ber(A)Ber(B)"))?;
            if (m, n) == (1, 1) {
                // Direct 1|1 formula: (a - alpha d^-1 beta) / d.
                let (p, q, r, s) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
                let sinv = s.invert().unwrap();
                let direct = &(p - &(&(q * &sinv) * r)) * &sinv;
                ensure(direct == a.berezinian().unwrap(), || "1|1 closed form".into())?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} pairs over 3 odd generators, shapes 1|1 2|1 2|2"))
}

fn generic_matrix(
    shape: BlockShape,
    sig: &Arc<RingSignature>,
    parity: Parity,
    even: &mut usize,
    odd: &mut usize,
) -> SuperMatrix {
    let size = shape.size();
    let mut entries = Vec::new();
    for i in 0..size {
        for j in 0..size {
            entries.push(match shape.block_parity(i, j) + parity {
                Parity::Even => {
                    *even += 1;
                    SuperPolynomial::even_gen(sig, *even - 1)
                }
                Parity::Odd => {
                    *odd += 1;
                    SuperPolynomial::odd_gen(sig, *odd - 1)
                }
            });
        }
    }
    SuperMatrix::new(shape, sig, entries, parity.into()).unwrap()
}

fn c3_ber_infinitesimal() -> Check {
    for (m, n) in [(1, 1), (2, 2)] {
        let s = shape(m, n);
        let size = s.size();
        let mut caps = vec![Some(1)];
        caps.extend(std::iter::repeat(None).take(size * size));
        let sig = Arc::new(RingSignature::with_caps(caps, size * size).unwrap());
        let (mut e, mut o) = (1, 0);
        let a = generic_matrix(s, &sig, Parity::Even, &mut e, &mut o);
        let eps = SuperPolynomial::even_gen(&sig, 0);
        // Supertrace by hand: diagonal entries weighted by the row parity.
        let mut str_a = SuperPolynomial::zero(&sig);
        for i in 0..size {
            let d = a.get(i, i);
            str_a = if i < m { &str_a + d } else { &str_a - d };
        }
        let lhs = SuperMatrix::identity(s, &sig)
            .add(&a.scale_by(&eps).unwrap())
            .unwrap()
            .berezinian()
            .unwrap();
        ensure(lhs == &SuperPolynomial::one(&sig) + &(&eps * &str_a), || format!("{m}|{n}"))?;
    }
    Ok("symbolic entries, shapes 1|1 and 2|2".into())
}

fn c4_supertrace() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let s = shape(m, n);
        let size = s.size();
        let sig = Arc::new(RingSignature::new(2 * size * size, 2 * size * size + 2).unwrap());
        for p in [Parity::Even, Parity::Odd] {
            let (mut e, mut o) = (0, 0);
            let x = generic_matrix(s, &sig, p, &mut e, &mut o);
            let y = generic_matrix(s, &sig, p, &mut e, &mut o);
            let c = x.super_commutator(&y).unwrap();
            ensure(c.supertrace().unwrap().is_zero(), || format!("{m}|{n} {p:?} commutator"))?;
        }
        // Conjugation by a group element whose odd part uses two spare generators.
        let (mut e, mut o) = (0, 0);
        let x = generic_matrix(s, &sig, Parity::Even, &mut e, &mut o);
        let spare = Arc::new(RingSignature::new(0, 2).unwrap());
        let g = random_invertible(s, &spare, &mut rng, 2);
        let shift = 2 * size * size;
        let g = g.map_entries(|entry| {
            let mut acc = SuperPolynomial::zero(&sig);
            for (mono, c) in entry.terms() {
                let odd: Vec<usize> = mono.odd_indices().iter().map(|i| i + shift).collect();
                let t = SuperPolynomial::term(&sig, c.clone(), &vec![0; sig.even_count()], &odd).unwrap();
                acc = &acc + &t;
            }
            acc
        });
        let conj = g.mul(&x).unwrap().mul(&g.inverse().unwrap()).unwrap();
        ensure(
            conj.power_sums(3, false).unwrap() == x.power_sums(3, false).unwrap(),
            || format!("{m}|{n} conjugation"),
        )?;
    }
    Ok("generic symbolic matrices, shapes up to 2|2, k <= 3".into())
}

fn c5_axioms() -> Check {
    for l in [build_gl(2, 1).unwrap(), build_sl(2, 1).unwrap(), build_osp(1, 1).unwrap()] {
        let r = check_axioms(&l);
        ensure(r.passed(), || format!("{}: {r:?}", l.name()))?;
    }
    let mut bad = build_gl(1, 1).unwrap();
    bad.set_constant(2, 3, 0, int(2));
    ensure(!check_axioms(&bad).passed(), || "corrupted gl(1|1) passed".into())?;
    Ok("gl(2|1), sl(2|1), osp(1|2) pass; corrupted c_34^1 = 2 fails".into())
}

/// Killing form from the bracket table: `B_ij = sum_k (-1)^{p_k} (ad_i ad_j)_kk`.
fn brute_killing(l: &LieSuperAlgebra) -> Vec<Vec<Scalar>> {
    let d = l.dim();
    let ad = |i: usize| {
        let mut a = vec![vec![Scalar::zero(); d]; d];
        for j in 0..d {
            for k in 0..d {
                a[k][j] = l.constant(i, j, k);
            }
        }
        a
    };
    let ads: Vec<_> = (0..d).map(ad).collect();
    let mut b = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = Scalar::zero();
            for k in 0..d {
                let mut diag = Scalar::zero();
                for t in 0..d {
                    diag += &ads[i][k][t] * &ads[j][t][k];
                }
                if l.parity(k) == Parity::Odd {
                    acc -= diag;
                } else {
                    acc += diag;
                }
            }
            b[i][j] = acc;
        }
    }
    b
}

fn c6_killing() -> Check {
    let sl = build_sl(2, 1).unwrap();
    let gl = build_gl(1, 1).unwrap();
    let b_sl = brute_killing(&sl);
    let b_gl = brute_killing(&gl);
    ensure(killing_form(&sl).matrix == b_sl, || "sl(2|1) matrix differs from brute force".into())?;
    ensure(killing_form(&gl).matrix == b_gl, || "gl(1|1) matrix differs from brute force".into())?;
    let (d_sl, d_gl) = (det(&b_sl), det(&b_gl));
    ensure(!d_sl.is_zero() && killing_form(&sl).nondegenerate(), || "sl(2|1) degenerate".into())?;
    ensure(d_gl.is_zero() && !killing_form(&gl).nondegenerate(), || "gl(1|1) nondegenerate".into())?;
    Ok(format!("det sl(2|1) = {d_sl}, det gl(1|1) = {d_gl}"))
}

fn c7_c8_diagonalization(m: usize, n: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = Arc::new(RingSignature::new(0, 4).unwrap());
    let s = shape(m, n);
    for case in 0..50 {
        let spec = OrbitSpec::new(AlgebraKind::Gl, s, distinct_scalars(&mut rng, m + n)).unwrap();
        let x0 = spec.x0(&sig);
        let g = random_invertible(s, &sig, &mut rng, 2);
        let w = g.mul(&x0).unwrap().mul(&g.inverse().unwrap()).unwrap();
        let r = superdiagonalize(&w, &spec).map_err(|e| format!("case {case}: {e}"))?;
        ensure(r.d == x0 && r.matches_x0, || format!("case {case}: D != X0"))?;
        ensure(r.residual_free(), || format!("case {case}: residuals {:?}", r.residuals))?;
        ensure(r.rigid, || format!("case {case}: D_n != 0"))?;
        let back = r.g.mul(&w).unwrap().mul(&r.g.inverse().unwrap()).unwrap();
        ensure(back == x0, || format!("case {case}: g W g^-1 != X0"))?;
    }
    Ok(format!("50 conjugates over 4 odd generators, shape {m}|{n}"))
}

fn c8_perturbed() -> Check {
    let sig = Arc::new(RingSignature::new(0, 4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut flagged = 0;
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let s = shape(m, n);
        let spec = OrbitSpec::new(AlgebraKind::Gl, s, distinct_scalars(&mut rng, m + n)).unwrap();
        let g = random_invertible(s, &sig, &mut rng, 2);
        let w = g.mul(&spec.x0(&sig)).unwrap().mul(&g.inverse().unwrap()).unwrap();
        let t = &SuperPolynomial::odd_gen(&sig, 0) * &SuperPolynomial::odd_gen(&sig, 1);
        let w = w.add(&SuperMatrix::unit(s, &sig, 0, 0).scale_by(&t).unwrap()).unwrap();
        let r = superdiagonalize(&w, &spec).map_err(|e| e.to_string())?;
        ensure(!r.membership && !r.matches_x0 && r.d != spec.x0(&sig), || format!("{m}|{n} not flagged"))?;
        flagged += 1;
    }
    Ok(format!("rigid in all round trips; {flagged}/3 perturbed W flagged"))
}

fn c9_vandermonde() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(0..=5 - m);
        let lambda = distinct_scalars(&mut rng, m + n);
        let mut product = Scalar::one();
        for i in 0..lambda.len() {
            for j in 0..i {
                product *= &lambda[i] - &lambda[j];
            }
        }
        let v = vandermonde_criterion(&lambda, m, n).unwrap();
        ensure(v.det.abs() == product.abs(), || format!("case {case}: |det| mismatch"))?;
        if lambda.len() >= 2 {
            let mut repeated = lambda.clone();
            let k = rng.gen_range(1..repeated.len());
            repeated[k] = repeated[rng.gen_range(0..k)].clone();
            let v = vandermonde_criterion(&repeated, m, n).unwrap();
            ensure(v.det.is_zero(), || format!("case {case}: repeat gives nonzero det"))?;
        }
    }
    Ok("200 tuples, m+n <= 5; injected repeats give det = 0".into())
}

fn c10_pbw() -> Check {
    let mut parts = Vec::new();
    for l in [build_gl(1, 1).unwrap(), build_sl(2, 1).unwrap()] {
        let even = l.even_dim();
        let odd = l.dim() - even;
        let words = normal_words(&l, 4).len();
        let oracle = monomial_count(even, odd, 4);
        let ring = PoissonRing::new(Arc::new(l.clone())).unwrap();
        let enumerated = coordinate_monomials(&ring, 4).len();
        ensure(words == oracle && oracle == enumerated, || {
            format!("{}: words {words}, formula {oracle}, enumeration {enumerated}", l.name())
        })?;
        parts.push(format!("{} {words}", l.name()));
    }
    Ok(format!("normal words of degree <= 4: {}", parts.join(", ")))
}

fn c11_tau() -> Check {
    let mut total = 0;
    for l in [build_gl(1, 1).unwrap(), build_sl(2, 1).unwrap()] {
        let ring = PoissonRing::new(Arc::new(l)).unwrap();
        for (mono, _) in coordinate_monomials(&ring, 3) {
            let t = symmetrize(&ring, &mono, 3).map_err(|e| e.to_string())?;
            let back = unsymmetrize(&ring, &t).map_err(|e| e.to_string())?;
            ensure(back == HPoly::classical(&mono, 3), || format!("round trip of {}", print_poly(&mono)))?;
            total += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in [build_gl(1, 1).unwrap(), build_sl(2, 1).unwrap(), build_osp(1, 1).unwrap()] {
        let alg = Arc::new(l);
        for _ in 0..100 {
            let len = rng.gen_range(0..=5);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alg.dim())).collect();
            let a = normal_form(&alg, &w, HScalar::one(3), Strategy::Leftmost);
            let b = normal_form(&alg, &w, HScalar::one(3), Strategy::Rightmost);
            ensure(a == b, || format!("{}: word {w:?} not confluent", alg.name()))?;
        }
    }
    Ok(format!("{total} monomials round-trip at H = 3; 300 words confluent"))
}

fn c12_star_axioms() -> Check {
    let mut pairs = 0;
    for l in [build_gl(1, 1).unwrap(), build_sl(2, 1).unwrap()] {
        let alg = Arc::new(l);
        let ring = PoissonRing::new(alg.clone()).unwrap();
        let r = star_axiom_check(&ring, None, 100, 2, 12).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{}: {:?}", alg.name(), r.failures))?;
        pairs += r.pairs;
        // Generator pairs against the bracket table directly.
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let xi = symmetrize(&ring, &ring.coordinate(i), 2).unwrap();
                let xj = symmetrize(&ring, &ring.coordinate(j), 2).unwrap();
                let s = int(sign(alg.parity(i), alg.parity(j)));
                let comm = xi.mul(&xj).unwrap().sub(&xj.mul(&xi).unwrap().scale(&HScalar::constant(2, s))).unwrap();
                let symbol = unsymmetrize(&ring, &comm).unwrap();
                let mut expected = SuperPolynomial::zero(ring.signature());
                for (k, v) in alg.bracket(i, j) {
                    expected = &expected + &ring.coordinate(*k).scale(v);
                }
                ensure(symbol.part(0).is_zero() && symbol.part(1) == &expected, || {
                    format!("{}: [x{}, x{}]", alg.name(), i + 1, j + 1)
                })?;
            }
        }
    }
    Ok(format!("{pairs} pairs including all generator pairs and 100 random per algebra"))
}

fn c13_centrality() -> Check {
    let mut checked = Vec::new();
    for (l, ks) in [
        (build_gl(1, 1).unwrap(), vec![1, 2]),
        (build_sl(2, 1).unwrap(), vec![1, 2]),
        (build_osp(1, 1).unwrap(), vec![2]),
    ] {
        let ring = PoissonRing::new(Arc::new(l)).unwrap();
        for k in ks {
            let (_, p) = casimir_element(&ring, k, 3).map_err(|e| e.to_string())?;
            let fails = centrality_check(&p).map_err(|e| e.to_string())?;
            ensure(fails.is_empty(), || format!("{} P{k} fails with {fails:?}", ring.algebra().name()))?;
            checked.push(format!("{} P{k}", ring.algebra().name()));
        }
    }
    Ok(format!("central mod h^4: {}", checked.join(", ")))
}

type MonoKey = (Vec<u32>, u64);

/// Sparse coordinate vector of a polynomial over the monomial list.
fn coords(p: &SuperPolynomial, index: &HashMap<MonoKey, usize>) -> BTreeMap<usize, Scalar> {
    p.terms()
        .map(|(m, c)| {
            let col = index[&(m.even_exponents().to_vec(), m.odd_mask())];
            (col, c.clone())
        })
        .collect()
}

/// Monomials of degree at most `top` with the column index of each.
fn monomial_index(
    ring: &PoissonRing,
    top: usize,
) -> (Vec<(SuperPolynomial, usize)>, HashMap<MonoKey, usize>) {
    let monos = coordinate_monomials(ring, top);
    let index = monos
        .iter()
        .enumerate()
        .map(|(i, (p, _))| {
            let (m, _) = p.terms().next().unwrap();
            ((m.even_exponents().to_vec(), m.odd_mask()), i)
        })
        .collect();
    (monos, index)
}

fn c14_fuzzy_superpoint() -> Check {
    let alg = Arc::new(build_gl(1, 1).unwrap());
    let ring = PoissonRing::new(alg.clone()).unwrap();
    let spec = OrbitSpec::new(AlgebraKind::Gl, shape(1, 1), vec![int(1), int(-1)]).unwrap();
    let order = 3;
    let ideal = IdealSpec::from_orbit(&ring, &spec, order, 4).map_err(|e| e.to_string())?;
    let q = QuotientBasis::compute(&ring, &ideal, order).map_err(|e| e.to_string())?;
    let mut basis = q.basis().to_vec();
    basis.sort();
    let expected: Vec<NormalWord> = vec![vec![], vec![2], vec![2, 3], vec![3]];
    ensure(q.is_free() && q.rank() == 4, || format!("rank {} free {}", q.rank(), q.is_free()))?;
    ensure(basis == expected, || format!("basis {basis:?}"))?;

    // x3 * x4 + x4 * x3 in U_h, reduced modulo I_h.
    let t3 = symmetrize(&ring, &ring.coordinate(2), order).unwrap();
    let t4 = symmetrize(&ring, &ring.coordinate(3), order).unwrap();
    let anti = t3.mul(&t4).unwrap().add(&t4.mul(&t3).unwrap()).unwrap();
    let reduced = q.reduce(&anti).map_err(|e| e.to_string())?;

    // Oracle: reduce x1 + x2 in the commutative quotient by solving
    // x1 + x2 - sum a_s s in span{m q_i} over the standard monomials s.
    let top = 6;
    let (monos, index) = monomial_index(&ring, top);
    let c: Vec<Scalar> = vec![int(2), int(0)];
    let shadows: Vec<SuperPolynomial> = [1u32, 2]
        .iter()
        .zip(&c)
        .map(|(k, ck)| &ring.invariant(*k).unwrap() - &SuperPolynomial::constant(ring.signature(), ck.clone()))
        .collect();
    let mut rows = Vec::new();
    for qi in &shadows {
        let dq = qi.degree().unwrap() as usize;
        for (m, d) in &monos {
            if d + dq <= top {
                rows.push(coords(&(m * qi), &index));
            }
        }
    }
    let x = |i: usize| ring.coordinate(i);
    let standard = [
        SuperPolynomial::one(ring.signature()),
        x(2),
        x(3),
        &x(2) * &x(3),
    ];
    let basis_vecs: Vec<_> = standard.iter().map(|s| coords(s, &index)).collect();
    let target = coords(&(&x(0) + &x(1)), &index);
    let a = solve_modulo(&rows, &basis_vecs, &target).ok_or("oracle found no reduction")?;
    let words: [NormalWord; 4] = [vec![], vec![2], vec![3], vec![2, 3]];
    let oracle = EnvElement::from_terms(
        &alg,
        order,
        words
            .iter()
            .zip(&a)
            .map(|(w, ai)| (w.clone(), HScalar::constant(order, ai.clone()).shift(1))),
    )
    .unwrap();
    ensure(reduced == oracle, || format!("reduced {reduced}, oracle {oracle}"))?;
    let two_h = EnvElement::constant(&alg, HScalar::constant(order, int(2)).shift(1));
    ensure(reduced == two_h, || format!("expected 2h, got {reduced}"))?;
    Ok(format!("rank 4, basis {{1, X3, X4, X3X4}}, x3*x4 + x4*x3 = {reduced} (oracle agrees)"))
}

fn c15_sl21_dimensions() -> Check {
    let alg = Arc::new(build_sl(2, 1).unwrap());
    let ring = PoissonRing::new(alg).unwrap();
    let spec = OrbitSpec::new(AlgebraKind::Sl, shape(2, 1), vec![int(1), int(2), int(3)]).unwrap();
    // Classical generators p_k - str(X0^k) for k = 2, 3 (p_1 vanishes on sl).
    let weights = [int(1), int(1), int(-1)];
    let shadows: Vec<SuperPolynomial> = [2u32, 3]
        .iter()
        .map(|&k| {
            let ck: Scalar = spec
                .lambda
                .iter()
                .zip(&weights)
                .map(|(l, w)| w * num_traits::pow(l.clone(), k as usize))
                .sum();
            &ring.invariant(k).unwrap() - &SuperPolynomial::constant(ring.signature(), ck)
        })
        .collect();
    let top = 5;
    let (monos, index) = monomial_index(&ring, top);
    let mut rows = Vec::new();
    for qi in &shadows {
        let dq = qi.degree().unwrap() as usize;
        for (m, d) in &monos {
            if d + dq <= top {
                rows.push(coords(&(m * qi), &index));
            }
        }
    }
    let mut dims = Vec::new();
    for k in 0..=2usize {
        let high: Vec<BTreeMap<usize, Scalar>> = rows
            .iter()
            .map(|r| r.iter().filter(|(c, _)| monos[**c].1 > k).map(|(c, v)| (*c, v.clone())).collect())
            .collect();
        let low_dim = monos.iter().filter(|(_, d)| *d <= k).count();
        dims.push(low_dim - (rank(&rows) - rank(&high)));
    }
    let mut quantum = Vec::new();
    for k in 0..=2usize {
        let ideal = IdealSpec::from_orbit(&ring, &spec, 2, k).map_err(|e| e.to_string())?;
        let q = QuotientBasis::compute(&ring, &ideal, 2).map_err(|e| e.to_string())?;
        ensure(q.is_free(), || format!("cutoff {k}: not free"))?;
        ensure(q.slice_dims()[k] == dims[k], || format!("cutoff {k}: classical {} vs oracle {}", q.slice_dims()[k], dims[k]))?;
        for (j, s) in q.standard_by_order().iter().enumerate() {
            ensure(s.len() == dims[k], || format!("cutoff {k}, h^{j}: {} vs oracle {}", s.len(), dims[k]))?;
        }
        quantum.push(q.rank());
    }
    Ok(format!("dimensions at cutoff 0,1,2: quotient {quantum:?}, oracle {dims:?}"))
}

fn c16_parser_and_cli() -> Check {
    const CORPUS: &str = include_str!("../../core/tests/data/corpus.txt");
    let sig = Arc::new(RingSignature::new(3, 4).unwrap());
    let lines: Vec<&str> = CORPUS.lines().collect();
    ensure(lines.len() == 200, || format!("corpus has {} lines", lines.len()))?;
    ensure(
        lines.contains(&"x1^2 + x2^2 + x3^2 - 1") && lines.contains(&"x1*t1 + x2*t2 + x3*t3"),
        || "supersphere fixtures missing".into(),
    )?;
    for line in &lines {
        let p = parse_poly(line, &sig).map_err(|e| format!("{line}: {e}"))?;
        let printed = print_poly(&p);
        let again = parse_poly(&printed, &sig).map_err(|e| format!("{printed}: {e}"))?;
        ensure(again == p && print_poly(&again) == printed, || format!("round trip of {line}"))?;
    }
    let failures = common::exit_matrix_failures();
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("200 expressions round-trip; {} CLI exit-code cases honored", common::EXIT_MATRIX.len()))
}

// ---------------------------------------------------------------------------

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: "1", title: "ring axioms", limit: secs(10), run: c1_ring_axioms },
        Criterion { id: "2", title: "Berezinian multiplicativity", limit: secs(30), run: c2_ber_multiplicative },
        Criterion { id: "3", title: "Ber(1 + eps a) = 1 + eps str a", limit: secs(5), run: c3_ber_infinitesimal },
        Criterion { id: "4", title: "supertrace identities", limit: None, run: c4_supertrace },
        Criterion { id: "5", title: "Lie superalgebra axioms", limit: secs(10), run: c5_axioms },
        Criterion { id: "6", title: "Killing form", limit: None, run: c6_killing },
        Criterion { id: "7a", title: "diagonalization 1|1", limit: secs(60), run: || c7_c8_diagonalization(1, 1, 71) },
        Criterion { id: "7b", title: "diagonalization 2|1", limit: secs(60), run: || c7_c8_diagonalization(2, 1, 72) },
        Criterion { id: "7c", title: "diagonalization 2|2", limit: secs(60), run: || c7_c8_diagonalization(2, 2, 73) },
        Criterion { id: "8", title: "rigidity and perturbation", limit: None, run: c8_perturbed },
        Criterion { id: "9", title: "Vandermonde criterion", limit: None, run: c9_vandermonde },
        Criterion { id: "10", title: "PBW count", limit: None, run: c10_pbw },
        Criterion { id: "11", title: "symmetrization and confluence", limit: None, run: c11_tau },
        Criterion { id: "12", title: "star-product axioms", limit: secs(60), run: c12_star_axioms },
        Criterion { id: "13", title: "Casimir centrality", limit: None, run: c13_centrality },
        Criterion { id: "14", title: "fuzzy superpoint", limit: secs(30), run: c14_fuzzy_superpoint },
        Criterion { id: "15", title: "sl(2|1) quotient dimensions", limit: secs(120), run: c15_sl21_dimensions },
        Criterion { id: "16", title: "parser corpus and CLI exit codes", limit: None, run: c16_parser_and_cli },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == c.id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let over = c.limit.is_some_and(|l| elapsed > l);
        let limit = c.limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("too slow; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>3} {verdict} [{:.2}s{limit}] {}: {detail}",
            c.id,
            elapsed.as_secs_f64(),
            c.title
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
