//! Coadjoint orbits of regular diagonal elements: invariant values, membership,
//! order-by-order diagonalization over a Grassmann algebra, the Vandermonde criterion,
//! Ad-invariance of the power sums, and verification of antisymmetric syzygies.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lie::{build_gl, build_osp, build_sl, LieError, LieSuperAlgebra, PoissonRing};
use crate::linalg::{self, QMatrix};
use crate::matrix::{BlockShape, DeclaredParity, MatrixError, SuperMatrix};
use crate::random;
use crate::ring::{PolyParity, RingSignature, SuperPolynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("eigenvalues are not pairwise distinct")]
    NonRegular,
    #[error("expected {expected} eigenvalues, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("supertrace of X0 is {0}, but sl needs 0")]
    NotTraceless(String),
    #[error("osp needs m >= 1 and an even, positive odd block")]
    InvalidOspShape,
    #[error("shape {0} does not match the orbit shape {1}")]
    ShapeMismatch(BlockShape, BlockShape),
    #[error("the body of W is not a numeric matrix")]
    NonNumericBody,
    #[error("the body spectrum of W differs from the prescribed eigenvalues")]
    NotInOrbit,
    #[error("the body of W has irrational eigenvalues")]
    UnsupportedField,
    #[error("syzygy instance generators must be parity-homogeneous")]
    MixedSyzygyData,
    #[error("syzygy instance has inconsistent sizes")]
    SyzygyShape,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Gl,
    Sl,
    Osp,
}

impl AlgebraKind {
    /// Build the algebra acting on `C^{m|n}` (for `osp`, `n` is the full odd size).
    pub fn build(self, m: usize, n: usize) -> Result<LieSuperAlgebra, LieError> {
        match self {
            AlgebraKind::Gl => build_gl(m, n),
            AlgebraKind::Sl => build_sl(m, n),
            AlgebraKind::Osp => {
                if n % 2 == 1 {
                    return Err(LieError::InvalidOspShape);
                }
                build_osp(m, n / 2)
            }
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Gl => "gl",
            AlgebraKind::Sl => "sl",
            AlgebraKind::Osp => "osp",
        })
    }
}

impl FromStr for AlgebraKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gl" => Ok(AlgebraKind::Gl),
            "sl" => Ok(AlgebraKind::Sl),
            "osp" => Ok(AlgebraKind::Osp),
            other => Err(format!("unknown algebra kind `{other}`")),
        }
    }
}

/// A regular diagonal element `X0 = diag(lambda)` of `gl`, `sl` or `osp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSpec {
    pub kind: AlgebraKind,
    pub shape: BlockShape,
    pub lambda: Vec<Scalar>,
}

pub fn all_distinct(values: &[Scalar]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, a)| values[..i].iter().all(|b| a != b))
}

impl OrbitSpec {
    pub fn new(
        kind: AlgebraKind,
        shape: BlockShape,
        lambda: Vec<Scalar>,
    ) -> Result<Self, OrbitError> {
        if lambda.len() != shape.size() {
            return Err(OrbitError::WrongLength {
                expected: shape.size(),
                got: lambda.len(),
            });
        }
        if kind == AlgebraKind::Osp && (shape.m == 0 || shape.n == 0 || shape.n % 2 == 1) {
            return Err(OrbitError::InvalidOspShape);
        }
        if !all_distinct(&lambda) {
            return Err(OrbitError::NonRegular);
        }
        let spec = OrbitSpec {
            kind,
            shape,
            lambda,
        };
        if kind == AlgebraKind::Sl {
            let s = spec.supertrace();
            if !s.is_zero() {
                return Err(OrbitError::NotTraceless(s.to_string()));
            }
        }
        Ok(spec)
    }

    fn supertrace(&self) -> Scalar {
        self.lambda
            .iter()
            .enumerate()
            .map(|(i, l)| self.shape.weight(i) * l)
            .sum()
    }

    pub fn x0(&self, sig: &Arc<RingSignature>) -> SuperMatrix {
        SuperMatrix::diagonal(self.shape, sig, &self.lambda).expect("length checked")
    }

    /// Exponents of the defining invariants: `1..=m+n`, or the even ones for `osp`.
    pub fn exponents(&self) -> Vec<u32> {
        let top = self.shape.size() as u32;
        (1..=top)
            .filter(|k| self.kind != AlgebraKind::Osp || k % 2 == 0)
            .collect()
    }

    pub fn algebra(&self) -> Result<LieSuperAlgebra, OrbitError> {
        Ok(self.kind.build(self.shape.m, self.shape.n)?)
    }
}

/// `c_i = str(X0^i)` for the exponents of [`OrbitSpec::exponents`].
pub fn orbit_invariants(spec: &OrbitSpec) -> Vec<Scalar> {
    spec.exponents()
        .into_iter()
        .map(|k| {
            spec.lambda
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let mut p = Scalar::one();
                    for _ in 0..k {
                        p *= l;
                    }
                    spec.shape.weight(i) * p
                })
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub holds: bool,
    pub exponents: Vec<u32>,
    pub values: Vec<SuperPolynomial>,
    pub expected: Vec<Scalar>,
}

/// Whether the power sums of `w` equal the orbit invariants.
pub fn membership_check(w: &SuperMatrix, spec: &OrbitSpec) -> Result<Membership, OrbitError> {
    if w.shape() != spec.shape {
        return Err(OrbitError::ShapeMismatch(w.shape(), spec.shape));
    }
    let exponents = spec.exponents();
    let top = exponents.last().copied().unwrap_or(0);
    let all = w.power_sums(top, false)?;
    let values: Vec<SuperPolynomial> = exponents
        .iter()
        .map(|k| all[*k as usize - 1].clone())
        .collect();
    let expected = orbit_invariants(spec);
    let holds = values
        .iter()
        .zip(&expected)
        .all(|(v, c)| v.as_constant().as_ref() == Some(c));
    Ok(Membership {
        holds,
        exponents,
        values,
        expected,
    })
}

/// Output of [`superdiagonalize`]: `g W g^-1 = D` with `g = g_0 + g_1 + ...` and
/// `D = D_0 + D_1 + ...` split by odd degree.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub g: SuperMatrix,
    pub d: SuperMatrix,
    pub g_pieces: Vec<SuperMatrix>,
    pub d_pieces: Vec<SuperMatrix>,
    /// Term count of the odd-degree-`n` part of `gW - Dg`, for `n = 0..=N`.
    pub residuals: Vec<usize>,
    /// `D_n = 0` for every `n >= 1`.
    pub rigid: bool,
    /// `D = X0` exactly.
    pub matches_x0: bool,
    pub membership: bool,
}

impl Diagonalization {
    pub fn residual_free(&self) -> bool {
        self.residuals.iter().all(|r| *r == 0)
    }
}

fn rational_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.abs().to_u64()?;
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots with multiplicity of `sum c_k t^k`, or `None` when the roots are not
/// all rational (or the coefficients are too large to search).
fn rational_roots(coeffs: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut poly: Vec<Scalar> = coeffs.to_vec();
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots = Vec::new();
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        roots.push(Scalar::zero());
    }
    if poly.len() <= 1 {
        return Some(roots);
    }
    let lcm = poly
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * Scalar::from(lcm.clone())).to_integer()).collect();
    let ps = rational_divisors(&ints[0])?;
    let qs = rational_divisors(ints.last().unwrap())?;
    let mut candidates = Vec::new();
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let r = Scalar::new(p * s, q.clone());
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
    }
    for r in candidates {
        loop {
            if poly.len() <= 1 {
                break;
            }
            // synthetic division by (t - r)
            let n = poly.len() - 1;
            let mut q = vec![Scalar::zero(); n];
            let mut carry = Scalar::zero();
            for k in (0..=n).rev() {
                let v = &poly[k] + &carry * &r;
                if k == 0 {
                    carry = v;
                } else {
                    q[k - 1] = v.clone();
                    carry = v;
                }
            }
            if carry.is_zero() {
                poly = q;
                roots.push(r.clone());
            } else {
                break;
            }
        }
    }
    (poly.len() <= 1).then_some(roots)
}

fn sorted(mut v: Vec<Scalar>) -> Vec<Scalar> {
    v.sort();
    v
}

/// Left eigenvectors of a numeric block for the given eigenvalues, one per row.
fn left_eigenvectors(block: &QMatrix, eigen: &[Scalar]) -> Result<QMatrix, OrbitError> {
    let k = block.len();
    let roots = rational_roots(&linalg::charpoly(block)).ok_or(OrbitError::UnsupportedField)?;
    if sorted(roots) != sorted(eigen.to_vec()) {
        return Err(OrbitError::NotInOrbit);
    }
    let t = linalg::transpose(block);
    eigen
        .iter()
        .map(|l| {
            let mut shifted = t.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] -= l;
            }
            let ns = linalg::nullspace(&shifted, k);
            ns.into_iter().next().ok_or(OrbitError::NotInOrbit)
        })
        .collect()
}

fn term_count(m: &SuperMatrix) -> usize {
    m.entries().iter().map(SuperPolynomial::len).sum()
}

/// Diagonalize an even supermatrix `W` over a Grassmann algebra order by order in the
/// odd generators: `g_0 W_0 = X0 g_0` by rational eigenvectors, then for `n >= 1`
/// `(lambda_i - lambda_j) Y_ij + delta_ij (D_n)_ii = (K_n)_ij` with `g_n = Y g_0` and
/// `K_n = sum_{j<n} g_j W_{n-j} g_0^-1 - sum_{0<j<n} D_j g_{n-j} g_0^-1`.
pub fn superdiagonalize(w: &SuperMatrix, spec: &OrbitSpec) -> Result<Diagonalization, OrbitError> {
    if w.shape() != spec.shape {
        return Err(OrbitError::ShapeMismatch(w.shape(), spec.shape));
    }
    if !all_distinct(&spec.lambda) {
        return Err(OrbitError::NonRegular);
    }
    let w = w.clone().with_parity(DeclaredParity::Even)?;
    let sig = w.signature().clone();
    let shape = spec.shape;
    let (m, size) = (shape.m, shape.size());
    let top = sig.odd_count();
    let pieces: Vec<SuperMatrix> = (0..=top).map(|k| w.odd_component(k)).collect();
    let body = pieces[0].as_scalars().ok_or(OrbitError::NonNumericBody)?;
    let body: QMatrix = body.chunks(size).map(|r| r.to_vec()).collect();
    let block = |r: std::ops::Range<usize>| -> QMatrix {
        r.clone()
            .map(|i| r.clone().map(|j| body[i][j].clone()).collect())
            .collect()
    };
    let p_vecs = left_eigenvectors(&block(0..m), &spec.lambda[..m])?;
    let s_vecs = left_eigenvectors(&block(m..size), &spec.lambda[m..])?;
    let mut g0 = linalg::zeros(size, size);
    for i in 0..m {
        for j in 0..m {
            g0[i][j] = p_vecs[i][j].clone();
        }
    }
    for i in 0..shape.n {
        for j in 0..shape.n {
            g0[m + i][m + j] = s_vecs[i][j].clone();
        }
    }
    let g0_inv = linalg::inverse(&g0).ok_or(OrbitError::NotInOrbit)?;
    let to_matrix = |q: &QMatrix| {
        let flat: Vec<Scalar> = q.iter().flatten().cloned().collect();
        SuperMatrix::from_scalars(shape, &sig, &flat, DeclaredParity::Even)
    };
    let g0 = to_matrix(&g0)?;
    let g0_inv = to_matrix(&g0_inv)?;
    let x0 = spec.x0(&sig);

    let mut gs = vec![g0.clone()];
    let mut ds = vec![x0.clone()];
    for n in 1..=top {
        let mut k = SuperMatrix::zero(shape, &sig);
        for (j, gj) in gs.iter().enumerate() {
            k = k.add(&gj.mul(&pieces[n - j])?)?;
        }
        for j in 1..n {
            k = k.sub(&ds[j].mul(&gs[n - j])?)?;
        }
        let k = k.mul(&g0_inv)?;
        let mut y = vec![SuperPolynomial::zero(&sig); size * size];
        let mut dn = vec![SuperPolynomial::zero(&sig); size * size];
        for i in 0..size {
            for j in 0..size {
                let kij = k.get(i, j);
                if i == j {
                    dn[i * size + i] = kij.clone();
                } else if !kij.is_zero() {
                    let gap = &spec.lambda[i] - &spec.lambda[j];
                    y[i * size + j] = kij.scale(&gap.recip());
                }
            }
        }
        let y = SuperMatrix::new(shape, &sig, y, DeclaredParity::None)?;
        gs.push(y.mul(&g0)?);
        ds.push(SuperMatrix::new(shape, &sig, dn, DeclaredParity::None)?);
    }
    let sum = |v: &[SuperMatrix]| -> Result<SuperMatrix, OrbitError> {
        let mut acc = SuperMatrix::zero(shape, &sig);
        for p in v {
            acc = acc.add(p)?;
        }
        Ok(acc.with_parity(DeclaredParity::Even)?)
    };
    let g = sum(&gs)?;
    let d = sum(&ds)?;
    let defect = g.mul(&w)?.sub(&d.mul(&g)?)?;
    let residuals = (0..=top).map(|n| term_count(&defect.odd_component(n))).collect();
    let rigid = ds[1..].iter().all(SuperMatrix::is_zero);
    let membership = membership_check(&w, spec)?.holds;
    Ok(Diagonalization {
        matches_x0: d == x0,
        g,
        d,
        g_pieces: gs,
        d_pieces: ds,
        residuals,
        rigid,
        membership,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vandermonde {
    /// Determinant of the signed power matrix.
    pub det: Scalar,
    /// `prod_{i>j} (lambda_i - lambda_j)`.
    pub product: Scalar,
    /// `det / product` (`+-1`), or `0` when the product vanishes.
    pub sign: i32,
    /// Whether `sign` agrees with `(-1)^{mn}`.
    pub matches_mn_sign: bool,
}

/// Determinant of the matrix with rows `lambda_j^k` (`k = 0..m+n`) whose last `n`
/// columns are negated, compared with the Vandermonde product.
pub fn vandermonde_criterion(lambda: &[Scalar], m: usize, n: usize) -> Result<Vandermonde, OrbitError> {
    let size = m + n;
    if lambda.len() != size {
        return Err(OrbitError::WrongLength {
            expected: size,
            got: lambda.len(),
        });
    }
    let mut mat = linalg::zeros(size, size);
    for (j, l) in lambda.iter().enumerate() {
        let mut p = Scalar::one();
        for row in mat.iter_mut() {
            row[j] = if j >= m { -p.clone() } else { p.clone() };
            p *= l;
        }
    }
    let det = linalg::determinant(&mat);
    let mut product = Scalar::one();
    for i in 0..size {
        for j in 0..i {
            product *= &lambda[i] - &lambda[j];
        }
    }
    let sign = if product.is_zero() {
        0
    } else if det == product {
        1
    } else {
        -1
    };
    let mn_sign = if (m * n) % 2 == 0 { 1 } else { -1 };
    Ok(Vandermonde {
        det,
        product,
        sign,
        matches_mn_sign: sign == 0 || sign == mn_sign,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdInvariance {
    /// `(k, holds)` for `k = 1..=kmax`.
    pub results: Vec<(u32, bool)>,
    pub group_element: SuperMatrix,
}

impl AdInvariance {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|(_, h)| *h)
    }
}

/// Check `str((g M g^-1)^k) = str(M^k)` identically, where `M = sum_I x_I X_I` is the
/// generic element and `g = g_num (1 + N(t))` a seeded random group element with
/// nilpotent part in `thetas` extra odd parameters.
pub fn ad_invariance_check(
    kind: AlgebraKind,
    shape: BlockShape,
    kmax: u32,
    thetas: usize,
    seed: u64,
) -> Result<AdInvariance, OrbitError> {
    let algebra = Arc::new(kind.build(shape.m, shape.n)?);
    let ring = PoissonRing::with_extra_odd(algebra, thetas)?;
    let sig = ring.signature().clone();
    let generic = ring.generic_element()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_group_element(shape, &sig, &ring, thetas, &mut rng)?;
    ad_invariance_for(&generic, &g, kmax)
}

/// Same check for an explicit group element over the coordinate ring.
pub fn ad_invariance_for(
    generic: &SuperMatrix,
    g: &SuperMatrix,
    kmax: u32,
) -> Result<AdInvariance, OrbitError> {
    let conj = g.mul(generic)?.mul(&g.inverse()?)?.with_parity(DeclaredParity::Even)?;
    let before = generic.power_sums(kmax, false)?;
    let after = conj.power_sums(kmax, false)?;
    let results = before
        .iter()
        .zip(&after)
        .enumerate()
        .map(|(i, (a, b))| (i as u32 + 1, a == b))
        .collect();
    Ok(AdInvariance {
        results,
        group_element: g.clone(),
    })
}

fn random_group_element(
    shape: BlockShape,
    sig: &Arc<RingSignature>,
    ring: &PoissonRing,
    thetas: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SuperMatrix, OrbitError> {
    use rand::Rng;
    let size = shape.size();
    let theta_base = sig.odd_count() - thetas;
    let _ = ring;
    let body_p = random::random_invertible_scalar(rng, shape.m);
    let body_s = random::random_invertible_scalar(rng, shape.n);
    let mut num = vec![SuperPolynomial::zero(sig); size * size];
    let mut nil = vec![SuperPolynomial::zero(sig); size * size];
    for i in 0..size {
        for j in 0..size {
            let body = match (i < shape.m, j < shape.m) {
                (true, true) => body_p[i][j].clone(),
                (false, false) => body_s[i - shape.m][j - shape.m].clone(),
                _ => Scalar::zero(),
            };
            num[i * size + j] = SuperPolynomial::constant(sig, body);
            if thetas == 0 {
                continue;
            }
            let mut entry = if i == j {
                SuperPolynomial::one(sig)
            } else {
                SuperPolynomial::zero(sig)
            };
            match shape.block_parity(i, j) {
                crate::ring::Parity::Odd => {
                    let t = theta_base + rng.gen_range(0..thetas);
                    entry = &entry + &SuperPolynomial::odd_gen(sig, t).scale(&random::small_scalar(rng));
                }
                crate::ring::Parity::Even if thetas >= 2 => {
                    let a = theta_base + rng.gen_range(0..thetas);
                    let b = theta_base + rng.gen_range(0..thetas);
                    let prod = &SuperPolynomial::odd_gen(sig, a) * &SuperPolynomial::odd_gen(sig, b);
                    entry = &entry + &prod.scale(&random::small_scalar(rng));
                }
                _ => {}
            }
            nil[i * size + j] = entry;
        }
    }
    let num = SuperMatrix::new(shape, sig, num, DeclaredParity::Even)?;
    if thetas == 0 {
        return Ok(num);
    }
    let nil = SuperMatrix::new(shape, sig, nil, DeclaredParity::Even)?;
    Ok(num.mul(&nil)?.with_parity(DeclaredParity::Even)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyReport {
    /// `sum_i f_i q_i = 0`.
    pub relation: bool,
    /// `F_ij = -F_ji`.
    pub antisymmetric: bool,
    /// `f_i = sum_j F_ij q_j`.
    pub represented: bool,
}

impl SyzygyReport {
    pub fn passed(&self) -> bool {
        self.relation && self.antisymmetric && self.represented
    }
}

/// Verify an antisymmetric syzygy certificate for parity-homogeneous generators `q`.
pub fn syzygy_verify(
    q: &[SuperPolynomial],
    f: &[SuperPolynomial],
    cert: &[Vec<SuperPolynomial>],
) -> Result<SyzygyReport, OrbitError> {
    let l = q.len();
    if f.len() != l || cert.len() != l || cert.iter().any(|r| r.len() != l) {
        return Err(OrbitError::SyzygyShape);
    }
    if q.iter().any(|p| p.parity() == PolyParity::Mixed) {
        return Err(OrbitError::MixedSyzygyData);
    }
    let Some(first) = q.first() else {
        return Ok(SyzygyReport {
            relation: true,
            antisymmetric: true,
            represented: true,
        });
    };
    let zero = SuperPolynomial::zero(first.signature());
    let mut sum = zero.clone();
    for (fi, qi) in f.iter().zip(q) {
        sum = &sum + &fi.checked_mul(qi).map_err(MatrixError::from)?;
    }
    let antisymmetric = (0..l).all(|i| (0..l).all(|j| cert[i][j] == -&cert[j][i]));
    let represented = (0..l).all(|i| {
        let mut acc = zero.clone();
        for j in 0..l {
            acc = &acc + &(&cert[i][j] * &q[j]);
        }
        acc == f[i]
    });
    Ok(SyzygyReport {
        relation: sum.is_zero(),
        antisymmetric,
        represented,
    })
}
