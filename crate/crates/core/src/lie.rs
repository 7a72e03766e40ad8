//! Lie superalgebras given by a homogeneous basis and structure constants
//! `[X_I, X_J] = sum_K c_IJ^K X_K`, with the `gl`, `sl` and `osp` presets realized by
//! scalar supermatrices, the Killing form, and the Poisson superbracket on the
//! coordinate ring.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, QMatrix};
use crate::matrix::{BlockShape, DeclaredParity, MatrixError, SuperMatrix};
use crate::ring::{Generator, Parity, RingError, RingSignature, SuperPolynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("sl({0}|{0}) is excluded: the supertrace form is degenerate")]
    EqualBlocks(usize),
    #[error("osp(m|2n) needs m >= 1 and n >= 1")]
    InvalidOspShape,
    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error("bracket of basis elements {0} and {1} leaves the span")]
    NotClosed(usize, usize),
    #[error("structure constant index out of range")]
    IndexOutOfRange,
    #[error("algebra has no matrix realization")]
    NoRealization,
    #[error("the supertrace form is degenerate on this algebra")]
    DegenerateTraceForm,
    #[error("polynomial does not live in the coordinate ring of this algebra")]
    RingMismatch,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Scalar matrix realization: block shape plus one `(m+n) x (m+n)` matrix per basis
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub shape: BlockShape,
    pub basis: Vec<QMatrix>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LieSuperAlgebra {
    name: String,
    parity: Vec<Parity>,
    /// `c[i * dim + j]` maps `k` to `c_ij^k`; zero constants are not stored.
    c: Vec<BTreeMap<usize, Scalar>>,
    realization: Option<Realization>,
}

fn sign_of(a: Parity, b: Parity) -> Scalar {
    if a == Parity::Odd && b == Parity::Odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

fn scalar_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    linalg::mat_mul(a, b)
}

/// `XY - (-1)^{pq} YX` for scalar matrices.
fn scalar_bracket(x: &QMatrix, px: Parity, y: &QMatrix, py: Parity) -> QMatrix {
    let xy = scalar_mul(x, y);
    let yx = scalar_mul(y, x);
    let s = sign_of(px, py);
    xy.iter()
        .zip(&yx)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a - &s * b).collect())
        .collect()
}

fn scalar_supertrace(shape: BlockShape, x: &QMatrix) -> Scalar {
    (0..shape.size()).map(|i| shape.weight(i) * &x[i][i]).sum()
}

fn unit(size: usize, i: usize, j: usize) -> QMatrix {
    let mut u = linalg::zeros(size, size);
    u[i][j] = Scalar::one();
    u
}

/// Coordinates of matrices in a linearly independent family, by restriction to a set
/// of pivot entries.
struct Coordinates {
    size: usize,
    pivots: Vec<usize>,
    inverse: QMatrix,
    basis: Vec<QMatrix>,
}

impl Coordinates {
    fn new(size: usize, basis: &[QMatrix]) -> Result<Self, LieError> {
        let dim = basis.len();
        // rows of `flat` are the flattened basis matrices
        let flat: QMatrix = basis
            .iter()
            .map(|b| b.iter().flatten().cloned().collect())
            .collect();
        let mut echelon = flat.clone();
        let pivots = linalg::rref(&mut echelon);
        if pivots.len() != dim {
            return Err(LieError::DependentBasis);
        }
        // square[k][i] = (basis i)[pivot k]
        let square: QMatrix = pivots
            .iter()
            .map(|&p| flat.iter().map(|row| row[p].clone()).collect())
            .collect();
        let inverse = if dim == 0 {
            Vec::new()
        } else {
            linalg::inverse(&square).ok_or(LieError::DependentBasis)?
        };
        Ok(Coordinates {
            size,
            pivots,
            inverse,
            basis: basis.to_vec(),
        })
    }

    /// Coordinates of `x`, or `None` if it is outside the span.
    fn of(&self, x: &QMatrix) -> Option<Vec<Scalar>> {
        let flat: Vec<Scalar> = x.iter().flatten().cloned().collect();
        let rhs: Vec<Scalar> = self.pivots.iter().map(|&p| flat[p].clone()).collect();
        let coords: Vec<Scalar> = self
            .inverse
            .iter()
            .map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum())
            .collect();
        let mut rebuilt = vec![Scalar::zero(); self.size * self.size];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (slot, v) in rebuilt.iter_mut().zip(b.iter().flatten()) {
                *slot += c * v;
            }
        }
        (rebuilt == flat).then_some(coords)
    }
}

impl LieSuperAlgebra {
    /// Algebra from raw structure constants `(i, j, k, c_ij^k)`, 0-based.
    pub fn from_constants(
        name: impl Into<String>,
        parity: Vec<Parity>,
        constants: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self, LieError> {
        let dim = parity.len();
        let mut c = vec![BTreeMap::new(); dim * dim];
        for (i, j, k, v) in constants {
            if i >= dim || j >= dim || k >= dim {
                return Err(LieError::IndexOutOfRange);
            }
            if !v.is_zero() {
                c[i * dim + j].insert(k, v);
            }
        }
        Ok(LieSuperAlgebra {
            name: name.into(),
            parity,
            c,
            realization: None,
        })
    }

    /// Algebra spanned by homogeneous scalar supermatrices; fails unless the span is
    /// closed under the super-commutator.
    pub fn from_matrices(
        name: impl Into<String>,
        shape: BlockShape,
        basis: Vec<QMatrix>,
        parity: Vec<Parity>,
    ) -> Result<Self, LieError> {
        let dim = basis.len();
        let coords = Coordinates::new(shape.size(), &basis)?;
        let mut c = vec![BTreeMap::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let br = scalar_bracket(&basis[i], parity[i], &basis[j], parity[j]);
                let v = coords.of(&br).ok_or(LieError::NotClosed(i, j))?;
                c[i * dim + j] = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
            }
        }
        Ok(LieSuperAlgebra {
            name: name.into(),
            parity,
            c,
            realization: Some(Realization { shape, basis }),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn even_dim(&self) -> usize {
        self.parity.iter().filter(|p| **p == Parity::Even).count()
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    /// `[X_i, X_j]` as a sparse map `k -> c_ij^k`.
    pub fn bracket(&self, i: usize, j: usize) -> &BTreeMap<usize, Scalar> {
        &self.c[i * self.dim() + j]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket(i, j).get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Overwrite one structure constant (used for negative controls).
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let dim = self.dim();
        if v.is_zero() {
            self.c[i * dim + j].remove(&k);
        } else {
            self.c[i * dim + j].insert(k, v);
        }
    }

    /// All nonzero constants `(i, j, k, c_ij^k)` in index order.
    pub fn constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for (k, v) in self.bracket(i, j) {
                    out.push((i, j, *k, v.clone()));
                }
            }
        }
        out
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_vectors(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (k, v) in self.bracket(i, j) {
                    out[*k] += ai * bj * v;
                }
            }
        }
        out
    }

    fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    /// Recompute the structure constants from the matrix realization and compare.
    pub fn realization_consistent(&self) -> Result<bool, LieError> {
        let real = self.realization.as_ref().ok_or(LieError::NoRealization)?;
        let fresh = Self::from_matrices(
            self.name.clone(),
            real.shape,
            real.basis.clone(),
            self.parity.clone(),
        )?;
        Ok(fresh.c == self.c)
    }

    /// Basis matrix `i` as a [`SuperMatrix`] over `sig`.
    pub fn basis_matrix(
        &self,
        i: usize,
        sig: &Arc<RingSignature>,
    ) -> Result<SuperMatrix, LieError> {
        let real = self.realization.as_ref().ok_or(LieError::NoRealization)?;
        let values: Vec<Scalar> = real.basis[i].iter().flatten().cloned().collect();
        Ok(SuperMatrix::from_scalars(
            real.shape,
            sig,
            &values,
            DeclaredParity::from(self.parity[i]),
        )?)
    }
}

impl fmt::Debug for LieSuperAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieSuperAlgebra({}, dim {})", self.name, self.dim())
    }
}

/// Off-diagonal matrix units in basis order: even blocks row-major, then the upper
/// right odd block row-major, then the lower left one.
fn off_diagonal_units(shape: BlockShape) -> Vec<(usize, usize)> {
    let size = shape.size();
    let mut even = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if i == j {
                continue;
            }
            match (shape.index_parity(i), shape.index_parity(j)) {
                (Parity::Even, Parity::Odd) => upper.push((i, j)),
                (Parity::Odd, Parity::Even) => lower.push((i, j)),
                _ => even.push((i, j)),
            }
        }
    }
    even.into_iter().chain(upper).chain(lower).collect()
}

/// `gl(m|n)`: diagonal units, then even off-diagonal units, then odd units.
pub fn build_gl(m: usize, n: usize) -> Result<LieSuperAlgebra, LieError> {
    let shape = BlockShape::new(m, n)?;
    let size = shape.size();
    let mut basis = Vec::new();
    let mut parity = Vec::new();
    for i in 0..size {
        basis.push(unit(size, i, i));
        parity.push(Parity::Even);
    }
    for (i, j) in off_diagonal_units(shape) {
        basis.push(unit(size, i, j));
        parity.push(shape.block_parity(i, j));
    }
    LieSuperAlgebra::from_matrices(format!("gl({m}|{n})"), shape, basis, parity)
}

/// `sl(m|n)`, `m != n`: diagonal part spanned by `H_k = E_kk - w_k w_{k+1} E_{k+1,k+1}`
/// with `w` the supertrace weights.
pub fn build_sl(m: usize, n: usize) -> Result<LieSuperAlgebra, LieError> {
    if m == n {
        return Err(LieError::EqualBlocks(m));
    }
    let shape = BlockShape::new(m, n)?;
    let size = shape.size();
    let mut basis = Vec::new();
    let mut parity = Vec::new();
    for k in 0..size.saturating_sub(1) {
        let mut h = unit(size, k, k);
        h[k + 1][k + 1] = -(shape.weight(k) * shape.weight(k + 1));
        basis.push(h);
        parity.push(Parity::Even);
    }
    for (i, j) in off_diagonal_units(shape) {
        basis.push(unit(size, i, j));
        parity.push(shape.block_parity(i, j));
    }
    LieSuperAlgebra::from_matrices(format!("sl({m}|{n})"), shape, basis, parity)
}

/// The supertranspose of a scalar matrix of parity `p`:
/// `(X^st)_ij = (-1)^{(|i|+|j|)(|j| + p)} X_ji`.
pub fn supertranspose(shape: BlockShape, x: &QMatrix, p: Parity) -> QMatrix {
    let size = shape.size();
    let mut out = linalg::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            if x[j][i].is_zero() {
                continue;
            }
            let block = shape.block_parity(i, j);
            let odd = block == Parity::Odd && shape.index_parity(j) + p == Parity::Odd;
            out[i][j] = if odd { -x[j][i].clone() } else { x[j][i].clone() };
        }
    }
    out
}

/// The graded form `J = diag(I_m, J_2n)` with `J_2n = [[0, I], [-I, 0]]`.
pub fn osp_form(m: usize, n2: usize) -> QMatrix {
    let size = m + n2;
    let half = n2 / 2;
    let mut j = linalg::zeros(size, size);
    for i in 0..m {
        j[i][i] = Scalar::one();
    }
    for k in 0..half {
        j[m + k][m + half + k] = Scalar::one();
        j[m + half + k][m + k] = -Scalar::one();
    }
    j
}

/// `osp(m|2n)`: homogeneous solutions of `X^st J + J X = 0`, even part first.
pub fn build_osp(m: usize, n: usize) -> Result<LieSuperAlgebra, LieError> {
    if m == 0 || n == 0 {
        return Err(LieError::InvalidOspShape);
    }
    let shape = BlockShape::new(m, 2 * n)?;
    let size = shape.size();
    let form = osp_form(m, 2 * n);
    let mut basis = Vec::new();
    let mut parity = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        let slots: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .filter(|&(i, j)| shape.block_parity(i, j) == p)
            .collect();
        // column s of the system: image of the unit at slots[s]
        let images: Vec<Vec<Scalar>> = slots
            .iter()
            .map(|&(i, j)| {
                let e = unit(size, i, j);
                let lhs = scalar_mul(&supertranspose(shape, &e, p), &form);
                let rhs = scalar_mul(&form, &e);
                lhs.iter()
                    .flatten()
                    .zip(rhs.iter().flatten())
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect();
        let system = linalg::transpose(&images);
        for v in linalg::nullspace(&system, slots.len()) {
            let mut x = linalg::zeros(size, size);
            for (s, &(i, j)) in slots.iter().enumerate() {
                x[i][j] = v[s].clone();
            }
            basis.push(x);
            parity.push(p);
        }
    }
    LieSuperAlgebra::from_matrices(format!("osp({m}|{})", 2 * n), shape, basis, parity)
}

/// Violations found by [`check_axioms`]; 0-based basis indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// `(i, j, k)` with `c_ij^k != 0` but `p_k != p_i + p_j`.
    pub grading: Vec<(usize, usize, usize)>,
    /// `(i, j, k)` with `c_ij^k != -(-1)^{p_i p_j} c_ji^k`.
    pub antisymmetry: Vec<(usize, usize, usize)>,
    /// `(i, j, k)` whose graded Jacobi sum is nonzero.
    pub jacobi: Vec<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.grading.is_empty() && self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

/// Exhaustive check of grading, graded antisymmetry and the graded Jacobi identity
/// `(-1)^{p_i p_k}[X_i,[X_j,X_k]] + (-1)^{p_j p_i}[X_j,[X_k,X_i]]
///  + (-1)^{p_k p_j}[X_k,[X_i,X_j]] = 0`.
pub fn check_axioms(l: &LieSuperAlgebra) -> AxiomReport {
    let dim = l.dim();
    let mut report = AxiomReport::default();
    for i in 0..dim {
        for j in 0..dim {
            for (k, _) in l.bracket(i, j) {
                if l.parity(*k) != l.parity(i) + l.parity(j) {
                    report.grading.push((i, j, *k));
                }
            }
            for k in 0..dim {
                let lhs = l.constant(i, j, k);
                let rhs = -(sign_of(l.parity(i), l.parity(j)) * l.constant(j, i, k));
                if lhs != rhs {
                    report.antisymmetry.push((i, j, k));
                }
            }
        }
    }
    let vec_of = |m: &BTreeMap<usize, Scalar>| {
        let mut v = vec![Scalar::zero(); dim];
        for (k, c) in m {
            v[*k] = c.clone();
        }
        v
    };
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let (pi, pj, pk) = (l.parity(i), l.parity(j), l.parity(k));
                let t1 = l.bracket_vectors(&l.basis_vector(i), &vec_of(l.bracket(j, k)));
                let t2 = l.bracket_vectors(&l.basis_vector(j), &vec_of(l.bracket(k, i)));
                let t3 = l.bracket_vectors(&l.basis_vector(k), &vec_of(l.bracket(i, j)));
                let (s1, s2, s3) = (sign_of(pi, pk), sign_of(pj, pi), sign_of(pk, pj));
                let nonzero = (0..dim).any(|r| !(&s1 * &t1[r] + &s2 * &t2[r] + &s3 * &t3[r]).is_zero());
                if nonzero {
                    report.jacobi.push((i, j, k));
                }
            }
        }
    }
    report
}

/// Killing form `B_ij = str(ad_i ad_j)` with nondegeneracy data for the even and
/// odd diagonal blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingForm {
    pub matrix: QMatrix,
    pub even_det: Scalar,
    pub odd_det: Scalar,
}

impl KillingForm {
    pub fn nondegenerate(&self) -> bool {
        !self.even_det.is_zero() && !self.odd_det.is_zero()
    }

    pub fn determinant(&self) -> Scalar {
        &self.even_det * &self.odd_det
    }
}

/// Adjoint matrix of basis element `i`: `(ad_i)_{kj} = c_ij^k`.
pub fn adjoint(l: &LieSuperAlgebra, i: usize) -> QMatrix {
    let dim = l.dim();
    let mut ad = linalg::zeros(dim, dim);
    for j in 0..dim {
        for (k, v) in l.bracket(i, j) {
            ad[*k][j] = v.clone();
        }
    }
    ad
}

pub fn killing_form(l: &LieSuperAlgebra) -> KillingForm {
    let dim = l.dim();
    let ads: Vec<QMatrix> = (0..dim).map(|i| adjoint(l, i)).collect();
    let mut b = linalg::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let prod = linalg::mat_mul(&ads[i], &ads[j]);
            b[i][j] = (0..dim)
                .map(|k| match l.parity(k) {
                    Parity::Even => prod[k][k].clone(),
                    Parity::Odd => -prod[k][k].clone(),
                })
                .sum();
        }
    }
    let block = |p: Parity| -> QMatrix {
        let idx: Vec<usize> = (0..dim).filter(|&k| l.parity(k) == p).collect();
        idx.iter()
            .map(|&r| idx.iter().map(|&c| b[r][c].clone()).collect())
            .collect()
    };
    KillingForm {
        even_det: linalg::determinant(&block(Parity::Even)),
        odd_det: linalg::determinant(&block(Parity::Odd)),
        matrix: b,
    }
}

/// The coordinate ring `k[g*]`: one generator `x_I` per basis element, with the
/// basis parity.
#[derive(Clone, Debug)]
pub struct PoissonRing {
    algebra: Arc<LieSuperAlgebra>,
    sig: Arc<RingSignature>,
    generators: Vec<Generator>,
    brackets: Vec<SuperPolynomial>,
}

impl PoissonRing {
    pub fn new(algebra: Arc<LieSuperAlgebra>) -> Result<Self, LieError> {
        Self::with_extra_odd(algebra, 0)
    }

    /// Coordinate ring with `extra` additional odd parameters `t1..`, which are
    /// Poisson-central.
    pub fn with_extra_odd(algebra: Arc<LieSuperAlgebra>, extra: usize) -> Result<Self, LieError> {
        let dim = algebra.dim();
        let mut generators = Vec::with_capacity(dim);
        let (mut even_names, mut odd_names) = (Vec::new(), Vec::new());
        for i in 0..dim {
            let name = format!("x{}", i + 1);
            match algebra.parity(i) {
                Parity::Even => {
                    generators.push(Generator::Even(even_names.len()));
                    even_names.push(name);
                }
                Parity::Odd => {
                    generators.push(Generator::Odd(odd_names.len()));
                    odd_names.push(name);
                }
            }
        }
        for k in 0..extra {
            odd_names.push(format!("t{}", k + 1));
        }
        let sig = RingSignature::new(even_names.len(), odd_names.len())?
            .with_names(even_names, odd_names)?;
        let sig = Arc::new(sig);
        let mut ring = PoissonRing {
            algebra,
            sig,
            generators,
            brackets: Vec::new(),
        };
        let mut brackets = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = SuperPolynomial::zero(&ring.sig);
                for (k, v) in ring.algebra.bracket(i, j) {
                    acc = &acc + &ring.coordinate(*k).scale(v);
                }
                brackets.push(acc);
            }
        }
        ring.brackets = brackets;
        Ok(ring)
    }

    pub fn algebra(&self) -> &Arc<LieSuperAlgebra> {
        &self.algebra
    }

    pub fn signature(&self) -> &Arc<RingSignature> {
        &self.sig
    }

    /// The coordinate `x_I` (0-based `i`).
    pub fn coordinate(&self, i: usize) -> SuperPolynomial {
        SuperPolynomial::generator(&self.sig, self.generators[i]).expect("generator in ring")
    }

    pub fn generator(&self, i: usize) -> Generator {
        self.generators[i]
    }

    /// Basis index of a ring generator, or `None` for an extra parameter.
    pub fn basis_index(&self, g: Generator) -> Option<usize> {
        self.generators.iter().position(|h| *h == g)
    }

    fn parity_of(&self, g: Generator) -> Parity {
        match g {
            Generator::Even(_) => Parity::Even,
            Generator::Odd(_) => Parity::Odd,
        }
    }

    fn product(&self, factors: &[SuperPolynomial]) -> SuperPolynomial {
        factors
            .iter()
            .fold(SuperPolynomial::one(&self.sig), |acc, f| &acc * f)
    }

    fn generator_poly(&self, g: Generator) -> SuperPolynomial {
        SuperPolynomial::generator(&self.sig, g).expect("generator in ring")
    }

    /// `{a, v}` for a generator `a` and a generator `v`.
    fn gen_bracket(&self, a: Generator, v: Generator) -> SuperPolynomial {
        match (self.basis_index(a), self.basis_index(v)) {
            (Some(i), Some(j)) => self.brackets[i * self.algebra.dim() + j].clone(),
            _ => SuperPolynomial::zero(&self.sig),
        }
    }

    /// `{y_1 ... y_k, v}` for a monomial given by its ordered factors and a generator.
    fn monomial_gen(&self, ys: &[Generator], v: Generator) -> SuperPolynomial {
        let pv = self.parity_of(v);
        let polys: Vec<SuperPolynomial> = ys.iter().map(|g| self.generator_poly(*g)).collect();
        let mut acc = SuperPolynomial::zero(&self.sig);
        for j in 0..ys.len() {
            let br = self.gen_bracket(ys[j], v);
            if br.is_zero() {
                continue;
            }
            let tail_odd = ys[j + 1..]
                .iter()
                .filter(|g| matches!(g, Generator::Odd(_)))
                .count();
            let mut factors = polys.clone();
            factors[j] = br;
            let term = self.product(&factors);
            acc = if pv == Parity::Odd && tail_odd % 2 == 1 {
                &acc - &term
            } else {
                &acc + &term
            };
        }
        acc
    }

    /// Graded Leibniz extension of `{x_I, x_J} = sum_K c_IJ^K x_K`.
    pub fn bracket(
        &self,
        f: &SuperPolynomial,
        g: &SuperPolynomial,
    ) -> Result<SuperPolynomial, LieError> {
        if f.signature() != &self.sig || g.signature() != &self.sig {
            return Err(LieError::RingMismatch);
        }
        let mut acc = SuperPolynomial::zero(&self.sig);
        for (ma, ca) in f.terms() {
            let ys = ma.factors();
            if ys.is_empty() {
                continue;
            }
            let pa = if ma.is_odd() { Parity::Odd } else { Parity::Even };
            for (mb, cb) in g.terms() {
                let zs = mb.factors();
                let zpolys: Vec<SuperPolynomial> =
                    zs.iter().map(|z| self.generator_poly(*z)).collect();
                let mut odd_before = 0usize;
                for j in 0..zs.len() {
                    let inner = self.monomial_gen(&ys, zs[j]);
                    if !inner.is_zero() {
                        let mut factors = zpolys.clone();
                        factors[j] = inner;
                        let term = self.product(&factors).scale(&(ca * cb));
                        acc = if pa == Parity::Odd && odd_before % 2 == 1 {
                            &acc - &term
                        } else {
                            &acc + &term
                        };
                    }
                    if matches!(zs[j], Generator::Odd(_)) {
                        odd_before += 1;
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Generic element `sum_I x_I X_I` of the matrix realization.
    pub fn generic_element(&self) -> Result<SuperMatrix, LieError> {
        let real = self.algebra.realization().ok_or(LieError::NoRealization)?;
        let mut acc = SuperMatrix::zero(real.shape, &self.sig);
        for i in 0..self.algebra.dim() {
            let b = self.algebra.basis_matrix(i, &self.sig)?;
            acc = acc.add(&b.scale_by(&self.coordinate(i))?)?;
        }
        Ok(acc.with_parity(DeclaredParity::Even)?)
    }

    /// The coordinate matrix `M_ab = w_b l_ab`, where `l_ab` is the linear function
    /// pairing with the supertrace-orthogonal projection of `E_ab` onto the algebra.
    /// Its supertrace powers are the invariant polynomials.
    pub fn coordinate_matrix(&self) -> Result<SuperMatrix, LieError> {
        let real = self.algebra.realization().ok_or(LieError::NoRealization)?;
        let shape = real.shape;
        let size = shape.size();
        let dim = self.algebra.dim();
        let gram: QMatrix = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| scalar_supertrace(shape, &scalar_mul(&real.basis[j], &real.basis[i])))
                    .collect()
            })
            .collect();
        let gram_inv = linalg::inverse(&gram).ok_or(LieError::DegenerateTraceForm)?;
        let mut entries = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                // str(X_J E_ab) = w_b (X_J)_{ba}
                let rhs: Vec<Scalar> = (0..dim)
                    .map(|j| shape.weight(b) * &real.basis[j][b][a])
                    .collect();
                let mut entry = SuperPolynomial::zero(&self.sig);
                for (i, row) in gram_inv.iter().enumerate() {
                    let coeff: Scalar = row.iter().zip(&rhs).map(|(g, r)| g * r).sum();
                    if !coeff.is_zero() {
                        entry = &entry + &self.coordinate(i).scale(&(shape.weight(b) * coeff));
                    }
                }
                entries.push(entry);
            }
        }
        Ok(SuperMatrix::new(
            shape,
            &self.sig,
            entries,
            DeclaredParity::Even,
        )?)
    }

    /// Invariant polynomial `str(M^k)` of the coordinate matrix.
    pub fn invariant(&self, k: u32) -> Result<SuperPolynomial, LieError> {
        let m = self.coordinate_matrix()?;
        Ok(m.pow(k)?.supertrace()?)
    }
}
