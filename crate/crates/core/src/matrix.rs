//! `(m|n)`-block matrices over a supercommutative ring.
//!
//! Rows and columns `0..m` are even, `m..m+n` odd. An even supermatrix has even
//! entries in the diagonal blocks `p`, `s` and odd entries in the off-diagonal blocks
//! `q`, `r`; an odd supermatrix has the reverse pattern.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::ring::{same_ring, Parity, PolyParity, RingError, RingSignature, SuperPolynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("block shapes differ")]
    ShapeMismatch,
    #[error("matrices live over different rings")]
    RingMismatch,
    #[error("invalid block shape {0}|{1}")]
    InvalidShape(usize, usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("entry ({row}, {col}) breaks the declared {declared:?} parity pattern")]
    ParityViolation {
        row: usize,
        col: usize,
        declared: Parity,
    },
    #[error("operation needs an even supermatrix")]
    UnsupportedParity,
    #[error("operation needs homogeneous declared parity")]
    MixedParity,
    #[error("determinant needs even entries; entry {0} is not even")]
    OddEntry(usize),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockShape {
    pub m: usize,
    pub n: usize,
}

impl BlockShape {
    pub fn new(m: usize, n: usize) -> Result<Self, MatrixError> {
        if m + n == 0 {
            return Err(MatrixError::InvalidShape(m, n));
        }
        Ok(BlockShape { m, n })
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    /// Parity of row/column index `i`.
    pub fn index_parity(&self, i: usize) -> Parity {
        if i < self.m {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of the block containing `(i, j)`: even on the diagonal blocks.
    pub fn block_parity(&self, i: usize, j: usize) -> Parity {
        self.index_parity(i) + self.index_parity(j)
    }

    /// `+1` for even indices, `-1` for odd ones: the supertrace weight.
    pub fn weight(&self, i: usize) -> Scalar {
        match self.index_parity(i) {
            Parity::Even => Scalar::one(),
            Parity::Odd => -Scalar::one(),
        }
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.m, self.n)
    }
}

/// Declared parity metadata of a supermatrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeclaredParity {
    Even,
    Odd,
    None,
}

impl DeclaredParity {
    fn homogeneous(self) -> Option<Parity> {
        match self {
            DeclaredParity::Even => Some(Parity::Even),
            DeclaredParity::Odd => Some(Parity::Odd),
            DeclaredParity::None => None,
        }
    }
}

impl From<Parity> for DeclaredParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => DeclaredParity::Even,
            Parity::Odd => DeclaredParity::Odd,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    shape: BlockShape,
    sig: Arc<RingSignature>,
    entries: Vec<SuperPolynomial>,
    parity: DeclaredParity,
}

impl SuperMatrix {
    /// Row-major entries; validates the declared parity pattern.
    pub fn new(
        shape: BlockShape,
        sig: &Arc<RingSignature>,
        entries: Vec<SuperPolynomial>,
        parity: DeclaredParity,
    ) -> Result<Self, MatrixError> {
        let size = shape.size();
        if entries.len() != size * size {
            return Err(MatrixError::EntryCount {
                expected: size * size,
                got: entries.len(),
            });
        }
        if entries.iter().any(|e| !same_ring(e.signature(), sig)) {
            return Err(MatrixError::RingMismatch);
        }
        let mat = SuperMatrix {
            shape,
            sig: sig.clone(),
            entries,
            parity,
        };
        if let Some(declared) = parity.homogeneous() {
            for i in 0..size {
                for j in 0..size {
                    let e = mat.get(i, j);
                    let want = shape.block_parity(i, j) + declared;
                    if !e.is_zero() && e.parity().homogeneous() != Some(want) {
                        return Err(MatrixError::ParityViolation {
                            row: i,
                            col: j,
                            declared,
                        });
                    }
                }
            }
        }
        Ok(mat)
    }

    /// Matrix with constant entries, given row-major.
    pub fn from_scalars(
        shape: BlockShape,
        sig: &Arc<RingSignature>,
        values: &[Scalar],
        parity: DeclaredParity,
    ) -> Result<Self, MatrixError> {
        let entries = values
            .iter()
            .map(|v| SuperPolynomial::constant(sig, v.clone()))
            .collect();
        Self::new(shape, sig, entries, parity)
    }

    pub fn zero(shape: BlockShape, sig: &Arc<RingSignature>) -> Self {
        let size = shape.size();
        SuperMatrix {
            shape,
            sig: sig.clone(),
            entries: vec![SuperPolynomial::zero(sig); size * size],
            parity: DeclaredParity::Even,
        }
    }

    pub fn identity(shape: BlockShape, sig: &Arc<RingSignature>) -> Self {
        let mut z = Self::zero(shape, sig);
        for i in 0..shape.size() {
            z.entries[i * shape.size() + i] = SuperPolynomial::one(sig);
        }
        z
    }

    /// Diagonal matrix with constant entries.
    pub fn diagonal(
        shape: BlockShape,
        sig: &Arc<RingSignature>,
        diag: &[Scalar],
    ) -> Result<Self, MatrixError> {
        let size = shape.size();
        if diag.len() != size {
            return Err(MatrixError::EntryCount {
                expected: size,
                got: diag.len(),
            });
        }
        let mut z = Self::zero(shape, sig);
        for (i, d) in diag.iter().enumerate() {
            z.entries[i * size + i] = SuperPolynomial::constant(sig, d.clone());
        }
        Ok(z)
    }

    /// Matrix unit `E_ij` (0-based), with its natural parity.
    pub fn unit(shape: BlockShape, sig: &Arc<RingSignature>, i: usize, j: usize) -> Self {
        let mut z = Self::zero(shape, sig);
        z.entries[i * shape.size() + j] = SuperPolynomial::one(sig);
        z.parity = shape.block_parity(i, j).into();
        z
    }

    pub fn shape(&self) -> BlockShape {
        self.shape
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn signature(&self) -> &Arc<RingSignature> {
        &self.sig
    }

    pub fn declared_parity(&self) -> DeclaredParity {
        self.parity
    }

    pub fn get(&self, i: usize, j: usize) -> &SuperPolynomial {
        &self.entries[i * self.size() + j]
    }

    pub fn entries(&self) -> &[SuperPolynomial] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<SuperPolynomial>> {
        self.entries.chunks(self.size()).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SuperPolynomial::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Diagonal entries.
    pub fn diag(&self) -> Vec<SuperPolynomial> {
        (0..self.size()).map(|i| self.get(i, i).clone()).collect()
    }

    /// The constant entries, if every entry is a constant.
    pub fn as_scalars(&self) -> Option<Vec<Scalar>> {
        self.entries.iter().map(SuperPolynomial::as_constant).collect()
    }

    /// Re-declare the parity, validating the entry pattern.
    pub fn with_parity(self, parity: DeclaredParity) -> Result<Self, MatrixError> {
        Self::new(self.shape, &self.sig, self.entries, parity)
    }

    /// Best homogeneous parity consistent with the entries (zero reports even).
    pub fn infer_parity(&self) -> DeclaredParity {
        let n = self.size();
        let mut found: Option<Parity> = None;
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let Some(p) = e.parity().homogeneous() else {
                    return DeclaredParity::None;
                };
                let declared = p + self.shape.block_parity(i, j);
                match found {
                    None => found = Some(declared),
                    Some(f) if f != declared => return DeclaredParity::None,
                    _ => {}
                }
            }
        }
        found.unwrap_or(Parity::Even).into()
    }

    /// Apply a function to every entry; the parity declaration is dropped to `None`
    /// unless the result still matches the current one.
    pub fn map_entries(
        &self,
        f: impl Fn(&SuperPolynomial) -> SuperPolynomial,
    ) -> SuperMatrix {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let sig = entries
            .first()
            .map(|e| e.signature().clone())
            .unwrap_or_else(|| self.sig.clone());
        let candidate = SuperMatrix {
            shape: self.shape,
            sig,
            entries,
            parity: DeclaredParity::None,
        };
        let p = candidate.infer_parity();
        SuperMatrix {
            parity: if self.parity == DeclaredParity::None {
                DeclaredParity::None
            } else {
                p
            },
            ..candidate
        }
    }

    /// Entrywise body projection.
    pub fn body(&self) -> SuperMatrix {
        self.map_entries(SuperPolynomial::body)
    }

    /// Entrywise part of odd degree exactly `k`.
    pub fn odd_component(&self, k: usize) -> SuperMatrix {
        self.map_entries(|e| e.odd_component(k))
    }

    pub fn scale(&self, s: &Scalar) -> SuperMatrix {
        SuperMatrix {
            entries: self.entries.iter().map(|e| e.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// Left multiplication of every entry by a ring element.
    pub fn scale_by(&self, c: &SuperPolynomial) -> Result<SuperMatrix, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|e| c.checked_mul(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.map_entries_from(entries))
    }

    fn map_entries_from(&self, entries: Vec<SuperPolynomial>) -> SuperMatrix {
        let candidate = SuperMatrix {
            shape: self.shape,
            sig: self.sig.clone(),
            entries,
            parity: DeclaredParity::None,
        };
        let p = candidate.infer_parity();
        SuperMatrix {
            parity: p,
            ..candidate
        }
    }

    fn check(&self, other: &SuperMatrix) -> Result<(), MatrixError> {
        if self.shape != other.shape {
            return Err(MatrixError::ShapeMismatch);
        }
        if !same_ring(&self.sig, &other.sig) {
            return Err(MatrixError::RingMismatch);
        }
        Ok(())
    }

    fn combine_parity(a: DeclaredParity, b: DeclaredParity, additive: bool) -> DeclaredParity {
        match (a.homogeneous(), b.homogeneous()) {
            (Some(x), Some(y)) if additive => {
                if x == y {
                    x.into()
                } else {
                    DeclaredParity::None
                }
            }
            (Some(x), Some(y)) => (x + y).into(),
            _ => DeclaredParity::None,
        }
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        self.check(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SuperMatrix {
            shape: self.shape,
            sig: self.sig.clone(),
            entries,
            parity: Self::combine_parity(self.parity, other.parity, true),
        })
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Row-by-column product; left entries multiply from the left.
    pub fn mul(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        self.check(other)?;
        let n = self.size();
        let mut entries = vec![SuperPolynomial::zero(&self.sig); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let slot = &mut entries[i * n + j];
                    *slot = &*slot + &prod;
                }
            }
        }
        Ok(SuperMatrix {
            shape: self.shape,
            sig: self.sig.clone(),
            entries,
            parity: Self::combine_parity(self.parity, other.parity, false),
        })
    }

    pub fn pow(&self, k: u32) -> Result<SuperMatrix, MatrixError> {
        let mut acc = SuperMatrix::identity(self.shape, &self.sig);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn require_even(&self) -> Result<(), MatrixError> {
        if self.parity == DeclaredParity::Even {
            Ok(())
        } else {
            Err(MatrixError::UnsupportedParity)
        }
    }

    /// `tr(p) - tr(s)`; defined for even supermatrices only.
    pub fn supertrace(&self) -> Result<SuperPolynomial, MatrixError> {
        self.require_even()?;
        let mut acc = SuperPolynomial::zero(&self.sig);
        for i in 0..self.size() {
            let e = self.get(i, i);
            acc = match self.shape.index_parity(i) {
                Parity::Even => &acc + e,
                Parity::Odd => &acc - e,
            };
        }
        Ok(acc)
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Block {
        let data = rows
            .clone()
            .flat_map(|i| cols.clone().map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Block {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Exact two-sided inverse of an even supermatrix.
    ///
    /// The body is block diagonal; its blocks are inverted over the even subring by
    /// adjugates, and the odd remainder is absorbed by a terminating geometric series.
    pub fn inverse(&self) -> Result<SuperMatrix, MatrixError> {
        self.require_even()?;
        let (m, size) = (self.shape.m, self.size());
        let body = self.body();
        let p_inv = body.block(0..m, 0..m).inverse_even()?;
        let s_inv = body.block(m..size, m..size).inverse_even()?;
        let mut b_inv = SuperMatrix::zero(self.shape, &self.sig);
        for i in 0..m {
            for j in 0..m {
                b_inv.entries[i * size + j] = p_inv.get(i, j).clone();
            }
        }
        for i in 0..self.shape.n {
            for j in 0..self.shape.n {
                b_inv.entries[(m + i) * size + m + j] = s_inv.get(i, j).clone();
            }
        }
        let nil = self.sub(&body)?;
        // A^-1 = sum_k (-B^-1 N)^k B^-1
        let step = b_inv.mul(&nil)?.scale(&-Scalar::one());
        let mut term = SuperMatrix::identity(self.shape, &self.sig);
        let mut acc = SuperMatrix::identity(self.shape, &self.sig);
        for _ in 0..=self.sig.odd_count() {
            term = term.mul(&step)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        let mut inv = acc.mul(&b_inv)?;
        inv.parity = DeclaredParity::Even;
        Ok(inv)
    }

    /// Berezinian `det(p - q s^-1 r) * det(s)^-1` of an even supermatrix.
    pub fn berezinian(&self) -> Result<SuperPolynomial, MatrixError> {
        self.require_even()?;
        let (m, size) = (self.shape.m, self.size());
        let p = self.block(0..m, 0..m);
        let q = self.block(0..m, m..size);
        let r = self.block(m..size, 0..m);
        let s = self.block(m..size, m..size);
        let s_inv = s.inverse_even()?;
        let schur = p.sub(&q.mul(&s_inv).mul(&r));
        let det_schur = det_even(&schur.data, m)?;
        let det_s = det_even(&s.data, self.shape.n)?;
        Ok(&det_schur * &det_s.invert().map_err(|_| MatrixError::NotInvertible)?)
    }

    /// `[str A^1, ..., str A^kmax]`, or only the even powers `str A^2, str A^4, ...`
    /// up to exponent `kmax` when `even_only`.
    pub fn power_sums(
        &self,
        kmax: u32,
        even_only: bool,
    ) -> Result<Vec<SuperPolynomial>, MatrixError> {
        self.require_even()?;
        let mut out = Vec::new();
        let mut power = SuperMatrix::identity(self.shape, &self.sig);
        for k in 1..=kmax {
            power = power.mul(self)?;
            if !even_only || k % 2 == 0 {
                out.push(power.supertrace()?);
            }
        }
        Ok(out)
    }

    /// `XY - (-1)^{p_X p_Y} YX`.
    pub fn super_commutator(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        let (Some(px), Some(py)) = (self.parity.homogeneous(), other.parity.homogeneous()) else {
            return Err(MatrixError::MixedParity);
        };
        let xy = self.mul(other)?;
        let yx = other.mul(self)?;
        let mut out = if px == Parity::Odd && py == Parity::Odd {
            xy.add(&yx)?
        } else {
            xy.sub(&yx)?
        };
        out.parity = (px + py).into();
        Ok(out)
    }

    /// Same matrix over a larger ring (see [`SuperPolynomial::embed`]).
    pub fn embed(&self, target: &Arc<RingSignature>) -> Result<SuperMatrix, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SuperMatrix {
            shape: self.shape,
            sig: target.clone(),
            entries,
            parity: self.parity,
        })
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperMatrix[{}; {:?}](", self.shape, self.parity)?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, ")")
    }
}

/// Rectangular block of ring elements, row-major.
#[derive(Clone, Debug)]
struct Block {
    rows: usize,
    cols: usize,
    data: Vec<SuperPolynomial>,
}

impl Block {
    fn get(&self, i: usize, j: usize) -> &SuperPolynomial {
        &self.data[i * self.cols + j]
    }

    fn mul(&self, other: &Block) -> Block {
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<SuperPolynomial> = None;
                for k in 0..self.cols {
                    let prod = self.get(i, k) * other.get(k, j);
                    acc = Some(match acc {
                        Some(a) => &a + &prod,
                        None => prod,
                    });
                }
                data.push(acc.unwrap_or_else(|| {
                    SuperPolynomial::zero(self.data.first().or(other.data.first()).unwrap().signature())
                }));
            }
        }
        Block {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    fn sub(&self, other: &Block) -> Block {
        Block {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Inverse of a square block with even (mutually commuting) entries via the
    /// adjugate.
    fn inverse_even(&self) -> Result<Block, MatrixError> {
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let det = det_even(&self.data, n)?;
        let det_inv = det.invert().map_err(|_| MatrixError::NotInvertible)?;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // (adj A)_{ij} = (-1)^{i+j} det(minor_{ji})
                let minor: Vec<SuperPolynomial> = (0..n)
                    .filter(|&r| r != j)
                    .flat_map(|r| (0..n).filter(move |&c| c != i).map(move |c| (r, c)))
                    .map(|(r, c)| self.get(r, c).clone())
                    .collect();
                let cof = if n == 1 {
                    SuperPolynomial::one(det.signature())
                } else {
                    det_even(&minor, n - 1)?
                };
                let signed = if (i + j) % 2 == 1 { -&cof } else { cof };
                data.push(&signed * &det_inv);
            }
        }
        Ok(Block {
            rows: n,
            cols: n,
            data,
        })
    }
}

/// Determinant of an `n x n` row-major matrix of even (commuting) entries, by Laplace
/// expansion memoized over column subsets.
pub fn det_even(entries: &[SuperPolynomial], n: usize) -> Result<SuperPolynomial, MatrixError> {
    if entries.len() != n * n {
        return Err(MatrixError::EntryCount {
            expected: n * n,
            got: entries.len(),
        });
    }
    if let Some(bad) = entries
        .iter()
        .position(|e| e.parity() != PolyParity::Even)
    {
        return Err(MatrixError::OddEntry(bad));
    }
    if n == 0 {
        // empty product; callers supply the ring through a non-empty slice elsewhere
        return Err(MatrixError::EntryCount {
            expected: 1,
            got: 0,
        });
    }
    let sig = entries[0].signature().clone();
    // minors[mask] = det of the last |mask| rows restricted to the columns in `mask`
    let mut minors: HashMap<u32, SuperPolynomial> = HashMap::new();
    minors.insert(0, SuperPolynomial::one(&sig));
    for size in 1..=n {
        let row = n - size;
        let masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size).collect();
        for mask in masks {
            let mut acc = SuperPolynomial::zero(&sig);
            let mut position = 0usize;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let a = &entries[row * n + col];
                if !a.is_zero() {
                    let sub = &minors[&(mask & !(1 << col))];
                    let prod = a * sub;
                    acc = if position % 2 == 0 { &acc + &prod } else { &acc - &prod };
                }
                position += 1;
            }
            minors.insert(mask, acc);
        }
    }
    Ok(minors.remove(&((1u32 << n) - 1)).expect("full minor"))
}

/// The constant matrix `diag(1_m, -1_n)`.
pub fn parity_weights(shape: BlockShape, sig: &Arc<RingSignature>) -> SuperMatrix {
    let diag: Vec<Scalar> = (0..shape.size()).map(|i| shape.weight(i)).collect();
    SuperMatrix::diagonal(shape, sig, &diag).expect("diagonal of matching size")
}
