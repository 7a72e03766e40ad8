use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::ring::{RingSignature, SuperPolynomial};
use crate::scalar::{format_scalar, Scalar};

/// Truncated power series `a_0 + a_1 h + ... + a_H h^H`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HScalar {
    coeffs: Vec<Scalar>,
}

impl HScalar {
    /// Coefficients beyond `h^order` are dropped; missing ones are zero.
    pub fn new(order: usize, mut coeffs: Vec<Scalar>) -> Self {
        coeffs.resize(order + 1, Scalar::zero());
        HScalar { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        HScalar {
            coeffs: vec![Scalar::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Scalar::one())
    }

    pub fn constant(order: usize, c: Scalar) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = c;
        z
    }

    /// The series `h`, or zero when the order is 0.
    pub fn h(order: usize) -> Self {
        Self::one(order).shift(1)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Invertible iff the constant term is nonzero.
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn add_assign(&mut self, other: &HScalar) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add(&self, other: &HScalar) -> HScalar {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &HScalar) -> HScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HScalar {
        HScalar {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> HScalar {
        HScalar {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &HScalar) -> HScalar {
        let n = self.coeffs.len();
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        HScalar { coeffs: out }
    }

    /// Multiply by `h^k`.
    pub fn shift(&self, k: usize) -> HScalar {
        let n = self.coeffs.len();
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        HScalar { coeffs: out }
    }

    /// Re-express at a different truncation order.
    pub fn truncate(&self, order: usize) -> HScalar {
        HScalar::new(order, self.coeffs.clone())
    }

    /// Zero out the coefficients of `h^{k+1}` and above, keeping the order.
    pub fn truncate_to(&self, k: usize) -> HScalar {
        HScalar {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i <= k { c.clone() } else { Scalar::zero() })
                .collect(),
        }
    }
}

impl fmt::Display for HScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_scalar(c),
                1 => format!("{}*h", format_scalar(c)),
                _ => format!("{}*h^{k}", format_scalar(c)),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for HScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HScalar({self})")
    }
}

/// Polynomial with truncated power-series coefficients, stored as one polynomial per
/// power of `h`.
#[derive(Clone, PartialEq, Eq)]
pub struct HPoly {
    parts: Vec<SuperPolynomial>,
}

impl HPoly {
    pub fn zero(sig: &Arc<RingSignature>, order: usize) -> Self {
        HPoly {
            parts: vec![SuperPolynomial::zero(sig); order + 1],
        }
    }

    /// `f` placed at `h^0`.
    pub fn classical(f: &SuperPolynomial, order: usize) -> Self {
        let mut z = Self::zero(f.signature(), order);
        z.parts[0] = f.clone();
        z
    }

    pub fn from_parts(parts: Vec<SuperPolynomial>) -> Self {
        assert!(!parts.is_empty(), "at least the h^0 part is required");
        HPoly { parts }
    }

    pub fn order(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn signature(&self) -> &Arc<RingSignature> {
        self.parts[0].signature()
    }

    /// Coefficient polynomial of `h^k`.
    pub fn part(&self, k: usize) -> &SuperPolynomial {
        &self.parts[k]
    }

    pub fn parts(&self) -> &[SuperPolynomial] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(SuperPolynomial::is_zero)
    }

    pub fn add(&self, other: &HPoly) -> HPoly {
        HPoly {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &HPoly) -> HPoly {
        HPoly {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a - b).collect(),
        }
    }

    /// `c * f` for a series `c` and a polynomial `f`.
    pub fn add_scaled(&mut self, c: &HScalar, f: &SuperPolynomial) {
        for (k, part) in self.parts.iter_mut().enumerate() {
            let ck = c.coeff(k);
            if !ck.is_zero() {
                *part = &*part + &f.scale(&ck);
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> HPoly {
        HPoly {
            parts: self.parts.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Multiply by `h^k`.
    pub fn shift(&self, k: usize) -> HPoly {
        let sig = self.signature().clone();
        let n = self.parts.len();
        let parts = (0..n)
            .map(|i| {
                if i >= k {
                    self.parts[i - k].clone()
                } else {
                    SuperPolynomial::zero(&sig)
                }
            })
            .collect();
        HPoly { parts }
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| match k {
                0 => format!("{p}"),
                1 => format!("h*({p})"),
                _ => format!("h^{k}*({p})"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly({self})")
    }
}
