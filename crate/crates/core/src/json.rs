//! JSON forms of polynomials, supermatrices, structure constants, orbit specs and
//! enveloping-algebra elements. Indices are 1-based and numbers are `"p/q"` strings.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deform::{EnvElement, HScalar};
use crate::lie::LieSuperAlgebra;
use crate::matrix::{BlockShape, DeclaredParity, SuperMatrix};
use crate::orbit::{AlgebraKind, OrbitSpec};
use crate::ring::{Parity, RingSignature, SuperPolynomial};
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::text::{parse_poly, print_poly};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("bad number {0:?}")]
    Number(String),
    #[error("index {0} out of range")]
    Index(usize),
    #[error("invalid value: {0}")]
    Invalid(String),
}

fn number(s: &str) -> Result<Scalar, JsonError> {
    parse_scalar(s).map_err(|_| JsonError::Number(s.to_string()))
}

fn invalid(e: impl std::fmt::Display) -> JsonError {
    JsonError::Invalid(e.to_string())
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    even: Vec<u32>,
    odd: Vec<usize>,
    coeff: String,
}

pub fn poly_to_json(p: &SuperPolynomial) -> serde_json::Value {
    let terms: Vec<TermJson> = p
        .terms()
        .map(|(m, c)| TermJson {
            even: m.even_exponents().to_vec(),
            odd: m.odd_indices().iter().map(|i| i + 1).collect(),
            coeff: format_scalar(c),
        })
        .collect();
    serde_json::to_value(terms).expect("plain data")
}

pub fn poly_from_json(
    v: &serde_json::Value,
    sig: &Arc<RingSignature>,
) -> Result<SuperPolynomial, JsonError> {
    let terms: Vec<TermJson> = serde_json::from_value(v.clone())?;
    let mut out = SuperPolynomial::zero(sig);
    for t in terms {
        if t.even.len() != sig.even_count() {
            return Err(invalid(format!(
                "expected {} even exponents, got {}",
                sig.even_count(),
                t.even.len()
            )));
        }
        let odd = t
            .odd
            .iter()
            .map(|&i| {
                if i == 0 || i > sig.odd_count() {
                    Err(JsonError::Index(i))
                } else {
                    Ok(i - 1)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let term = SuperPolynomial::term(sig, number(&t.coeff)?, &t.even, &odd).map_err(invalid)?;
        out = &out + &term;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    m: usize,
    n: usize,
    entries: Vec<Vec<String>>,
}

pub fn matrix_to_json(a: &SuperMatrix) -> serde_json::Value {
    let shape = a.shape();
    let mj = MatrixJson {
        m: shape.m,
        n: shape.n,
        entries: a
            .rows()
            .iter()
            .map(|r| r.iter().map(print_poly).collect())
            .collect(),
    };
    serde_json::to_value(mj).expect("plain data")
}

/// Entries are parsed with the text grammar; the parity is inferred.
pub fn matrix_from_json(
    v: &serde_json::Value,
    sig: &Arc<RingSignature>,
) -> Result<SuperMatrix, JsonError> {
    let mj: MatrixJson = serde_json::from_value(v.clone())?;
    let shape = BlockShape::new(mj.m, mj.n).map_err(invalid)?;
    let size = shape.size();
    if mj.entries.len() != size || mj.entries.iter().any(|r| r.len() != size) {
        return Err(invalid(format!("expected a {size}x{size} entry table")));
    }
    let entries = mj
        .entries
        .iter()
        .flatten()
        .map(|s| parse_poly(s, sig).map_err(invalid))
        .collect::<Result<Vec<_>, _>>()?;
    let a = SuperMatrix::new(shape, sig, entries, DeclaredParity::None).map_err(invalid)?;
    let p = a.infer_parity();
    a.with_parity(p).map_err(invalid)
}

/// Entry texts of a matrix JSON, for choosing a ring before parsing.
pub fn matrix_entry_texts(v: &serde_json::Value) -> Result<Vec<String>, JsonError> {
    let mj: MatrixJson = serde_json::from_value(v.clone())?;
    Ok(mj.entries.into_iter().flatten().collect())
}

#[derive(Serialize, Deserialize)]
struct ConstantJson {
    i: usize,
    j: usize,
    k: usize,
    v: String,
}

#[derive(Serialize, Deserialize)]
struct ConstantsJson {
    dim: usize,
    parity: Vec<u8>,
    c: Vec<ConstantJson>,
}

fn parity_bit(p: Parity) -> u8 {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

pub fn constants_to_json(l: &LieSuperAlgebra) -> serde_json::Value {
    let cj = ConstantsJson {
        dim: l.dim(),
        parity: l.parities().iter().map(|p| parity_bit(*p)).collect(),
        c: l
            .constants()
            .into_iter()
            .map(|(i, j, k, v)| ConstantJson {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                v: format_scalar(&v),
            })
            .collect(),
    };
    serde_json::to_value(cj).expect("plain data")
}

pub fn constants_from_json(
    name: &str,
    v: &serde_json::Value,
) -> Result<LieSuperAlgebra, JsonError> {
    let cj: ConstantsJson = serde_json::from_value(v.clone())?;
    if cj.parity.len() != cj.dim {
        return Err(invalid("parity list length differs from dim"));
    }
    let parity = cj
        .parity
        .iter()
        .map(|b| match b {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            _ => Err(invalid(format!("parity must be 0 or 1, got {b}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut consts = Vec::with_capacity(cj.c.len());
    for c in &cj.c {
        for idx in [c.i, c.j, c.k] {
            if idx == 0 || idx > cj.dim {
                return Err(JsonError::Index(idx));
            }
        }
        consts.push((c.i - 1, c.j - 1, c.k - 1, number(&c.v)?));
    }
    LieSuperAlgebra::from_constants(name, parity, consts).map_err(invalid)
}

#[derive(Serialize, Deserialize)]
struct OrbitSpecJson {
    kind: String,
    m: usize,
    n: usize,
    lambda: Vec<String>,
}

pub fn orbit_spec_to_json(s: &OrbitSpec) -> serde_json::Value {
    let oj = OrbitSpecJson {
        kind: s.kind.to_string(),
        m: s.shape.m,
        n: s.shape.n,
        lambda: s.lambda.iter().map(format_scalar).collect(),
    };
    serde_json::to_value(oj).expect("plain data")
}

pub fn orbit_spec_from_json(v: &serde_json::Value) -> Result<OrbitSpec, JsonError> {
    let oj: OrbitSpecJson = serde_json::from_value(v.clone())?;
    let kind: AlgebraKind = oj.kind.parse().map_err(invalid)?;
    let shape = BlockShape::new(oj.m, oj.n).map_err(invalid)?;
    let lambda = oj
        .lambda
        .iter()
        .map(|s| number(s))
        .collect::<Result<Vec<_>, _>>()?;
    OrbitSpec::new(kind, shape, lambda).map_err(invalid)
}

#[derive(Serialize, Deserialize)]
struct EnvTermJson {
    word: Vec<usize>,
    coeff: Vec<String>,
}

pub fn env_to_json(e: &EnvElement) -> serde_json::Value {
    let terms: Vec<EnvTermJson> = e
        .terms()
        .iter()
        .map(|(w, c)| EnvTermJson {
            word: w.iter().map(|i| i + 1).collect(),
            coeff: c.coeffs().iter().map(format_scalar).collect(),
        })
        .collect();
    serde_json::to_value(terms).expect("plain data")
}

/// Coefficient lists longer than `order + 1` are truncated.
pub fn env_from_json(
    v: &serde_json::Value,
    algebra: &Arc<LieSuperAlgebra>,
    order: usize,
) -> Result<EnvElement, JsonError> {
    let terms: Vec<EnvTermJson> = serde_json::from_value(v.clone())?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let word = t
            .word
            .iter()
            .map(|&i| {
                if i == 0 || i > algebra.dim() {
                    Err(JsonError::Index(i))
                } else {
                    Ok(i - 1)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let coeffs = t
            .coeff
            .iter()
            .map(|s| number(s))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((word, HScalar::new(order, coeffs)));
    }
    EnvElement::from_terms(algebra, order, out).map_err(invalid)
}
