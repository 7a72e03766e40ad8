//! Text grammar for ring elements.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' UINT)?
//! atom    := UINT ('/' UINT)? | IDENT | '(' expr ')'
//! IDENT   := generator name, by default `x<i>` (even) or `t<i>` (odd)
//! ```
//!
//! Unicode input is normalized first: `ξ`/`θ` read as `t`, subscript and superscript
//! digits as ASCII digits and `^` exponents, `·`/`×` as `*`, `−` as `-`.
//!
//! The canonical printed form lists terms in descending monomial order, each as
//! `coeff * x1^2 * t3 * t5`, with a unit coefficient omitted and signs folded into
//! ` + ` / ` - ` separators.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ring::{Generator, RingError, RingSignature, SuperPolynomial};
use crate::scalar::{format_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator `{name}` at line {line}, column {column}")]
    UnknownGenerator {
        name: String,
        line: usize,
        column: usize,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Scalar),
    Gen(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(s) if !s.denom().is_one() || s.is_negative() => 2,
            Expr::Num(_) | Expr::Gen(_) => 5,
        }
    }

    /// Evaluate in the given ring.
    pub fn elaborate(&self, sig: &Arc<RingSignature>) -> Result<SuperPolynomial, ParseError> {
        Ok(match self {
            Expr::Num(s) => SuperPolynomial::constant(sig, s.clone()),
            Expr::Gen(name) => {
                let g = sig.lookup(name).ok_or_else(|| ParseError::UnknownGenerator {
                    name: name.clone(),
                    line: 0,
                    column: 0,
                })?;
                SuperPolynomial::generator(sig, g)?
            }
            Expr::Neg(a) => -&a.elaborate(sig)?,
            Expr::Add(a, b) => a.elaborate(sig)?.checked_add(&b.elaborate(sig)?)?,
            Expr::Sub(a, b) => a.elaborate(sig)?.checked_sub(&b.elaborate(sig)?)?,
            Expr::Mul(a, b) => a.elaborate(sig)?.checked_mul(&b.elaborate(sig)?)?,
            Expr::Pow(a, k) => a.elaborate(sig)?.pow(*k),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(s) => write!(f, "{}", format_scalar(s)),
            Expr::Gen(n) => write!(f, "{n}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, 3, f)
            }
            Expr::Add(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " + ")?;
                wrap(b, 2, f)
            }
            Expr::Sub(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " - ")?;
                wrap(b, 2, f)
            }
            Expr::Mul(a, b) => {
                wrap(a, 2, f)?;
                write!(f, " * ")?;
                wrap(b, 3, f)
            }
            Expr::Pow(a, k) => {
                wrap(a, 5, f)?;
                write!(f, "^{k}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn normalize(text: &str) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::with_capacity(text.len());
    let mut in_sup = false;
    for ch in text.chars() {
        if let Some(d) = SUP.iter().position(|&c| c == ch) {
            if !in_sup {
                out.push('^');
                in_sup = true;
            }
            out.push(char::from(b'0' + d as u8));
            continue;
        }
        in_sup = false;
        if let Some(d) = SUB.iter().position(|&c| c == ch) {
            out.push(char::from(b'0' + d as u8));
            continue;
        }
        match ch {
            'ξ' | 'θ' => out.push('t'),
            '·' | '×' | '⋅' => out.push('*'),
            '−' => out.push('-'),
            c => out.push(c),
        }
    }
    out
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let (mut line, mut col) = (1usize, 1usize);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (l0, c0) = (line, col);
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                col += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Int(s.parse().expect("digits")), l0, c0));
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Ident(s), l0, c0));
                continue;
            }
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(ParseError::Syntax {
                        line: l0,
                        column: c0,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            toks.push((t, l0, c0));
            i += 1;
            col += 1;
        }
        toks.push((Tok::End, line, col));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (_, line, column) = self.toks[self.pos];
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump().0 {
                Tok::Int(k) => {
                    let k: u32 = k
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(self.error("expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, line, column) = self.toks[self.pos].clone();
        match tok {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump().0 {
                        Tok::Int(d) if !d.is_zero() => Ok(Expr::Num(Scalar::new(n, d))),
                        Tok::Int(_) => Err(ParseError::Syntax {
                            line,
                            column,
                            message: "zero denominator".into(),
                        }),
                        _ => Err(self.error("expected an integer denominator")),
                    }
                } else {
                    Ok(Expr::Num(Scalar::from_integer(n)))
                }
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Gen(name))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a number, generator or `(`")),
        }
    }
}

/// Parse text into an expression tree without resolving generator names.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let lexer = Lexer::new(&normalize(text))?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse and elaborate text into an element of `sig`.
pub fn parse_poly(text: &str, sig: &Arc<RingSignature>) -> Result<SuperPolynomial, ParseError> {
    let normalized = normalize(text);
    let expr = parse_expr(&normalized)?;
    match expr.elaborate(sig) {
        Err(ParseError::UnknownGenerator { name, .. }) => {
            let (line, column) = locate(&normalized, &name);
            Err(ParseError::UnknownGenerator { name, line, column })
        }
        other => other,
    }
}

fn locate(text: &str, name: &str) -> (usize, usize) {
    for (li, l) in text.lines().enumerate() {
        if let Some(pos) = l.find(name) {
            return (li + 1, l[..pos].chars().count() + 1);
        }
    }
    (1, 1)
}

/// Smallest `(M, N)` such that every `x<i>` / `t<i>` in the texts is a generator of the
/// default-named ring `k[x1..xM, t1..tN]`.
pub fn infer_signature<'a>(texts: impl IntoIterator<Item = &'a str>) -> (usize, usize) {
    let (mut m, mut n) = (0usize, 0usize);
    for text in texts {
        let t = normalize(text);
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if chars[i].is_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                let (head, digits) = ident.split_at(1);
                if let Ok(k) = digits.parse::<usize>() {
                    match head {
                        "x" => m = m.max(k),
                        "t" => n = n.max(k),
                        _ => {}
                    }
                }
            } else {
                i += 1;
            }
        }
    }
    (m, n)
}

/// Canonical text for a ring element.
pub fn print_poly(p: &SuperPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let sig = p.signature();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (j, &e) in m.even_exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(sig.name(Generator::Even(j)).to_string()),
                _ => factors.push(format!("{}^{e}", sig.name(Generator::Even(j)))),
            }
        }
        for j in m.odd_indices() {
            factors.push(sig.name(Generator::Odd(j)).to_string());
        }
        if factors.is_empty() {
            out.push_str(&format_scalar(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&format_scalar(&mag));
                out.push_str(" * ");
            }
            out.push_str(&factors.join(" * "));
        }
    }
    out
}
