use std::fmt;

use super::RingError;

/// Largest number of odd generators a ring may carry (odd monomials are bitmasks).
pub const MAX_ODD: usize = 64;

/// Generator layout of a free supercommutative ring `k[x1..xM, t1..tN]`.
///
/// Even generators may carry an exponent cap: `x^(cap+1) = 0`. A cap of 1 models a
/// dual-number parameter with `eps^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSignature {
    caps: Vec<Option<u32>>,
    odd: usize,
    even_names: Vec<String>,
    odd_names: Vec<String>,
}

/// A single generator of a ring, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Even(usize),
    Odd(usize),
}

impl RingSignature {
    /// `even` uncapped even generators named `x1..`, `odd` odd generators named `t1..`.
    pub fn new(even: usize, odd: usize) -> Result<Self, RingError> {
        Self::with_caps(vec![None; even], odd)
    }

    pub fn with_caps(caps: Vec<Option<u32>>, odd: usize) -> Result<Self, RingError> {
        if odd > MAX_ODD {
            return Err(RingError::TooManyOddGenerators(odd));
        }
        if caps.iter().any(|c| *c == Some(0)) {
            return Err(RingError::InvalidCap);
        }
        let even_names = (1..=caps.len()).map(|i| format!("x{i}")).collect();
        let odd_names = (1..=odd).map(|i| format!("t{i}")).collect();
        Ok(RingSignature {
            caps,
            odd,
            even_names,
            odd_names,
        })
    }

    /// Replace the display names. Names must be distinct and non-empty.
    pub fn with_names(
        mut self,
        even_names: Vec<String>,
        odd_names: Vec<String>,
    ) -> Result<Self, RingError> {
        if even_names.len() != self.caps.len() || odd_names.len() != self.odd {
            return Err(RingError::InvalidNames);
        }
        let mut all: Vec<&String> = even_names.iter().chain(odd_names.iter()).collect();
        all.sort();
        let distinct = all.windows(2).all(|w| w[0] != w[1]);
        if !distinct || all.iter().any(|n| n.is_empty()) {
            return Err(RingError::InvalidNames);
        }
        self.even_names = even_names;
        self.odd_names = odd_names;
        Ok(self)
    }

    pub fn even_count(&self) -> usize {
        self.caps.len()
    }

    pub fn odd_count(&self) -> usize {
        self.odd
    }

    pub fn cap(&self, i: usize) -> Option<u32> {
        self.caps[i]
    }

    pub fn caps(&self) -> &[Option<u32>] {
        &self.caps
    }

    pub fn has_caps(&self) -> bool {
        self.caps.iter().any(Option::is_some)
    }

    pub fn name(&self, g: Generator) -> &str {
        match g {
            Generator::Even(i) => &self.even_names[i],
            Generator::Odd(i) => &self.odd_names[i],
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Generator> {
        if let Some(i) = self.even_names.iter().position(|n| n == name) {
            return Some(Generator::Even(i));
        }
        self.odd_names
            .iter()
            .position(|n| n == name)
            .map(Generator::Odd)
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::Even(i) => i < self.caps.len(),
            Generator::Odd(i) => i < self.odd,
        }
    }

    /// Upper bound on the length of a nonvanishing product of nilpotent elements.
    pub fn nilpotency_bound(&self) -> usize {
        self.odd + self.caps.iter().flatten().map(|&c| c as usize).sum::<usize>()
    }
}

impl fmt::Display for RingSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[")?;
        let mut first = true;
        for (i, n) in self.even_names.iter().enumerate() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            match self.caps[i] {
                Some(c) => write!(f, "{n}^{}=0", c + 1)?,
                None => write!(f, "{n}")?,
            }
        }
        for n in &self.odd_names {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}
