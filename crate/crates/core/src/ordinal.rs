//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is a strictly decreasing list of `(exponent, coefficient)`
//! terms, so `ω^2·3 + ω + 5` is `[(2, 3), (1, 1), (0, 5)]` and the empty list
//! is zero. Every constructor normalizes, which makes the derived `Eq`, `Ord`
//! and `Hash` the mathematical ones: lexicographic comparison of the term
//! lists is exactly the ordinal order.
//!
//! The text syntax is `w^k*c + ... + n`, for example `w^2*3+w+5`, `w*2` or `0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("invalid ordinal syntax `{0}`")]
    Syntax(String),
    #[error("coefficient overflow")]
    Overflow,
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub const fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal { terms: vec![(1, 1)] }
    }

    /// `ω^exp · coeff`.
    pub fn monomial(exp: u32, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(exp, coeff)] }
        }
    }

    /// Builds an ordinal from arbitrary terms, summing them with ordinal
    /// addition in the order given.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, (e, c)| acc.add(&Self::monomial(e, c)))
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, n)] => Some(*n),
            _ => None,
        }
    }

    /// The finite part `n` of `ρ + n` with `ρ` zero or a limit.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(&(0, n)) => n,
            _ => 0,
        }
    }

    pub fn is_successor(&self) -> bool {
        self.finite_part() > 0
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.finite_part() == 0
    }

    pub fn succ(&self) -> Self {
        self.add(&Self::nat(1))
    }

    /// Immediate predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// Drops the finite part: the largest limit-or-zero ordinal `≤ self`.
    pub fn limit_part(&self) -> Self {
        let mut terms = self.terms.clone();
        if matches!(terms.last(), Some(&(0, _))) {
            terms.pop();
        }
        Ordinal { terms }
    }

    /// Leading exponent, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }

    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(lead, lead_coeff)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().take_while(|&(e, _)| e >= lead).collect();
        match terms.last_mut() {
            Some(last) if last.0 == lead => {
                last.1 = last.1.checked_add(lead_coeff).expect("ordinal coefficient overflow");
                terms.extend_from_slice(&other.terms[1..]);
            }
            _ => terms.extend_from_slice(&other.terms),
        }
        Ordinal { terms }
    }

    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        let Some(&(lead, lead_coeff)) = self.terms.first() else {
            return Self::zero();
        };
        let mut out = Self::zero();
        for &(e, c) in &other.terms {
            let piece = if e == 0 {
                // self · c: the leading coefficient is scaled, the rest of
                // self is kept once as the trailing copy.
                let mut terms = self.terms.clone();
                terms[0].1 = lead_coeff.checked_mul(c).expect("ordinal coefficient overflow");
                Ordinal { terms }
            } else {
                Ordinal::monomial(lead.checked_add(e).expect("ordinal exponent overflow"), c)
            };
            out = out.add(&piece);
        }
        out
    }

    /// Left subtraction: the unique `δ` with `other + δ = self`, when
    /// `other ≤ self`.
    pub fn checked_sub(&self, other: &Ordinal) -> Option<Ordinal> {
        if other > self {
            return None;
        }
        let common = self.terms.iter().zip(&other.terms).take_while(|(a, b)| a == b).count();
        if common == other.terms.len() {
            return Some(Ordinal { terms: self.terms[common..].to_vec() });
        }
        // first difference: same exponent with a larger coefficient in self,
        // or a larger exponent in self
        let (e, c) = self.terms[common];
        let (oe, oc) = other.terms[common];
        let mut terms = Vec::new();
        if e == oe {
            debug_assert!(c > oc);
            terms.push((e, c - oc));
            terms.extend_from_slice(&self.terms[common + 1..]);
        } else {
            debug_assert!(e > oe);
            terms.extend_from_slice(&self.terms[common..]);
        }
        Some(Ordinal { terms })
    }

    /// Returns `(γ, n)` with `self = ω·γ + n`.
    pub fn omega_decompose(&self) -> (Ordinal, u64) {
        let n = self.finite_part();
        let gamma = self.terms.iter().filter(|&&(e, _)| e > 0).map(|&(e, c)| (e - 1, c)).collect();
        (Ordinal { terms: gamma }, n)
    }

    /// `ω·γ + n`.
    pub fn omega_compose(gamma: &Ordinal, n: u64) -> Ordinal {
        Ordinal::omega().mul(gamma).add(&Ordinal::nat(n))
    }

    /// The `n`-th element of the canonical fundamental sequence of a limit
    /// ordinal: for `ρ + ω^e·c` (last term, `e ≥ 1`) it is
    /// `ρ + ω^e·(c-1) + ω^(e-1)·n`.
    pub fn fundamental(&self, n: u64) -> Option<Ordinal> {
        if !self.is_limit() {
            return None;
        }
        let mut terms = self.terms.clone();
        let (e, c) = terms.pop().unwrap();
        let mut base = Ordinal { terms };
        if c > 1 {
            base = base.add(&Ordinal::monomial(e, c - 1));
        }
        Some(base.add(&Ordinal::monomial(e - 1, n)))
    }
}

/// `2·α + k`, the index arithmetic used for Scott complexities.
pub fn scott_index(alpha: &Ordinal, k: u64) -> Ordinal {
    Ordinal::nat(2).mul(alpha).add(&Ordinal::nat(k))
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OrdinalError::Syntax(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = Ordinal::zero();
        for term in compact.split('+') {
            let (base, coeff) = match term.split_once('*') {
                Some((b, c)) => (b, c.parse::<u64>().map_err(|_| err())?),
                None => (term, 1),
            };
            let exp = if base == "w" {
                1
            } else if let Some(e) = base.strip_prefix("w^") {
                e.parse::<u32>().map_err(|_| err())?
            } else if term.contains('*') {
                return Err(err());
            } else {
                let n = base.parse::<u64>().map_err(|_| err())?;
                out = out.add(&Ordinal::nat(n));
                continue;
            };
            out = out.add(&Ordinal::monomial(exp, coeff));
        }
        Ok(out)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

/// An ordinal or the point `∞` above all ordinals; the range of the height
/// function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedOrdinal {
    Finite(Ordinal),
    Infinity,
}

impl ExtendedOrdinal {
    pub fn nat(n: u64) -> Self {
        ExtendedOrdinal::Finite(Ordinal::nat(n))
    }

    pub fn as_ordinal(&self) -> Option<&Ordinal> {
        match self {
            ExtendedOrdinal::Finite(o) => Some(o),
            ExtendedOrdinal::Infinity => None,
        }
    }

    pub fn cmp_ordinal(&self, o: &Ordinal) -> Ordering {
        match self {
            ExtendedOrdinal::Finite(x) => x.cmp(o),
            ExtendedOrdinal::Infinity => Ordering::Greater,
        }
    }
}

impl From<Ordinal> for ExtendedOrdinal {
    fn from(o: Ordinal) -> Self {
        ExtendedOrdinal::Finite(o)
    }
}

impl fmt::Display for ExtendedOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedOrdinal::Finite(o) => o.fmt(f),
            ExtendedOrdinal::Infinity => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert!(o("w") > o("5"));
        assert_eq!(o("w*2+3").cmp(&o("w*2+3")), Ordering::Equal);
        assert!(o("w^2") > o("w*9+7"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("3")).to_string(), "w+3");
        assert_eq!(o("w*2+1").add(&o("w*3")), o("w*5"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(o("2").mul(&o("w")), o("w"));
        assert_eq!(o("2").mul(&o("w+1")), o("w+2"));
        assert_eq!(o("w+3").mul(&o("0")), Ordinal::zero());
        assert_eq!(o("w").mul(&o("w")), o("w^2"));
        assert_eq!(o("w+1").mul(&o("2")), o("w*2+1"));
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(o("7").omega_decompose(), (Ordinal::zero(), 7));
        assert_eq!(o("w*2+3").omega_decompose(), (o("2"), 3));
        assert_eq!(o("w^2").omega_decompose(), (o("w"), 0));
    }

    #[test]
    fn scott_index_examples() {
        assert_eq!(scott_index(&o("1"), 1), o("3"));
        assert_eq!(scott_index(&o("w"), 1), o("w+1"));
        assert_eq!(scott_index(&o("w+2"), 2), o("w+6"));
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "7", "w", "w*2+3", "w^2", "w^3*2+w^2+w*4+1"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o(" 3 + w "), o("w"));
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("x".parse::<Ordinal>().is_err());
        assert!("".parse::<Ordinal>().is_err());
        assert!("3*2".parse::<Ordinal>().is_err());
    }

    #[test]
    fn subtraction_and_fundamental_sequences() {
        assert_eq!(o("w^2+3").checked_sub(&o("w*5")), Some(o("w^2+3")));
        assert_eq!(o("w*3+2").checked_sub(&o("w*2")), Some(o("w+2")));
        assert_eq!(o("w*2").checked_sub(&o("w*3")), None);
        assert_eq!(o("w^2").fundamental(3), Some(o("w*3")));
        assert_eq!(o("w^2*2+w").fundamental(4), Some(o("w^2*2+4")));
        assert_eq!(o("w^3").fundamental(2), Some(o("w^2*2")));
        assert_eq!(o("w+1").fundamental(0), None);
    }

    #[test]
    fn infinity_is_top() {
        assert!(ExtendedOrdinal::Infinity > ExtendedOrdinal::Finite(o("w^9*9")));
        assert!(ExtendedOrdinal::nat(3) < ExtendedOrdinal::nat(4));
    }
}
