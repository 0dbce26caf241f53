//! Ordinals below ε₀ in Cantor normal form.
//!
//! An ordinal is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly
//! decreasing exponents `e₁ > … > eₖ` (themselves ordinals) and positive
//! integer coefficients. The empty sum is `0`; a finite ordinal `n` is the
//! single term `ω^0·n`. These index the stages of transfinite towers.
//!
//! The text form uses `w` for ω:
//!
//! ```text
//! sum      := "0" | product ("+" product)*
//! product  := "w" ["^" exponent] ["*" k] | k
//! exponent := k | "w" ["^" exponent] | "(" sum ")"
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("non-canonical term list: {0}")]
    NonCanonical(&'static str),
    #[error("parse error at byte {position}: expected {expected}")]
    Parse { position: usize, expected: &'static str },
}

/// An ordinal below ε₀ in Cantor normal form. Every value of this type is canonical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

/// Shape of an ordinal: zero, a successor, or a limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Self { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::finite(1), 1)
    }

    /// `ω^exponent · coefficient`.
    pub fn omega_pow(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            Self::zero()
        } else {
            Self { terms: vec![(exponent, coefficient)] }
        }
    }

    /// Checks a raw term list: exponents strictly decreasing, coefficients positive.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::NonCanonical("coefficients must be positive"));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(OrdinalError::NonCanonical("exponents must be strictly decreasing"));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// `α + 1`.
    pub fn successor(&self) -> Self {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((e, c)) if e.is_zero() => *c += 1,
            _ => terms.push((Self::zero(), 1)),
        }
        Self { terms }
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some((e, c)) if e.is_zero() => {
                let mut terms = self.terms.clone();
                if *c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().unwrap().1 -= 1;
                }
                OrdinalKind::Successor(Self { terms })
            }
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == OrdinalKind::Limit
    }

    /// `α + ω`, the least limit ordinal strictly above `α`.
    pub fn add_omega(&self) -> Self {
        let one = Self::finite(1);
        let mut terms: Vec<(Ordinal, u64)> =
            self.terms.iter().filter(|(e, _)| *e >= one).cloned().collect();
        match terms.last_mut() {
            Some((e, c)) if *e == one => *c += 1,
            _ => terms.push((one, 1)),
        }
        Self { terms }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for ((ea, ca), (eb, cb)) in self.terms.iter().zip(&other.terms) {
            match ea.cmp(eb).then(ca.cmp(cb)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Self::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match e.as_finite() {
                Some(0) => write!(f, "{c}")?,
                Some(1) => f.write_str("w")?,
                Some(k) => write!(f, "w^{k}")?,
                // a single ω-power with coefficient 1 is unambiguous without parentheses
                None if e.terms.len() == 1 && e.terms[0].1 == 1 => write!(f, "w^{e}")?,
                None => write!(f, "w^({e})")?,
            }
            if !e.is_zero() && *c > 1 {
                write!(f, "*{c}")?;
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
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let value = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("end of input"));
        }
        Ok(value)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &'static str) -> OrdinalError {
        OrdinalError::Parse { position: self.pos, expected }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalError::Parse { position: start, expected: "a number below 2^64" })
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let start = self.pos;
        let mut terms = vec![self.product()?];
        while self.eat(b'+') {
            terms.push(self.product()?);
        }
        if terms.len() == 1 && terms[0].1 == 0 && terms[0].0.is_zero() {
            return Ok(Ordinal::zero());
        }
        Ordinal::from_terms(terms).map_err(|e| match e {
            OrdinalError::NonCanonical(_) => OrdinalError::Parse {
                position: start,
                expected: "positive coefficients with strictly decreasing exponents",
            },
            other => other,
        })
    }

    fn product(&mut self) -> Result<(Ordinal, u64), OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') { self.exponent()? } else { Ordinal::finite(1) };
                let coefficient = if self.eat(b'*') { self.number()? } else { 1 };
                Ok((exponent, coefficient))
            }
            Some(b) if b.is_ascii_digit() => Ok((Ordinal::zero(), self.number()?)),
            _ => Err(self.error("`w` or a number")),
        }
    }

    fn exponent(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("`)`"));
                }
                Ok(e)
            }
            Some(b'w') => {
                self.pos += 1;
                let e = if self.eat(b'^') { self.exponent()? } else { Ordinal::finite(1) };
                Ok(Ordinal::omega_pow(e, 1))
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::finite(self.number()?)),
            _ => Err(self.error("an exponent")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn w_times(k: u64) -> Ordinal {
        Ordinal::omega_pow(Ordinal::finite(1), k)
    }

    #[test]
    fn comparison_examples() {
        assert!(Ordinal::finite(3) < Ordinal::omega());
        assert_eq!(ord("w*2+1").cmp(&ord("w*2+1")), Ordering::Equal);
        assert!(ord("w^2") > ord("w*5+9"));
        assert!(ord("w^w") > ord("w^5*9+w"));
    }

    #[test]
    fn successor_examples() {
        assert_eq!(Ordinal::zero().successor(), Ordinal::finite(1));
        assert_eq!(Ordinal::omega().successor(), ord("w+1"));
        assert_eq!(ord("w*2+4").successor(), ord("w*2+5"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Ordinal::finite(7).classify(), OrdinalKind::Successor(Ordinal::finite(6)));
        assert_eq!(Ordinal::omega().classify(), OrdinalKind::Limit);
        assert_eq!(ord("w^2+w*3").classify(), OrdinalKind::Limit);
        assert_eq!(Ordinal::zero().classify(), OrdinalKind::Zero);
        assert_eq!(ord("w+1").classify(), OrdinalKind::Successor(Ordinal::omega()));
    }

    #[test]
    fn add_omega_examples() {
        assert_eq!(Ordinal::zero().add_omega(), Ordinal::omega());
        assert_eq!(ord("w+5").add_omega(), w_times(2));
        assert_eq!(ord("w^2").add_omega(), ord("w^2+w"));
        assert_eq!(ord("w^3*2+w^2+7").add_omega(), ord("w^3*2+w^2+w"));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(ord("w*2+3"), Ordinal::from_terms(vec![(1.into(), 2), (0.into(), 3)]).unwrap());
        assert_eq!(
            ord("w^2+w+1"),
            Ordinal::from_terms(vec![(2.into(), 1), (1.into(), 1), (0.into(), 1)]).unwrap()
        );
        assert_eq!(ord("w^w"), Ordinal::omega_pow(Ordinal::omega(), 1));
        assert_eq!(ord("0"), Ordinal::zero());
        assert_eq!(ord(" w ^ ( w + 1 ) * 3 "), Ordinal::omega_pow(ord("w+1"), 3));
        assert_eq!(ord("w^w^2").to_string(), "w^w^2");
        assert_eq!(ord("w^(w*2)*4").to_string(), "w^(w*2)*4");
    }

    #[test]
    fn parse_rejects_non_canonical_and_garbage() {
        for bad in ["1+w", "w+w", "w*0", "", "w^", "x", "w+", "(w)", "w^(w", "3 4"] {
            let err = bad.parse::<Ordinal>().unwrap_err();
            assert!(matches!(err, OrdinalError::Parse { .. }), "{bad}: {err:?}");
        }
        assert_eq!(
            "w+x".parse::<Ordinal>().unwrap_err(),
            OrdinalError::Parse { position: 2, expected: "`w` or a number" }
        );
    }

    #[test]
    fn from_terms_rejects_non_canonical() {
        assert!(Ordinal::from_terms(vec![(0.into(), 1), (1.into(), 1)]).is_err());
        assert!(Ordinal::from_terms(vec![(1.into(), 0)]).is_err());
    }

    pub(crate) fn arb_ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
        if depth == 0 {
            return (0u64..10).prop_map(Ordinal::finite).boxed();
        }
        prop::collection::vec((arb_ordinal(depth - 1), 1u64..10), 0..4)
            .prop_map(|mut terms| {
                terms.sort_by(|a, b| b.0.cmp(&a.0));
                terms.dedup_by(|a, b| a.0 == b.0);
                Ordinal::from_terms(terms).unwrap()
            })
            .boxed()
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(a in arb_ordinal(3)) {
            prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
        }

        #[test]
        fn classify_successor(a in arb_ordinal(3)) {
            prop_assert_eq!(a.successor().classify(), OrdinalKind::Successor(a.clone()));
            prop_assert!(a < a.successor());
        }

        #[test]
        fn add_omega_is_next_limit(a in arb_ordinal(3)) {
            let l = a.add_omega();
            prop_assert!(a < l);
            prop_assert!(l.is_limit());
            // every ordinal of the form a + n stays below a + ω
            let mut b = a.clone();
            for _ in 0..20 {
                b = b.successor();
                prop_assert!(b < l);
            }
        }
    }
}
