//! Order oracles the tower engine runs against.
//!
//! A [`PosetProvider`] answers `leq` and supplies least upper bounds for the
//! well-ordered ascents the engine actually builds, which is exactly the
//! completeness the fixed-point theorem needs. Three carriers ship:
//! explicit finite posets, ordinal intervals `[0, α]`, and products of
//! powerset lattices.

use std::fmt;

use thiserror::Error;

use crate::map::MapSymbol;
use crate::ordinal::Ordinal;
use crate::poset::FinitePoset;

pub trait PosetProvider {
    type Element: Clone + Eq + fmt::Debug;

    fn leq(&self, x: &Self::Element, y: &Self::Element) -> bool;

    fn lt(&self, x: &Self::Element, y: &Self::Element) -> bool {
        x != y && self.leq(x, y)
    }

    /// Least upper bound of a recorded strictly ascending sequence.
    fn lub_of_ascent(&self, trace: &[Self::Element]) -> Option<Self::Element>;

    /// Least upper bound of `{fⁿ(x) : n < ω}` for a recognised map, if the
    /// provider can compute it in closed form.
    fn omega_orbit_lub(&self, _x: &Self::Element, _f: &MapSymbol) -> Option<Self::Element> {
        None
    }

    /// Human-readable rendering of one element.
    fn show(&self, x: &Self::Element) -> String {
        format!("{x:?}")
    }

    fn describe(&self) -> String;
}

/// A [`FinitePoset`] seen through the provider contract. Elements are declaration indices.
#[derive(Clone, Copy, Debug)]
pub struct FiniteAdapter<'a> {
    poset: &'a FinitePoset,
}

pub fn make_finite_adapter(poset: &FinitePoset) -> FiniteAdapter<'_> {
    FiniteAdapter { poset }
}

impl<'a> FiniteAdapter<'a> {
    pub fn poset(&self) -> &'a FinitePoset {
        self.poset
    }
}

impl PosetProvider for FiniteAdapter<'_> {
    type Element = usize;

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.poset.leq_ix(*x, *y)
    }

    fn lub_of_ascent(&self, trace: &[usize]) -> Option<usize> {
        self.poset.lub_ix(trace).ok().flatten()
    }

    fn show(&self, x: &usize) -> String {
        self.poset.label(*x).to_string()
    }

    fn describe(&self) -> String {
        let name = if self.poset.name().is_empty() { "<unnamed>" } else { self.poset.name() };
        format!("finite poset {name} ({} elements)", self.poset.len())
    }
}

/// The ordinals `[0, top]` under their usual order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinalInterval {
    top: Ordinal,
}

pub fn make_ordinal_interval(top: Ordinal) -> OrdinalInterval {
    OrdinalInterval { top }
}

impl OrdinalInterval {
    pub fn top(&self) -> &Ordinal {
        &self.top
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        x <= &self.top
    }
}

impl PosetProvider for OrdinalInterval {
    type Element = Ordinal;

    fn leq(&self, x: &Ordinal, y: &Ordinal) -> bool {
        x <= y
    }

    fn lub_of_ascent(&self, trace: &[Ordinal]) -> Option<Ordinal> {
        trace.iter().max().cloned()
    }

    fn omega_orbit_lub(&self, x: &Ordinal, f: &MapSymbol) -> Option<Ordinal> {
        match f {
            MapSymbol::Successor | MapSymbol::ClampedSuccessor => {
                Some(std::cmp::min(x.add_omega(), self.top.clone()))
            }
            _ => None,
        }
    }

    fn show(&self, x: &Ordinal) -> String {
        x.to_string()
    }

    fn describe(&self) -> String {
        format!("ordinal interval [0, {}]", self.top)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("a powerset product needs at least one coordinate")]
    NoCoordinates,
    #[error("coordinate {coordinate} has universe size {size}; at most 64 is supported")]
    UniverseTooLarge { coordinate: usize, size: usize },
}

/// Tuples of subsets of finite universes, ordered by pointwise inclusion.
/// Each coordinate is a bit-set over a universe of at most 64 points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowersetProduct {
    sizes: Vec<usize>,
}

pub fn make_powerset_product(sizes: &[usize]) -> Result<PowersetProduct, ProviderError> {
    if sizes.is_empty() {
        return Err(ProviderError::NoCoordinates);
    }
    if let Some((coordinate, &size)) = sizes.iter().enumerate().find(|(_, &s)| s > 64) {
        return Err(ProviderError::UniverseTooLarge { coordinate, size });
    }
    Ok(PowersetProduct { sizes: sizes.to_vec() })
}

impl PowersetProduct {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn bottom(&self) -> Vec<u64> {
        vec![0; self.sizes.len()]
    }

    pub fn top(&self) -> Vec<u64> {
        self.sizes.iter().map(|&s| if s == 64 { u64::MAX } else { (1u64 << s) - 1 }).collect()
    }

    /// Length of the longest strict chain, i.e. the total number of points.
    pub fn height(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn join(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| a | b).collect()
    }
}

impl PosetProvider for PowersetProduct {
    type Element = Vec<u64>;

    fn leq(&self, x: &Vec<u64>, y: &Vec<u64>) -> bool {
        x.len() == y.len() && x.iter().zip(y).all(|(a, b)| a & !b == 0)
    }

    fn lub_of_ascent(&self, trace: &[Vec<u64>]) -> Option<Vec<u64>> {
        let (first, rest) = trace.split_first()?;
        Some(rest.iter().fold(first.clone(), |acc, x| self.join(&acc, x)))
    }

    fn show(&self, x: &Vec<u64>) -> String {
        let coords: Vec<String> = x
            .iter()
            .map(|bits| {
                let members: Vec<String> =
                    (0..64).filter(|k| bits >> k & 1 == 1).map(|k| k.to_string()).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        format!("({})", coords.join(", "))
    }

    fn describe(&self) -> String {
        format!("powerset product with universe sizes {:?}", self.sizes)
    }
}
