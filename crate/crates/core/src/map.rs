//! Self-maps driven by the tower engine.
//!
//! A map is anything implementing [`SelfMap`]. Besides evaluation it exposes
//! a [`MapSymbol`] so providers can recognise maps whose ω-orbit they can
//! sum in closed form (see [`PosetProvider::omega_orbit_lub`]).
//!
//! [`PosetProvider::omega_orbit_lub`]: crate::provider::PosetProvider::omega_orbit_lub

use std::fmt;

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::poset::{FinitePoset, PosetError};

/// Symbolic tag for a self-map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapSymbol {
    /// `x ↦ x + 1` on ordinals.
    Successor,
    /// `x ↦ min(x + 1, top)` on an ordinal interval `[0, top]`.
    ClampedSuccessor,
    /// A user-named map with no closed-form orbit.
    Named(String),
    Opaque,
}

impl fmt::Display for MapSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Successor => f.write_str("successor"),
            Self::ClampedSuccessor => f.write_str("successor-clamped"),
            Self::Named(n) => f.write_str(n),
            Self::Opaque => f.write_str("<opaque>"),
        }
    }
}

pub trait SelfMap<E> {
    fn apply(&self, x: &E) -> E;

    fn symbol(&self) -> MapSymbol {
        MapSymbol::Opaque
    }
}

/// A closure with an attached symbol.
pub struct FnMap<F> {
    f: F,
    symbol: MapSymbol,
}

impl<F> FnMap<F> {
    pub fn new(f: F) -> Self {
        Self { f, symbol: MapSymbol::Opaque }
    }

    pub fn named(f: F, symbol: MapSymbol) -> Self {
        Self { f, symbol }
    }
}

impl<E, F: Fn(&E) -> E> SelfMap<E> for FnMap<F> {
    fn apply(&self, x: &E) -> E {
        (self.f)(x)
    }

    fn symbol(&self) -> MapSymbol {
        self.symbol.clone()
    }
}

/// The ordinal successor, optionally clamped at a top element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinalSuccessor {
    clamp: Option<Ordinal>,
}

impl OrdinalSuccessor {
    pub fn unclamped() -> Self {
        Self { clamp: None }
    }

    pub fn clamped(top: Ordinal) -> Self {
        Self { clamp: Some(top) }
    }
}

impl SelfMap<Ordinal> for OrdinalSuccessor {
    fn apply(&self, x: &Ordinal) -> Ordinal {
        match &self.clamp {
            Some(top) if x >= top => top.clone(),
            _ => x.successor(),
        }
    }

    fn symbol(&self) -> MapSymbol {
        match self.clamp {
            Some(_) => MapSymbol::ClampedSuccessor,
            None => MapSymbol::Successor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has {got} entries but the poset has {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("image index {0} is out of range")]
    OutOfRange(usize),
    #[error("map is not total: no image for `{0}`")]
    NotTotal(String),
    #[error("element `{0}` is assigned twice")]
    Duplicate(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A total self-map of a finite poset, stored as an image table over declaration indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableMap {
    images: Vec<usize>,
    name: Option<String>,
}

impl TableMap {
    pub fn new(poset: &FinitePoset, images: Vec<usize>) -> Result<Self, MapError> {
        if images.len() != poset.len() {
            return Err(MapError::WrongLength { expected: poset.len(), got: images.len() });
        }
        if let Some(&bad) = images.iter().find(|&&j| j >= poset.len()) {
            return Err(MapError::OutOfRange(bad));
        }
        Ok(Self { images, name: None })
    }

    pub fn identity(poset: &FinitePoset) -> Self {
        Self { images: (0..poset.len()).collect(), name: Some("identity".into()) }
    }

    /// Builds a map from `(x, f(x))` label pairs; every element must appear exactly once.
    pub fn from_labels<S: AsRef<str>>(poset: &FinitePoset, pairs: &[(S, S)]) -> Result<Self, MapError> {
        let mut images: Vec<Option<usize>> = vec![None; poset.len()];
        for (x, y) in pairs {
            let i = poset.index_of(x.as_ref())?;
            let j = poset.index_of(y.as_ref())?;
            if images[i].replace(j).is_some() {
                return Err(MapError::Duplicate(x.as_ref().to_owned()));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| MapError::NotTotal(poset.label(i).to_string())))
            .collect::<Result<_, _>>()?;
        Ok(Self { images, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    /// First element (in declaration order) with `x ≰ f(x)`, if any.
    pub fn progressive_violation(&self, poset: &FinitePoset) -> Option<usize> {
        (0..self.images.len()).find(|&i| !poset.leq_ix(i, self.images[i]))
    }

    pub fn is_progressive(&self, poset: &FinitePoset) -> bool {
        self.progressive_violation(poset).is_none()
    }

    pub fn is_strictly_progressive(&self, poset: &FinitePoset) -> bool {
        (0..self.images.len()).all(|i| poset.lt_ix(i, self.images[i]))
    }

    /// `(x, f(x))` label pairs in declaration order.
    pub fn label_pairs<'p>(&self, poset: &'p FinitePoset) -> Vec<(&'p str, &'p str)> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, &j)| (poset.label(i).as_str(), poset.label(j).as_str()))
            .collect()
    }
}

impl SelfMap<usize> for TableMap {
    fn apply(&self, x: &usize) -> usize {
        self.images[*x]
    }

    fn symbol(&self) -> MapSymbol {
        match &self.name {
            Some(n) => MapSymbol::Named(n.clone()),
            None => MapSymbol::Opaque,
        }
    }
}
