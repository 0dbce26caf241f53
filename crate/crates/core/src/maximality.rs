//! Maximal elements through the fixed-point obstruction.
//!
//! A choice selector picks one element of each nonempty strict upper cone
//! `U_x = {y | x < y}`. Extended by `f(x) = x` where the cone is empty, it
//! is a progressive self-map; its tower's top `ω` is a fixed point, and a
//! fixed point of this map is exactly an element with empty cone, i.e. a
//! maximal element. Had no element been maximal the map would be strictly
//! progressive, which the fixed-point theorem rules out.
//!
//! ## Seeded selection
//!
//! [`SelectorStrategy::SeededRandom`] draws from a ChaCha8 stream
//! (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`), visiting elements in
//! declaration order and drawing one index `random_range(0..|U_x|)` for each
//! element whose cone is nonempty. ChaCha8 output is fixed by its
//! specification, so a `(poset, seed)` pair selects the same map on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::map::TableMap;
use crate::poset::{ElementId, FinitePoset};
use crate::tower::{build_tower_finite, TowerError, TowerTrace};

/// Largest poset [`enumerate_strictly_progressive`] accepts.
pub const STRICT_ENUMERATION_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum SelectorStrategy {
    /// The cone member declared first.
    LeastId,
    SeededRandom { seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct ChoiceSelector<'a> {
    pub strategy: SelectorStrategy,
    pub host: &'a FinitePoset,
}

impl<'a> ChoiceSelector<'a> {
    pub fn least_id(host: &'a FinitePoset) -> Self {
        Self { strategy: SelectorStrategy::LeastId, host }
    }

    pub fn seeded(host: &'a FinitePoset, seed: u64) -> Self {
        Self { strategy: SelectorStrategy::SeededRandom { seed }, host }
    }

    /// One chosen element per nonempty cone; `None` where the cone is empty.
    pub fn choices(&self) -> Vec<Option<usize>> {
        let mut rng = match self.strategy {
            SelectorStrategy::LeastId => None,
            SelectorStrategy::SeededRandom { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        (0..self.host.len())
            .map(|x| {
                let cone = self.host.strict_upper_cone_ix(x);
                if cone.is_empty() {
                    return None;
                }
                Some(match rng.as_mut() {
                    None => cone[0],
                    Some(r) => cone[r.random_range(0..cone.len())],
                })
            })
            .collect()
    }
}

/// `f(x) = s(x)` where `U_x` is nonempty, `f(x) = x` otherwise.
pub fn selector_map(sel: &ChoiceSelector<'_>) -> TableMap {
    let images = sel.choices().into_iter().enumerate().map(|(x, c)| c.unwrap_or(x)).collect();
    let name = match sel.strategy {
        SelectorStrategy::LeastId => "selector-least-id".to_owned(),
        SelectorStrategy::SeededRandom { seed } => format!("selector-seeded-{seed}"),
    };
    TableMap::new(sel.host, images).expect("choices index the host").with_name(name)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MaximalityError {
    #[error("the poset is empty")]
    EmptyPoset,
    #[error("{what} needs at most {limit} elements, got {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error(transparent)]
    Tower(#[from] TowerError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityOutcome {
    pub maximal: ElementId,
    /// Re-checked by scanning every element, not read off the search.
    pub cone_is_empty: bool,
    pub trace: TowerTrace<ElementId>,
}

/// Ascends from `x0` along the selector map and returns its fixed point,
/// which is a maximal element. Takes at most `|X|` stages.
pub fn find_maximal(sel: &ChoiceSelector<'_>, x0: usize) -> Result<MaximalityOutcome, MaximalityError> {
    let p = sel.host;
    if p.is_empty() {
        return Err(MaximalityError::EmptyPoset);
    }
    let f = selector_map(sel);
    let cert = build_tower_finite(p, &f, x0)?;
    let m = cert.omega;
    let cone_is_empty = (0..p.len()).all(|y| y == m || !p.leq_ix(m, y));
    Ok(MaximalityOutcome {
        maximal: p.label(m).clone(),
        cone_is_empty,
        trace: cert.tower.map(|&i| p.label(i).clone()),
    })
}

/// Every total `f` with `x < f(x)` for all `x`. Produced as the product of
/// the strict upper cones, so a single maximal element makes it empty.
pub fn enumerate_strictly_progressive(p: &FinitePoset) -> Result<Vec<TableMap>, MaximalityError> {
    if p.len() > STRICT_ENUMERATION_LIMIT {
        return Err(MaximalityError::TooLarge {
            what: "strictly progressive enumeration",
            n: p.len(),
            limit: STRICT_ENUMERATION_LIMIT,
        });
    }
    let cones: Vec<Vec<usize>> = (0..p.len()).map(|x| p.strict_upper_cone_ix(x)).collect();
    Ok(cartesian(&cones).into_iter().map(|images| TableMap::new(p, images).unwrap()).collect())
}

/// All tuples picking one entry from each list, first coordinate slowest.
pub(crate) fn cartesian(lists: &[Vec<usize>]) -> Vec<Vec<usize>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |&v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::fixtures::*;
    use crate::provider::make_finite_adapter;
    use crate::tower::check_tower;

    fn pairs(p: &FinitePoset, f: &TableMap) -> Vec<(String, String)> {
        f.label_pairs(p).into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect()
    }

    fn owned(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn least_id_selector_maps() {
        let v = vee();
        assert_eq!(pairs(&v, &selector_map(&ChoiceSelector::least_id(&v))), owned(&[("bot", "l"), ("l", "l"), ("r", "r")]));
        let c = chain3();
        assert_eq!(pairs(&c, &selector_map(&ChoiceSelector::least_id(&c))), owned(&[("a", "b"), ("b", "c"), ("c", "c")]));
        let d = diamond();
        assert_eq!(
            pairs(&d, &selector_map(&ChoiceSelector::least_id(&d))),
            owned(&[("bot", "l"), ("l", "top"), ("r", "top"), ("top", "top")])
        );
    }

    #[test]
    fn find_maximal_examples() {
        let v = vee();
        let out = find_maximal(&ChoiceSelector::least_id(&v), 0).unwrap();
        assert_eq!(out.maximal.as_str(), "l");
        assert_eq!(out.trace.elements().iter().map(ElementId::as_str).collect::<Vec<_>>(), ["bot", "l"]);
        assert!(out.cone_is_empty);

        let d = diamond();
        let out = find_maximal(&ChoiceSelector::least_id(&d), 2).unwrap();
        assert_eq!(out.maximal.as_str(), "top");
        assert_eq!(out.trace.elements().iter().map(ElementId::as_str).collect::<Vec<_>>(), ["r", "top"]);

        let a = antichain2();
        for sel in [ChoiceSelector::least_id(&a), ChoiceSelector::seeded(&a, 7)] {
            let out = find_maximal(&sel, 0).unwrap();
            assert_eq!(out.maximal.as_str(), "x");
            assert_eq!(out.trace.len(), 1);
        }
    }

    #[test]
    fn seeded_selector_is_deterministic_and_valid() {
        let d = diamond();
        for seed in 0..50 {
            let f = selector_map(&ChoiceSelector::seeded(&d, seed));
            assert_eq!(f, selector_map(&ChoiceSelector::seeded(&d, seed)));
            assert!(f.is_progressive(&d));
            for x in 0..d.len() {
                if !d.is_maximal_ix(x) {
                    assert!(d.lt_ix(x, f.image(x)));
                }
            }
            let out = find_maximal(&ChoiceSelector::seeded(&d, seed), 0).unwrap();
            let ix: Vec<usize> = out.trace.elements().iter().map(|l| d.index_of(l.as_str()).unwrap()).collect();
            assert!(check_tower(&make_finite_adapter(&d), &f, &0, &ix).unwrap().is_valid());
        }
        // both cone members of bot get picked for some seed
        let picks: std::collections::HashSet<usize> =
            (0..64).map(|s| selector_map(&ChoiceSelector::seeded(&d, s)).image(0)).collect();
        assert_eq!(picks.len(), 3);
    }

    #[test]
    fn no_strictly_progressive_maps_on_fixtures() {
        for p in [chain3(), antichain2(), diamond(), vee()] {
            assert!(enumerate_strictly_progressive(&p).unwrap().is_empty());
        }
        let big = FinitePoset::from_fn(9, |i| format!("v{i}"), |i, j| i == j).unwrap();
        assert!(matches!(enumerate_strictly_progressive(&big), Err(MaximalityError::TooLarge { .. })));
    }

    #[test]
    fn empty_poset_has_no_maximal_search() {
        let e = FinitePoset::from_fn(0, |i| i.to_string(), |_, _| false).unwrap();
        assert_eq!(find_maximal(&ChoiceSelector::least_id(&e), 0).unwrap_err(), MaximalityError::EmptyPoset);
        // the empty poset carries exactly one map, the empty one, and it is vacuously strict
        assert_eq!(enumerate_strictly_progressive(&e).unwrap().len(), 1);
    }

    #[test]
    fn cartesian_product_order() {
        assert_eq!(cartesian(&[vec![1, 2], vec![3]]), vec![vec![1, 3], vec![2, 3]]);
        assert!(cartesian(&[vec![1], vec![]]).is_empty());
        assert_eq!(cartesian(&[]), vec![Vec::<usize>::new()]);
    }
}
