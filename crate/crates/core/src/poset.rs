//! Finite partially ordered sets and the order-theoretic primitives used by
//! the tower engine: chains, weak and strict initial segments, successors,
//! least upper bounds and strict upper cones.
//!
//! Elements are addressed two ways. The label API (`&str` in, [`ElementId`]
//! out) validates its inputs and is what documents and the CLI use. The
//! index API (`*_ix`) works on declaration indices and never allocates on the
//! hot path; the corpus harness and the tower engine use it.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Posets up to this size store their relation as one `u64` row per element.
pub const DENSE_LIMIT: usize = 64;

/// A nonempty element label, unique within one poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(label: impl Into<String>) -> Result<Self, PosetError> {
        let label = label.into();
        if label.is_empty() {
            return Err(PosetError::EmptyLabel);
        }
        Ok(Self(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ElementId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Which poset axiom failed, with the offending elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `(x, x)` is missing (only raised by [`validate_poset_exact`]).
    Reflexivity { x: ElementId },
    /// Both `x ≤ y` and `y ≤ x` with `x ≠ y`.
    Antisymmetry { x: ElementId, y: ElementId },
    /// `x ≤ y` and `y ≤ z` hold but `x ≤ z` is missing.
    Transitivity { x: ElementId, y: ElementId, z: ElementId },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Reflexivity { x } => write!(f, "reflexivity: ({x}, {x}) missing"),
            Self::Antisymmetry { x, y } => {
                write!(f, "antisymmetry: ({x}, {y}) and ({y}, {x}) with {x} != {y}")
            }
            Self::Transitivity { x, y, z } => {
                write!(f, "transitivity: ({x}, {y}) and ({y}, {z}) but ({x}, {z}) missing")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("axiom violation: {0}")]
    AxiomViolation(AxiomViolation),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("element labels must be nonempty")]
    EmptyLabel,
    #[error("cover relation has a cycle: {}", display_cycle(.cycle))]
    CycleDetected { cycle: Vec<ElementId> },
    #[error("least upper bound of the empty set is not defined")]
    EmptySubset,
    #[error("ordered subsets belong to different posets")]
    HostMismatch,
}

fn display_cycle(cycle: &[ElementId]) -> String {
    cycle.iter().map(ElementId::as_str).collect::<Vec<_>>().join(" -> ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Relation {
    /// Row `i` has bit `j` set iff `i ≤ j`.
    Dense(Vec<u64>),
    Sparse(HashSet<(usize, usize)>),
}

impl Relation {
    fn empty(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            Relation::Dense(vec![0; n])
        } else {
            Relation::Sparse(HashSet::new())
        }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        match self {
            Relation::Dense(rows) => rows[i] >> j & 1 == 1,
            Relation::Sparse(set) => set.contains(&(i, j)),
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        match self {
            Relation::Dense(rows) => rows[i] |= 1 << j,
            Relation::Sparse(set) => {
                set.insert((i, j));
            }
        }
    }
}

/// A finite poset whose relation has been checked against the three axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    name: String,
    labels: Vec<ElementId>,
    index: HashMap<ElementId, usize>,
    rel: Relation,
}

/// Validates `leq_pairs` as a partial order on `elements`. Reflexive pairs are
/// added automatically; supplying them is also accepted.
pub fn validate_poset<S, P>(elements: &[S], leq_pairs: &[(P, P)]) -> Result<FinitePoset, PosetError>
where
    S: AsRef<str>,
    P: AsRef<str>,
{
    FinitePoset::build(elements, leq_pairs, true)
}

/// Like [`validate_poset`] but requires every reflexive pair to be present.
pub fn validate_poset_exact<S, P>(
    elements: &[S],
    leq_pairs: &[(P, P)],
) -> Result<FinitePoset, PosetError>
where
    S: AsRef<str>,
    P: AsRef<str>,
{
    FinitePoset::build(elements, leq_pairs, false)
}

/// Reflexive-transitive closure of a Hasse diagram.
pub fn close_covers<S, P>(elements: &[S], cover_pairs: &[(P, P)]) -> Result<FinitePoset, PosetError>
where
    S: AsRef<str>,
    P: AsRef<str>,
{
    let (labels, index) = intern(elements)?;
    let n = labels.len();
    let mut succ = vec![Vec::new(); n];
    for (a, b) in cover_pairs {
        let i = lookup(&index, a.as_ref())?;
        let j = lookup(&index, b.as_ref())?;
        succ[i].push(j);
    }
    if let Some(cycle) = find_cycle(&succ) {
        return Err(PosetError::CycleDetected {
            cycle: cycle.into_iter().map(|i| labels[i].clone()).collect(),
        });
    }
    let mut rel = Relation::empty(n);
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            rel.set(start, v);
            for &w in &succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    FinitePoset::from_parts(String::new(), labels, index, rel, true)
}

fn intern<S: AsRef<str>>(
    elements: &[S],
) -> Result<(Vec<ElementId>, HashMap<ElementId, usize>), PosetError> {
    let mut labels = Vec::with_capacity(elements.len());
    let mut index = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        let id = ElementId::new(e.as_ref())?;
        if index.insert(id.clone(), i).is_some() {
            return Err(PosetError::DuplicateElement(id.0));
        }
        labels.push(id);
    }
    Ok((labels, index))
}

fn lookup(index: &HashMap<ElementId, usize>, label: &str) -> Result<usize, PosetError> {
    // HashMap<ElementId, _> cannot be queried by &str without an allocation.
    index
        .get(&ElementId(label.to_owned()))
        .copied()
        .ok_or_else(|| PosetError::UnknownElement(label.to_owned()))
}

/// Iterative three-colour DFS; returns the vertices of one cycle, first vertex repeated at the end.
fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    let n = succ.len();
    let mut colour = vec![Colour::White; n];
    for root in 0..n {
        if colour[root] != Colour::White {
            continue;
        }
        let mut path: Vec<(usize, usize)> = vec![(root, 0)];
        colour[root] = Colour::Grey;
        while let Some(&mut (v, ref mut next)) = path.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                match colour[w] {
                    Colour::White => {
                        colour[w] = Colour::Grey;
                        path.push((w, 0));
                    }
                    Colour::Grey => {
                        let start = path.iter().position(|&(u, _)| u == w).unwrap();
                        let mut cycle: Vec<usize> = path[start..].iter().map(|&(u, _)| u).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Colour::Black => {}
                }
            } else {
                colour[v] = Colour::Black;
                path.pop();
            }
        }
    }
    None
}

impl FinitePoset {
    fn build<S, P>(elements: &[S], pairs: &[(P, P)], add_reflexive: bool) -> Result<Self, PosetError>
    where
        S: AsRef<str>,
        P: AsRef<str>,
    {
        let (labels, index) = intern(elements)?;
        let mut rel = Relation::empty(labels.len());
        for (a, b) in pairs {
            let i = lookup(&index, a.as_ref())?;
            let j = lookup(&index, b.as_ref())?;
            rel.set(i, j);
        }
        Self::from_parts(String::new(), labels, index, rel, add_reflexive)
    }

    fn from_parts(
        name: String,
        labels: Vec<ElementId>,
        index: HashMap<ElementId, usize>,
        mut rel: Relation,
        add_reflexive: bool,
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        for i in 0..n {
            if !rel.get(i, i) {
                if !add_reflexive {
                    return Err(PosetError::AxiomViolation(AxiomViolation::Reflexivity {
                        x: labels[i].clone(),
                    }));
                }
                rel.set(i, i);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rel.get(i, j) && rel.get(j, i) {
                    return Err(PosetError::AxiomViolation(AxiomViolation::Antisymmetry {
                        x: labels[i].clone(),
                        y: labels[j].clone(),
                    }));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !rel.get(i, j) {
                    continue;
                }
                for k in 0..n {
                    if rel.get(j, k) && !rel.get(i, k) {
                        return Err(PosetError::AxiomViolation(AxiomViolation::Transitivity {
                            x: labels[i].clone(),
                            y: labels[j].clone(),
                            z: labels[k].clone(),
                        }));
                    }
                }
            }
        }
        Ok(Self { name, labels, index, rel })
    }

    /// Builds a poset on `n` elements labelled by `label(i)` from an index
    /// predicate. Reflexive pairs are added; the axioms are checked.
    pub fn from_fn(
        n: usize,
        label: impl Fn(usize) -> String,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let names: Vec<String> = (0..n).map(label).collect();
        let (labels, index) = intern(&names)?;
        let mut rel = Relation::empty(n);
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    rel.set(i, j);
                }
            }
        }
        Self::from_parts(String::new(), labels, index, rel, true)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in declaration order.
    pub fn labels(&self) -> &[ElementId] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &ElementId {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PosetError> {
        lookup(&self.index, label)
    }

    pub fn leq(&self, x: &str, y: &str) -> Result<bool, PosetError> {
        Ok(self.leq_ix(self.index_of(x)?, self.index_of(y)?))
    }

    /// `x < y`, i.e. `x ≤ y` and `x ≠ y`.
    pub fn lt(&self, x: &str, y: &str) -> Result<bool, PosetError> {
        Ok(self.lt_ix(self.index_of(x)?, self.index_of(y)?))
    }

    #[inline]
    pub fn leq_ix(&self, i: usize, j: usize) -> bool {
        self.rel.get(i, j)
    }

    #[inline]
    pub fn lt_ix(&self, i: usize, j: usize) -> bool {
        i != j && self.rel.get(i, j)
    }

    pub fn comparable_ix(&self, i: usize, j: usize) -> bool {
        self.leq_ix(i, j) || self.leq_ix(j, i)
    }

    /// All non-reflexive pairs `(x, y)` with `x < y`, row-major in declaration order.
    pub fn strict_pairs_ix(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.lt_ix(i, j))
            .collect()
    }

    /// The strict upper cone `{y | x < y}`, in declaration order.
    pub fn strict_upper_cone(&self, x: &str) -> Result<Vec<ElementId>, PosetError> {
        let i = self.index_of(x)?;
        Ok(self.strict_upper_cone_ix(i).into_iter().map(|j| self.labels[j].clone()).collect())
    }

    pub fn strict_upper_cone_ix(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.lt_ix(i, j)).collect()
    }

    /// The principal up-set `{y | x ≤ y}`, in declaration order.
    pub fn up_set_ix(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq_ix(i, j)).collect()
    }

    pub fn is_maximal_ix(&self, i: usize) -> bool {
        (0..self.len()).all(|j| !self.lt_ix(i, j))
    }

    /// Least upper bound of a nonempty subset, if one exists.
    pub fn lub<S: AsRef<str>>(&self, subset: &[S]) -> Result<Option<ElementId>, PosetError> {
        let ix = subset
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.lub_ix(&ix)?.map(|u| self.labels[u].clone()))
    }

    pub fn lub_ix(&self, subset: &[usize]) -> Result<Option<usize>, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        let upper: Vec<usize> = (0..self.len())
            .filter(|&u| subset.iter().all(|&a| self.leq_ix(a, u)))
            .collect();
        Ok(upper
            .iter()
            .copied()
            .find(|&u| upper.iter().all(|&v| self.leq_ix(u, v))))
    }

    /// Sorts `subset` by the host order if it is a chain, labelling each
    /// member as least, successor or limit. Finite chains have no limit
    /// elements, so [`ElementKind::Limit`] never appears here.
    pub fn classify_subset<S: AsRef<str>>(&self, subset: &[S]) -> Result<Classification<'_>, PosetError> {
        let ix = subset
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        if ix.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        Ok(match self.chain_ix(&ix) {
            Ok(chain) => {
                let kinds = chain.kinds();
                Classification::Chain { subset: chain, kinds }
            }
            Err((i, j)) => Classification::NotAChain(self.labels[i].clone(), self.labels[j].clone()),
        })
    }

    /// Sorts an index subset into an [`OrderedSubset`], or returns the first
    /// incomparable pair found. Duplicates are removed.
    pub fn chain_ix(&self, subset: &[usize]) -> Result<OrderedSubset<'_>, (usize, usize)> {
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if !self.comparable_ix(i, j) {
                    return Err((i, j));
                }
            }
        }
        members.sort_by(|&i, &j| {
            if i == j {
                std::cmp::Ordering::Equal
            } else if self.leq_ix(i, j) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Ok(OrderedSubset { host: self, members })
    }

    /// Cover pairs (the transitive reduction): `x < y` with nothing strictly between.
    pub fn cover_pairs_ix(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.strict_pairs_ix()
            .into_iter()
            .filter(|&(i, j)| !(0..n).any(|k| self.lt_ix(i, k) && self.lt_ix(k, j)))
            .collect()
    }
}

/// Result of [`FinitePoset::classify_subset`].
#[derive(Clone, Debug, PartialEq)]
pub enum Classification<'a> {
    NotAChain(ElementId, ElementId),
    Chain { subset: OrderedSubset<'a>, kinds: Vec<ElementKind> },
}

/// Position of an element inside a well-ordered subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Least,
    SuccessorOf(ElementId),
    Limit,
}

/// A chain of a host poset, stored in ascending order.
#[derive(Clone, Debug)]
pub struct OrderedSubset<'a> {
    host: &'a FinitePoset,
    members: Vec<usize>,
}

impl PartialEq for OrderedSubset<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.host, other.host) && self.members == other.members
    }
}

impl<'a> OrderedSubset<'a> {
    pub fn host(&self) -> &'a FinitePoset {
        self.host
    }

    /// Ascending member indices.
    pub fn members_ix(&self) -> &[usize] {
        &self.members
    }

    pub fn labels(&self) -> Vec<ElementId> {
        self.members.iter().map(|&i| self.host.labels[i].clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_ix(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn min_ix(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn max_ix(&self) -> Option<usize> {
        self.members.last().copied()
    }

    fn position(&self, label: &str) -> Result<usize, PosetError> {
        let i = self.host.index_of(label)?;
        self.members
            .iter()
            .position(|&m| m == i)
            .ok_or_else(|| PosetError::UnknownElement(label.to_owned()))
    }

    /// `(IS(y), WIS(y))`: the members strictly below `y`, and those at or below it.
    pub fn segments(&self, y: &str) -> Result<(OrderedSubset<'a>, OrderedSubset<'a>), PosetError> {
        let p = self.position(y)?;
        Ok((self.prefix(p), self.prefix(p + 1)))
    }

    /// The first `len` members.
    pub fn prefix(&self, len: usize) -> OrderedSubset<'a> {
        OrderedSubset { host: self.host, members: self.members[..len].to_vec() }
    }

    /// Least member strictly above `y`; `None` iff `y` is the largest member.
    pub fn successor_in(&self, y: &str) -> Result<Option<ElementId>, PosetError> {
        let p = self.position(y)?;
        Ok(self.members.get(p + 1).map(|&i| self.host.labels[i].clone()))
    }

    /// `self ⊆ other` and `other` has no member below a member of `self` that is missing from `self`.
    pub fn is_initial_segment_of(&self, other: &OrderedSubset<'_>) -> Result<bool, PosetError> {
        if !std::ptr::eq(self.host, other.host) {
            return Err(PosetError::HostMismatch);
        }
        if !self.members.iter().all(|a| other.members.contains(a)) {
            return Ok(false);
        }
        Ok(other.members.iter().all(|&b| {
            self.members.contains(&b) || !self.members.iter().any(|&a| self.host.lt_ix(b, a))
        }))
    }

    pub fn kinds(&self) -> Vec<ElementKind> {
        self.members
            .iter()
            .enumerate()
            .map(|(p, _)| match p {
                0 => ElementKind::Least,
                _ => ElementKind::SuccessorOf(self.host.labels[self.members[p - 1]].clone()),
            })
            .collect()
    }
}

/// Named test posets.
pub mod fixtures {
    use super::{close_covers, FinitePoset};

    /// `a < b < c`.
    pub fn chain3() -> FinitePoset {
        close_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap().with_name("CHAIN3")
    }

    /// `bot < l, r < top` with `l`, `r` incomparable.
    pub fn diamond() -> FinitePoset {
        close_covers(
            &["bot", "l", "r", "top"],
            &[("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")],
        )
        .unwrap()
        .with_name("DIAMOND")
    }

    /// `bot < l`, `bot < r`, no top.
    pub fn vee() -> FinitePoset {
        close_covers(&["bot", "l", "r"], &[("bot", "l"), ("bot", "r")]).unwrap().with_name("VEE")
    }

    /// Two incomparable points `x`, `y`.
    pub fn antichain2() -> FinitePoset {
        close_covers::<_, &str>(&["x", "y"], &[]).unwrap().with_name("ANTICHAIN2")
    }

    pub fn by_name(name: &str) -> Option<FinitePoset> {
        match name.to_ascii_uppercase().as_str() {
            "CHAIN3" => Some(chain3()),
            "DIAMOND" => Some(diamond()),
            "VEE" => Some(vee()),
            "ANTICHAIN2" => Some(antichain2()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn ids(labels: &[&str]) -> Vec<ElementId> {
        labels.iter().map(|l| ElementId::new(*l).unwrap()).collect()
    }

    #[test]
    fn validate_chain_adds_reflexive_pairs() {
        let p = validate_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert!(p.leq("a", "a").unwrap());
        assert!(p.leq("a", "c").unwrap());
        assert!(!p.leq("c", "a").unwrap());
        assert_eq!(p.strict_pairs_ix().len(), 3);
        assert_eq!(p, chain3().with_name(""));
    }

    #[test]
    fn validate_reports_antisymmetry() {
        let err = validate_poset(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err();
        assert_eq!(
            err,
            PosetError::AxiomViolation(AxiomViolation::Antisymmetry {
                x: ElementId::new("x").unwrap(),
                y: ElementId::new("y").unwrap()
            })
        );
    }

    #[test]
    fn validate_reports_missing_transitive_pair() {
        let err = validate_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap_err();
        match err {
            PosetError::AxiomViolation(AxiomViolation::Transitivity { x, z, .. }) => {
                assert_eq!((x.as_str(), z.as_str()), ("a", "c"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exact_validation_requires_reflexive_pairs() {
        let err = validate_poset_exact(&["a"], &[] as &[(&str, &str)]).unwrap_err();
        assert!(matches!(err, PosetError::AxiomViolation(AxiomViolation::Reflexivity { .. })));
        assert!(validate_poset_exact(&["a"], &[("a", "a")]).is_ok());
    }

    #[test]
    fn unknown_and_duplicate_elements() {
        assert_eq!(
            validate_poset(&["a"], &[("a", "z")]).unwrap_err(),
            PosetError::UnknownElement("z".into())
        );
        assert_eq!(
            validate_poset::<_, &str>(&["a", "a"], &[]).unwrap_err(),
            PosetError::DuplicateElement("a".into())
        );
        assert_eq!(validate_poset::<_, &str>(&[""], &[]).unwrap_err(), PosetError::EmptyLabel);
        assert!(matches!(chain3().leq("a", "q"), Err(PosetError::UnknownElement(_))));
    }

    #[test]
    fn diamond_closure_has_five_strict_pairs() {
        let d = diamond();
        // bot<l, bot<r, bot<top, l<top, r<top
        assert_eq!(d.strict_pairs_ix().len(), 5);
        assert!(d.leq("bot", "top").unwrap());
        assert!(!d.leq("l", "r").unwrap());
        assert!(chain3().leq("b", "b").unwrap());
    }

    #[test]
    fn close_covers_on_empty_covers_is_antichain() {
        let p = antichain2();
        assert!(p.strict_pairs_ix().is_empty());
    }

    #[test]
    fn close_covers_detects_cycles() {
        let err = close_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(err, PosetError::CycleDetected { cycle: ids(&["a", "b", "a"]) });
        let err = close_covers(&["a"], &[("a", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::CycleDetected { .. }));
    }

    #[test]
    fn strict_upper_cones() {
        assert_eq!(diamond().strict_upper_cone("bot").unwrap(), ids(&["l", "r", "top"]));
        assert!(diamond().strict_upper_cone("top").unwrap().is_empty());
        assert_eq!(vee().strict_upper_cone("bot").unwrap(), ids(&["l", "r"]));
    }

    #[test]
    fn least_upper_bounds() {
        assert_eq!(diamond().lub(&["l", "r"]).unwrap(), Some(ElementId::new("top").unwrap()));
        assert_eq!(vee().lub(&["l", "r"]).unwrap(), None);
        assert_eq!(chain3().lub(&["a", "b"]).unwrap(), Some(ElementId::new("b").unwrap()));
        assert_eq!(chain3().lub::<&str>(&[]).unwrap_err(), PosetError::EmptySubset);
    }

    #[test]
    fn classify_chains() {
        let d = diamond();
        match d.classify_subset(&["top", "bot", "l"]).unwrap() {
            Classification::Chain { subset, kinds } => {
                assert_eq!(subset.labels(), ids(&["bot", "l", "top"]));
                assert_eq!(
                    kinds,
                    vec![
                        ElementKind::Least,
                        ElementKind::SuccessorOf(ElementId::new("bot").unwrap()),
                        ElementKind::SuccessorOf(ElementId::new("l").unwrap()),
                    ]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            d.classify_subset(&["l", "r"]).unwrap(),
            Classification::NotAChain(ElementId::new("l").unwrap(), ElementId::new("r").unwrap())
        );
        let c = chain3();
        match c.classify_subset(&["c"]).unwrap() {
            Classification::Chain { kinds, .. } => assert_eq!(kinds, vec![ElementKind::Least]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(c.classify_subset::<&str>(&[]).unwrap_err(), PosetError::EmptySubset);
    }

    #[test]
    fn segments_and_successors() {
        let c = chain3();
        let y = c.chain_ix(&[0, 1, 2]).unwrap();
        let (is, wis) = y.segments("b").unwrap();
        assert_eq!(is.labels(), ids(&["a"]));
        assert_eq!(wis.labels(), ids(&["a", "b"]));
        let (is, wis) = y.segments("a").unwrap();
        assert!(is.is_empty());
        assert_eq!(wis.labels(), ids(&["a"]));
        assert_eq!(y.successor_in("a").unwrap(), Some(ElementId::new("b").unwrap()));
        assert_eq!(y.successor_in("c").unwrap(), None);

        let d = diamond();
        let y = d.chain_ix(&[0, 1, 3]).unwrap();
        let (is, wis) = y.segments("top").unwrap();
        assert_eq!(is.labels(), ids(&["bot", "l"]));
        assert_eq!(wis.labels(), ids(&["bot", "l", "top"]));
        assert!(matches!(y.segments("r"), Err(PosetError::UnknownElement(_))));
        let two = d.chain_ix(&[0, 3]).unwrap();
        assert_eq!(two.successor_in("bot").unwrap(), Some(ElementId::new("top").unwrap()));
    }

    #[test]
    fn initial_segments() {
        let d = diamond();
        let b = d.chain_ix(&[0, 1, 3]).unwrap();
        assert!(d.chain_ix(&[0]).unwrap().is_initial_segment_of(&b).unwrap());
        assert!(!d.chain_ix(&[0, 3]).unwrap().is_initial_segment_of(&b).unwrap());
        let c = chain3();
        let ab = c.chain_ix(&[0, 1]).unwrap();
        assert!(ab.is_initial_segment_of(&ab).unwrap());
        let other = chain3();
        let ab2 = other.chain_ix(&[0, 1]).unwrap();
        assert_eq!(ab.is_initial_segment_of(&ab2).unwrap_err(), PosetError::HostMismatch);
    }

    #[test]
    fn sparse_storage_above_dense_limit() {
        let n = DENSE_LIMIT + 6;
        let p = FinitePoset::from_fn(n, |i| format!("v{i}"), |i, j| i <= j).unwrap();
        assert!(matches!(p.rel, Relation::Sparse(_)));
        assert!(p.leq("v0", &format!("v{}", n - 1)).unwrap());
        assert_eq!(p.lub_ix(&[3, 40, 65]).unwrap(), Some(65));
        assert_eq!(p.cover_pairs_ix().len(), n - 1);
    }
}
