//! Bourbaki towers: construction, checking, enumeration and comparison.
//!
//! A Bourbaki `f`-tower based at `x0` is a well-ordered subset `Y` whose
//! least element is `x0`, in which every non-largest `y` has successor
//! `f(y)`, and every limit element is the least upper bound of the members
//! below it. For a progressive `f` (one with `x ≤ f(x)` everywhere) the
//! towers based at `x0` form a chain under the initial-segment relation; the
//! largest one, `Ω_f(x0)`, contains its own least upper bound `ω`, and
//! `f(ω) = ω`.
//!
//! On a finite poset every well-ordered subset has a largest element, so no
//! tower has limit elements and `Ω_f(x0)` is the plain orbit
//! `x0, f(x0), f²(x0), …` up to its first repetition. Over an infinite
//! carrier the engine records successor stages one by one and realises a
//! limit stage by an ω-jump: after a block of successor steps it asks the
//! provider for the least upper bound of the whole remaining orbit and
//! indexes the new stage by `α + ω`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::map::{SelfMap, TableMap};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::poset::{FinitePoset, OrderedSubset, PosetError};
use crate::provider::{make_finite_adapter, PosetProvider};

/// Largest poset [`enumerate_towers`] will scan (it visits all `2^n` subsets).
pub const ENUMERATION_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageKind {
    Base,
    Successor,
    Limit,
}

impl fmt::Display for StageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Base => "base",
            Self::Successor => "successor",
            Self::Limit => "limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage<E> {
    pub index: Ordinal,
    pub element: E,
    pub kind: StageKind,
}

/// An ordinal-indexed ascent. Between a stage and a following limit stage
/// the trace elides the ω-orbit of the earlier element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerTrace<E> {
    pub base: E,
    pub stages: Vec<Stage<E>>,
}

impl<E: Clone> TowerTrace<E> {
    fn start(base: E) -> Self {
        Self {
            stages: vec![Stage { index: Ordinal::zero(), element: base.clone(), kind: StageKind::Base }],
            base,
        }
    }

    /// A trace of finitely many successor stages with indices `0, 1, 2, …`.
    pub fn from_sequence(elements: &[E]) -> Option<Self> {
        let (first, rest) = elements.split_first()?;
        let mut t = Self::start(first.clone());
        for (i, e) in rest.iter().enumerate() {
            t.stages.push(Stage {
                index: Ordinal::finite(i as u64 + 1),
                element: e.clone(),
                kind: StageKind::Successor,
            });
        }
        Some(t)
    }

    pub fn elements(&self) -> Vec<E> {
        self.stages.iter().map(|s| s.element.clone()).collect()
    }

    pub fn last(&self) -> &E {
        &self.stages.last().expect("a trace always has its base stage").element
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn limit_stages(&self) -> impl Iterator<Item = &Stage<E>> {
        self.stages.iter().filter(|s| s.kind == StageKind::Limit)
    }

    pub fn map<U>(&self, f: impl Fn(&E) -> U) -> TowerTrace<U> {
        TowerTrace {
            base: f(&self.base),
            stages: self
                .stages
                .iter()
                .map(|s| Stage { index: s.index.clone(), element: f(&s.element), kind: s.kind })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateChecks {
    pub omega_in_tower: bool,
    pub fixed_point: bool,
    pub omega_is_lub: bool,
}

/// The largest tower together with its top element and the three facts
/// checked about it: `ω ∈ Ω`, `f(ω) = ω`, and `ω = lub Ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointCertificate<E> {
    pub omega: E,
    pub tower: TowerTrace<E>,
    pub checks: CertificateChecks,
}

impl<E: Clone> FixedPointCertificate<E> {
    pub fn is_valid(&self) -> bool {
        self.checks.omega_in_tower && self.checks.fixed_point && self.checks.omega_is_lub
    }

    pub fn map<U>(&self, f: impl Fn(&E) -> U) -> FixedPointCertificate<U> {
        FixedPointCertificate { omega: f(&self.omega), tower: self.tower.map(&f), checks: self.checks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("map is not progressive: f({witness}) = {image} is not above {witness}")]
    NotProgressive { witness: String, image: String },
    #[error("candidate is not strictly ascending at position {position}")]
    NotAscending { position: usize },
    #[error("candidate starts at {found}, expected base {expected}")]
    BaseMismatch { expected: String, found: String },
    #[error("candidate is empty")]
    EmptyCandidate,
    #[error("successor budget exhausted after {stages} stages and the provider has no closed-form orbit bound for this map")]
    AccelerationUnavailable { stages: usize },
    #[error("provider returned an orbit bound {bound} that is not above {from}")]
    ProviderContract { from: String, bound: String },
    #[error("{what} needs at most {limit} elements, got {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("budget must allow at least one successor step per block")]
    ZeroBudget,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Which tower condition a candidate fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerCondition {
    /// Indices must start at 0 and strictly increase.
    WellOrder,
    Successor,
    Limit,
}

impl fmt::Display for TowerCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::WellOrder => "well-order",
            Self::Successor => "successor",
            Self::Limit => "limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum TowerCheck {
    Valid,
    Violation { condition: TowerCondition, position: usize, witness: String },
}

impl TowerCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, TowerCheck::Valid)
    }
}

/// Checks a finite candidate with positional stage kinds (first base, the rest successors).
pub fn check_tower<P, M>(
    host: &P,
    f: &M,
    x0: &P::Element,
    candidate: &[P::Element],
) -> Result<TowerCheck, TowerError>
where
    P: PosetProvider,
    M: SelfMap<P::Element>,
{
    let indexed: Vec<(Ordinal, P::Element)> = candidate
        .iter()
        .enumerate()
        .map(|(i, e)| (Ordinal::finite(i as u64), e.clone()))
        .collect();
    check_tower_indexed(host, f, x0, &indexed)
}

/// Checks an ordinal-indexed candidate. Stage kinds come from the indices:
/// a successor index must directly follow the previous stage's index and
/// hold `f` of its element; a limit index must equal the previous index
/// plus ω and hold the provider's least upper bound of the previous
/// element's ω-orbit (the members elided between the two stages).
pub fn check_tower_indexed<P, M>(
    host: &P,
    f: &M,
    x0: &P::Element,
    candidate: &[(Ordinal, P::Element)],
) -> Result<TowerCheck, TowerError>
where
    P: PosetProvider,
    M: SelfMap<P::Element>,
{
    let Some(((first_ix, first), _)) = candidate.split_first() else {
        return Err(TowerError::EmptyCandidate);
    };
    for (position, w) in candidate.windows(2).enumerate() {
        if !host.lt(&w[0].1, &w[1].1) {
            return Err(TowerError::NotAscending { position: position + 1 });
        }
    }
    if first != x0 {
        return Err(TowerError::BaseMismatch { expected: host.show(x0), found: host.show(first) });
    }
    if !first_ix.is_zero() {
        return Ok(TowerCheck::Violation {
            condition: TowerCondition::WellOrder,
            position: 0,
            witness: format!("first stage has index {first_ix}, expected 0"),
        });
    }
    for (position, w) in candidate.windows(2).enumerate() {
        let position = position + 1;
        let ((prev_ix, prev), (ix, y)) = (&w[0], &w[1]);
        if ix <= prev_ix {
            return Ok(TowerCheck::Violation {
                condition: TowerCondition::WellOrder,
                position,
                witness: format!("index {ix} does not follow {prev_ix}"),
            });
        }
        match ix.classify() {
            OrdinalKind::Zero => unreachable!("indices above the first are positive"),
            OrdinalKind::Successor(pred) => {
                if &pred != prev_ix {
                    return Ok(TowerCheck::Violation {
                        condition: TowerCondition::Successor,
                        position,
                        witness: format!("stage {pred} is missing before stage {ix}"),
                    });
                }
                let image = f.apply(prev);
                if &image != y {
                    return Ok(TowerCheck::Violation {
                        condition: TowerCondition::Successor,
                        position,
                        witness: format!(
                            "succ({p}) = {y} but f({p}) = {fp}",
                            p = host.show(prev),
                            y = host.show(y),
                            fp = host.show(&image)
                        ),
                    });
                }
            }
            OrdinalKind::Limit => {
                if ix != &prev_ix.add_omega() {
                    return Ok(TowerCheck::Violation {
                        condition: TowerCondition::Limit,
                        position,
                        witness: format!("limit index {ix} is not {prev_ix} + w"),
                    });
                }
                match host.omega_orbit_lub(prev, &f.symbol()) {
                    Some(bound) if &bound == y => {}
                    Some(bound) => {
                        return Ok(TowerCheck::Violation {
                            condition: TowerCondition::Limit,
                            position,
                            witness: format!(
                                "limit stage holds {} but the lub of the orbit of {} is {}",
                                host.show(y),
                                host.show(prev),
                                host.show(&bound)
                            ),
                        })
                    }
                    None => {
                        return Ok(TowerCheck::Violation {
                            condition: TowerCondition::Limit,
                            position,
                            witness: format!("{} cannot certify an orbit bound for this map", host.describe()),
                        })
                    }
                }
            }
        }
    }
    Ok(TowerCheck::Valid)
}

fn certificate<P, M>(host: &P, f: &M, tower: TowerTrace<P::Element>) -> FixedPointCertificate<P::Element>
where
    P: PosetProvider,
    M: SelfMap<P::Element>,
{
    let elements = tower.elements();
    let omega = tower.last().clone();
    let checks = CertificateChecks {
        omega_in_tower: elements.contains(&omega),
        fixed_point: f.apply(&omega) == omega,
        omega_is_lub: host.lub_of_ascent(&elements).as_ref() == Some(&omega),
    };
    FixedPointCertificate { omega, tower, checks }
}

/// Builds `Ω_f(x0)` on a finite poset by iterating `f` from `x0` until it
/// stops moving, and certifies its top element. Takes at most `|X|` steps.
pub fn build_tower_finite(
    poset: &FinitePoset,
    f: &TableMap,
    x0: usize,
) -> Result<FixedPointCertificate<usize>, TowerError> {
    if x0 >= poset.len() {
        return Err(PosetError::UnknownElement(format!("#{x0}")).into());
    }
    if let Some(i) = f.progressive_violation(poset) {
        return Err(TowerError::NotProgressive {
            witness: poset.label(i).to_string(),
            image: poset.label(f.image(i)).to_string(),
        });
    }
    let mut orbit = vec![x0];
    let mut x = x0;
    loop {
        let y = f.image(x);
        if y == x {
            break;
        }
        // progressive and y ≠ x, so the orbit strictly ascends and cannot revisit
        orbit.push(y);
        x = y;
    }
    debug_assert!(orbit.len() <= poset.len());
    let tower = TowerTrace::from_sequence(&orbit).expect("orbit contains x0");
    Ok(certificate(&make_finite_adapter(poset), f, tower))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub successor_steps_per_block: usize,
    pub max_accelerations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { successor_steps_per_block: 1024, max_accelerations: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TransfiniteOutcome<E> {
    Fixed(FixedPointCertificate<E>),
    BudgetExhausted { trace: TowerTrace<E> },
}

impl<E> TransfiniteOutcome<E> {
    pub fn certificate(self) -> Option<FixedPointCertificate<E>> {
        match self {
            Self::Fixed(c) => Some(c),
            Self::BudgetExhausted { .. } => None,
        }
    }
}

/// Builds the largest tower over a provider, alternating blocks of
/// successor stages with ω-jumps. Each block applies `f` until it reaches a
/// fixed point or records `successor_steps_per_block` stages; in the latter
/// case the provider's closed-form orbit bound becomes a limit stage at
/// index `α + ω`. Progressiveness is checked on every visited element.
pub fn build_tower_transfinite<P, M>(
    host: &P,
    f: &M,
    x0: P::Element,
    budget: Budget,
) -> Result<TransfiniteOutcome<P::Element>, TowerError>
where
    P: PosetProvider,
    M: SelfMap<P::Element>,
{
    if budget.successor_steps_per_block == 0 {
        return Err(TowerError::ZeroBudget);
    }
    let mut trace = TowerTrace::start(x0);
    let mut accelerations = 0;
    loop {
        let mut steps = 0;
        loop {
            let stage = trace.stages.last().unwrap();
            let x = &stage.element;
            let y = f.apply(x);
            if !host.leq(x, &y) {
                return Err(TowerError::NotProgressive { witness: host.show(x), image: host.show(&y) });
            }
            if &y == x {
                return Ok(TransfiniteOutcome::Fixed(certificate(host, f, trace)));
            }
            if steps == budget.successor_steps_per_block {
                break;
            }
            let index = stage.index.successor();
            trace.stages.push(Stage { index, element: y, kind: StageKind::Successor });
            steps += 1;
        }
        if accelerations == budget.max_accelerations {
            return Ok(TransfiniteOutcome::BudgetExhausted { trace });
        }
        let stage = trace.stages.last().unwrap();
        let Some(bound) = host.omega_orbit_lub(&stage.element, &f.symbol()) else {
            return Err(TowerError::AccelerationUnavailable { stages: trace.len() });
        };
        if !host.lt(&stage.element, &bound) {
            return Err(TowerError::ProviderContract {
                from: host.show(&stage.element),
                bound: host.show(&bound),
            });
        }
        let index = stage.index.add_omega();
        trace.stages.push(Stage { index, element: bound, kind: StageKind::Limit });
        accelerations += 1;
    }
}

/// How two well-ordered subsets sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentOrder {
    Equal,
    FirstInitialInSecond,
    SecondInitialInFirst,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SegmentRelation<'a> {
    pub order: SegmentOrder,
    /// The longest common prefix; an initial segment of both inputs.
    pub common_prefix: OrderedSubset<'a>,
}

/// Compares two chains with the same least element. For two towers of the
/// same progressive map the answer is never [`SegmentOrder::Incomparable`];
/// for arbitrary chains it can be.
pub fn compare_towers<'a>(
    a: &OrderedSubset<'a>,
    b: &OrderedSubset<'a>,
) -> Result<SegmentRelation<'a>, TowerError> {
    if !std::ptr::eq(a.host(), b.host()) {
        return Err(PosetError::HostMismatch.into());
    }
    let (ma, mb) = (a.members_ix(), b.members_ix());
    if ma.first() != mb.first() {
        let show = |m: &[usize]| m.first().map_or("<empty>".to_owned(), |&i| a.host().label(i).to_string());
        return Err(TowerError::BaseMismatch { expected: show(ma), found: show(mb) });
    }
    let common = ma.iter().zip(mb).take_while(|(x, y)| x == y).count();
    let order = match (common == ma.len(), common == mb.len()) {
        (true, true) => SegmentOrder::Equal,
        (true, false) => SegmentOrder::FirstInitialInSecond,
        (false, true) => SegmentOrder::SecondInitialInFirst,
        (false, false) => SegmentOrder::Incomparable,
    };
    Ok(SegmentRelation { order, common_prefix: a.prefix(common) })
}

/// Every subset of a small poset that is a tower of `f` based at `x0`,
/// ordered by size. Checks all `2^n` subsets, so `n ≤ 12`.
pub fn enumerate_towers(
    poset: &FinitePoset,
    f: &TableMap,
    x0: usize,
) -> Result<Vec<TowerTrace<usize>>, TowerError> {
    let n = poset.len();
    if n > ENUMERATION_LIMIT {
        return Err(TowerError::TooLarge { what: "tower enumeration", n, limit: ENUMERATION_LIMIT });
    }
    if let Some(i) = f.progressive_violation(poset) {
        return Err(TowerError::NotProgressive {
            witness: poset.label(i).to_string(),
            image: poset.label(f.image(i)).to_string(),
        });
    }
    let host = make_finite_adapter(poset);
    let mut towers = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let Ok(chain) = poset.chain_ix(&subset) else { continue };
        match check_tower(&host, f, &x0, chain.members_ix()) {
            Ok(TowerCheck::Valid) => {
                towers.push(TowerTrace::from_sequence(chain.members_ix()).unwrap());
            }
            Ok(TowerCheck::Violation { .. }) | Err(TowerError::BaseMismatch { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    towers.sort_by_key(TowerTrace::len);
    Ok(towers)
}
