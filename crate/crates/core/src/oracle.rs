//! Exhaustive and seeded verification over small posets.
//!
//! [`verify_corpus`] walks every labelled poset up to a size bound, every
//! progressive self-map of it and every base point, and checks the
//! fixed-point certificate, the tower prefix characterisation, pairwise
//! comparability of towers, agreement between the two builders, absence of
//! strictly progressive maps, and the maximal-element search under both
//! selector strategies. Failures are collected as data.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::map::TableMap;
use crate::maximality::{
    cartesian, enumerate_strictly_progressive, find_maximal, selector_map, ChoiceSelector,
};
use crate::poset::{close_covers, FinitePoset};
use crate::provider::make_finite_adapter;
use crate::tower::{
    build_tower_finite, build_tower_transfinite, check_tower, compare_towers, enumerate_towers,
    Budget, SegmentOrder, TransfiniteOutcome,
};

/// Largest size [`enumerate_labeled_posets`] accepts.
pub const LABELED_POSET_LIMIT: usize = 5;
/// Largest size [`enumerate_progressive_maps`] accepts.
pub const PROGRESSIVE_MAP_LIMIT: usize = 6;
/// Largest size random mode generates.
pub const RANDOM_LIMIT: usize = 8;

/// Seed used for the seeded selector strategy in corpus runs.
pub const SELECTOR_SEED: u64 = 0x5eed_b0b0;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} needs at most {limit} elements, got {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
}

/// Element labels used for generated posets.
pub fn corpus_label(i: usize) -> String {
    format!("e{i}")
}

/// Every partial order on `n` labelled elements, each exactly once.
///
/// Each unordered pair `{i, j}` is assigned one of three states
/// (incomparable, `i < j`, `j < i`); assignments whose relation is
/// transitive are kept. Antisymmetry and reflexivity hold by construction.
pub fn enumerate_labeled_posets(n: usize) -> Result<Vec<FinitePoset>, OracleError> {
    if n > LABELED_POSET_LIMIT {
        return Err(OracleError::TooLarge { what: "labelled poset enumeration", n, limit: LABELED_POSET_LIMIT });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut rows = vec![0u64; n];
    let total = 3usize.pow(pairs.len() as u32);
    for code in 0..total {
        for (i, row) in rows.iter_mut().enumerate() {
            *row = 1 << i;
        }
        let mut c = code;
        for &(i, j) in &pairs {
            match c % 3 {
                1 => rows[i] |= 1 << j,
                2 => rows[j] |= 1 << i,
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..n).all(|i| {
            (0..n).filter(|j| rows[i] >> j & 1 == 1).all(|j| rows[j] & !rows[i] == 0)
        });
        if transitive {
            let p = FinitePoset::from_fn(n, corpus_label, |i, j| rows[i] >> j & 1 == 1)
                .expect("transitive three-state assignments are partial orders");
            out.push(p);
        }
    }
    Ok(out)
}

/// Every total `f` with `x ≤ f(x)`: the product of the principal up-sets.
pub fn enumerate_progressive_maps(p: &FinitePoset) -> Result<Vec<TableMap>, OracleError> {
    if p.len() > PROGRESSIVE_MAP_LIMIT {
        return Err(OracleError::TooLarge {
            what: "progressive map enumeration",
            n: p.len(),
            limit: PROGRESSIVE_MAP_LIMIT,
        });
    }
    let up_sets: Vec<Vec<usize>> = (0..p.len()).map(|x| p.up_set_ix(x)).collect();
    Ok(cartesian(&up_sets).into_iter().map(|images| TableMap::new(p, images).unwrap()).collect())
}

/// A random poset on `n` elements: a random DAG over a shuffled order,
/// closed transitively.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> FinitePoset {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let density: f64 = rng.random_range(0.15..0.7);
    let labels: Vec<String> = (0..n).map(corpus_label).collect();
    let mut covers = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                covers.push((labels[order[a]].clone(), labels[order[b]].clone()));
            }
        }
    }
    close_covers(&labels, &covers).expect("edges follow a linear order, so there is no cycle")
}

/// A uniformly random progressive map: each image drawn from the principal up-set.
pub fn random_progressive_map(rng: &mut impl Rng, p: &FinitePoset) -> TableMap {
    let images = (0..p.len())
        .map(|x| {
            let up = p.up_set_ix(x);
            up[rng.random_range(0..up.len())]
        })
        .collect();
    TableMap::new(p, images).unwrap()
}

/// One (poset, progressive map, base) triple.
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub poset: FinitePoset,
    pub map: TableMap,
    pub base: usize,
}

impl Instance {
    /// Replayable instance with size drawn uniformly from `sizes`.
    pub fn random(seed: u64, sizes: std::ops::RangeInclusive<usize>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(sizes);
        let poset = random_poset(&mut rng, n.max(1));
        let map = random_progressive_map(&mut rng, &poset);
        let base = rng.random_range(0..poset.len());
        Self { seed, poset, map, base }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusOptions {
    /// Tower enumeration and pairwise comparison run for posets up to this size.
    pub tower_enumeration_limit: usize,
    /// Size of the random posets; `None` disables random mode.
    pub random_n: Option<usize>,
    pub random_seeds: Vec<u64>,
    /// Progressive maps sampled per random poset.
    pub maps_per_random_poset: usize,
}

impl CorpusOptions {
    pub fn exhaustive() -> Self {
        Self { tower_enumeration_limit: 8, random_n: None, random_seeds: Vec::new(), maps_per_random_poset: 8 }
    }

    pub fn with_random(mut self, n: usize, seeds: impl IntoIterator<Item = u64>) -> Self {
        self.random_n = Some(n);
        self.random_seeds = seeds.into_iter().collect();
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeCounts {
    pub n: usize,
    pub random: bool,
    pub posets: usize,
    pub progressive_maps: usize,
    pub instances: usize,
    pub towers_enumerated: usize,
    pub tower_pairs_compared: usize,
    pub maximal_searches: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    FixedPointCertificate,
    PrefixCharacterisation,
    TowerComparison,
    CrossBuilder,
    ProgressiveCount,
    StrictProgression,
    Maximality,
}

/// A counterexample, with enough data to rebuild the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: CheckKind,
    pub n: usize,
    /// Strict order pairs of the poset.
    pub poset: Vec<(String, String)>,
    pub map: Option<Vec<String>>,
    pub base: Option<String>,
    pub seed: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub per_n: Vec<SizeCounts>,
    pub failures: Vec<Failure>,
    pub random_seeds: Vec<u64>,
    pub elapsed_ms: u128,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counts(&self, n: usize, random: bool) -> Option<&SizeCounts> {
        self.per_n.iter().find(|c| c.n == n && c.random == random)
    }
}

struct Checker<'a> {
    p: &'a FinitePoset,
    n: usize,
    seed: Option<u64>,
    counts: &'a mut SizeCounts,
    failures: &'a mut Vec<Failure>,
    tower_limit: usize,
}

impl Checker<'_> {
    fn fail(&mut self, check: CheckKind, map: Option<&TableMap>, base: Option<usize>, detail: String) {
        let p = self.p;
        self.failures.push(Failure {
            check,
            n: self.n,
            poset: p
                .strict_pairs_ix()
                .into_iter()
                .map(|(i, j)| (p.label(i).to_string(), p.label(j).to_string()))
                .collect(),
            map: map.map(|f| f.images().iter().map(|&j| p.label(j).to_string()).collect()),
            base: base.map(|b| p.label(b).to_string()),
            seed: self.seed,
            detail,
        });
    }

    fn poset_level(&mut self) {
        let p = self.p;
        if !p.is_empty() {
            match enumerate_strictly_progressive(p) {
                Ok(maps) if maps.is_empty() => {}
                Ok(maps) => self.fail(
                    CheckKind::StrictProgression,
                    maps.first(),
                    None,
                    format!("{} strictly progressive maps found", maps.len()),
                ),
                Err(e) => self.fail(CheckKind::StrictProgression, None, None, e.to_string()),
            }
        }
        for x0 in 0..p.len() {
            self.maximality(x0);
        }
    }

    fn maximality(&mut self, x0: usize) {
        let p = self.p;
        for sel in [ChoiceSelector::least_id(p), ChoiceSelector::seeded(p, SELECTOR_SEED)] {
            self.counts.maximal_searches += 1;
            let f = selector_map(&sel);
            let outcome = match find_maximal(&sel, x0) {
                Ok(o) => o,
                Err(e) => {
                    self.fail(CheckKind::Maximality, Some(&f), Some(x0), e.to_string());
                    continue;
                }
            };
            let m = p.index_of(outcome.maximal.as_str()).unwrap();
            let trace: Vec<usize> =
                outcome.trace.elements().iter().map(|l| p.index_of(l.as_str()).unwrap()).collect();
            let problem = if !outcome.cone_is_empty || !p.is_maximal_ix(m) {
                Some(format!("{} is not maximal", outcome.maximal))
            } else if trace.len() > p.len() {
                Some(format!("{} stages on {} elements", trace.len(), p.len()))
            } else if find_maximal(&sel, x0).ok().as_ref() != Some(&outcome) {
                Some("selector search is not deterministic".into())
            } else if !check_tower(&make_finite_adapter(p), &f, &x0, &trace).is_ok_and(|c| c.is_valid()) {
                Some("selector trace is not a tower".into())
            } else {
                None
            };
            if let Some(detail) = problem {
                self.fail(CheckKind::Maximality, Some(&f), Some(x0), detail);
            }
        }
    }

    fn instance(&mut self, f: &TableMap, x0: usize) {
        let p = self.p;
        self.counts.instances += 1;
        let cert = match build_tower_finite(p, f, x0) {
            Ok(c) => c,
            Err(e) => {
                self.fail(CheckKind::FixedPointCertificate, Some(f), Some(x0), e.to_string());
                return;
            }
        };
        let omega = cert.tower.elements();
        // the certificate's own flags, then the same facts recomputed here
        let recomputed = omega.contains(&cert.omega)
            && f.image(cert.omega) == cert.omega
            && p.lub_ix(&omega) == Ok(Some(cert.omega));
        if !cert.is_valid() || !recomputed || omega.len() > p.len() {
            self.fail(CheckKind::FixedPointCertificate, Some(f), Some(x0), format!("{:?}", cert.checks));
        }

        let budget = Budget { successor_steps_per_block: p.len().max(1), max_accelerations: 1 };
        match build_tower_transfinite(&make_finite_adapter(p), f, x0, budget) {
            Ok(TransfiniteOutcome::Fixed(t)) if t == cert => {}
            other => self.fail(CheckKind::CrossBuilder, Some(f), Some(x0), format!("{other:?}")),
        }

        if p.len() > self.tower_limit {
            return;
        }
        let towers = match enumerate_towers(p, f, x0) {
            Ok(t) => t,
            Err(e) => {
                self.fail(CheckKind::PrefixCharacterisation, Some(f), Some(x0), e.to_string());
                return;
            }
        };
        self.counts.towers_enumerated += towers.len();
        let mut found: Vec<Vec<usize>> = towers.iter().map(|t| t.elements()).collect();
        found.sort();
        let mut prefixes: Vec<Vec<usize>> = (1..=omega.len()).map(|k| omega[..k].to_vec()).collect();
        prefixes.sort();
        if found != prefixes {
            self.fail(
                CheckKind::PrefixCharacterisation,
                Some(f),
                Some(x0),
                format!("towers {found:?} vs prefixes {prefixes:?}"),
            );
        }
        let chains: Vec<_> = found.iter().map(|t| p.chain_ix(t).unwrap()).collect();
        for (i, a) in chains.iter().enumerate() {
            for b in &chains[i..] {
                self.counts.tower_pairs_compared += 1;
                match compare_towers(a, b) {
                    Ok(rel) if rel.order != SegmentOrder::Incomparable => {}
                    other => {
                        let detail = format!("{:?} vs {:?}: {other:?}", a.members_ix(), b.members_ix());
                        self.fail(CheckKind::TowerComparison, Some(f), Some(x0), detail);
                    }
                }
            }
        }
    }
}

/// Runs every check on all labelled posets with `n ≤ n_max`, then on the
/// seeded random posets requested in `options`.
pub fn verify_corpus(n_max: usize, options: &CorpusOptions) -> Result<CorpusReport, OracleError> {
    let start = Instant::now();
    let mut report = CorpusReport { random_seeds: options.random_seeds.clone(), ..Default::default() };
    for n in 0..=n_max {
        let mut counts = SizeCounts { n, ..Default::default() };
        for p in enumerate_labeled_posets(n)? {
            counts.posets += 1;
            let maps = enumerate_progressive_maps(&p)?;
            counts.progressive_maps += maps.len();
            let mut checker = Checker {
                p: &p,
                n,
                seed: None,
                counts: &mut counts,
                failures: &mut report.failures,
                tower_limit: options.tower_enumeration_limit,
            };
            let expected: usize = (0..n).map(|x| p.up_set_ix(x).len()).product();
            if maps.len() != expected {
                checker.fail(
                    CheckKind::ProgressiveCount,
                    None,
                    None,
                    format!("{} maps, up-set product {expected}", maps.len()),
                );
            }
            checker.poset_level();
            for f in &maps {
                for x0 in 0..n {
                    checker.instance(f, x0);
                }
            }
        }
        report.per_n.push(counts);
    }
    if let Some(n) = options.random_n {
        if !(1..=RANDOM_LIMIT).contains(&n) {
            return Err(OracleError::TooLarge { what: "random corpus mode", n, limit: RANDOM_LIMIT });
        }
        let mut counts = SizeCounts { n, random: true, ..Default::default() };
        for &seed in &options.random_seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_poset(&mut rng, n);
            counts.posets += 1;
            let mut checker = Checker {
                p: &p,
                n,
                seed: Some(seed),
                counts: &mut counts,
                failures: &mut report.failures,
                tower_limit: options.tower_enumeration_limit,
            };
            checker.poset_level();
            for _ in 0..options.maps_per_random_poset {
                let f = random_progressive_map(&mut rng, &p);
                checker.counts.progressive_maps += 1;
                for x0 in 0..n {
                    checker.instance(&f, x0);
                }
            }
        }
        report.per_n.push(counts);
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}
