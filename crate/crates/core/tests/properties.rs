mod common;

use std::collections::BTreeSet;

use bourbaki_tower::format::{export_dot, parse_poset_doc, serialize_poset};
use bourbaki_tower::maximality::enumerate_strictly_progressive;
use bourbaki_tower::oracle::{enumerate_labeled_posets, random_poset, random_progressive_map};
use bourbaki_tower::poset::{validate_poset, FinitePoset};
use bourbaki_tower::provider::{make_finite_adapter, make_powerset_product, PosetProvider};
use bourbaki_tower::tower::build_tower_finite;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poset(seed: u64, n: usize) -> FinitePoset {
    random_poset(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn pairs_of(p: &FinitePoset) -> Vec<(String, String)> {
    p.strict_pairs_ix().into_iter().map(|(i, j)| (p.label(i).to_string(), p.label(j).to_string())).collect()
}

proptest! {
    #[test]
    fn random_posets_satisfy_the_axioms(seed in any::<u64>(), n in 0usize..8) {
        let p = poset(seed, n);
        for x in 0..n {
            prop_assert!(p.leq_ix(x, x));
            for y in 0..n {
                prop_assert!(x == y || !(p.leq_ix(x, y) && p.leq_ix(y, x)));
                for z in 0..n {
                    prop_assert!(!(p.leq_ix(x, y) && p.leq_ix(y, z)) || p.leq_ix(x, z));
                }
            }
        }
        let rebuilt = validate_poset(p.labels(), &pairs_of(&p)).unwrap();
        prop_assert_eq!(rebuilt.strict_pairs_ix(), p.strict_pairs_ix());
    }

    #[test]
    fn lub_is_the_least_upper_bound(seed in any::<u64>(), n in 1usize..7, mask in any::<u8>()) {
        let p = poset(seed, n);
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let uppers: Vec<usize> = (0..n).filter(|&u| subset.iter().all(|&s| p.leq_ix(s, u))).collect();
        let least: Vec<usize> = uppers.iter().copied().filter(|&u| uppers.iter().all(|&v| p.leq_ix(u, v))).collect();
        prop_assert!(least.len() <= 1);
        let got = if subset.is_empty() { None } else { p.lub_ix(&subset).unwrap() };
        if !subset.is_empty() {
            prop_assert_eq!(got, least.first().copied());
        }
        if let Ok(chain) = p.chain_ix(&subset) {
            // a nonempty finite chain has its largest member as lub
            if let Some(m) = chain.max_ix() {
                prop_assert_eq!(got, Some(m));
            }
        }
        prop_assert_eq!(make_finite_adapter(&p).lub_of_ascent(&subset).filter(|_| !subset.is_empty()), got);
    }

    #[test]
    fn segments_of_a_chain(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poset(&mut rng, n);
        let f = random_progressive_map(&mut rng, &p);
        let tower = orbit(f.images(), 0);
        let chain = p.chain_ix(&tower).unwrap();
        let min = chain.min_ix().unwrap();
        prop_assert!(chain.segments(p.label(min).as_str()).unwrap().0.is_empty());
        for &y in chain.members_ix() {
            let (is, wis) = chain.segments(p.label(y).as_str()).unwrap();
            let mut with_y = is.members_ix().to_vec();
            with_y.push(y);
            prop_assert_eq!(with_y.as_slice(), wis.members_ix());
            prop_assert!(is.is_initial_segment_of(&chain).unwrap());
        }
    }

    #[test]
    fn initial_segment_is_a_partial_order(seed in any::<u64>(), n in 1usize..6, masks in prop::array::uniform3(any::<u8>())) {
        let p = poset(seed, n);
        let subs: Vec<_> = masks
            .iter()
            .map(|m| p.chain_ix(&(0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()).ok())
            .collect();
        let seg = |a: &Option<_>, b: &Option<_>| match (a, b) {
            (Some(a), Some(b)) => Some(bourbaki_tower::poset::OrderedSubset::is_initial_segment_of(a, b).unwrap()),
            _ => None,
        };
        for a in &subs {
            if a.is_some() {
                prop_assert_eq!(seg(a, a), Some(true));
            }
            for b in &subs {
                if let (Some(x), Some(y)) = (a, b) {
                    prop_assert_eq!(seg(a, b), Some(initial_segment(&p, x.members_ix(), y.members_ix())));
                    if seg(a, b) == Some(true) && seg(b, a) == Some(true) {
                        prop_assert_eq!(x.members_ix(), y.members_ix());
                    }
                }
                for c in &subs {
                    if seg(a, b) == Some(true) && seg(b, c) == Some(true) {
                        prop_assert_eq!(seg(a, c), Some(true));
                    }
                }
            }
        }
    }

    #[test]
    fn powerset_product_is_a_lattice(sizes in prop::collection::vec(1usize..6, 1..4), words in prop::collection::vec(any::<u64>(), 9)) {
        let l = make_powerset_product(&sizes).unwrap();
        let clip = |k: usize| -> Vec<u64> {
            sizes.iter().enumerate().map(|(i, &s)| words[(3 * k + i) % words.len()] & ((1u64 << s) - 1)).collect()
        };
        let (a, b, c) = (clip(0), clip(1), clip(2));
        prop_assert!(l.leq(&a, &a));
        prop_assert!(l.leq(&l.bottom(), &a) && l.leq(&a, &l.top()));
        prop_assert!(!(l.leq(&a, &b) && l.leq(&b, &a)) || a == b);
        prop_assert!(!(l.leq(&a, &b) && l.leq(&b, &c)) || l.leq(&a, &c));
        let j = l.join(&a, &b);
        prop_assert!(l.leq(&a, &j) && l.leq(&b, &j));
        prop_assert!(!(l.leq(&a, &c) && l.leq(&b, &c)) || l.leq(&j, &c));
        prop_assert_eq!(l.lub_of_ascent(&[a.clone(), j.clone()]), Some(j));
    }

    #[test]
    fn certificate_and_strict_progression_exclude_each_other(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poset(&mut rng, n);
        let f = random_progressive_map(&mut rng, &p);
        let cert = build_tower_finite(&p, &f, 0).unwrap();
        prop_assert!(cert.is_valid());
        prop_assert!(!f.is_strictly_progressive(&p));
        if n <= 5 {
            prop_assert!(enumerate_strictly_progressive(&p).unwrap().is_empty());
        }
    }

    #[test]
    fn dot_edges_are_the_transitive_reduction(seed in any::<u64>(), n in 0usize..7) {
        let p = poset(seed, n);
        let mut covers = BTreeSet::new();
        for (x, y) in p.strict_pairs_ix() {
            if !(0..n).any(|z| p.lt_ix(x, z) && p.lt_ix(z, y)) {
                covers.insert(format!("\"{}\" -> \"{}\";", p.label(x), p.label(y)));
            }
        }
        let dot = export_dot(&p);
        let edges: BTreeSet<String> = dot.lines().filter(|l| l.contains("->")).map(|l| l.trim().to_owned()).collect();
        prop_assert_eq!(edges, covers);
    }

    #[test]
    fn poset_documents_round_trip(seed in any::<u64>(), n in 0usize..7) {
        let p = poset(seed, n).with_name(format!("P{seed}"));
        let back = parse_poset_doc(&serialize_poset(&p)).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn enumeration_is_sound_and_complete_for_small_n() {
    for n in 0..=3 {
        let got = enumerate_labeled_posets(n).unwrap();
        for p in &got {
            validate_poset(p.labels(), &pairs_of(p)).unwrap();
        }
        let relations: BTreeSet<Vec<(usize, usize)>> = got.iter().map(|p| p.strict_pairs_ix()).collect();
        assert_eq!(relations.len(), got.len(), "duplicates for n={n}");
        assert_eq!(got.len(), count_posets_by_filtering(n));
    }
}
