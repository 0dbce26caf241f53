//! Independent oracles for the integration tests. Nothing here calls the
//! code path it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bourbaki_tower::dataflow::ControlFlowGraph;
use bourbaki_tower::ordinal::Ordinal;
use bourbaki_tower::poset::FinitePoset;
use rand::Rng;

/// Labelled-poset counts for n = 0..=5 (OEIS A001035).
pub const LABELED_POSET_COUNTS: [usize; 6] = [1, 1, 3, 19, 219, 4231];

/// Counts partial orders on `n` points by testing every off-diagonal relation.
pub fn count_posets_by_filtering(n: usize) -> usize {
    let off: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut count = 0;
    for bits in 0u64..(1 << off.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            rel[i][j] = bits >> k & 1 == 1;
        }
        let antisymmetric = (0..n).all(|i| (0..n).all(|j| i == j || !(rel[i][j] && rel[j][i])));
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel[i][j] && rel[j][k]) || rel[i][k])));
        if antisymmetric && transitive {
            count += 1;
        }
    }
    count
}

/// Plain orbit iteration: `x0, f(x0), …` until the first repeat.
pub fn orbit(f: &[usize], x0: usize) -> Vec<usize> {
    let mut seen = vec![x0];
    let mut x = x0;
    loop {
        let y = f[x];
        if seen.contains(&y) {
            return seen;
        }
        seen.push(y);
        x = y;
    }
}

/// All total maps `f` on `n` points, as image vectors (`n^n` of them).
pub fn all_maps(n: usize) -> Vec<Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect()
        })
        .collect()
}

/// `WIS_Y(y)` for an ascending sequence `y_seq`.
fn wis(p: &FinitePoset, seq: &[usize], y: usize) -> BTreeSet<usize> {
    seq.iter().copied().filter(|&z| p.leq_ix(z, y)).collect()
}

/// The common part `{y ∈ Y ∩ Y' | WIS_Y(y) = WIS_Y'(y)}`, ascending.
pub fn agreeing_segment(p: &FinitePoset, a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|y| b.contains(y) && wis(p, a, *y) == wis(p, b, *y)).collect()
}

/// `A` is an initial segment of `B`, straight from the definition.
pub fn initial_segment(p: &FinitePoset, a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
        && a.iter().all(|&x| b.iter().all(|&y| !p.lt_ix(y, x) || a.contains(&y)))
}

/// Kleene worklist solver for reaching definitions over `BTreeSet`s.
pub fn worklist_reaching(cfg: &ControlFlowGraph) -> (Vec<BTreeSet<usize>>, Vec<BTreeSet<usize>>) {
    let n = cfg.nodes.len();
    let mut succs = vec![Vec::new(); n];
    for (to, preds) in cfg.preds.iter().enumerate() {
        for &from in preds {
            succs[from].push(to);
        }
    }
    let mut ins = vec![BTreeSet::new(); n];
    let mut outs = vec![BTreeSet::new(); n];
    let mut work: Vec<usize> = (0..n).collect();
    while let Some(k) = work.pop() {
        let inn: BTreeSet<usize> = cfg.preds[k].iter().flat_map(|&p| outs[p].iter().copied()).collect();
        let kill: BTreeSet<usize> = cfg.kill[k].iter().copied().collect();
        let out: BTreeSet<usize> =
            cfg.gen[k].iter().copied().chain(inn.difference(&kill).copied()).collect();
        ins[k] = inn;
        if out != outs[k] {
            outs[k] = out;
            for &s in &succs[k] {
                if !work.contains(&s) {
                    work.push(s);
                }
            }
        }
    }
    (ins, outs)
}

pub fn bits_to_set(bits: u64) -> BTreeSet<usize> {
    (0..64).filter(|d| bits >> d & 1 == 1).collect()
}

/// A random canonical ordinal with nesting depth ≤ `depth` and coefficients ≤ 9.
pub fn random_ordinal(rng: &mut impl Rng, depth: u32) -> Ordinal {
    if depth == 0 || rng.random_bool(0.25) {
        return Ordinal::finite(rng.random_range(0..10));
    }
    let k = rng.random_range(0..4);
    let mut terms: Vec<(Ordinal, u64)> =
        (0..k).map(|_| (random_ordinal(rng, depth - 1), rng.random_range(1..10))).collect();
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    terms.dedup_by(|a, b| a.0 == b.0);
    Ordinal::from_terms(terms).unwrap()
}

/// `x + n` by repeated successor.
pub fn plus_finite(x: &Ordinal, n: u64) -> Ordinal {
    (0..n).fold(x.clone(), |acc, _| acc.successor())
}
