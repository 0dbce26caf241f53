//! Reaching definitions as a tower over a product of powersets.
//!
//! The analysis state holds an IN and an OUT set per node; coordinate `2k`
//! of the product lattice is `IN(k)`, coordinate `2k + 1` is `OUT(k)`. One
//! global step recomputes every node from the current state,
//!
//! ```text
//! IN(n)  = ∪ OUT(p) for p in preds(n)
//! OUT(n) = gen(n) ∪ (IN(n) \ kill(n))
//! ```
//!
//! and the map handed to the tower engine joins that result with the
//! current state, `F(S) = S ⊔ step(S)`, so `S ≤ F(S)` holds by
//! construction. Starting from the bottom tuple, the tower's top is the
//! least solution of the equations.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::map::FnMap;
use crate::provider::{make_powerset_product, PowersetProduct};
use crate::tower::{build_tower_transfinite, Budget, TowerTrace, TransfiniteOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DataflowError {
    #[error("invalid control-flow graph: {0}")]
    InvalidCfg(String),
    #[error("tower engine did not reach a fixed point: {0}")]
    Engine(String),
}

/// A control-flow graph with per-node gen/kill sets over numbered definitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ControlFlowGraph {
    pub nodes: Vec<String>,
    pub defs: Vec<String>,
    /// `preds[n]` lists the predecessors of node `n`.
    pub preds: Vec<Vec<usize>>,
    pub gen: Vec<Vec<usize>>,
    pub kill: Vec<Vec<usize>>,
}

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &d| m | 1 << d)
}

impl ControlFlowGraph {
    /// A graph with the given nodes and definitions and no edges or effects.
    pub fn new(nodes: &[&str], defs: &[&str]) -> Self {
        let n = nodes.len();
        Self {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            defs: defs.iter().map(|s| s.to_string()).collect(),
            preds: vec![Vec::new(); n],
            gen: vec![Vec::new(); n],
            kill: vec![Vec::new(); n],
        }
    }

    fn node(&self, label: &str) -> usize {
        self.nodes.iter().position(|n| n == label).unwrap_or_else(|| panic!("unknown node {label}"))
    }

    fn def(&self, label: &str) -> usize {
        self.defs.iter().position(|d| d == label).unwrap_or_else(|| panic!("unknown definition {label}"))
    }

    /// Builder helper for fixtures; panics on unknown labels.
    pub fn edge(mut self, from: &str, to: &str) -> Self {
        let (a, b) = (self.node(from), self.node(to));
        self.preds[b].push(a);
        self
    }

    pub fn gens(mut self, node: &str, def: &str) -> Self {
        let (n, d) = (self.node(node), self.def(def));
        self.gen[n].push(d);
        self
    }

    pub fn kills(mut self, node: &str, def: &str) -> Self {
        let (n, d) = (self.node(node), self.def(def));
        self.kill[n].push(d);
        self
    }

    pub fn validate(&self) -> Result<(), DataflowError> {
        let n = self.nodes.len();
        let bad = |msg: String| Err(DataflowError::InvalidCfg(msg));
        if n == 0 {
            return bad("no nodes".into());
        }
        if self.defs.len() > 64 {
            return bad(format!("{} definitions; at most 64 are supported", self.defs.len()));
        }
        if self.preds.len() != n || self.gen.len() != n || self.kill.len() != n {
            return bad("per-node tables do not match the node count".into());
        }
        for k in 0..n {
            if let Some(p) = self.preds[k].iter().find(|&&p| p >= n) {
                return bad(format!("edge from undeclared node #{p} into {}", self.nodes[k]));
            }
            if let Some(d) = self.gen[k].iter().chain(&self.kill[k]).find(|&&d| d >= self.defs.len()) {
                return bad(format!("undeclared definition #{d} at {}", self.nodes[k]));
            }
            if mask(&self.gen[k]) & mask(&self.kill[k]) != 0 {
                return bad(format!("gen and kill overlap at {}", self.nodes[k]));
            }
        }
        Ok(())
    }

    /// One Jacobi step of the reaching-definitions equations over a packed state.
    fn step(&self, s: &[u64]) -> Vec<u64> {
        let mut out = vec![0; s.len()];
        for k in 0..self.nodes.len() {
            out[2 * k] = self.preds[k].iter().fold(0, |acc, &p| acc | s[2 * p + 1]);
            out[2 * k + 1] = mask(&self.gen[k]) | (s[2 * k] & !mask(&self.kill[k]));
        }
        out
    }

    pub fn lattice(&self) -> Result<PowersetProduct, DataflowError> {
        make_powerset_product(&vec![self.defs.len(); 2 * self.nodes.len()])
            .map_err(|e| DataflowError::InvalidCfg(e.to_string()))
    }

    /// `F(S) = S ⊔ step(S)`.
    pub fn global_step(&self, s: &[u64]) -> Vec<u64> {
        self.step(s).iter().zip(s).map(|(a, b)| a | b).collect()
    }
}

/// Per-node IN/OUT sets, as bit masks over definition indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisState {
    pub ins: Vec<u64>,
    pub outs: Vec<u64>,
}

impl AnalysisState {
    fn from_packed(s: &[u64]) -> Self {
        Self {
            ins: s.iter().step_by(2).copied().collect(),
            outs: s.iter().skip(1).step_by(2).copied().collect(),
        }
    }

    /// Definition labels in `bits`, in declaration order.
    pub fn labels<'c>(cfg: &'c ControlFlowGraph, bits: u64) -> Vec<&'c str> {
        cfg.defs.iter().enumerate().filter(|(d, _)| bits >> d & 1 == 1).map(|(_, s)| s.as_str()).collect()
    }

    pub fn in_of<'c>(&self, cfg: &'c ControlFlowGraph, node: usize) -> Vec<&'c str> {
        Self::labels(cfg, self.ins[node])
    }

    pub fn out_of<'c>(&self, cfg: &'c ControlFlowGraph, node: usize) -> Vec<&'c str> {
        Self::labels(cfg, self.outs[node])
    }

    /// A plain-text IN/OUT table.
    pub fn table(&self, cfg: &ControlFlowGraph) -> String {
        let width = cfg.nodes.iter().map(String::len).max().unwrap_or(4).max(4);
        let mut s = format!("{:width$}  {:<24}  OUT\n", "node", "IN");
        for k in 0..cfg.nodes.len() {
            let ins = format!("{{{}}}", self.in_of(cfg, k).join(", "));
            let outs = format!("{{{}}}", self.out_of(cfg, k).join(", "));
            s.push_str(&format!("{:width$}  {:<24}  {}\n", cfg.nodes[k], ins, outs));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DataflowResult {
    pub state: AnalysisState,
    /// The tower from the bottom tuple to the solution, packed per coordinate.
    pub trace: TowerTrace<Vec<u64>>,
}

/// Solves reaching definitions by building the largest tower of the
/// accumulate-only global step from the bottom state.
pub fn reaching_definitions(cfg: &ControlFlowGraph) -> Result<DataflowResult, DataflowError> {
    cfg.validate()?;
    let lattice = cfg.lattice()?;
    let f = FnMap::new(|s: &Vec<u64>| cfg.global_step(s));
    // every recorded stage adds at least one bit, so one block always suffices
    let budget = Budget { successor_steps_per_block: lattice.height() + 1, max_accelerations: 0 };
    match build_tower_transfinite(&lattice, &f, lattice.bottom(), budget) {
        Ok(TransfiniteOutcome::Fixed(cert)) if cert.is_valid() => Ok(DataflowResult {
            state: AnalysisState::from_packed(&cert.omega),
            trace: cert.tower,
        }),
        Ok(other) => Err(DataflowError::Engine(format!("{other:?}"))),
        Err(e) => Err(DataflowError::Engine(e.to_string())),
    }
}

/// Shipped example graphs: `single`, `chain2`, `diamond`.
pub mod fixtures {
    use super::ControlFlowGraph;

    pub const NAMES: [&str; 3] = ["single", "chain2", "diamond"];

    pub fn single() -> ControlFlowGraph {
        ControlFlowGraph::new(&["n1"], &["d1"]).gens("n1", "d1")
    }

    pub fn chain2() -> ControlFlowGraph {
        ControlFlowGraph::new(&["n1", "n2"], &["d1", "d2"])
            .edge("n1", "n2")
            .gens("n1", "d1")
            .gens("n2", "d2")
    }

    pub fn diamond() -> ControlFlowGraph {
        ControlFlowGraph::new(&["n1", "n2", "n3", "n4"], &["d1", "d4"])
            .edge("n1", "n2")
            .edge("n1", "n3")
            .edge("n2", "n4")
            .edge("n3", "n4")
            .gens("n1", "d1")
            .kills("n4", "d1")
            .gens("n4", "d4")
    }

    pub fn by_name(name: &str) -> Option<ControlFlowGraph> {
        match name {
            "single" => Some(single()),
            "chain2" => Some(chain2()),
            "diamond" => Some(diamond()),
            _ => None,
        }
    }
}

/// A random graph with up to `max_nodes` nodes and `max_defs` definitions;
/// loops and self-edges allowed, gen and kill disjoint.
pub fn random_cfg(rng: &mut impl Rng, max_nodes: usize, max_defs: usize) -> ControlFlowGraph {
    let n = rng.random_range(1..=max_nodes);
    let d = rng.random_range(0..=max_defs);
    let nodes: Vec<String> = (1..=n).map(|k| format!("n{k}")).collect();
    let defs: Vec<String> = (1..=d).map(|k| format!("d{k}")).collect();
    let mut cfg = ControlFlowGraph {
        nodes,
        defs,
        preds: vec![Vec::new(); n],
        gen: vec![Vec::new(); n],
        kill: vec![Vec::new(); n],
    };
    for to in 0..n {
        for from in 0..n {
            if rng.random_bool(0.3) {
                cfg.preds[to].push(from);
            }
        }
    }
    for k in 0..n {
        for def in 0..d {
            match rng.random_range(0..4) {
                0 => cfg.gen[k].push(def),
                1 => cfg.kill[k].push(def),
                _ => {}
            }
        }
    }
    cfg
}
