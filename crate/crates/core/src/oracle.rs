//! Exhaustive computation of `psi_c(n)` for small `n`.
//!
//! Colorings are enumerated up to color relabeling as restricted-growth
//! strings over the canonical edge order: edge 0 gets color 0 and every
//! later edge gets a color at most one above the largest so far. For each
//! target `k`, from the cap downwards, the search looks for a string with
//! exactly `k` colors that is complete and connected; the first feasible `k`
//! is `psi_c(n)`.
//!
//! Two monotone certificates cut branches:
//! * an uncovered used pair `(a, b)` is dead when no vertex lacks at most as
//!   many of `a`, `b` as it has undecided edges;
//! * a split class is dead when its pieces stay apart even after adding
//!   every undecided edge.
//!
//! Witnesses are certified by [`crate::coloring::verify`], never by the
//! pruning logic. The tree is split by prefix across workers; the witness
//! reported is the lexicographically least one, independent of scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::Serialize;

use crate::bounds;
use crate::coloring::{verify, EdgeColoring};
use crate::error::{domain, Result};
use crate::graph::CompleteGraph;
use crate::rankga::Execution;

pub const MAX_ORDER: usize = 6;
/// Orders above this need an explicit node budget.
pub const UNBUDGETED_MAX_ORDER: usize = 5;
const PREFIX_DEPTH: usize = 6;
const NODE_BATCH: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cap {
    /// `min(edge_count, known upper bound)`.
    KnownUpper,
    /// `edge_count`; independent of any reference table.
    EdgeCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Limit on search nodes; `None` is unlimited.
    pub budget: Option<u64>,
    pub pruning: bool,
    pub cap: Cap,
    pub execution: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { budget: None, pruning: true, cap: Cap::KnownUpper, execution: Execution::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    /// `psi_c` is proven optimal.
    Complete,
    /// The budget ran out before optimality was settled.
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub n: usize,
    pub status: OracleStatus,
    /// Exact value when complete.
    pub psi_c: Option<usize>,
    /// Largest `k` not yet refuted; `psi_c <= upper` always holds.
    pub upper: usize,
    /// Verified complete and connected, with `psi_c` colors when complete.
    pub witness: Option<EdgeColoring>,
    /// Canonical colorings (leaves) examined.
    pub explored: u64,
    /// Search nodes visited.
    pub nodes: u64,
}

/// `psi_c(n)` with the default configuration. `n = 6` requires a budget.
pub fn exact_psi_c(n: usize, budget: Option<u64>) -> Result<OracleResult> {
    exact_psi_c_with(n, &OracleConfig { budget, ..OracleConfig::default() })
}

pub fn exact_psi_c_with(n: usize, config: &OracleConfig) -> Result<OracleResult> {
    if !(2..=MAX_ORDER).contains(&n) {
        return domain(format!("oracle supports 2 <= n <= {MAX_ORDER}, got {n}"));
    }
    if n > UNBUDGETED_MAX_ORDER && config.budget.is_none() {
        return domain(format!("n = {n} needs an explicit node budget"));
    }
    let g = CompleteGraph::new(n)?;
    let m = g.edge_count();
    let cap = match config.cap {
        Cap::EdgeCount => m,
        Cap::KnownUpper => bounds::table_lookup(n)?.known_upper.map_or(m, |u| (u as usize).min(m)),
    };
    let nodes = AtomicU64::new(0);
    let mut explored = 0;

    for k in (1..=cap).rev() {
        let out = search(&g, Some(k), config, &nodes);
        explored += out.explored;
        if out.aborted {
            return Ok(OracleResult {
                n,
                status: OracleStatus::Incomplete,
                psi_c: None,
                upper: k,
                witness: None,
                explored,
                nodes: nodes.load(Ordering::Relaxed),
            });
        }
        if let Some(colors) = out.witness {
            let witness = EdgeColoring::new(n, k, colors)?;
            let report = verify(&witness);
            assert!(report.is_valid() && report.color_count() == k, "oracle witness failed verification: {report:?}");
            return Ok(OracleResult {
                n,
                status: OracleStatus::Complete,
                psi_c: Some(k),
                upper: k,
                witness: Some(witness),
                explored,
                nodes: nodes.load(Ordering::Relaxed),
            });
        }
    }
    unreachable!("the monochromatic coloring is always complete and connected")
}

/// Number of canonical colorings of `K_n` reached as leaves. Without
/// pruning this is the Bell number `B(n(n-1)/2)`; with pruning only
/// complete connected colorings survive.
pub fn count_canonical(n: usize, pruning: bool) -> Result<u64> {
    if !(2..=UNBUDGETED_MAX_ORDER).contains(&n) {
        return domain(format!("enumeration supports 2 <= n <= {UNBUDGETED_MAX_ORDER}, got {n}"));
    }
    let g = CompleteGraph::new(n)?;
    let config = OracleConfig { pruning, ..OracleConfig::default() };
    let nodes = AtomicU64::new(0);
    Ok(search(&g, None, &config, &nodes).explored)
}

/// Count of complete connected colorings among all canonical ones, checked
/// leaf by leaf with the verifier (no pruning). For tests and diagnostics.
pub fn count_valid_unpruned(n: usize) -> Result<u64> {
    if !(2..=UNBUDGETED_MAX_ORDER).contains(&n) {
        return domain(format!("enumeration supports 2 <= n <= {UNBUDGETED_MAX_ORDER}, got {n}"));
    }
    let g = CompleteGraph::new(n)?;
    let m = g.edge_count();
    let mut valid = 0;
    let mut colors = vec![0u32; m];
    // Iterative restricted-growth enumeration, independent of `Search`.
    let mut maxes = vec![0u32; m];
    loop {
        let c = EdgeColoring::new(n, m, colors.clone())?;
        if verify(&c).is_valid() {
            valid += 1;
        }
        // next restricted-growth string
        let mut i = m - 1;
        loop {
            if i == 0 {
                return Ok(valid);
            }
            let prev_max = maxes[i - 1];
            if colors[i] <= prev_max {
                colors[i] += 1;
                maxes[i] = prev_max.max(colors[i]);
                for j in i + 1..m {
                    colors[j] = 0;
                    maxes[j] = maxes[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

struct SearchOutcome {
    witness: Option<Vec<u32>>,
    explored: u64,
    aborted: bool,
}

fn search(g: &CompleteGraph, target: Option<usize>, config: &OracleConfig, nodes: &AtomicU64) -> SearchOutcome {
    let m = g.edge_count();
    let depth = PREFIX_DEPTH.min(m);
    let prefixes = prefixes(depth, target);
    let spent = config.budget.is_some_and(|b| nodes.load(Ordering::Relaxed) >= b);
    let stop = AtomicBool::new(spent);

    let run = |prefix: &Vec<u32>| -> SearchOutcome {
        let mut s = Search::new(g, target, config, nodes, &stop);
        for (e, &c) in prefix.iter().enumerate() {
            s.assign(e, c);
            if s.dead(e) {
                return SearchOutcome { witness: None, explored: 0, aborted: false };
            }
        }
        let found = s.dfs(depth);
        s.flush();
        SearchOutcome { witness: found.then(|| s.colors.clone()), explored: s.explored, aborted: s.aborted }
    };

    let outcomes: Vec<SearchOutcome> = match config.execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            prefixes.par_iter().map(run).collect()
        }
        _ => prefixes.iter().map(run).collect(),
    };

    let aborted = outcomes.iter().any(|o| o.aborted);
    SearchOutcome {
        explored: outcomes.iter().map(|o| o.explored).sum(),
        witness: if aborted { None } else { outcomes.into_iter().find_map(|o| o.witness) },
        aborted,
    }
}

/// All restricted-growth prefixes of length `depth` (colors below `target`),
/// in lexicographic order.
fn prefixes(depth: usize, target: Option<usize>) -> Vec<Vec<u32>> {
    let limit = target.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(depth);
    fn rec(cur: &mut Vec<u32>, used: usize, depth: usize, limit: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() == depth {
            out.push(cur.clone());
            return;
        }
        let top = if used < limit { used } else { used - 1 };
        for c in 0..=top {
            cur.push(c as u32);
            rec(cur, used.max(c + 1), depth, limit, out);
            cur.pop();
        }
    }
    rec(&mut cur, 0, depth, limit, &mut out);
    out
}

struct Search<'a> {
    g: &'a CompleteGraph,
    n: usize,
    m: usize,
    target: Option<usize>,
    pruning: bool,
    budget: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    colors: Vec<u32>,
    used: usize,
    width: usize,
    /// `present[v * width + c]`: number of `c`-edges at `v`.
    present: Vec<u16>,
    undecided: Vec<usize>,
    classes: Vec<Vec<usize>>,
    parent: Vec<usize>,
    explored: u64,
    local_nodes: u64,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(
        g: &'a CompleteGraph,
        target: Option<usize>,
        config: &OracleConfig,
        nodes: &'a AtomicU64,
        stop: &'a AtomicBool,
    ) -> Self {
        let n = g.order();
        let m = g.edge_count();
        let width = target.unwrap_or(m);
        Self {
            g,
            n,
            m,
            target,
            pruning: config.pruning,
            budget: config.budget.unwrap_or(u64::MAX),
            nodes,
            stop,
            colors: Vec::with_capacity(m),
            used: 0,
            width,
            present: vec![0; n * width],
            undecided: vec![n - 1; n],
            classes: vec![Vec::new(); width],
            parent: vec![0; n],
            explored: 0,
            local_nodes: 0,
            aborted: false,
        }
    }

    fn assign(&mut self, e: usize, c: u32) {
        debug_assert_eq!(self.colors.len(), e);
        let c = c as usize;
        let (u, v) = self.g.endpoints(e);
        self.colors.push(c as u32);
        if c == self.used {
            self.used += 1;
        }
        self.present[u * self.width + c] += 1;
        self.present[v * self.width + c] += 1;
        self.undecided[u] -= 1;
        self.undecided[v] -= 1;
        self.classes[c].push(e);
    }

    fn unassign(&mut self, e: usize) {
        let c = self.colors.pop().expect("assigned") as usize;
        let (u, v) = self.g.endpoints(e);
        self.present[u * self.width + c] -= 1;
        self.present[v * self.width + c] -= 1;
        self.undecided[u] += 1;
        self.undecided[v] += 1;
        self.classes[c].pop();
        if self.classes[c].is_empty() {
            self.used -= 1;
        }
    }

    /// Whether the branch after assigning edge `e` can be cut.
    fn dead(&mut self, e: usize) -> bool {
        let remaining = self.m - e - 1;
        if let Some(k) = self.target {
            if self.used + remaining < k {
                return true;
            }
        }
        self.pruning && (self.pair_dead() || self.class_dead(e))
    }

    fn pair_dead(&self) -> bool {
        let w = self.width;
        for a in 0..self.used {
            for b in a + 1..self.used {
                let mut fixable = false;
                for v in 0..self.n {
                    let need = (self.present[v * w + a] == 0) as usize + (self.present[v * w + b] == 0) as usize;
                    if need <= self.undecided[v] {
                        fixable = true;
                        break;
                    }
                }
                if !fixable {
                    return true;
                }
            }
        }
        false
    }

    fn class_dead(&mut self, e: usize) -> bool {
        for c in 0..self.used {
            if self.classes[c].len() < 2 || self.class_connected(c, None) {
                continue;
            }
            if !self.class_connected(c, Some(e + 1)) {
                return true;
            }
        }
        false
    }

    /// Whether class `c` is connected, optionally after adding every edge
    /// from `extra_from` on.
    fn class_connected(&mut self, c: usize, extra_from: Option<usize>) -> bool {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        for i in 0..self.classes[c].len() {
            let (u, v) = self.g.endpoints(self.classes[c][i]);
            self.join(u, v);
        }
        if let Some(from) = extra_from {
            for later in from..self.m {
                let (u, v) = self.g.endpoints(later);
                self.join(u, v);
            }
        }
        let (u0, _) = self.g.endpoints(self.classes[c][0]);
        let root = self.find(u0);
        (0..self.classes[c].len()).all(|i| {
            let (u, _) = self.g.endpoints(self.classes[c][i]);
            self.find(u) == root
        })
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Counts a node; false once the shared budget is spent or another
    /// worker gave up.
    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes == NODE_BATCH {
            self.flush();
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total >= self.budget {
            self.stop.store(true, Ordering::Relaxed);
        }
    }

    fn dfs(&mut self, e: usize) -> bool {
        if !self.tick() {
            self.aborted = true;
            return false;
        }
        if e == self.m {
            self.explored += 1;
            return match self.target {
                Some(k) if self.used == k => {
                    let c = EdgeColoring::new(self.n, k, self.colors.clone()).expect("canonical string");
                    verify(&c).is_valid()
                }
                Some(_) => false,
                None => false,
            };
        }
        let limit = self.target.unwrap_or(self.m);
        let top = if self.used < limit { self.used } else { self.used - 1 };
        for c in 0..=top {
            self.assign(e, c as u32);
            let found = !self.dead(e) && self.dfs(e + 1);
            if found {
                return true;
            }
            self.unassign(e);
            if self.aborted {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bell numbers by the Bell triangle.
    fn bell(k: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..k {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn unpruned_enumeration_hits_bell_numbers() {
        assert_eq!(bell(6), 203);
        assert_eq!(count_canonical(4, false).unwrap(), 203);
        assert_eq!(count_canonical(2, false).unwrap(), bell(1));
        assert_eq!(count_canonical(3, false).unwrap(), bell(3));
        assert_eq!(count_canonical(5, false).unwrap(), bell(10));
    }

    #[test]
    fn pruning_keeps_exactly_the_valid_colorings() {
        for n in 2..=5 {
            assert_eq!(count_canonical(n, true).unwrap(), count_valid_unpruned(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn small_values() {
        for (n, expected) in [(2, 1), (3, 3), (4, 4), (5, 6)] {
            for cap in [Cap::KnownUpper, Cap::EdgeCount] {
                let r = exact_psi_c_with(n, &OracleConfig { cap, ..OracleConfig::default() }).unwrap();
                assert_eq!(r.status, OracleStatus::Complete);
                assert_eq!(r.psi_c, Some(expected), "n = {n}, {cap:?}");
                let w = r.witness.unwrap();
                let report = verify(&w);
                assert!(report.is_valid());
                assert_eq!(report.color_count(), expected);
            }
        }
    }

    #[test]
    fn unpruned_search_agrees() {
        for (n, expected) in [(3, 3), (4, 4), (5, 6)] {
            let config = OracleConfig { pruning: false, cap: Cap::EdgeCount, ..OracleConfig::default() };
            assert_eq!(exact_psi_c_with(n, &config).unwrap().psi_c, Some(expected));
        }
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let seq = OracleConfig { execution: Execution::Sequential, cap: Cap::EdgeCount, ..OracleConfig::default() };
        let par = OracleConfig { execution: Execution::Parallel, ..seq };
        for n in 2..=5 {
            let a = exact_psi_c_with(n, &seq).unwrap();
            let b = exact_psi_c_with(n, &par).unwrap();
            assert_eq!(a.witness, b.witness);
            assert_eq!(a.explored, b.explored);
        }
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // For K_4 the least canonical 4-coloring that is complete and connected.
        let r = exact_psi_c(4, None).unwrap();
        let w = r.witness.unwrap();
        let g = CompleteGraph::new(4).unwrap();
        let _ = g;
        let mut best: Option<Vec<u32>> = None;
        for code in 0..4u32.pow(6) {
            let colors: Vec<u32> = (0..6).map(|i| (code / 4u32.pow(5 - i)) % 4).collect();
            let c = EdgeColoring::new(4, 4, colors.clone()).unwrap();
            let r = verify(&c);
            if r.is_valid() && r.color_count() == 4 && best.as_ref().is_none_or(|b| colors < *b) {
                best = Some(colors);
            }
        }
        assert_eq!(w.colors(), best.unwrap().as_slice());
    }

    #[test]
    fn tiny_budget_is_incomplete() {
        let r = exact_psi_c_with(5, &OracleConfig { budget: Some(10), cap: Cap::EdgeCount, ..OracleConfig::default() })
            .unwrap();
        assert_eq!(r.status, OracleStatus::Incomplete);
        assert_eq!(r.psi_c, None);
        assert!(r.upper >= 6);
    }

    #[test]
    fn range_checks() {
        assert!(exact_psi_c(1, None).is_err());
        assert!(exact_psi_c(7, Some(1000)).is_err());
        assert!(exact_psi_c(6, None).is_err());
        assert!(count_canonical(6, false).is_err());
    }

    #[test]
    fn six_under_budget() {
        let r = exact_psi_c(6, Some(50_000_000)).unwrap();
        assert_eq!(r.status, OracleStatus::Complete);
        assert_eq!(r.psi_c, Some(7));
        assert!(verify(r.witness.as_ref().unwrap()).is_valid());
    }

    #[test]
    #[ignore = "refutes k = 15..8 exhaustively; minutes"]
    fn six_without_table_cap() {
        let config = OracleConfig { budget: Some(u64::MAX - 1), cap: Cap::EdgeCount, ..OracleConfig::default() };
        let r = exact_psi_c_with(6, &config).unwrap();
        eprintln!("{r:?}");
        assert_eq!(r.psi_c, Some(7));
    }
}
