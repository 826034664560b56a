//! Edge colorings of `K_n` and the exact complete/connected verifier.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{edge_count, CompleteGraph};

/// One color per edge of `K_n`, in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    palette_size: usize,
    colors: Vec<u32>,
}

impl EdgeColoring {
    pub fn new(n: usize, palette_size: usize, colors: Vec<u32>) -> Result<Self> {
        let m = edge_count(n)?;
        if palette_size == 0 {
            return Err(Error::InvalidParams("palette_size must be at least 1".into()));
        }
        if colors.len() != m {
            return Err(Error::InvalidGenotype {
                index: colors.len().min(m),
                reason: format!("expected {m} colors for K_{n}, got {}", colors.len()),
            });
        }
        if let Some((index, &c)) = colors.iter().enumerate().find(|(_, &c)| c as usize >= palette_size) {
            return Err(Error::InvalidGenotype {
                index,
                reason: format!("color {c} outside palette [0, {palette_size})"),
            });
        }
        Ok(Self { n, palette_size, colors })
    }

    /// Every edge gets color 0.
    pub fn monochromatic(n: usize, palette_size: usize) -> Result<Self> {
        Self::new(n, palette_size, vec![0; edge_count(n)?])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn into_colors(self) -> Vec<u32> {
        self.colors
    }

    /// Apply `perm` to the color labels. `perm` must be a permutation of
    /// `0..palette_size`.
    pub fn relabel_colors(&self, perm: &[u32]) -> Result<Self> {
        check_permutation(perm, self.palette_size)?;
        let colors = self.colors.iter().map(|&c| perm[c as usize]).collect();
        Self::new(self.n, self.palette_size, colors)
    }

    /// Rename vertex `v` to `perm[v]`, carrying each edge color along.
    pub fn permute_vertices(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let g = CompleteGraph::new(self.n)?;
        let mut colors = vec![0; self.colors.len()];
        for (e, &c) in self.colors.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            let (a, b) = (perm[u], perm[v]);
            colors[g.index(a.min(b), a.max(b))?] = c;
        }
        Self::new(self.n, self.palette_size, colors)
    }
}

fn check_permutation<T: Copy + TryInto<usize>>(perm: &[T], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return domain(format!("permutation has length {}, expected {len}", perm.len()));
    }
    for &p in perm {
        match p.try_into() {
            Ok(i) if i < len && !seen[i] => seen[i] = true,
            _ => return domain("not a permutation"),
        }
    }
    Ok(())
}

/// Diagnostics for a coloring: chromatic classes, their connectivity, and
/// which pairs of used colors never meet at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub used_colors: Vec<u32>,
    pub class_sizes: BTreeMap<u32, usize>,
    pub class_components: BTreeMap<u32, usize>,
    pub uncovered_pairs: Vec<(u32, u32)>,
    pub is_connected: bool,
    pub is_complete: bool,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.is_complete && self.is_connected
    }

    pub fn color_count(&self) -> usize {
        self.used_colors.len()
    }
}

/// Decide completeness and connectedness of `c`.
///
/// Coverage uses per-vertex color sets: the pair `(a, b)` is covered when
/// some vertex sees both colors. Class connectivity is a BFS over each
/// class's induced subgraph. Unused palette colors play no role.
pub fn verify(c: &EdgeColoring) -> VerificationReport {
    let g = CompleteGraph::new(c.n).expect("EdgeColoring holds a valid order");
    let palette = c.palette_size;

    let mut class_edges: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (e, &col) in c.colors.iter().enumerate() {
        class_edges.entry(col).or_default().push(e);
    }
    let used_colors: Vec<u32> = class_edges.keys().copied().collect();
    let class_sizes = class_edges.iter().map(|(&k, v)| (k, v.len())).collect();

    let class_components: BTreeMap<u32, usize> =
        class_edges.iter().map(|(&col, edges)| (col, bfs_components(&g, edges))).collect();

    // Per-vertex color sets.
    let mut at_vertex = vec![BitSet::new(palette); c.n];
    for (e, &col) in c.colors.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        at_vertex[u].insert(col as usize);
        at_vertex[v].insert(col as usize);
    }
    let mut covered = vec![false; palette * palette];
    for set in &at_vertex {
        let present: Vec<usize> = set.iter().collect();
        for (i, &a) in present.iter().enumerate() {
            for &b in &present[i + 1..] {
                covered[a * palette + b] = true;
            }
        }
    }
    let mut uncovered_pairs = Vec::new();
    for (i, &a) in used_colors.iter().enumerate() {
        for &b in &used_colors[i + 1..] {
            if !covered[a as usize * palette + b as usize] {
                uncovered_pairs.push((a, b));
            }
        }
    }

    let is_connected = class_components.values().all(|&k| k == 1);
    let is_complete = uncovered_pairs.is_empty();
    VerificationReport { used_colors, class_sizes, class_components, uncovered_pairs, is_connected, is_complete }
}

pub fn count_colors(c: &EdgeColoring) -> usize {
    let mut seen = vec![false; c.palette_size];
    c.colors.iter().filter(|&&col| !std::mem::replace(&mut seen[col as usize], true)).count()
}

/// Number of connected components of the class of `color`.
pub fn class_components(c: &EdgeColoring, color: u32) -> Result<usize> {
    let edges: Vec<usize> = c.colors.iter().enumerate().filter(|(_, &col)| col == color).map(|(e, _)| e).collect();
    if edges.is_empty() {
        return domain(format!("color {color} is not used"));
    }
    let g = CompleteGraph::new(c.n)?;
    Ok(bfs_components(&g, &edges))
}

fn bfs_components(g: &CompleteGraph, edges: &[usize]) -> usize {
    let n = g.order();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in edges {
        let (u, v) = g.endpoints(e);
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if adj[start].is_empty() || seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    components
}

#[derive(Debug, Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        Self { words: vec![0; bits.div_ceil(64)] }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + bit)
            })
        })
    }
}

/// Run details attached to a saved solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ColoringMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitness: Option<f64>,
}

/// On-disk coloring: `{"n":..,"palette_size":..,"colors":[..],"meta":{..}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringFile {
    pub n: usize,
    pub palette_size: usize,
    pub colors: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<ColoringMeta>,
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("field `colors`: {0}")]
    Invalid(Error),
}

impl ColoringFile {
    pub fn new(coloring: &EdgeColoring, meta: Option<ColoringMeta>) -> Self {
        Self { n: coloring.n, palette_size: coloring.palette_size, colors: coloring.colors.clone(), meta }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, FileError> {
        let file: Self = serde_json::from_str(text)?;
        file.coloring().map_err(FileError::Invalid)?;
        Ok(file)
    }

    /// Compact JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("coloring serializes");
        s.push('\n');
        s
    }

    pub fn coloring(&self) -> Result<EdgeColoring> {
        EdgeColoring::new(self.n, self.palette_size, self.colors.clone())
    }
}
