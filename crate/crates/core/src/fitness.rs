//! Scalar fitness of an edge coloring.
//!
//! `value = alpha - beta*w_pairs - gamma*w_colors - std*w_std - avg*w_avg`
//! where `alpha` counts used colors, `beta` counts used color pairs with no
//! common vertex, `gamma` counts excess components summed over classes, and
//! `std`/`avg` describe the class-size distribution of the used colors.
//!
//! This is a separate code path from [`crate::coloring::verify`]: coverage is
//! tested by intersecting per-color vertex masks, and components are counted
//! with a union-find, so the two can cross-check each other.

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::CompleteGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights {
    pub weight_pairs: f64,
    pub weight_colors: f64,
    pub weight_std: f64,
    pub weight_avg: f64,
}

/// Defaults: 0.75 per uncovered pair and per excess component, 0.1 on the
/// class-size deviation and 0.05 on the mean class size.
///
/// Violation penalties below 1 let a coloring with one more color and a
/// single defect outscore a feasible one, which keeps the population moving
/// between feasible plateaus. Feasibility is never judged from fitness.
impl Default for FitnessWeights {
    fn default() -> Self {
        Self { weight_pairs: 0.75, weight_colors: 0.75, weight_std: 0.1, weight_avg: 0.05 }
    }
}

impl FitnessWeights {
    pub const ZERO: Self = Self { weight_pairs: 0.0, weight_colors: 0.0, weight_std: 0.0, weight_avg: 0.0 };

    pub fn validate(&self) -> Result<()> {
        let all = [self.weight_pairs, self.weight_colors, self.weight_std, self.weight_avg];
        if all.iter().all(|w| w.is_finite() && *w >= 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("fitness weights must be finite and >= 0: {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitnessBreakdown {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub std: f64,
    pub avg: f64,
    pub value: f64,
}

impl FitnessBreakdown {
    /// No uncovered pairs and no split classes.
    pub fn is_feasible(&self) -> bool {
        self.beta == 0 && self.gamma == 0
    }
}

pub fn evaluate(c: &EdgeColoring, w: &FitnessWeights) -> Result<FitnessBreakdown> {
    w.validate()?;
    let eval = Evaluator::new(c.order(), c.palette_size(), *w)?;
    Ok(eval.evaluate(c.colors()))
}

/// Reusable evaluator for raw genotypes of a fixed `(n, palette)`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    graph: CompleteGraph,
    palette: usize,
    weights: FitnessWeights,
}

impl Evaluator {
    pub fn new(n: usize, palette: usize, weights: FitnessWeights) -> Result<Self> {
        if palette == 0 {
            return Err(Error::InvalidParams("palette_size must be at least 1".into()));
        }
        Ok(Self { graph: CompleteGraph::new(n)?, palette, weights })
    }

    pub fn graph(&self) -> &CompleteGraph {
        &self.graph
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn weights(&self) -> &FitnessWeights {
        &self.weights
    }

    /// Evaluate a genotype already known to be valid for this evaluator.
    ///
    /// Panics if a gene is outside the palette.
    pub fn evaluate(&self, genes: &[u32]) -> FitnessBreakdown {
        let n = self.graph.order();
        let m = self.graph.edge_count();
        debug_assert_eq!(genes.len(), m);
        let words = n.div_ceil(64);

        let mut sizes = vec![0usize; self.palette];
        let mut masks = vec![0u64; self.palette * words];
        for (e, &c) in genes.iter().enumerate() {
            let c = c as usize;
            let (u, v) = self.graph.endpoints(e);
            sizes[c] += 1;
            masks[c * words + u / 64] |= 1 << (u % 64);
            masks[c * words + v / 64] |= 1 << (v % 64);
        }
        let used: Vec<usize> = (0..self.palette).filter(|&c| sizes[c] > 0).collect();
        let alpha = used.len();

        let mut beta = 0;
        for (i, &a) in used.iter().enumerate() {
            let ma = &masks[a * words..(a + 1) * words];
            for &b in &used[i + 1..] {
                let mb = &masks[b * words..(b + 1) * words];
                if ma.iter().zip(mb).all(|(x, y)| x & y == 0) {
                    beta += 1;
                }
            }
        }

        // Bucket edges by color, then union-find each class.
        let mut start = vec![0usize; self.palette + 1];
        for c in 0..self.palette {
            start[c + 1] = start[c] + sizes[c];
        }
        let mut fill = start.clone();
        let mut by_color = vec![0usize; m];
        for (e, &c) in genes.iter().enumerate() {
            by_color[fill[c as usize]] = e;
            fill[c as usize] += 1;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        let mut gamma = 0;
        for &c in &used {
            let class = &by_color[start[c]..start[c + 1]];
            for &e in class {
                let (u, v) = self.graph.endpoints(e);
                parent[u] = u;
                parent[v] = v;
            }
            let mut unions = 0;
            for &e in class {
                let (u, v) = self.graph.endpoints(e);
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    unions += 1;
                }
            }
            let vertices: usize = masks[c * words..(c + 1) * words].iter().map(|w| w.count_ones() as usize).sum();
            gamma += vertices - unions - 1;
        }

        let avg = m as f64 / alpha as f64;
        let var = used
            .iter()
            .map(|&c| {
                let d = sizes[c] as f64 - avg;
                d * d
            })
            .sum::<f64>()
            / alpha as f64;
        let std = var.sqrt();

        let w = &self.weights;
        let value = alpha as f64
            - beta as f64 * w.weight_pairs
            - gamma as f64 * w.weight_colors
            - std * w.weight_std
            - avg * w.weight_avg;
        FitnessBreakdown { alpha, beta, gamma, std, avg, value }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn only_pairs(w: f64) -> FitnessWeights {
        FitnessWeights { weight_pairs: w, ..FitnessWeights::ZERO }
    }

    #[test]
    fn left_fixture_scores_alpha() {
        let b = evaluate(&fixtures::k4_complete_four(), &FitnessWeights::ZERO).unwrap();
        assert_eq!(b.value, 4.0);
        assert_eq!((b.alpha, b.beta, b.gamma), (4, 0, 0));
    }

    #[test]
    fn right_fixture_pays_for_one_pair() {
        let b = evaluate(&fixtures::k4_incomplete_five(), &only_pairs(2.0)).unwrap();
        assert_eq!((b.alpha, b.beta, b.gamma), (5, 1, 0));
        assert_eq!(b.value, 3.0);
    }

    #[test]
    fn split_class_costs_gamma() {
        // color 0 on {01, 23}, everything else color 1
        let c = EdgeColoring::new(4, 2, vec![0, 1, 1, 1, 1, 0]).unwrap();
        let w = FitnessWeights { weight_colors: 2.0, ..FitnessWeights::ZERO };
        let b = evaluate(&c, &w).unwrap();
        assert_eq!((b.alpha, b.beta, b.gamma), (2, 0, 1));
        assert_eq!(b.value, 0.0);
    }

    #[test]
    fn three_piece_class_counts_two() {
        // K_6 order: 01 02 03 04 05 12 13 14 15 23 24 25 34 35 45
        let mut colors = vec![1u32; 15];
        colors[0] = 0; // 01
        colors[9] = 0; // 23
        colors[14] = 0; // 45
        let b = evaluate(&EdgeColoring::new(6, 2, colors).unwrap(), &FitnessWeights::ZERO).unwrap();
        assert_eq!(b.gamma, 2);
    }

    #[test]
    fn distribution_terms() {
        let b = evaluate(&fixtures::k4_complete_four(), &FitnessWeights::default()).unwrap();
        // sizes 2,2,1,1: avg 1.5, population std 0.5
        assert_eq!(b.avg, 1.5);
        assert_eq!(b.std, 0.5);
        assert!((b.value - (4.0 - 0.05 - 0.075)).abs() < 1e-12);
        let single = evaluate(&EdgeColoring::monochromatic(5, 3).unwrap(), &FitnessWeights::default()).unwrap();
        assert_eq!(single.std, 0.0);
        assert_eq!(single.avg, 10.0);
    }

    #[test]
    fn rejects_negative_weights() {
        let w = FitnessWeights { weight_std: -1.0, ..FitnessWeights::default() };
        assert!(evaluate(&fixtures::k4_complete_four(), &w).is_err());
    }

    fn arb_coloring() -> impl Strategy<Value = EdgeColoring> {
        (2usize..=10, 1usize..=16).prop_flat_map(|(n, palette)| {
            let m = n * (n - 1) / 2;
            proptest::collection::vec(0..palette as u32, m)
                .prop_map(move |colors| EdgeColoring::new(n, palette, colors).unwrap())
        })
    }

    fn arb_weights() -> impl Strategy<Value = FitnessWeights> {
        (0.0..5.0f64, 0.0..5.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b, c, d)| FitnessWeights {
            weight_pairs: a,
            weight_colors: b,
            weight_std: c,
            weight_avg: d,
        })
    }

    proptest! {
        #[test]
        fn formula_and_avg_identity(c in arb_coloring(), w in arb_weights()) {
            let b = evaluate(&c, &w).unwrap();
            let expect = b.alpha as f64 - b.beta as f64 * w.weight_pairs - b.gamma as f64 * w.weight_colors
                - b.std * w.weight_std - b.avg * w.weight_avg;
            prop_assert_eq!(b.value, expect);
            let n = c.order() as f64;
            prop_assert!((b.avg - n * (n - 1.0) / (2.0 * b.alpha as f64)).abs() < 1e-12);
        }

        #[test]
        fn feasible_with_zero_distribution_weights_scores_alpha(c in arb_coloring(), wp in 0.0..5.0f64, wc in 0.0..5.0f64) {
            let w = FitnessWeights { weight_pairs: wp, weight_colors: wc, ..FitnessWeights::ZERO };
            let b = evaluate(&c, &w).unwrap();
            if b.is_feasible() {
                prop_assert_eq!(b.value, b.alpha as f64);
            }
        }

        #[test]
        fn increasing_pair_weight_is_monotone(c in arb_coloring(), w in arb_weights(), extra in 0.01..3.0f64) {
            let lo = evaluate(&c, &w).unwrap();
            let heavier = FitnessWeights { weight_pairs: w.weight_pairs + extra, ..w };
            let hi = evaluate(&c, &heavier).unwrap();
            prop_assert!(hi.value <= lo.value);
            prop_assert_eq!(hi.value < lo.value, lo.beta > 0);
        }

        #[test]
        fn permutation_invariance(c in arb_coloring(), w in arb_weights(), keys in proptest::collection::vec(any::<u32>(), 10)) {
            let n = c.order();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by_key(|&v| (keys[v], v));
            let p = c.palette_size() as u32;
            let relabel: Vec<u32> = (0..p).map(|i| (i + keys[0]) % p).collect();
            let base = evaluate(&c, &w).unwrap();
            let moved = evaluate(&c.permute_vertices(&perm).unwrap().relabel_colors(&relabel).unwrap(), &w).unwrap();
            prop_assert_eq!((base.alpha, base.beta, base.gamma), (moved.alpha, moved.beta, moved.gamma));
            prop_assert!((base.value - moved.value).abs() < 1e-9);
        }
    }
}
