//! Edge coloring of `K_n` as a [`Problem`] for the rank GA.
//!
//! Genes are edge colors in `[0, palette)`. Initial genotypes and gene
//! mutations both draw colors uniformly from the palette.

use rand::Rng;

use crate::coloring::EdgeColoring;
use crate::error::Result;
use crate::fitness::{Evaluator, FitnessBreakdown, FitnessWeights};
use crate::rankga::{GaRng, Problem};

#[derive(Debug, Clone)]
pub struct ColoringProblem {
    evaluator: Evaluator,
}

impl ColoringProblem {
    pub fn new(n: usize, palette_size: usize, weights: FitnessWeights) -> Result<Self> {
        weights.validate()?;
        Ok(Self { evaluator: Evaluator::new(n, palette_size, weights)? })
    }

    pub fn order(&self) -> usize {
        self.evaluator.graph().order()
    }

    pub fn palette_size(&self) -> usize {
        self.evaluator.palette()
    }

    pub fn weights(&self) -> &FitnessWeights {
        self.evaluator.weights()
    }

    pub fn coloring(&self, genes: &[u32]) -> Result<EdgeColoring> {
        EdgeColoring::new(self.order(), self.palette_size(), genes.to_vec())
    }
}

impl Problem for ColoringProblem {
    type Gene = u32;
    type Detail = FitnessBreakdown;

    fn genotype_size(&self) -> usize {
        self.evaluator.graph().edge_count()
    }

    fn random_genotype(&self, rng: &mut GaRng) -> Vec<u32> {
        let palette = self.palette_size() as u32;
        (0..self.genotype_size()).map(|_| rng.random_range(0..palette)).collect()
    }

    fn mutate_gene(&self, gene: &mut u32, rng: &mut GaRng) {
        *gene = rng.random_range(0..self.palette_size() as u32);
    }

    fn evaluate(&self, genes: &[u32]) -> (f64, FitnessBreakdown) {
        let b = self.evaluator.evaluate(genes);
        (b.value, b)
    }
}
