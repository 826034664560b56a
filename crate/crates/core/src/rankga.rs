//! Rank genetic algorithm.
//!
//! Every operator works on the population sorted by fitness (descending,
//! stable) and uses the rank `r_i = i / (N - 1)`:
//!
//! * selection clones individual `i` about `S (1 - r_i)^(S - 1)` times,
//!   first the integer parts, then a cyclic pass using the fractional parts
//!   as probabilities;
//! * recombination mates neighbours `(0,1)`, `(2,3)`, ... with complementary
//!   uniform crossover;
//! * mutation resamples each gene of individual `i` with probability
//!   `p_max * r_i^(ln(p_max G) / ln(N - 1))`, which is 0 for the best,
//!   `1/G` for the second best and `p_max` for the worst.
//!
//! All random draws happen on the calling thread from one seeded stream in
//! a fixed order: initial genotypes, then per generation the selection
//! draws, the crossover draws and the mutation draws, each in index order.
//! Fitness evaluation may run in parallel (feature `parallel`) without
//! affecting results.

use std::fmt::Debug;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// The engine's random stream.
pub type GaRng = ChaCha8Rng;

/// What the engine needs from an optimization problem. Fitness is maximized.
pub trait Problem: Sync {
    type Gene: Copy + PartialEq + Send + Sync + Debug;
    /// Extra evaluation output carried alongside the scalar fitness.
    type Detail: Clone + Send + Sync + Debug;

    fn genotype_size(&self) -> usize;
    fn random_genotype(&self, rng: &mut GaRng) -> Vec<Self::Gene>;
    fn mutate_gene(&self, gene: &mut Self::Gene, rng: &mut GaRng);
    /// Must be pure: same genes, same result.
    fn evaluate(&self, genes: &[Self::Gene]) -> (f64, Self::Detail);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankGaParams {
    pub population_size: usize,
    pub selective_pressure: f64,
    pub p_max: f64,
    pub genotype_size: usize,
    pub max_generations: u64,
    /// Stop after this many generations without a new best. 0 disables.
    pub stagnation_window: u64,
    pub seed: u64,
    #[serde(default)]
    pub execution: Execution,
}

impl RankGaParams {
    pub const DEFAULT_POPULATION: usize = 200;
    pub const DEFAULT_PRESSURE: f64 = 3.0;
    pub const DEFAULT_P_MAX: f64 = 0.5;
    pub const DEFAULT_MAX_GENERATIONS: u64 = 5000;
    pub const DEFAULT_STAGNATION: u64 = 1000;

    pub fn new(genotype_size: usize) -> Self {
        Self {
            population_size: Self::DEFAULT_POPULATION,
            selective_pressure: Self::DEFAULT_PRESSURE,
            p_max: Self::DEFAULT_P_MAX,
            genotype_size,
            max_generations: Self::DEFAULT_MAX_GENERATIONS,
            stagnation_window: Self::DEFAULT_STAGNATION,
            seed: 0,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        // ln(N - 1) must be positive for the mutation exponent.
        if self.population_size < 3 {
            return bad(format!("population_size must be >= 3, got {}", self.population_size));
        }
        if self.genotype_size == 0 {
            return bad("genotype_size must be >= 1".into());
        }
        if !(self.selective_pressure > 1.0 && self.selective_pressure.is_finite()) {
            return bad(format!("selective_pressure must be > 1, got {}", self.selective_pressure));
        }
        if !(self.p_max > 0.0 && self.p_max <= 1.0) {
            return bad(format!("p_max must lie in (0, 1], got {}", self.p_max));
        }
        if self.p_max * self.genotype_size as f64 <= 1.0 {
            return bad(format!("p_max * genotype_size must exceed 1, got {} * {}", self.p_max, self.genotype_size));
        }
        Ok(())
    }

    fn mutation_exponent(&self) -> f64 {
        (self.p_max * self.genotype_size as f64).ln() / ((self.population_size - 1) as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual<G, D> {
    pub genes: Vec<G>,
    pub fitness: f64,
    pub detail: D,
    stale: bool,
}

impl<G, D> Individual<G, D> {
    pub fn new(genes: Vec<G>, fitness: f64, detail: D) -> Self {
        Self { genes, fitness, detail, stale: false }
    }

    /// True when the genes changed since `fitness` was computed.
    pub fn is_stale(&self) -> bool {
        self.stale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population<G, D> {
    individuals: Vec<Individual<G, D>>,
}

impl<G, D> Population<G, D> {
    pub fn new(individuals: Vec<Individual<G, D>>) -> Self {
        Self { individuals }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual<G, D>] {
        &self.individuals
    }

    pub fn best(&self) -> Option<&Individual<G, D>> {
        self.individuals.iter().reduce(|a, b| if b.fitness > a.fitness { b } else { a })
    }

    pub fn mean_fitness(&self) -> f64 {
        self.individuals.iter().map(|i| i.fitness).sum::<f64>() / self.len() as f64
    }

    /// Stable sort by fitness, best first.
    pub fn sort(&mut self) {
        self.individuals.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
    }

    pub fn is_sorted(&self) -> bool {
        self.individuals.windows(2).all(|w| w[0].fitness >= w[1].fitness)
    }
}

pub fn rank(i: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("rank needs a population of at least 2, got {n}"));
    }
    if i >= n {
        return domain(format!("index {i} outside population of {n}"));
    }
    Ok(i as f64 / (n - 1) as f64)
}

/// Expected number of clones for rank `r` under selective pressure `s`.
pub fn clone_number(r: f64, s: f64) -> f64 {
    s * (1.0 - r).powf(s - 1.0)
}

pub fn mutation_probability(r: f64, params: &RankGaParams) -> Result<f64> {
    params.validate()?;
    if !(0.0..=1.0).contains(&r) {
        return domain(format!("rank must lie in [0, 1], got {r}"));
    }
    Ok(params.p_max * r.powf(params.mutation_exponent()))
}

/// Rank-based selection on a sorted population.
///
/// The result holds exactly `N` clones in creation order: integer parts by
/// ascending index (truncated at `N`), then the cyclic fractional pass. One
/// uniform draw is consumed per visited index in the fractional pass.
pub fn select<G: Clone, D: Clone>(
    pop: &Population<G, D>,
    selective_pressure: f64,
    rng: &mut GaRng,
) -> Population<G, D> {
    let n = pop.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Population::new(out);
    }
    let clones: Vec<f64> = (0..n)
        .map(|i| {
            let r = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            clone_number(r, selective_pressure)
        })
        .collect();

    'integer: for (i, &c) in clones.iter().enumerate() {
        for _ in 0..c.floor() as usize {
            if out.len() == n {
                break 'integer;
            }
            out.push(pop.individuals[i].clone());
        }
    }

    let fractions: Vec<f64> = clones.iter().map(|c| c - c.floor()).collect();
    if fractions.iter().all(|&f| f == 0.0) {
        // Nothing can ever win the lottery; fill cyclically instead.
        let mut i = 0;
        while out.len() < n {
            out.push(pop.individuals[i].clone());
            i = (i + 1) % n;
        }
    } else {
        let mut i = 0;
        while out.len() < n {
            if rng.random::<f64>() < fractions[i] {
                out.push(pop.individuals[i].clone());
            }
            i = (i + 1) % n;
        }
    }
    Population::new(out)
}

/// Mate `(0,1)`, `(2,3)`, ... in place with complementary uniform crossover.
/// With odd `N` the last individual passes through.
pub fn recombine<G: Copy + PartialEq, D>(pop: &mut Population<G, D>, rng: &mut GaRng) {
    for pair in pop.individuals.chunks_exact_mut(2) {
        let (a, b) = pair.split_at_mut(1);
        let (a, b) = (&mut a[0], &mut b[0]);
        let mut changed = false;
        for (x, y) in a.genes.iter_mut().zip(b.genes.iter_mut()) {
            if rng.random::<bool>() && *x != *y {
                std::mem::swap(x, y);
                changed = true;
            }
        }
        if changed {
            a.stale = true;
            b.stale = true;
        }
    }
}

/// Rank-based mutation on a sorted population. Individuals with zero
/// mutation probability consume no draws.
pub fn mutate<P: Problem>(
    pop: &mut Population<P::Gene, P::Detail>,
    params: &RankGaParams,
    rng: &mut GaRng,
    problem: &P,
) -> Result<()> {
    params.validate()?;
    let n = pop.len();
    let exponent = params.mutation_exponent();
    for (i, ind) in pop.individuals.iter_mut().enumerate() {
        let r = rank(i, n)?;
        let p = params.p_max * r.powf(exponent);
        if p <= 0.0 {
            continue;
        }
        for gene in ind.genes.iter_mut() {
            if rng.random::<f64>() < p {
                let before = *gene;
                problem.mutate_gene(gene, rng);
                if *gene != before {
                    ind.stale = true;
                }
            }
        }
    }
    Ok(())
}

/// Re-evaluate every stale individual.
pub fn evaluate_population<P: Problem>(problem: &P, pop: &mut Population<P::Gene, P::Detail>, execution: Execution) {
    let eval = |ind: &mut Individual<P::Gene, P::Detail>| {
        if ind.stale {
            let (fitness, detail) = problem.evaluate(&ind.genes);
            ind.fitness = fitness;
            ind.detail = detail;
            ind.stale = false;
        }
    };
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            pop.individuals.par_iter_mut().for_each(eval);
        }
        _ => pop.individuals.iter_mut().for_each(eval),
    }
}

fn evaluate_fresh<P: Problem>(
    problem: &P,
    genotypes: Vec<Vec<P::Gene>>,
    execution: Execution,
) -> Vec<Individual<P::Gene, P::Detail>> {
    let eval = |genes: Vec<P::Gene>| {
        let (fitness, detail) = problem.evaluate(&genes);
        Individual::new(genes, fitness, detail)
    };
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            genotypes.into_par_iter().map(eval).collect()
        }
        _ => genotypes.into_iter().map(eval).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord<D> {
    pub generation: u64,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Detail of the best individual in this generation's population.
    pub best_detail: D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxGenerations,
    Stagnation,
    Observer,
}

#[derive(Debug, Clone)]
pub struct RunResult<G, D> {
    /// Best individual seen at any point of the run.
    pub best: Individual<G, D>,
    pub best_generation: u64,
    pub final_population: Population<G, D>,
    /// Row 0 describes the initial population.
    pub history: Vec<GenerationRecord<D>>,
    pub generations: u64,
    pub stop: StopReason,
}

pub fn run<P: Problem>(problem: &P, params: &RankGaParams) -> Result<RunResult<P::Gene, P::Detail>> {
    run_with_observer(problem, params, |_, _| ControlFlow::Continue(()))
}

/// Run the engine, calling `observer` with each generation's sorted, fully
/// evaluated population (generation 0 is the initial one). Returning
/// `Break` stops the run after that generation.
pub fn run_with_observer<P, F>(
    problem: &P,
    params: &RankGaParams,
    mut observer: F,
) -> Result<RunResult<P::Gene, P::Detail>>
where
    P: Problem,
    F: FnMut(u64, &Population<P::Gene, P::Detail>) -> ControlFlow<()>,
{
    params.validate()?;
    if params.genotype_size != problem.genotype_size() {
        return Err(Error::InvalidParams(format!(
            "genotype_size {} does not match the problem's {}",
            params.genotype_size,
            problem.genotype_size()
        )));
    }
    let mut rng = GaRng::seed_from_u64(params.seed);

    let genotypes: Vec<Vec<P::Gene>> = (0..params.population_size)
        .map(|_| {
            let genes = problem.random_genotype(&mut rng);
            assert_eq!(genes.len(), params.genotype_size, "random_genotype returned a wrong length");
            genes
        })
        .collect();
    let individuals = evaluate_fresh(problem, genotypes, params.execution);
    let mut pop = Population::new(individuals);
    pop.sort();

    let mut history = Vec::new();
    let mut best = pop.individuals[0].clone();
    let mut best_generation = 0;
    record(&mut history, 0, &pop);
    let mut stop = StopReason::MaxGenerations;
    let mut generation = 0;

    if observer(0, &pop).is_break() {
        stop = StopReason::Observer;
    } else {
        while generation < params.max_generations {
            generation += 1;

            pop = select(&pop, params.selective_pressure, &mut rng);
            pop.sort();
            recombine(&mut pop, &mut rng);
            evaluate_population(problem, &mut pop, params.execution);

            pop.sort();
            mutate(&mut pop, params, &mut rng, problem)?;
            evaluate_population(problem, &mut pop, params.execution);
            pop.sort();

            record(&mut history, generation, &pop);
            if pop.individuals[0].fitness > best.fitness {
                best = pop.individuals[0].clone();
                best_generation = generation;
            }
            if observer(generation, &pop).is_break() {
                stop = StopReason::Observer;
                break;
            }
            if params.stagnation_window > 0 && generation - best_generation >= params.stagnation_window {
                stop = StopReason::Stagnation;
                break;
            }
        }
    }

    Ok(RunResult { best, best_generation, final_population: pop, history, generations: generation, stop })
}

fn record<G, D: Clone>(history: &mut Vec<GenerationRecord<D>>, generation: u64, pop: &Population<G, D>) {
    let top = &pop.individuals[0];
    history.push(GenerationRecord {
        generation,
        best_fitness: top.fitness,
        mean_fitness: pop.mean_fitness(),
        best_detail: top.detail.clone(),
    });
}
