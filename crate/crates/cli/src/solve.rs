//! GA runs over a list of seeds, with solution and history files on disk.
//!
//! Only colorings certified by the verifier are ever written or reported.

use std::fmt::Write as _;
use std::fs;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use psic_core::coloring::{verify, ColoringFile, ColoringMeta};
use psic_core::fitness::FitnessBreakdown;
use psic_core::problem::ColoringProblem;
use psic_core::rankga::{run_with_observer, GenerationRecord, RankGaParams};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct SeedSummary {
    pub seed: u64,
    /// Largest verified color count, 0 if nothing was certified.
    pub best_colors: usize,
    pub palette_size: usize,
    pub generations: u64,
    pub wall_seconds: f64,
    pub solution: Option<PathBuf>,
}

struct Verified {
    genes: Vec<u32>,
    colors: usize,
    generation: u64,
    fitness: f64,
}

struct PaletteRun {
    verified: Option<Verified>,
    generations: u64,
    history: Vec<GenerationRecord<FitnessBreakdown>>,
}

pub fn solution_name(n: usize, colors: usize, seed: u64) -> String {
    format!("n{n}_c{colors}_seed{seed}.json")
}

pub fn history_name(n: usize, palette: usize, seed: u64) -> String {
    format!("n{n}_p{palette}_seed{seed}_history.csv")
}

pub const HISTORY_HEADER: &str = "generation,best_fitness,mean_fitness,best_alpha,best_beta,best_gamma";

pub fn history_csv(history: &[GenerationRecord<FitnessBreakdown>]) -> String {
    let mut out = String::with_capacity(64 * (history.len() + 1));
    out.push_str(HISTORY_HEADER);
    out.push('\n');
    for h in history {
        let d = &h.best_detail;
        writeln!(out, "{},{},{},{},{},{}", h.generation, h.best_fitness, h.mean_fitness, d.alpha, d.beta, d.gamma)
            .expect("writing to a String");
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn run_palette(config: &RunConfig, palette: usize, seed: u64) -> Result<PaletteRun, CliError> {
    let problem =
        ColoringProblem::new(config.n, palette, config.weights).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = RankGaParams { seed, ..config.ga.clone() };
    let target = config.target_colors.unwrap_or(palette).min(palette);
    let mut verified: Option<Verified> = None;

    let result = run_with_observer(&problem, &params, |generation, pop| {
        for ind in pop.individuals() {
            let d = &ind.detail;
            if !d.is_feasible() || verified.as_ref().is_some_and(|v| d.alpha <= v.colors) {
                continue;
            }
            let coloring = problem.coloring(&ind.genes).expect("genes stay in the palette");
            let report = verify(&coloring);
            if report.is_valid() {
                verified = Some(Verified {
                    genes: ind.genes.clone(),
                    colors: report.color_count(),
                    generation,
                    fitness: ind.fitness,
                });
            }
        }
        match &verified {
            Some(v) if v.colors >= target => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;

    Ok(PaletteRun { verified, generations: result.generations, history: result.history })
}

/// One seed, possibly several palette sizes in ladder mode.
pub fn solve_seed(config: &RunConfig, seed: u64) -> Result<SeedSummary, CliError> {
    let start = Instant::now();
    let m = config.n * (config.n - 1) / 2;
    let mut palette = config.palette_size;
    let mut best: Option<Verified> = None;
    let mut best_palette = palette;
    let mut generations = 0;

    loop {
        let run = run_palette(config, palette, seed)?;
        generations += run.generations;
        let path = config.output_dir.join(history_name(config.n, palette, seed));
        write(&path, &history_csv(&run.history))?;

        let filled = run.verified.as_ref().is_some_and(|v| v.colors == palette);
        if let Some(v) = run.verified {
            if best.as_ref().is_none_or(|b| v.colors > b.colors) {
                best = Some(v);
                best_palette = palette;
            }
        }
        if !(config.ladder && filled && palette < m) {
            break;
        }
        palette += 1;
    }

    let solution = match &best {
        Some(v) => {
            let problem = ColoringProblem::new(config.n, best_palette, config.weights).expect("validated");
            let coloring = problem.coloring(&v.genes).expect("genes stay in the palette");
            let report = verify(&coloring);
            assert!(report.is_valid(), "only verified colorings are kept");
            let meta = ColoringMeta { seed: Some(seed), generations: Some(v.generation), fitness: Some(v.fitness) };
            let path = config.output_dir.join(solution_name(config.n, v.colors, seed));
            write(&path, &ColoringFile::new(&coloring, Some(meta)).to_json())?;
            Some(path)
        }
        None => None,
    };

    Ok(SeedSummary {
        seed,
        best_colors: best.as_ref().map_or(0, |v| v.colors),
        palette_size: best_palette,
        generations,
        wall_seconds: start.elapsed().as_secs_f64(),
        solution,
    })
}

pub fn solve(config: &RunConfig) -> Result<Vec<SeedSummary>, CliError> {
    fs::create_dir_all(&config.output_dir)
        .map_err(|source| CliError::Io { path: config.output_dir.clone(), source })?;

    #[cfg(feature = "parallel")]
    let results: Vec<Result<SeedSummary, CliError>> = {
        use rayon::prelude::*;
        config.seeds.par_iter().map(|&seed| solve_seed(config, seed)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<SeedSummary, CliError>> =
        config.seeds.iter().map(|&seed| solve_seed(config, seed)).collect();

    let summaries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    write(&config.output_dir.join("summary.csv"), &summary_csv(config.n, &summaries))?;
    Ok(summaries)
}

pub fn summary_csv(n: usize, summaries: &[SeedSummary]) -> String {
    let mut out = String::from("n,seed,palette_size,best_colors,generations,wall_seconds,solution\n");
    for s in summaries {
        let file = s
            .solution
            .as_ref()
            .and_then(|p| p.file_name())
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        writeln!(
            out,
            "{n},{},{},{},{},{:.3},{file}",
            s.seed, s.palette_size, s.best_colors, s.generations, s.wall_seconds
        )
        .expect("writing to a String");
    }
    out
}
