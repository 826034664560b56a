//! Run configuration: a flat TOML document, every field but `n` optional.
//!
//! ```toml
//! n = 9
//! palette_size = 15
//! seeds = [0, 1, 2]
//! max_generations = 5000
//! output_dir = "runs/k9"
//! ```

use std::path::{Path, PathBuf};

use psic_core::bounds;
use psic_core::fitness::FitnessWeights;
use psic_core::graph::edge_count;
use psic_core::rankga::{Execution, RankGaParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: usize,
    pub palette_size: Option<usize>,
    pub population_size: Option<usize>,
    pub selective_pressure: Option<f64>,
    pub p_max: Option<f64>,
    pub max_generations: Option<u64>,
    pub stagnation_window: Option<u64>,
    pub weight_pairs: Option<f64>,
    pub weight_colors: Option<f64>,
    pub weight_std: Option<f64>,
    pub weight_avg: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub output_dir: Option<PathBuf>,
    /// Re-run with one more palette color whenever the palette gets filled.
    pub ladder: Option<bool>,
    /// Stop a run once a verified coloring with this many colors exists.
    pub target_colors: Option<usize>,
    pub execution: Option<Execution>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub palette_size: usize,
    pub ga: RankGaParams,
    pub weights: FitnessWeights,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub ladder: bool,
    pub target_colors: Option<usize>,
}

pub const DEFAULT_OUTPUT_DIR: &str = "results";

/// Palette used when the config names none: the approximate upper bound
/// (at least one above the best published lower bound) for `n >= 8`, the
/// known value for smaller `n`, never more than the number of edges.
pub fn default_palette(n: usize) -> Result<usize, String> {
    let m = edge_count(n).map_err(|e| e.to_string())?;
    let record = bounds::bounds_record(n);
    let palette = match record.approx_upper {
        Some(approx) => {
            let floor = record.improved_lower.or(record.known_lower).map_or(0, |v| v + 1);
            approx.max(floor) as usize
        }
        None => record.known_upper.map_or(m, |u| u as usize),
    };
    Ok(palette.min(m))
}

impl RunConfig {
    /// Parse and validate. Relative `output_dir` values resolve against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, String> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| e.to_string())?;
        Self::from_file(file, base)
    }

    pub fn from_file(file: ConfigFile, base: &Path) -> Result<Self, String> {
        let n = file.n;
        if n < 3 {
            return Err(format!("n must be >= 3 for a GA run, got {n}"));
        }
        let m = edge_count(n).map_err(|e| e.to_string())?;
        let palette_size = match file.palette_size {
            Some(p) => p,
            None => default_palette(n)?,
        };
        if palette_size == 0 || palette_size > m {
            return Err(format!("palette_size must lie in [1, {m}], got {palette_size}"));
        }
        let d = RankGaParams::new(m);
        let ga = RankGaParams {
            population_size: file.population_size.unwrap_or(d.population_size),
            selective_pressure: file.selective_pressure.unwrap_or(d.selective_pressure),
            p_max: file.p_max.unwrap_or(d.p_max),
            max_generations: file.max_generations.unwrap_or(d.max_generations),
            stagnation_window: file.stagnation_window.unwrap_or(d.stagnation_window),
            execution: file.execution.unwrap_or(d.execution),
            ..d
        };
        ga.validate().map_err(|e| e.to_string())?;
        let dw = FitnessWeights::default();
        let weights = FitnessWeights {
            weight_pairs: file.weight_pairs.unwrap_or(dw.weight_pairs),
            weight_colors: file.weight_colors.unwrap_or(dw.weight_colors),
            weight_std: file.weight_std.unwrap_or(dw.weight_std),
            weight_avg: file.weight_avg.unwrap_or(dw.weight_avg),
        };
        weights.validate().map_err(|e| e.to_string())?;
        let seeds = file.seeds.unwrap_or_else(|| vec![0]);
        if seeds.is_empty() {
            return Err("seeds must not be empty".into());
        }
        let output_dir = base.join(file.output_dir.unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into()));
        Ok(Self {
            n,
            palette_size,
            ga,
            weights,
            seeds,
            output_dir,
            ladder: file.ladder.unwrap_or(false),
            target_colors: file.target_colors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::from_toml("n = 9", Path::new("/tmp")).unwrap();
        assert_eq!(c.palette_size, 15);
        assert_eq!(c.ga.population_size, 200);
        assert_eq!(c.ga.selective_pressure, 3.0);
        assert_eq!(c.ga.p_max, 0.5);
        assert_eq!(c.ga.genotype_size, 36);
        assert_eq!(c.weights, FitnessWeights::default());
        assert_eq!(c.seeds, vec![0]);
        assert_eq!(c.output_dir, Path::new("/tmp/results"));
        assert!(!c.ladder);
    }

    #[test]
    fn default_palettes() {
        assert_eq!(default_palette(7).unwrap(), 10);
        assert_eq!(default_palette(4).unwrap(), 4);
        assert_eq!(default_palette(8).unwrap(), 12);
        assert_eq!(default_palette(12).unwrap(), 23);
        assert_eq!(default_palette(13).unwrap(), 27);
        assert_eq!(default_palette(40).unwrap(), bounds::approx_upper(40).unwrap() as usize);
    }

    #[test]
    fn rejects_bad_values() {
        let base = Path::new(".");
        assert!(RunConfig::from_toml("n = 2", base).is_err());
        assert!(RunConfig::from_toml("n = 4\npalette_size = 7", base).is_err());
        assert!(RunConfig::from_toml("n = 4\npalette_size = 0", base).is_err());
        assert!(RunConfig::from_toml("n = 5\np_max = 0.05", base).is_err());
        assert!(RunConfig::from_toml("n = 5\nweight_std = -1", base).is_err());
        assert!(RunConfig::from_toml("n = 5\nseeds = []", base).is_err());
        assert!(RunConfig::from_toml("n = 5\nbogus = 1", base).is_err());
        assert!(RunConfig::from_toml("palette_size = 3", base).is_err());
    }

    #[test]
    fn explicit_values() {
        let text = "n = 7\npalette_size = 9\nseeds = [3, 1]\npopulation_size = 50\nexecution = \"sequential\"\noutput_dir = \"/abs\"\nladder = true\ntarget_colors = 9";
        let c = RunConfig::from_toml(text, Path::new("/base")).unwrap();
        assert_eq!(c.palette_size, 9);
        assert_eq!(c.seeds, vec![3, 1]);
        assert_eq!(c.ga.population_size, 50);
        assert_eq!(c.ga.execution, Execution::Sequential);
        assert_eq!(c.output_dir, Path::new("/abs"));
        assert!(c.ladder);
        assert_eq!(c.target_colors, Some(9));
    }
}
