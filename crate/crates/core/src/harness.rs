//! Seeded multi-run experiments, ρ grid search and a random-search baseline.
//!
//! Every run owns its RNG, seeded from a base seed plus the run index, so a
//! batch can be spread over any number of workers and still be assembled
//! into exactly the same report.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isa::{run_isa, IsaParams, RunRecord};
use crate::objective::{Direction, Objective, Registry};

pub const DEFAULT_RUNS: usize = 30;
pub const DEFAULT_RHO_GRID: [f64; 12] = [
    1.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0,
];
pub const DEFAULT_GRID_RUNS: usize = 10;
/// Tuning runs draw their seeds from `base_seed + TUNING_SEED_OFFSET + k`,
/// keeping them apart from the seeds of the reported runs.
pub const TUNING_SEED_OFFSET: u64 = 1_000_000;

/// Aggregate of the final best fitness over a batch of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub best: f64,
    pub worst: f64,
    /// Sample standard deviation; zero for a single run.
    pub std: f64,
    pub runs: usize,
}

/// Statistics of `best_fitness` over `records`. `best`/`worst` follow `direction`.
pub fn summarize(records: &[RunRecord], direction: Direction) -> Result<Stats> {
    let values: Vec<f64> = records.iter().map(|r| r.best_fitness).collect();
    summarize_values(&values, direction)
}

pub fn summarize_values(values: &[f64], direction: Direction) -> Result<Stats> {
    if values.is_empty() {
        return Err(Error::invalid("cannot summarise an empty set of runs"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    // summing in sorted order keeps the result independent of input order
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let (best, worst) = match direction {
        Direction::Minimise => (lo, hi),
        Direction::Maximise => (hi, lo),
    };
    Ok(Stats {
        mean,
        median,
        best,
        worst,
        std,
        runs: n,
    })
}

fn tag(objective: &Objective, seed: u64) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::Run {
        function: objective.id().to_owned(),
        seed,
        source: Box::new(e),
    }
}

/// `runs` ISA runs with seeds `base_seed..base_seed + runs`, in seed order.
pub fn run_batch(
    objective: &Objective,
    template: &IsaParams,
    runs: usize,
    base_seed: u64,
) -> Result<Vec<RunRecord>> {
    (0..runs as u64)
        .into_par_iter()
        .map(|k| {
            let seed = base_seed.wrapping_add(k);
            let params = IsaParams {
                seed,
                ..template.clone()
            };
            run_isa(objective, &params).map_err(tag(objective, seed))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub rho: f64,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSearch {
    pub best_rho: f64,
    pub table: Vec<GridPoint>,
}

/// Evaluate every ρ in `grid` with `runs` seeded runs and pick the one with
/// the best median final fitness. Ties go to the smaller ρ.
pub fn grid_search_rho(
    objective: &Objective,
    template: &IsaParams,
    grid: &[f64],
    runs: usize,
    base_seed: u64,
) -> Result<GridSearch> {
    if grid.is_empty() {
        return Err(Error::invalid("rho grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|r| !(0.0..=100.0).contains(*r)) {
        return Err(Error::invalid(format!("rho {bad} is outside [0, 100]")));
    }
    if runs == 0 {
        return Err(Error::invalid(
            "grid search needs at least one run per point",
        ));
    }
    let direction = objective.direction();
    let table = grid
        .par_iter()
        .map(|&rho| {
            let params = IsaParams {
                rho,
                ..template.clone()
            };
            let records = run_batch(objective, &params, runs, base_seed)?;
            Ok(GridPoint {
                rho,
                stats: summarize(&records, direction)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best_rho = best_grid_point(&table, direction).rho;
    Ok(GridSearch { best_rho, table })
}

fn best_grid_point(table: &[GridPoint], direction: Direction) -> &GridPoint {
    table
        .iter()
        .reduce(|best, p| {
            let better = direction.is_better(p.stats.median, best.stats.median)
                || (p.stats.median == best.stats.median && p.rho < best.rho);
            if better {
                p
            } else {
                best
            }
        })
        .expect("grid is not empty")
}

/// Uniform sampling inside the bounds, `budget` evaluations. The trajectory
/// holds the best-so-far value after every evaluation.
pub fn random_search_baseline(
    objective: &Objective,
    budget: usize,
    seed: u64,
) -> Result<RunRecord> {
    if budget == 0 {
        return Err(Error::invalid("random search budget must be at least 1"));
    }
    let start = Instant::now();
    let direction = objective.direction();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut trajectory = Vec::with_capacity(budget);
    for _ in 0..budget {
        let x = objective.bounds().sample(&mut rng);
        let f = objective.evaluate(&x, &mut rng)?;
        if f.is_nan() {
            return Err(Error::NonFiniteFitness {
                function: objective.id().to_owned(),
                value: f,
                position: x,
            });
        }
        match &best {
            Some((_, b)) if !direction.is_better(f, *b) => {}
            _ => best = Some((x, f)),
        }
        trajectory.push(best.as_ref().map(|(_, b)| *b).expect("just set"));
    }
    let (best_position, best_fitness) = best.expect("budget is positive");
    Ok(RunRecord {
        function_id: objective.id().to_owned(),
        seed,
        rho: None,
        best_fitness,
        best_position,
        trajectory,
        elapsed: Some(start.elapsed()),
    })
}

/// ISA against random search at an equal evaluation budget
/// (`population_size × iterations`), over the same seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub id: String,
    pub rho: f64,
    pub budget: usize,
    pub isa: Stats,
    pub random: Stats,
}

impl BaselineComparison {
    /// Strict improvement of the ISA median over the random-search median.
    pub fn isa_wins(&self, direction: Direction) -> bool {
        direction.is_better(self.isa.median, self.random.median)
    }
}

pub fn compare_with_baseline(
    objective: &Objective,
    template: &IsaParams,
    runs: usize,
    base_seed: u64,
) -> Result<BaselineComparison> {
    let budget = template.population_size * template.iterations;
    let direction = objective.direction();
    let isa = run_batch(objective, template, runs, base_seed)?;
    let random = (0..runs as u64)
        .into_par_iter()
        .map(|k| {
            let seed = base_seed.wrapping_add(k);
            random_search_baseline(objective, budget, seed).map_err(tag(objective, seed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaselineComparison {
        id: objective.id().to_owned(),
        rho: template.rho,
        budget,
        isa: summarize(&isa, direction)?,
        random: summarize(&random, direction)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSettings {
    pub grid: Vec<f64>,
    pub runs: usize,
}

impl Default for GridSettings {
    fn default() -> Self {
        GridSettings {
            grid: DEFAULT_RHO_GRID.to_vec(),
            runs: DEFAULT_GRID_RUNS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub functions: Vec<String>,
    pub runs: usize,
    /// Seed is the base seed, `rho` the fallback ρ. Population and iteration
    /// counts are replaced by each function's defaults unless
    /// `fixed_budget` is set.
    pub template: IsaParams,
    pub fixed_budget: bool,
    pub rho_overrides: BTreeMap<String, f64>,
    /// Tune ρ per function when no override is given.
    pub tuning: Option<GridSettings>,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(functions: Vec<String>) -> Self {
        ExperimentConfig {
            functions,
            runs: DEFAULT_RUNS,
            template: IsaParams::default(),
            fixed_budget: false,
            rho_overrides: BTreeMap::new(),
            tuning: Some(GridSettings::default()),
            workers: None,
        }
    }

    pub fn validate(&self, registry: &Registry) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::invalid("runs must be at least 1"));
        }
        if self.functions.is_empty() {
            return Err(Error::invalid("no functions selected"));
        }
        for id in self.functions.iter().chain(self.rho_overrides.keys()) {
            registry.get(id)?;
        }
        for (id, rho) in &self.rho_overrides {
            if !(0.0..=100.0).contains(rho) {
                return Err(Error::invalid(format!(
                    "{id}: rho {rho} is outside [0, 100]"
                )));
            }
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers must be at least 1"));
        }
        self.template.validate()
    }

    fn params_for(&self, objective: &Objective) -> IsaParams {
        if self.fixed_budget {
            return self.template.clone();
        }
        let defaults = objective.spec().defaults;
        IsaParams {
            population_size: defaults.population,
            iterations: defaults.iterations,
            ..self.template.clone()
        }
    }

    fn override_for(&self, id: &str) -> Option<f64> {
        self.rho_overrides
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(id))
            .map(|(_, &rho)| rho)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionReport {
    pub id: String,
    pub rho: f64,
    #[serde(flatten)]
    pub stats: Stats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuning: Option<GridSearch>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<RunRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub base_seed: u64,
    pub runs: usize,
    pub functions: Vec<FunctionReport>,
    #[serde(rename = "total_runtime_ms", with = "opt_millis")]
    pub total_runtime: Option<Duration>,
}

mod opt_millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        d.map(|d| d.as_secs_f64() * 1e3).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.map(|ms| Duration::from_secs_f64(ms.max(0.0) / 1e3)))
    }
}

/// Run the configured batch for every function and aggregate it.
pub fn run_experiment(config: &ExperimentConfig, registry: &Registry) -> Result<ExperimentReport> {
    config.validate(registry)?;
    let start = Instant::now();
    let objectives = config
        .functions
        .iter()
        .map(|id| registry.get(id))
        .collect::<Result<Vec<_>>>()?;
    let base_seed = config.template.seed;

    let functions = in_pool(config.workers, || {
        objectives
            .par_iter()
            .map(|objective| run_function(config, objective, base_seed))
            .collect::<Result<Vec<_>>>()
    })??;

    Ok(ExperimentReport {
        base_seed,
        runs: config.runs,
        functions,
        total_runtime: Some(start.elapsed()),
    })
}

fn run_function(
    config: &ExperimentConfig,
    objective: &Objective,
    base_seed: u64,
) -> Result<FunctionReport> {
    let mut params = config.params_for(objective);
    let tuning = match (config.override_for(objective.id()), &config.tuning) {
        (Some(rho), _) => {
            params.rho = rho;
            None
        }
        (None, Some(settings)) => {
            let search = grid_search_rho(
                objective,
                &params,
                &settings.grid,
                settings.runs,
                base_seed.wrapping_add(TUNING_SEED_OFFSET),
            )?;
            params.rho = search.best_rho;
            Some(search)
        }
        (None, None) => None,
    };
    let records = run_batch(objective, &params, config.runs, base_seed)?;
    Ok(FunctionReport {
        id: objective.id().to_owned(),
        rho: params.rho,
        stats: summarize(&records, objective.direction())?,
        tuning,
        records,
    })
}

/// Run `f` on a pool of `workers` threads, or on the global pool.
pub fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "id", "rho", "mean", "median", "best", "worst", "std", "runs",
];

/// One CSV line of an experiment report.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub id: String,
    pub rho: f64,
    pub stats: Stats,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl ExperimentReport {
    pub fn rows(&self) -> Vec<CsvRow> {
        self.functions
            .iter()
            .map(|f| CsvRow {
                id: f.id.clone(),
                rho: f.rho,
                stats: f.stats.clone(),
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for f in &self.functions {
            let s = &f.stats;
            w.write_record([
                f.id.clone(),
                format_real(f.rho),
                format_real(s.mean),
                format_real(s.median),
                format_real(s.best),
                format_real(s.worst),
                format_real(s.std),
                s.runs.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// JSON with per-run records only when `verbose` is set.
    pub fn to_json(&self, verbose: bool) -> Result<String> {
        if verbose {
            return Ok(serde_json::to_string_pretty(self)?);
        }
        let mut brief = self.clone();
        for f in &mut brief.functions {
            f.records.clear();
        }
        Ok(serde_json::to_string_pretty(&brief)?)
    }

    /// Remove wall-clock measurements so repeated runs serialise identically.
    pub fn without_timing(mut self) -> Self {
        self.total_runtime = None;
        for f in &mut self.functions {
            for r in &mut f.records {
                r.elapsed = None;
            }
        }
        self
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::invalid(format!("unexpected csv header {header:?}")));
    }
    let real = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::invalid(format!("not a number: {s:?}")))
    };
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            Ok(CsvRow {
                id: rec[0].to_owned(),
                rho: real(&rec[1])?,
                stats: Stats {
                    mean: real(&rec[2])?,
                    median: real(&rec[3])?,
                    best: real(&rec[4])?,
                    worst: real(&rec[5])?,
                    std: real(&rec[6])?,
                    runs: rec[7]
                        .parse()
                        .map_err(|_| Error::invalid(format!("not a count: {:?}", &rec[7])))?,
                },
            })
        })
        .collect()
}
