//! `isa`: command-line front end for the infrasonic search experiments.
//!
//! Exit codes: 0 on success, 1 on runtime failures, 2 on bad arguments.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use isa_core::harness::{
    self, format_real, BaselineComparison, ExperimentConfig, GridSearch, GridSettings,
    DEFAULT_GRID_RUNS, DEFAULT_RHO_GRID, DEFAULT_RUNS, TUNING_SEED_OFFSET,
};
use isa_core::isa::DEFAULT_RHO;
use isa_core::{run_isa, IsaParams, Objective, Registry, SignMode, TargetRule};
use serde_json::json;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "isa",
    version,
    about = "Infrasonic search algorithm experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the benchmark catalog.
    List {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// One seeded run on one function.
    Run {
        #[arg(long = "fn", value_name = "ID")]
        function: String,
        /// Attraction strength ρ in [0, 100].
        #[arg(long, default_value_t = DEFAULT_RHO)]
        rho: f64,
        #[arg(long)]
        population: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Repeated runs over one or more functions, aggregated per function.
    Experiment {
        /// `all`, one id, or a comma separated list.
        #[arg(long = "fn", value_name = "SELECTOR")]
        functions: String,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        /// Fixed ρ for every function; without it ρ is grid searched per function.
        #[arg(long)]
        rho: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include per-run records in JSON output.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Grid search of ρ for one function.
    GridSearch {
        #[arg(long = "fn", value_name = "ID")]
        function: String,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_RHO_GRID)]
        grid: Vec<f64>,
        /// Runs per grid point.
        #[arg(long, default_value_t = DEFAULT_GRID_RUNS)]
        runs: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// ISA against uniform random search at an equal evaluation budget.
    Baseline {
        #[arg(long = "fn", value_name = "SELECTOR")]
        functions: String,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        /// Fixed ρ; without it ρ is grid searched per function.
        #[arg(long)]
        rho: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Sign::Attract)]
    sign: Sign,
    #[arg(long, value_enum, default_value_t = Targets::Louder)]
    targets: Targets,
    /// Cap on concurrent runs; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Report wall-clock times. Off by default so output is byte-stable.
    #[arg(long)]
    timing: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// ρ candidates used when tuning.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_RHO_GRID)]
    grid: Vec<f64>,
    /// Runs per grid point when tuning.
    #[arg(long, default_value_t = DEFAULT_GRID_RUNS)]
    grid_runs: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sign {
    Attract,
    Literal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Targets {
    Louder,
    Any,
}

impl Common {
    fn template(&self) -> IsaParams {
        IsaParams {
            seed: self.seed,
            sign_mode: match self.sign {
                Sign::Attract => SignMode::Attract,
                Sign::Literal => SignMode::Literal,
            },
            target_rule: match self.targets {
                Targets::Louder => TargetRule::Louder,
                Targets::Any => TargetRule::Any,
            },
            ..IsaParams::default()
        }
    }
}

fn usage_error(kind: ErrorKind, msg: impl std::fmt::Display) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn check_rho(rho: f64) {
    if !(0.0..=100.0).contains(&rho) {
        usage_error(
            ErrorKind::ValueValidation,
            format!("rho must lie in [0, 100], got {rho}"),
        );
    }
}

fn check_grid(grid: &[f64], runs: usize) {
    grid.iter().copied().for_each(check_rho);
    if grid.is_empty() || runs == 0 {
        usage_error(
            ErrorKind::ValueValidation,
            "the rho grid and its run count must be non-empty",
        );
    }
}

fn check_positive(name: &str, v: usize) {
    if v == 0 {
        usage_error(
            ErrorKind::ValueValidation,
            format!("{name} must be at least 1"),
        );
    }
}

fn select<'r>(registry: &'r Registry, selector: &str) -> Vec<&'r Objective> {
    registry
        .select(selector)
        .unwrap_or_else(|e| usage_error(ErrorKind::InvalidValue, format!("--fn {selector}: {e}")))
}

fn single<'r>(registry: &'r Registry, id: &str) -> &'r Objective {
    registry
        .get(id)
        .unwrap_or_else(|e| usage_error(ErrorKind::InvalidValue, format!("--fn {id}: {e}")))
}

fn emit(output: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    let registry = Registry::new();
    match command {
        Command::List { format, output } => {
            let text = match format {
                Format::Json => registry.catalog_json()? + "\n",
                Format::Csv => catalog_csv(&registry),
            };
            emit(output.as_ref(), &text)?;
        }

        Command::Run {
            function,
            rho,
            population,
            iterations,
            common,
        } => {
            check_rho(rho);
            let objective = single(&registry, &function);
            let mut params = IsaParams {
                rho,
                ..common.template()
            };
            let defaults = objective.spec().defaults;
            params.population_size = population.unwrap_or(defaults.population);
            params.iterations = iterations.unwrap_or(defaults.iterations);
            if let Err(e) = params.validate() {
                usage_error(ErrorKind::ValueValidation, e);
            }
            let mut record = harness::in_pool(common.workers, || run_isa(objective, &params))??;
            if !common.timing {
                record = record.without_timing();
            }
            emit(
                common.output.as_ref(),
                &(serde_json::to_string_pretty(&record)? + "\n"),
            )?;
        }

        Command::Experiment {
            functions,
            runs,
            rho,
            grid,
            format,
            verbose,
            common,
        } => {
            check_positive("--runs", runs);
            check_grid(&grid.grid, grid.grid_runs);
            let ids = select(&registry, &functions)
                .iter()
                .map(|o| o.id().to_owned())
                .collect();
            let mut config = ExperimentConfig::new(ids);
            config.runs = runs;
            config.template = common.template();
            config.workers = common.workers;
            match rho {
                Some(rho) => {
                    check_rho(rho);
                    config.template.rho = rho;
                    config.tuning = None;
                }
                None => {
                    config.tuning = Some(GridSettings {
                        grid: grid.grid,
                        runs: grid.grid_runs,
                    })
                }
            }
            let mut report = harness::run_experiment(&config, &registry)?;
            if !common.timing {
                report = report.without_timing();
            }
            let text = match format {
                Format::Json => report.to_json(verbose)? + "\n",
                Format::Csv => {
                    eprintln!("seed={}", common.seed);
                    report.to_csv()?
                }
            };
            emit(common.output.as_ref(), &text)?;
        }

        Command::GridSearch {
            function,
            grid,
            runs,
            format,
            common,
        } => {
            check_grid(&grid, runs);
            let objective = single(&registry, &function);
            let params = IsaParams::for_objective(objective);
            let template = IsaParams {
                population_size: params.population_size,
                iterations: params.iterations,
                ..common.template()
            };
            let search = harness::in_pool(common.workers, || {
                harness::grid_search_rho(objective, &template, &grid, runs, common.seed)
            })??;
            let text = match format {
                Format::Json => grid_json(objective.id(), common.seed, runs, &search)?,
                Format::Csv => {
                    eprintln!("seed={}", common.seed);
                    grid_csv(&search)
                }
            };
            emit(common.output.as_ref(), &text)?;
        }

        Command::Baseline {
            functions,
            runs,
            rho,
            grid,
            format,
            common,
        } => {
            check_positive("--runs", runs);
            check_grid(&grid.grid, grid.grid_runs);
            if let Some(rho) = rho {
                check_rho(rho);
            }
            let objectives = select(&registry, &functions);
            let comparisons = harness::in_pool(common.workers, || {
                objectives
                    .iter()
                    .map(|objective| {
                        let defaults = IsaParams::for_objective(objective);
                        let mut template = IsaParams {
                            population_size: defaults.population_size,
                            iterations: defaults.iterations,
                            ..common.template()
                        };
                        template.rho = match rho {
                            Some(rho) => rho,
                            None => {
                                harness::grid_search_rho(
                                    objective,
                                    &template,
                                    &grid.grid,
                                    grid.grid_runs,
                                    common.seed.wrapping_add(TUNING_SEED_OFFSET),
                                )?
                                .best_rho
                            }
                        };
                        harness::compare_with_baseline(objective, &template, runs, common.seed)
                    })
                    .collect::<isa_core::Result<Vec<_>>>()
            })??;
            let text = match format {
                Format::Json => baseline_json(common.seed, runs, &comparisons)?,
                Format::Csv => {
                    eprintln!("seed={}", common.seed);
                    baseline_csv(&registry, &comparisons)
                }
            };
            emit(common.output.as_ref(), &text)?;
        }
    }
    Ok(())
}

fn catalog_csv(registry: &Registry) -> String {
    let mut out = csv_line(
        &[
            "id",
            "dimension",
            "lower",
            "upper",
            "direction",
            "population",
            "iterations",
            "known_optimum",
        ]
        .map(String::from),
    );
    for objective in registry.iter() {
        let spec = objective.spec();
        let (lower, upper): (Vec<String>, Vec<String>) = spec
            .bounds
            .intervals()
            .iter()
            .map(|(lo, hi)| (lo.to_string(), hi.to_string()))
            .unzip();
        // a single value when every dimension shares it
        let squash = |v: Vec<String>| {
            if v.iter().all(|s| s == &v[0]) {
                v[0].clone()
            } else {
                v.join(";")
            }
        };
        out += &csv_line(&[
            spec.id.clone(),
            spec.dimension.to_string(),
            squash(lower),
            squash(upper),
            format!("{:?}", spec.direction).to_lowercase(),
            spec.defaults.population.to_string(),
            spec.defaults.iterations.to_string(),
            spec.known_optimum.map(format_real).unwrap_or_default(),
        ]);
    }
    out
}

fn grid_json(id: &str, seed: u64, runs: usize, search: &GridSearch) -> serde_json::Result<String> {
    let value = json!({
        "id": id,
        "seed": seed,
        "runs_per_point": runs,
        "best_rho": search.best_rho,
        "table": search.table,
    });
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn grid_csv(search: &GridSearch) -> String {
    let mut out =
        csv_line(&["rho", "mean", "median", "best", "worst", "std", "runs"].map(String::from));
    for p in &search.table {
        let s = &p.stats;
        out += &csv_line(&[
            format_real(p.rho),
            format_real(s.mean),
            format_real(s.median),
            format_real(s.best),
            format_real(s.worst),
            format_real(s.std),
            s.runs.to_string(),
        ]);
    }
    out
}

fn baseline_json(
    seed: u64,
    runs: usize,
    rows: &[BaselineComparison],
) -> serde_json::Result<String> {
    let value = json!({ "seed": seed, "runs": runs, "functions": rows });
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn baseline_csv(registry: &Registry, rows: &[BaselineComparison]) -> String {
    let mut out = csv_line(
        &[
            "id",
            "rho",
            "budget",
            "isa_mean",
            "isa_median",
            "random_mean",
            "random_median",
            "isa_wins",
        ]
        .map(String::from),
    );
    for r in rows {
        let direction = registry
            .get(&r.id)
            .map(|o| o.direction())
            .expect("resolved earlier");
        out += &csv_line(&[
            r.id.clone(),
            format_real(r.rho),
            r.budget.to_string(),
            format_real(r.isa.mean),
            format_real(r.isa.median),
            format_real(r.random.mean),
            format_real(r.random.median),
            r.isa_wins(direction).to_string(),
        ]);
    }
    out
}
