//! Command-line front end: instance inspection, arc filtering, exact solves,
//! annealing runs, model export, and CSV regeneration of the benchmark
//! tables.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use caf_tsp::anneal::{anneal_solve, AnnealParams};
use caf_tsp::bench::{self, ExperimentConfig};
use caf_tsp::caf::{caf_filter, caf_filter_with_k, dirac_certificate, k_of};
use caf_tsp::exact::{branch_and_bound, held_karp, Engine, SolveStatus};
use caf_tsp::export::{export_ilp, SubtourMode, DEFAULT_ENUMERATE_LIMIT};
use caf_tsp::model::{complete_arcs, count_variables, Instance};
use caf_tsp::tsplib::{parse_tsplib_path, DistanceRounding, RawTsplibFile, TsplibError};

const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_TIME_LIMIT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "caf-tsp", version, about = "TSP toolkit with cost-based arc filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    HeldKarp,
    BranchBound,
}

impl From<EngineArg> for Engine {
    fn from(value: EngineArg) -> Self {
        match value {
            EngineArg::HeldKarp => Engine::HeldKarp,
            EngineArg::BranchBound => Engine::BranchBound,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    /// Path to a TSPLIB EUC_2D instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Use TSPLIB nearest-integer distance rounding instead of exact values.
    #[arg(long)]
    rounded_distances: bool,
}

impl InstanceArgs {
    fn load(&self) -> Result<RawTsplibFile, TsplibError> {
        parse_tsplib_path(&self.instance)
    }

    fn rounding(&self) -> DistanceRounding {
        if self.rounded_distances {
            DistanceRounding::NearestInteger
        } else {
            DistanceRounding::Exact
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    /// Inclusive prefix-size range, e.g. 5..17.
    #[arg(long, value_parser = parse_range)]
    n_range: (usize, usize),
}

#[derive(Args)]
struct OutputArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArg {
    fn write(&self, content: &str) -> std::io::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, content),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad upper bound in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance and print a summary.
    Parse {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Arc filtering utilities.
    Caf {
        #[command(subcommand)]
        command: CafCommand,
    },
    /// Solve one prefix instance to proven optimality.
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Prefix size.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "held-karp")]
        engine: EngineArg,
        /// Restrict the solve to the filtered arc set.
        #[arg(long, overrides_with = "no_caf")]
        caf: bool,
        #[arg(long = "no-caf")]
        no_caf: bool,
        /// Time limit in seconds.
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        /// Experimental: neighbor count for the filter. Values below
        /// ceil(n/2) void the feasibility guarantee.
        #[arg(long)]
        k_override: Option<usize>,
    },
    /// Export the integer linear model with enumerated subtour constraints.
    Export {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, overrides_with = "no_caf")]
        caf: bool,
        #[arg(long = "no-caf")]
        no_caf: bool,
        /// Skip subtour enumeration (degree constraints only).
        #[arg(long)]
        omit_subtours: bool,
        #[command(flatten)]
        output: OutputArg,
    },
    /// One simulated-annealing run over the chosen arc regime.
    Anneal {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, overrides_with = "no_caf")]
        caf: bool,
        #[arg(long = "no-caf")]
        no_caf: bool,
        #[arg(long, default_value_t = 10.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// key=value annealing parameter overrides, one per line.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Variable-count table (complete vs filtered) as CSV.
    Table2 {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Exact-objective table for both arc regimes as CSV.
    Table3 {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value = "held-karp")]
        engine: EngineArg,
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        /// Print timing columns as 0.00 for byte-reproducible output.
        #[arg(long)]
        redact_timings: bool,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Annealing-statistics table for both arc regimes as CSV.
    Table4 {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        redact_timings: bool,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Variable-count curves for plotting as CSV.
    Fig1 {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Subcommand)]
enum CafCommand {
    /// Write the filtered arc set as CSV lines `i,j,c_ij`.
    Dump {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k_override: Option<usize>,
        #[command(flatten)]
        output: OutputArg,
    },
}

fn load_prefix(args: &InstanceArgs, n: usize) -> Result<Instance, TsplibError> {
    args.load()?.take_prefix_with(n, args.rounding())
}

fn run(cli: Cli) -> Result<u8, anyhow::Error> {
    match cli.command {
        Command::Parse { instance } => {
            let file = instance.load()?;
            println!("name: {}", file.name);
            println!("dimension: {}", file.dimension);
            println!("edge_weight_type: EUC_2D");
            let (id, x, y) = file.coords[0];
            println!("first coordinate: {id} ({x}, {y})");
        }
        Command::Caf {
            command:
                CafCommand::Dump {
                    instance,
                    n,
                    k_override,
                    output,
                },
        } => {
            let inst = load_prefix(&instance, n)?;
            let result = match k_override {
                Some(k) => {
                    eprintln!(
                        "warning: k={k} overrides the default {}; feasibility is only \
                         guaranteed for k >= ceil(n/2)",
                        k_of(n)
                    );
                    caf_filter_with_k(&inst, k)
                }
                None => caf_filter(&inst),
            };
            let mut out = String::new();
            for (i, j) in result.arcs.iter() {
                out.push_str(&format!("{i},{j},{:.6}\n", inst.cost(i, j)));
            }
            output.write(&out)?;
        }
        Command::Solve {
            instance,
            n,
            engine,
            caf,
            no_caf,
            time_limit,
            k_override,
        } => {
            let inst = load_prefix(&instance, n)?;
            let use_caf = caf || !no_caf;
            let arcs = if use_caf {
                let result = match k_override {
                    Some(k) => {
                        eprintln!(
                            "warning: k={k} voids the feasibility guarantee below \
                             ceil(n/2)={}",
                            k_of(n)
                        );
                        caf_filter_with_k(&inst, k)
                    }
                    None => caf_filter(&inst),
                };
                let cert = dirac_certificate(&result.arcs);
                println!(
                    "arcs: {} (min degree {}, feasibility guaranteed: {})",
                    count_variables(&result.arcs),
                    cert.min_degree,
                    cert.hamiltonicity_guaranteed
                );
                result.arcs
            } else {
                complete_arcs(&inst)
            };
            let limit = Duration::from_secs_f64(time_limit);
            let result = match Engine::from(engine) {
                Engine::HeldKarp => held_karp(&inst, &arcs, limit)?,
                Engine::BranchBound => branch_and_bound(&inst, &arcs, limit),
            };
            println!("status: {:?}", result.status);
            println!("bound: {}", result.best_bound);
            println!("elapsed_s: {:.3}", result.elapsed.as_secs_f64());
            if let Some(tour) = &result.tour {
                println!("objective: {:.2}", tour.cost());
                let order: Vec<String> = tour.order().iter().map(|v| v.to_string()).collect();
                println!("tour: {}", order.join(" "));
            }
            if result.status == SolveStatus::TimeLimit {
                return Ok(EXIT_TIME_LIMIT);
            }
        }
        Command::Export {
            instance,
            n,
            caf,
            no_caf,
            omit_subtours,
            output,
        } => {
            let inst = load_prefix(&instance, n)?;
            let use_caf = caf || !no_caf;
            let arcs = if use_caf {
                caf_filter(&inst).arcs
            } else {
                complete_arcs(&inst)
            };
            let mode = if omit_subtours {
                SubtourMode::Omit
            } else {
                SubtourMode::Enumerate
            };
            let model = export_ilp(&inst, &arcs, mode, DEFAULT_ENUMERATE_LIMIT)?;
            output.write(&model.body)?;
            let meta = format!(
                "variables={} degree_constraints={} subtour_constraints={}\n",
                model.num_variables, model.num_degree_constraints, model.num_subtour_constraints
            );
            match &output.out {
                Some(path) => {
                    let mut meta_path = path.as_os_str().to_owned();
                    meta_path.push(".meta");
                    std::fs::write(meta_path, meta)?;
                }
                None => eprint!("{meta}"),
            }
        }
        Command::Anneal {
            instance,
            n,
            caf,
            no_caf,
            time_limit,
            seed,
            config,
        } => {
            let inst = load_prefix(&instance, n)?;
            let use_caf = caf || !no_caf;
            let arcs = if use_caf {
                caf_filter(&inst).arcs
            } else {
                complete_arcs(&inst)
            };
            let mut params = AnnealParams::for_instance(&inst);
            params.max_time = Duration::from_secs_f64(time_limit);
            params.seed = seed;
            if let Some(path) = config {
                params.apply_config(&std::fs::read_to_string(path)?)?;
            }
            let outcome = anneal_solve(&inst, &arcs, &params);
            println!("objective: {:.2}", outcome.tour.cost());
            println!("feasible_in_arcs: {}", outcome.feasible_in_arcs);
            println!("elapsed_s: {:.3}", outcome.elapsed.as_secs_f64());
            let order: Vec<String> = outcome.tour.order().iter().map(|v| v.to_string()).collect();
            println!("tour: {}", order.join(" "));
        }
        Command::Table2 {
            instance,
            range,
            output,
        } => {
            let file = instance.load()?;
            let config = table_config(&file, range.n_range);
            output.write(&bench::cmd_table2(&file, &config)?)?;
        }
        Command::Table3 {
            instance,
            range,
            engine,
            time_limit,
            redact_timings,
            output,
        } => {
            let file = instance.load()?;
            let mut config = table_config(&file, range.n_range);
            config.engine = engine.into();
            config.time_limit = Duration::from_secs_f64(time_limit);
            config.redact_timings = redact_timings;
            let outcome = bench::cmd_table3(&file, &config)?;
            output.write(&outcome.csv)?;
            if outcome.hit_time_limit {
                return Ok(EXIT_TIME_LIMIT);
            }
        }
        Command::Table4 {
            instance,
            range,
            runs,
            seed,
            redact_timings,
            output,
        } => {
            let file = instance.load()?;
            let mut config = table_config(&file, range.n_range);
            config.runs = runs;
            config.seed = seed;
            config.redact_timings = redact_timings;
            output.write(&bench::cmd_table4(&file, &config)?)?;
        }
        Command::Fig1 {
            instance,
            range,
            output,
        } => {
            let file = instance.load()?;
            let config = table_config(&file, range.n_range);
            output.write(&bench::cmd_fig1(&file, &config)?)?;
        }
    }
    Ok(0)
}

fn table_config(file: &RawTsplibFile, (lo, hi): (usize, usize)) -> ExperimentConfig {
    ExperimentConfig::new(&file.name, lo, hi)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use caf_tsp::anneal::AnnealError;
    use caf_tsp::export::ExportError;
    use caf_tsp::exact::SolveError;
    if err.is::<TsplibError>()
        || err.is::<AnnealError>()
        || err.is::<std::io::Error>()
        || matches!(
            err.downcast_ref::<ExportError>(),
            Some(ExportError::TooLargeToEnumerate { .. })
        )
        || matches!(err.downcast_ref::<SolveError>(), Some(SolveError::TooLarge(_)))
    {
        EXIT_INPUT_ERROR
    } else {
        EXIT_INTERNAL
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
