//! Experiment harness: regenerates the model-size, exact-objective, and
//! annealing-statistics tables as CSV text.

use std::fmt::Write as _;
use std::time::Duration;

use sha2::{Digest, Sha256};

use crate::anneal::{run_trials, AnnealParams, TrialStats};
use crate::caf::caf_filter;
use crate::exact::{branch_and_bound, held_karp, Engine, SolveStatus};
use crate::model::{complete_arcs, count_variables, reduction_gap_percent};
use crate::tsplib::RawTsplibFile;

const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instance_name: String,
    pub n_lo: usize,
    pub n_hi: usize,
    pub engine: Engine,
    pub use_caf: bool,
    pub time_limit: Duration,
    pub runs: usize,
    pub seed: u64,
    /// Print timing columns as 0.00 so outputs are byte-reproducible.
    pub redact_timings: bool,
}

impl ExperimentConfig {
    pub fn new(instance_name: &str, n_lo: usize, n_hi: usize) -> Self {
        Self {
            instance_name: instance_name.to_string(),
            n_lo,
            n_hi,
            engine: Engine::HeldKarp,
            use_caf: true,
            time_limit: Duration::from_secs(300),
            runs: 5,
            seed: 0,
            redact_timings: false,
        }
    }

    fn hash(&self) -> String {
        let canonical = format!(
            "instance={};range={}..{};engine={:?};caf={};limit={};runs={};seed={}",
            self.instance_name,
            self.n_lo,
            self.n_hi,
            self.engine,
            self.use_caf,
            self.time_limit.as_secs_f64(),
            self.runs,
            self.seed
        );
        hex::encode(&Sha256::digest(canonical.as_bytes())[..8])
    }

    fn header(&self) -> String {
        format!(
            "# config_hash={} artifact_version={} engine={:?}\n",
            self.hash(),
            ARTIFACT_VERSION,
            self.engine
        )
    }
}

fn engine_name(engine: Engine) -> &'static str {
    match engine {
        Engine::HeldKarp => "held_karp",
        Engine::BranchBound => "branch_bound",
    }
}

/// Variable counts and percentage reduction per prefix size.
pub fn cmd_table2(file: &RawTsplibFile, config: &ExperimentConfig) -> anyhow::Result<String> {
    let mut out = config.header();
    out.push_str("n,vars_without,vars_with,gap_percent\n");
    for n in config.n_lo..=config.n_hi {
        let instance = file.take_prefix(n)?;
        let without = count_variables(&complete_arcs(&instance));
        let with = count_variables(&caf_filter(&instance).arcs);
        let gap = reduction_gap_percent(without, with)?;
        writeln!(out, "{n},{without},{with},{gap}").unwrap();
    }
    Ok(out)
}

/// The two variable-count curves, one row per prefix size.
pub fn cmd_fig1(file: &RawTsplibFile, config: &ExperimentConfig) -> anyhow::Result<String> {
    let mut out = config.header();
    out.push_str("n,vars_without,vars_with\n");
    for n in config.n_lo..=config.n_hi {
        let instance = file.take_prefix(n)?;
        let without = count_variables(&complete_arcs(&instance));
        let with = count_variables(&caf_filter(&instance).arcs);
        writeln!(out, "{n},{without},{with}").unwrap();
    }
    Ok(out)
}

pub struct Table3Outcome {
    pub csv: String,
    pub hit_time_limit: bool,
}

fn fmt_time(seconds: f64, redact: bool) -> String {
    if redact {
        "0.00".to_string()
    } else {
        format!("{seconds:.2}")
    }
}

/// Exact objectives with and without filtering. Timing columns are this
/// machine's wall clock and are not comparable across hosts.
pub fn cmd_table3(file: &RawTsplibFile, config: &ExperimentConfig) -> anyhow::Result<Table3Outcome> {
    let mut out = config.header();
    out.push_str("n,of_without,time_without,of_with,time_with,status\n");
    let mut hit_time_limit = false;
    for n in config.n_lo..=config.n_hi {
        let instance = file.take_prefix(n)?;
        let caf = caf_filter(&instance);
        let mut cells = Vec::new();
        let mut status = SolveStatus::Optimal;
        for arcs in [complete_arcs(&instance), caf.arcs] {
            let result = match config.engine {
                Engine::HeldKarp => held_karp(&instance, &arcs, config.time_limit)?,
                Engine::BranchBound => branch_and_bound(&instance, &arcs, config.time_limit),
            };
            match result.objective {
                Some(of) => cells.push(format!(
                    "{of:.2},{}",
                    fmt_time(result.elapsed.as_secs_f64(), config.redact_timings)
                )),
                None => {
                    cells.push(format!(
                        ",{}",
                        fmt_time(result.elapsed.as_secs_f64(), config.redact_timings)
                    ));
                    status = result.status;
                }
            }
            if result.status == SolveStatus::TimeLimit {
                hit_time_limit = true;
            }
        }
        writeln!(out, "{n},{},{},{status:?}", cells[0], cells[1]).unwrap();
    }
    Ok(Table3Outcome {
        csv: out,
        hit_time_limit,
    })
}

fn stats_cells(stats: &TrialStats, redact: bool) -> String {
    let of = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.2}"));
    let gap = stats
        .gap_percent
        .map_or(String::new(), |g| format!("{}", g.round() as i64));
    format!(
        "{:.2},{},{},{},{:.0},{},{},{},{}",
        stats.of_opt,
        of(stats.of_avg),
        of(stats.of_std),
        gap,
        stats.pct_solved,
        fmt_time(stats.time_avg, redact),
        fmt_time(stats.time_std, redact),
        fmt_time(stats.solve_time_avg, redact),
        fmt_time(stats.solve_time_std, redact),
    )
}

/// Annealing-protocol statistics per prefix size, both arc regimes, plus an
/// AVG summary row. Reference optima come from the exact solver over the
/// same arc set each regime uses.
pub fn cmd_table4(file: &RawTsplibFile, config: &ExperimentConfig) -> anyhow::Result<String> {
    let mut out = config.header();
    writeln!(
        out,
        "# runs={} seed={} max_time_s=10 cooling_rate=0.995",
        config.runs, config.seed
    )
    .unwrap();
    out.push_str(concat!(
        "n,",
        "of_opt_without,of_avg_without,of_std_without,gap_without,pct_solved_without,",
        "time_avg_without,time_std_without,solve_time_avg_without,solve_time_std_without,",
        "of_opt_with,of_avg_with,of_std_with,gap_with,pct_solved_with,",
        "time_avg_with,time_std_with,solve_time_avg_with,solve_time_std_with\n"
    ));

    let mut all_stats: Vec<(usize, TrialStats, TrialStats)> = Vec::new();
    for n in config.n_lo..=config.n_hi {
        let instance = file.take_prefix(n)?;
        let caf = caf_filter(&instance);
        let mut params = AnnealParams::for_instance(&instance);
        params.seed = config.seed;
        let mut per_regime = Vec::new();
        for arcs in [complete_arcs(&instance), caf.arcs] {
            let reference = held_karp(&instance, &arcs, config.time_limit)?;
            let of_opt = reference
                .objective
                .ok_or_else(|| anyhow::anyhow!("no exact reference optimum for n={n}"))?;
            per_regime.push(run_trials(&instance, &arcs, &params, config.runs, of_opt));
        }
        let with = per_regime.pop().unwrap();
        let without = per_regime.pop().unwrap();
        writeln!(
            out,
            "{n},{},{}",
            stats_cells(&without, config.redact_timings),
            stats_cells(&with, config.redact_timings)
        )
        .unwrap();
        all_stats.push((n, without, with));
    }

    let avg = |f: &dyn Fn(&TrialStats) -> Option<f64>, pick: fn(&(usize, TrialStats, TrialStats)) -> &TrialStats| {
        let vals: Vec<f64> = all_stats.iter().filter_map(|row| f(pick(row))).collect();
        if vals.is_empty() {
            String::new()
        } else {
            format!("{:.2}", vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    let mut avg_cells: Vec<String> = vec!["AVG".to_string()];
    for pick in [
        (|row: &(usize, TrialStats, TrialStats)| &row.1) as fn(&_) -> &TrialStats,
        |row: &(usize, TrialStats, TrialStats)| &row.2,
    ] {
        let redact = config.redact_timings;
        avg_cells.push(avg(&|s| Some(s.of_opt), pick));
        avg_cells.push(avg(&|s| s.of_avg, pick));
        avg_cells.push(avg(&|s| s.of_std, pick));
        avg_cells.push(avg(&|s| s.gap_percent, pick));
        avg_cells.push(avg(&|s| Some(s.pct_solved), pick));
        for f in [
            (|s: &TrialStats| s.time_avg) as fn(&TrialStats) -> f64,
            |s| s.time_std,
            |s| s.solve_time_avg,
            |s| s.solve_time_std,
        ] {
            if redact {
                avg_cells.push("0.00".to_string());
            } else {
                avg_cells.push(avg(&|s| Some(f(s)), pick));
            }
        }
    }
    out.push_str(&avg_cells.join(","));
    out.push('\n');
    Ok(out)
}

/// The reduced arc set as CSV lines `i,j,c_ij`.
pub fn caf_dump(file: &RawTsplibFile, n: usize) -> anyhow::Result<String> {
    let instance = file.take_prefix(n)?;
    let caf = caf_filter(&instance);
    let mut out = String::new();
    for (i, j) in caf.arcs.iter() {
        writeln!(out, "{i},{j},{:.6}", instance.cost(i, j)).unwrap();
    }
    Ok(out)
}

pub fn engine_label(engine: Engine) -> &'static str {
    engine_name(engine)
}
