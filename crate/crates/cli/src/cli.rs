//! Command-line interface.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aerial_mec_core::baselines::ExactLimits;
use aerial_mec_core::{check_feasible, coverage, generate, ContentionMode, GenConfig, UavLayout};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::format::{self, SolutionFile};
use crate::harness::{self, Algorithm, RunOptions, SweepParam, SweepSpec};
use crate::record::append_record;

/// Exit status when a solver produced an infeasible plan.
pub const EXIT_INFEASIBLE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "aerial-mec", version, about = "Task offloading in hierarchical UAV/HAP edge computing")]
pub struct Cli {
    /// Directory for outputs whose path is not given explicitly.
    #[arg(long, global = true, env = "AERIAL_MEC_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded scenario file.
    Gen(GenCmd),
    /// Run one algorithm on a scenario file.
    Solve(SolveCmd),
    /// Run algorithms over a parameter grid and many seeds.
    Sweep(SweepCmd),
    /// Check a solution file against a scenario file.
    Check(CheckCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dedicated,
    SerialQueue,
}

impl From<ModeArg> for ContentionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dedicated => ContentionMode::Dedicated,
            ModeArg::SerialQueue => ContentionMode::SerialQueue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Grid,
    Random,
}

/// Generator settings; flags override the config file, which overrides
/// the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct GenArgs {
    /// JSON file with generator settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_iot: Option<usize>,
    #[arg(long)]
    pub n_uav: Option<usize>,
    /// Side of the square region, metres.
    #[arg(long)]
    pub region_m: Option<f64>,
    #[arg(long)]
    pub quota: Option<usize>,
    #[arg(long, value_enum)]
    pub uav_layout: Option<LayoutArg>,
    #[arg(long, value_enum)]
    pub contention_mode: Option<ModeArg>,
    /// HAP computation capability, cycles/s.
    #[arg(long)]
    pub c_h: Option<f64>,
    /// UAV computation capability, cycles/s.
    #[arg(long)]
    pub c_u: Option<f64>,
    /// UAV energy budget, J.
    #[arg(long)]
    pub e_u: Option<f64>,
    /// HAP energy budget, J.
    #[arg(long)]
    pub e_h: Option<f64>,
}

impl GenArgs {
    pub fn resolve(&self) -> Result<GenConfig> {
        let mut cfg = match &self.config {
            Some(p) => format::load_gen_config(p)?,
            None => GenConfig::default(),
        };
        if let Some(v) = self.n_iot {
            cfg.n_iot = v;
        }
        if let Some(v) = self.n_uav {
            cfg.n_uav = v;
        }
        if let Some(v) = self.region_m {
            cfg.region_m = v;
        }
        if let Some(v) = self.quota {
            cfg.quota = v;
        }
        if let Some(v) = self.uav_layout {
            cfg.uav_layout = match v {
                LayoutArg::Grid => UavLayout::Grid,
                LayoutArg::Random => UavLayout::Random,
            };
        }
        if let Some(v) = self.contention_mode {
            cfg.contention_mode = v.into();
        }
        if let Some(v) = self.c_h {
            cfg.hap_compute_cap_cps = v;
        }
        if let Some(v) = self.c_u {
            cfg.uav_compute_cap_cps = v;
        }
        if let Some(v) = self.e_u {
            cfg.uav_energy_budget_j = v;
        }
        if let Some(v) = self.e_h {
            cfg.hap_energy_budget_j = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct GenCmd {
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file [default: <out-dir>/scenario_<seed>.json].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveCmd {
    #[arg(long)]
    pub scenario: PathBuf,
    /// mh, meh, mha, meha, greedy, exact, uav-only or hap-only.
    #[arg(long, default_value = "meha")]
    pub algo: Algorithm,
    /// Solution file [default: <out-dir>/solution_<algo>.json].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metrics CSV the run is appended to [default: <out-dir>/runs.csv].
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Store the per-step event trace in the solution file.
    #[arg(long)]
    pub trace: bool,
    /// Override the scenario's contention mode.
    #[arg(long, value_enum)]
    pub contention_mode: Option<ModeArg>,
    /// Largest instance the exact oracle accepts.
    #[arg(long, default_value_t = aerial_mec_core::baselines::DEFAULT_MAX_IOT)]
    pub exact_max_iot: usize,
}

#[derive(Debug, Args)]
pub struct SweepCmd {
    /// n-iot, c-h or c-u.
    #[arg(long)]
    pub param: SweepParam,
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "meha")]
    pub algos: Vec<Algorithm>,
    /// Number of seeds per cell.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = aerial_mec_core::baselines::DEFAULT_MAX_IOT)]
    pub exact_max_iot: usize,
    /// Results CSV [default: <out-dir>/sweep_<param>.csv]; the aggregate
    /// table and config go next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenArgs,
}

#[derive(Debug, Args)]
pub struct CheckCmd {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(c) => cmd_gen(&cli.out_dir, c),
        Command::Solve(c) => cmd_solve(&cli.out_dir, c),
        Command::Sweep(c) => cmd_sweep(&cli.out_dir, c),
        Command::Check(c) => cmd_check(c),
    }
}

fn cmd_gen(out_dir: &Path, c: GenCmd) -> Result<ExitCode> {
    let cfg = c.gen.resolve()?;
    let scenario = generate(&cfg, c.seed)?;
    let out = c
        .out
        .unwrap_or_else(|| out_dir.join(format!("scenario_{}.json", c.seed)));
    format::save_scenario(&out, &scenario, Some(&cfg))?;
    let cov = coverage(&scenario);
    let covered = (0..scenario.n_iot()).filter(|&i| cov.is_covered(i)).count();
    let links: usize = cov.iot_uavs.iter().map(Vec::len).sum();
    println!(
        "{}: {} IoT, {} UAVs, {} HAP; {} IoT covered, {:.2} UAVs per IoT",
        out.display(),
        scenario.n_iot(),
        scenario.n_uav(),
        scenario.n_hap(),
        covered,
        links as f64 / scenario.n_iot() as f64
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(out_dir: &Path, c: SolveCmd) -> Result<ExitCode> {
    let mut scenario = format::load_scenario(&c.scenario)?;
    if let Some(m) = c.contention_mode {
        scenario.contention_mode = m.into();
    }
    let opts = RunOptions {
        trace: c.trace,
        exact: ExactLimits {
            max_iot: c.exact_max_iot,
            prune: true,
        },
    };
    let run = harness::run_algorithm(&scenario, c.algo, &opts)
        .with_context(|| format!("{} on {}", c.algo, c.scenario.display()))?;

    let mut file = SolutionFile::new(c.algo.as_str(), &scenario, &run.solution, run.report.feasible);
    file.counters = run.counters;
    file.trace = run.trace;
    file.config = json!({
        "scenario": c.scenario.display().to_string(),
        "algorithm": c.algo.as_str(),
        "contention_mode": scenario.contention_mode.as_str(),
        "exact_max_iot": c.exact_max_iot,
        "trace": c.trace,
    });
    let out = c
        .out
        .unwrap_or_else(|| out_dir.join(format!("solution_{}.json", c.algo)));
    format::save_solution(&out, &file)?;
    let metrics = c.metrics.unwrap_or_else(|| out_dir.join("runs.csv"));
    append_record(&metrics, &run.record)?;

    let r = &run.record;
    println!(
        "{}: objective {} bits, {} served, {:.3} J, {:.3} ms",
        c.algo, r.objective_bits, r.served_count, r.total_energy_j, r.runtime_ms
    );
    if !run.report.feasible {
        eprintln!("infeasible solution written to {}", out.display());
        for v in &run.report.violations {
            eprintln!("  {v:?}");
        }
        return Ok(ExitCode::from(EXIT_INFEASIBLE));
    }
    Ok(ExitCode::SUCCESS)
}

/// `dir/stem.csv` -> `dir/stem<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map_or_else(|| "sweep".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_sweep(out_dir: &Path, c: SweepCmd) -> Result<ExitCode> {
    if c.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    if let Some(v) = c.values.iter().find(|v| v.is_nan() || **v <= 0.0) {
        bail!("sweep value {v} must be positive");
    }
    let jobs = c.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    let spec = SweepSpec {
        param: c.param,
        values: c.values,
        algos: c.algos,
        seeds: (c.seed_base..c.seed_base + c.seeds).collect(),
        base: c.gen.resolve()?,
        jobs,
        options: RunOptions {
            trace: false,
            exact: ExactLimits {
                max_iot: c.exact_max_iot,
                prune: true,
            },
        },
    };
    let result = harness::run_sweep(&spec)?;

    let out = c
        .out
        .unwrap_or_else(|| out_dir.join(format!("sweep_{}.csv", spec.param.as_str())));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let create = |p: &Path| File::create(p).map(BufWriter::new).with_context(|| format!("creating {}", p.display()));
    harness::write_sweep_rows(create(&out)?, spec.param, &result.rows)?;
    let agg_path = sibling(&out, "_aggregate.csv");
    harness::write_aggregates(create(&agg_path)?, spec.param, &result.aggregates)?;
    let cfg_path = sibling(&out, "_config.json");
    let mut cfg_text = serde_json::to_string_pretty(&spec)?;
    cfg_text.push('\n');
    std::fs::write(&cfg_path, cfg_text).with_context(|| format!("writing {}", cfg_path.display()))?;

    let failed = result.rows.iter().filter(|r| r.status != harness::CellStatus::Ok).count();
    println!(
        "{} runs ({} failed) -> {}, {}",
        result.rows.len(),
        failed,
        out.display(),
        agg_path.display()
    );
    Ok(if result.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INFEASIBLE)
    })
}

fn cmd_check(c: CheckCmd) -> Result<ExitCode> {
    let scenario = format::load_scenario(&c.scenario)?;
    let file = format::load_solution(&c.solution)?;
    let solution = file
        .solution()
        .map_err(|e| anyhow::anyhow!("{}: {e}", c.solution.display()))?;
    let report = check_feasible(&solution, &scenario)?;
    if report.feasible {
        println!("feasible");
        return Ok(ExitCode::SUCCESS);
    }
    println!("infeasible: {} violation(s)", report.violations.len());
    for v in &report.violations {
        println!("  {} {:?}: {} > {}", v.constraint, v.entities, v.lhs, v.rhs);
    }
    Ok(ExitCode::from(EXIT_INFEASIBLE))
}
