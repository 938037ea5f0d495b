//! Solver dispatch, single runs and parameter sweeps.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use aerial_mec_core::baselines::{exact_optimal, greedy, mode_hap_only, mode_uav_only, ExactLimits};
use aerial_mec_core::offload::StageCounters;
use aerial_mec_core::trace::TraceEvent;
use aerial_mec_core::{
    check_feasible, generate, objective_value, run_pipeline, FeasibilityReport, GenConfig,
    Scenario, Solution, Variant,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::record::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum Algorithm {
    Pipeline(Variant),
    Greedy,
    Exact,
    UavOnly,
    HapOnly,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Pipeline(Variant::Mh),
        Algorithm::Pipeline(Variant::Meh),
        Algorithm::Pipeline(Variant::Mha),
        Algorithm::Pipeline(Variant::Meha),
        Algorithm::Greedy,
        Algorithm::Exact,
        Algorithm::UavOnly,
        Algorithm::HapOnly,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Pipeline(v) => v.as_str(),
            Algorithm::Greedy => "greedy",
            Algorithm::Exact => "exact",
            Algorithm::UavOnly => "uav-only",
            Algorithm::HapOnly => "hap-only",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.as_str().to_owned()
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.as_str()).collect();
                format!("unknown algorithm `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub trace: bool,
    pub exact: ExactLimits,
}


#[derive(Debug, Clone)]
pub struct RunOutput {
    pub solution: Solution,
    pub counters: Option<StageCounters>,
    pub trace: Option<Vec<TraceEvent>>,
    pub report: FeasibilityReport,
    pub record: RunRecord,
}

pub fn total_energy(solution: &Solution) -> f64 {
    let d = &solution.derived;
    d.iot_energy_j.iter().sum::<f64>() + d.uav_energy_j.iter().sum::<f64>() + d.hap_energy_j.iter().sum::<f64>()
}

/// Runs one algorithm and checks its output.
pub fn run_algorithm(
    scenario: &Scenario,
    algo: Algorithm,
    opts: &RunOptions,
) -> aerial_mec_core::Result<RunOutput> {
    let start = Instant::now();
    let (solution, counters, trace) = match algo {
        Algorithm::Pipeline(v) => {
            let out = run_pipeline(scenario, v, opts.trace)?;
            let trace = opts.trace.then(|| out.trace.into_events());
            (out.solution, Some(out.counters), trace)
        }
        Algorithm::Greedy => (greedy(scenario)?, None, None),
        Algorithm::Exact => (exact_optimal(scenario, opts.exact)?.solution, None, None),
        Algorithm::UavOnly => (mode_uav_only(scenario)?, None, None),
        Algorithm::HapOnly => (mode_hap_only(scenario)?, None, None),
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = check_feasible(&solution, scenario)?;
    let c = counters.unwrap_or_default();
    let record = RunRecord {
        seed: scenario.seed,
        variant: algo.as_str().to_owned(),
        n_iot: scenario.n_iot(),
        objective_bits: objective_value(&solution, scenario),
        served_count: solution.served_count(),
        total_energy_j: total_energy(&solution),
        runtime_ms,
        proposals: c.proposals,
        swaps: c.swaps,
        ha_offloads: c.ha_offloads,
        ha_drops: c.ha_drops,
        aa_placements: c.aa_placements,
        contention_mode: scenario.contention_mode.as_str().to_owned(),
    };
    Ok(RunOutput {
        solution,
        counters,
        trace,
        report,
        record,
    })
}

/// Generator setting varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    NIot,
    CH,
    CU,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::NIot => "n-iot",
            SweepParam::CH => "c-h",
            SweepParam::CU => "c-u",
        }
    }

    /// `base` with the parameter set to `value`.
    pub fn apply(&self, base: &GenConfig, value: f64) -> Result<GenConfig, String> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(format!("{} value {value} must be positive", self.as_str()));
        }
        let mut cfg = base.clone();
        match self {
            SweepParam::NIot => {
                if value.fract() != 0.0 {
                    return Err(format!("n-iot value {value} must be an integer"));
                }
                cfg.n_iot = value as usize;
            }
            SweepParam::CH => cfg.hap_compute_cap_cps = value,
            SweepParam::CU => cfg.uav_compute_cap_cps = value,
        }
        Ok(cfg)
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "n-iot" => Ok(SweepParam::NIot),
            "c-h" => Ok(SweepParam::CH),
            "c-u" => Ok(SweepParam::CU),
            _ => Err(format!("unknown sweep parameter `{s}` (expected n-iot, c-h or c-u)")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub algos: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub base: GenConfig,
    #[serde(skip)]
    pub jobs: usize,
    #[serde(skip)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    Infeasible,
    Error(String),
}

impl CellStatus {
    pub fn tag(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::Infeasible => "infeasible".into(),
            CellStatus::Error(msg) => format!("error: {msg}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub algo: Algorithm,
    pub record: RunRecord,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub value: f64,
    pub algo: Algorithm,
    pub runs: usize,
    pub failed: usize,
    pub objective_bits: (f64, f64),
    pub served_count: (f64, f64),
    pub total_energy_j: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
}

impl SweepResult {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status == CellStatus::Ok)
    }
}

fn failed_record(seed: u64, algo: Algorithm, cfg: Option<&GenConfig>) -> RunRecord {
    RunRecord {
        seed,
        variant: algo.as_str().to_owned(),
        n_iot: cfg.map_or(0, |c| c.n_iot),
        objective_bits: 0.0,
        served_count: 0,
        total_energy_j: 0.0,
        runtime_ms: 0.0,
        proposals: 0,
        swaps: 0,
        ha_offloads: 0,
        ha_drops: 0,
        aa_placements: 0,
        contention_mode: cfg.map_or("", |c| c.contention_mode.as_str()).to_owned(),
    }
}

fn run_cell(spec: &SweepSpec, value: f64, algo: Algorithm, seed: u64) -> SweepRow {
    let cfg = match spec.param.apply(&spec.base, value) {
        Ok(c) => c,
        Err(e) => {
            return SweepRow {
                value,
                algo,
                record: failed_record(seed, algo, None),
                status: CellStatus::Error(e),
            }
        }
    };
    let result = generate(&cfg, seed).and_then(|s| run_algorithm(&s, algo, &spec.options));
    match result {
        Ok(out) => SweepRow {
            value,
            algo,
            status: if out.report.feasible {
                CellStatus::Ok
            } else {
                CellStatus::Infeasible
            },
            record: out.record,
        },
        Err(e) => SweepRow {
            value,
            algo,
            record: failed_record(seed, algo, Some(&cfg)),
            status: CellStatus::Error(e.to_string()),
        },
    }
}

/// Sample mean and standard deviation.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn aggregate(rows: &[SweepRow], values: &[f64], algos: &[Algorithm]) -> Vec<Aggregate> {
    let mut out = Vec::new();
    for &value in values {
        for &algo in algos {
            let cell: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.value == value && r.algo == algo)
                .collect();
            let ok: Vec<&RunRecord> = cell
                .iter()
                .filter(|r| r.status == CellStatus::Ok)
                .map(|r| &r.record)
                .collect();
            let pick = |f: fn(&RunRecord) -> f64| -> Vec<f64> { ok.iter().map(|r| f(r)).collect() };
            out.push(Aggregate {
                value,
                algo,
                runs: cell.len(),
                failed: cell.len() - ok.len(),
                objective_bits: mean_std(&pick(|r| r.objective_bits)),
                served_count: mean_std(&pick(|r| r.served_count as f64)),
                total_energy_j: mean_std(&pick(|r| r.total_energy_j)),
            });
        }
    }
    out
}

/// Runs every (value, algorithm, seed) cell. Rows come back in that order
/// whatever the number of worker threads.
pub fn run_sweep(spec: &SweepSpec) -> anyhow::Result<SweepResult> {
    let cells: Vec<(f64, Algorithm, u64)> = spec
        .values
        .iter()
        .flat_map(|&v| {
            spec.algos
                .iter()
                .flat_map(move |&a| spec.seeds.iter().map(move |&s| (v, a, s)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()?;
    let rows: Vec<SweepRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(v, a, s)| run_cell(spec, v, a, s))
            .collect()
    });
    let aggregates = aggregate(&rows, &spec.values, &spec.algos);
    Ok(SweepResult { rows, aggregates })
}

pub const SWEEP_HEADER_PREFIX: [&str; 2] = ["param", "value"];

pub fn write_sweep_rows<W: std::io::Write>(w: W, param: SweepParam, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = SWEEP_HEADER_PREFIX.to_vec();
    header.extend(RunRecord::HEADER);
    header.push("status");
    w.write_record(&header)?;
    for r in rows {
        let mut fields = vec![param.as_str().to_owned(), r.value.to_string()];
        fields.extend(r.record.fields());
        fields.push(r.status.tag());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregates<W: std::io::Write>(w: W, param: SweepParam, aggs: &[Aggregate]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record([
        "param",
        "value",
        "variant",
        "runs",
        "failed",
        "objective_bits_mean",
        "objective_bits_std",
        "served_count_mean",
        "served_count_std",
        "total_energy_j_mean",
        "total_energy_j_std",
    ])?;
    for a in aggs {
        w.write_record([
            param.as_str().to_owned(),
            a.value.to_string(),
            a.algo.to_string(),
            a.runs.to_string(),
            a.failed.to_string(),
            a.objective_bits.0.to_string(),
            a.objective_bits.1.to_string(),
            a.served_count.0.to_string(),
            a.served_count.1.to_string(),
            a.total_energy_j.0.to_string(),
            a.total_energy_j.1.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
