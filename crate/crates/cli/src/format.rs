//! JSON scenario and solution files.
//!
//! Units are spelled out in field names. The U2H antenna gain is stored in
//! dB and held as a linear factor in memory.

use std::fs;
use std::path::{Path, PathBuf};

use aerial_mec_core::model::{db_to_linear, linear_to_db, Derived};
use aerial_mec_core::offload::StageCounters;
use aerial_mec_core::trace::TraceEvent;
use aerial_mec_core::{
    ContentionMode, GenConfig, Hap, IotDevice, LinkModel, Scenario, ScoreRanges, Solution,
    SolverWeights, Uav,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: schema version {found}, expected {expected}")]
    SchemaVersion {
        path: PathBuf,
        found: u32,
        expected: u32,
    },
    #[error("{path}: {source}")]
    Invalid {
        path: PathBuf,
        #[source]
        source: aerial_mec_core::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    bandwidth_i2u_hz: f64,
    ref_snr_per_watt: f64,
    bandwidth_u2h_hz: f64,
    antenna_gain_u2h_db: f64,
    line_loss: f64,
    boltzmann: f64,
    noise_temp_k: f64,
    carrier_hz: f64,
    light_speed_mps: f64,
}

impl From<&LinkModel> for LinkFile {
    fn from(l: &LinkModel) -> Self {
        LinkFile {
            bandwidth_i2u_hz: l.bandwidth_i2u_hz,
            ref_snr_per_watt: l.ref_snr_per_watt,
            bandwidth_u2h_hz: l.bandwidth_u2h_hz,
            antenna_gain_u2h_db: linear_to_db(l.antenna_gain_u2h),
            line_loss: l.line_loss,
            boltzmann: l.boltzmann,
            noise_temp_k: l.noise_temp_k,
            carrier_hz: l.carrier_hz,
            light_speed_mps: l.light_speed_mps,
        }
    }
}

impl From<LinkFile> for LinkModel {
    fn from(l: LinkFile) -> Self {
        LinkModel {
            bandwidth_i2u_hz: l.bandwidth_i2u_hz,
            ref_snr_per_watt: l.ref_snr_per_watt,
            bandwidth_u2h_hz: l.bandwidth_u2h_hz,
            antenna_gain_u2h: db_to_linear(l.antenna_gain_u2h_db),
            line_loss: l.line_loss,
            boltzmann: l.boltzmann,
            noise_temp_k: l.noise_temp_k,
            carrier_hz: l.carrier_hz,
            light_speed_mps: l.light_speed_mps,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: u32,
    seed: u64,
    region_m: f64,
    contention_mode: ContentionMode,
    score_ranges: ScoreRanges,
    link: LinkFile,
    weights: SolverWeights,
    iots: Vec<IotDevice>,
    uavs: Vec<Uav>,
    haps: Vec<Hap>,
    /// Generator settings the instance came from, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GenConfig>,
}

/// Binary decision matrices as 0/1 integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Flags {
    x: Vec<Vec<u8>>,
    beta: Vec<Vec<u8>>,
    gamma: Vec<Vec<u8>>,
    y: Vec<Vec<Vec<u8>>>,
    direct: Vec<Vec<u8>>,
}

/// A solver result as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub schema_version: u32,
    pub algorithm: String,
    pub scenario_seed: u64,
    pub objective_bits: f64,
    pub served_count: usize,
    pub feasible: bool,
    #[serde(flatten)]
    flags: Flags,
    pub derived: Derived,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counters: Option<StageCounters>,
    /// Effective settings of the run.
    #[serde(default)]
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEvent>>,
}

fn to_bits(m: &[Vec<bool>]) -> Vec<Vec<u8>> {
    m.iter().map(|r| r.iter().map(|&b| u8::from(b)).collect()).collect()
}

fn from_bits(m: &[Vec<u8>], what: &str) -> Result<Vec<Vec<bool>>, String> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&v| match v {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(format!("field `{what}`: flag value {other} is not 0 or 1")),
                })
                .collect()
        })
        .collect()
}

impl SolutionFile {
    pub fn new(algorithm: &str, scenario: &Scenario, solution: &Solution, feasible: bool) -> Self {
        SolutionFile {
            schema_version: SCHEMA_VERSION,
            algorithm: algorithm.to_owned(),
            scenario_seed: scenario.seed,
            objective_bits: aerial_mec_core::objective_value(solution, scenario),
            served_count: solution.served_count(),
            feasible,
            flags: Flags {
                x: to_bits(&solution.x),
                beta: to_bits(&solution.beta),
                gamma: to_bits(&solution.gamma),
                y: solution.y.iter().map(|m| to_bits(m)).collect(),
                direct: to_bits(&solution.direct),
            },
            derived: solution.derived.clone(),
            counters: None,
            config: serde_json::Value::Null,
            trace: None,
        }
    }

    pub fn solution(&self) -> Result<Solution, String> {
        let f = &self.flags;
        Ok(Solution {
            x: from_bits(&f.x, "x")?,
            beta: from_bits(&f.beta, "beta")?,
            gamma: from_bits(&f.gamma, "gamma")?,
            y: f.y.iter().map(|m| from_bits(m, "y")).collect::<Result<_, _>>()?,
            direct: from_bits(&f.direct, "direct")?,
            derived: self.derived.clone(),
        })
    }
}

pub fn scenario_to_json(scenario: &Scenario, generator: Option<&GenConfig>) -> String {
    let file = ScenarioFile {
        schema_version: SCHEMA_VERSION,
        seed: scenario.seed,
        region_m: scenario.region_m,
        contention_mode: scenario.contention_mode,
        score_ranges: scenario.score_ranges,
        link: LinkFile::from(&scenario.link),
        weights: scenario.weights.clone(),
        iots: scenario.iots.clone(),
        uavs: scenario.uavs.clone(),
        haps: scenario.haps.clone(),
        generator: generator.cloned(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("scenario serializes");
    s.push('\n');
    s
}

fn parse_error(path: &Path, e: serde_json::Error) -> FormatError {
    FormatError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn check_version(path: &Path, text: &str) -> Result<(), FormatError> {
    #[derive(Deserialize)]
    struct Probe {
        schema_version: Option<u32>,
    }
    let probe: Probe = serde_json::from_str(text).map_err(|e| parse_error(path, e))?;
    match probe.schema_version {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(found) => Err(FormatError::SchemaVersion {
            path: path.to_owned(),
            found,
            expected: SCHEMA_VERSION,
        }),
        None => Err(FormatError::Parse {
            path: path.to_owned(),
            line: 1,
            column: 1,
            message: "missing field `schema_version`".into(),
        }),
    }
}

/// Parses a scenario document; `path` only labels diagnostics.
pub fn scenario_from_json(path: &Path, text: &str) -> Result<(Scenario, Option<GenConfig>), FormatError> {
    check_version(path, text)?;
    let f: ScenarioFile = serde_json::from_str(text).map_err(|e| parse_error(path, e))?;
    let scenario = Scenario {
        iots: f.iots,
        uavs: f.uavs,
        haps: f.haps,
        link: f.link.into(),
        weights: f.weights,
        contention_mode: f.contention_mode,
        score_ranges: f.score_ranges,
        region_m: f.region_m,
        seed: f.seed,
    };
    scenario.validate().map_err(|source| FormatError::Invalid {
        path: path.to_owned(),
        source,
    })?;
    Ok((scenario, f.generator))
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| FormatError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn save_scenario(path: &Path, scenario: &Scenario, generator: Option<&GenConfig>) -> Result<(), FormatError> {
    write(path, &scenario_to_json(scenario, generator))
}

pub fn load_scenario(path: &Path) -> Result<Scenario, FormatError> {
    scenario_from_json(path, &read(path)?).map(|(s, _)| s)
}

pub fn save_solution(path: &Path, file: &SolutionFile) -> Result<(), FormatError> {
    let mut s = serde_json::to_string_pretty(file).expect("solution serializes");
    s.push('\n');
    write(path, &s)
}

pub fn load_solution(path: &Path) -> Result<SolutionFile, FormatError> {
    let text = read(path)?;
    check_version(path, &text)?;
    serde_json::from_str(&text).map_err(|e| parse_error(path, e))
}

/// Loads a generator config; fields left out keep their defaults.
pub fn load_gen_config(path: &Path) -> Result<GenConfig, FormatError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| parse_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use aerial_mec_core::generate;

    #[test]
    fn scenario_round_trip() {
        let cfg = GenConfig::default();
        let s = generate(&cfg, 5).unwrap();
        let text = scenario_to_json(&s, Some(&cfg));
        let (back, gen) = scenario_from_json(Path::new("mem"), &text).unwrap();
        assert_eq!(back, s);
        assert_eq!(gen.unwrap(), cfg);
        assert_eq!(scenario_to_json(&back, Some(&cfg)), text);
    }

    #[test]
    fn antenna_gain_is_stored_in_db() {
        let s = generate(&GenConfig::default(), 1).unwrap();
        assert!((s.link.antenna_gain_u2h - 31.622_776_601_683_793).abs() < 1e-12);
        let v: serde_json::Value = serde_json::from_str(&scenario_to_json(&s, None)).unwrap();
        assert_eq!(v["link"]["antenna_gain_u2h_db"], 15.0);
    }

    #[test]
    fn missing_field_is_named() {
        let s = generate(&GenConfig::default(), 1).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&scenario_to_json(&s, None)).unwrap();
        v.as_object_mut().unwrap().remove("iots");
        let err = scenario_from_json(Path::new("f.json"), &v.to_string()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { .. }));
        assert!(err.to_string().contains("iots"), "{err}");
    }

    #[test]
    fn schema_version_mismatch() {
        let s = generate(&GenConfig::default(), 1).unwrap();
        let text = scenario_to_json(&s, None).replace("\"schema_version\": 1", "\"schema_version\": 9");
        let err = scenario_from_json(Path::new("f.json"), &text).unwrap_err();
        assert!(matches!(err, FormatError::SchemaVersion { found: 9, .. }));
    }

    #[test]
    fn solution_flags_round_trip() {
        let s = generate(&GenConfig { n_iot: 8, ..GenConfig::default() }, 2).unwrap();
        let out = aerial_mec_core::run_pipeline(&s, aerial_mec_core::Variant::Meha, false).unwrap();
        let file = SolutionFile::new("meha", &s, &out.solution, true);
        let text = serde_json::to_string(&file).unwrap();
        let back: SolutionFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.solution().unwrap(), out.solution);
    }

    #[test]
    fn non_binary_flag_rejected() {
        let s = generate(&GenConfig { n_iot: 2, ..GenConfig::default() }, 2).unwrap();
        let sol = Solution::empty(2, 4, 1);
        let mut file = SolutionFile::new("x", &s, &sol, true);
        file.flags.x[0][0] = 2;
        assert!(file.solution().unwrap_err().contains("`x`"));
    }
}
