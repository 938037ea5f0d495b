//! Per-run metrics rows and their CSV layout.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Metrics of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub variant: String,
    pub n_iot: usize,
    pub objective_bits: f64,
    pub served_count: usize,
    pub total_energy_j: f64,
    pub runtime_ms: f64,
    pub proposals: usize,
    pub swaps: usize,
    pub ha_offloads: usize,
    pub ha_drops: usize,
    pub aa_placements: usize,
    pub contention_mode: String,
}

impl RunRecord {
    pub const HEADER: [&'static str; 13] = [
        "seed",
        "variant",
        "n_iot",
        "objective_bits",
        "served_count",
        "total_energy_j",
        "runtime_ms",
        "proposals",
        "swaps",
        "ha_offloads",
        "ha_drops",
        "aa_placements",
        "contention_mode",
    ];

    pub fn fields(&self) -> Vec<String> {
        vec![
            self.seed.to_string(),
            self.variant.clone(),
            self.n_iot.to_string(),
            self.objective_bits.to_string(),
            self.served_count.to_string(),
            self.total_energy_j.to_string(),
            format!("{:.3}", self.runtime_ms),
            self.proposals.to_string(),
            self.swaps.to_string(),
            self.ha_offloads.to_string(),
            self.ha_drops.to_string(),
            self.aa_placements.to_string(),
            self.contention_mode.clone(),
        ]
    }
}

/// Appends one row, writing the header first if the file is new or empty.
pub fn append_record(path: &Path, record: &RunRecord) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let fresh = file.metadata()?.len() == 0;
    let mut w = csv::Writer::from_writer(Vec::new());
    if fresh {
        w.write_record(RunRecord::HEADER)?;
    }
    w.write_record(record.fields())?;
    file.write_all(&w.into_inner()?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
