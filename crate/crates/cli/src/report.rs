//! The canonical JSON report. Plot CSVs and the terminal tables are
//! projections of it.

use std::path::Path;

use mfdfa::{
    DescriptiveStats, FluctuationSurface, HurstSpectrum, Method, ScalingExponents,
    SingularitySpectrum, SurrogateMode,
};
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::error::{CliError, Result};
use crate::ingest::InputSummary;

/// Bumped on any incompatible change to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: AnalysisConfig,
    pub input: InputSummary,
    pub descriptive: DescriptiveStats<f64>,
    /// Scale grid every surface is evaluated on.
    pub scales: Vec<usize>,
    pub fit_ranges: Vec<(usize, usize)>,
    /// One entry per method and variant, method-major.
    pub analyses: Vec<Analysis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub method: Method,
    /// `original`, `shuffled` or `surrogate`.
    pub variant: String,
    pub surrogate_mode: Option<SurrogateMode>,
    /// Seeds of the surrogate replicates, empty for the original series.
    pub replicate_seeds: Vec<u64>,
    /// For surrogates, the geometric mean of the replicate surfaces.
    pub surface: FluctuationSurface<f64>,
    /// `(q, s)` cells whose moment diverged on a zero-variance window.
    pub flagged: Vec<(f64, usize)>,
    /// One entry per fit range, in configuration order.
    pub fits: Vec<Fit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub scale_range: (usize, usize),
    pub hurst: HurstSpectrum<f64>,
    pub tau: ScalingExponents<f64>,
    pub spectrum: SingularitySpectrum<f64>,
    /// `h(q_min) - h(q_max)` over the whole q grid.
    pub delta_h: f64,
    /// The same over `-10 <= q <= 10`, when the grid has two points there.
    pub delta_h_q10: Option<f64>,
    pub delta_alpha: f64,
    pub h2: Option<f64>,
    /// Whether `h` never increases along the grid. Diagnostic only.
    pub h_non_increasing: bool,
    /// `delta_h` of every surrogate replicate fitted on its own.
    pub replicate_delta_h: Option<ReplicateStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateStats {
    pub values: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl ReplicateStats {
    pub fn from_values(values: Vec<f64>) -> Self {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { values, mean, min, max }
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text).map_err(|e| CliError::Report(e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(CliError::Report(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
            _ => CliError::Read {
                path: path.to_path_buf(),
                source: e,
            },
        })?;
        Self::from_json(&text)
    }

    pub fn analysis(&self, method: Method, variant: &str) -> Option<&Analysis> {
        self.analyses
            .iter()
            .find(|a| a.method == method && a.variant == variant)
    }
}
