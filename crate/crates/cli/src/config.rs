use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use mfdfa::fluctuation::MAX_ORDER;
use mfdfa::scaling::{DEFAULT_Q_GRID, MIN_FIT_SCALES};
use mfdfa::segmentation::min_window;
use mfdfa::{Method, SurrogateMode};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Mfdfa,
    Biosw,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Mfdfa => vec![Method::MfDfa],
            MethodChoice::Biosw => vec![Method::BiOsw],
            MethodChoice::Both => vec![Method::MfDfa, Method::BiOsw],
        }
    }
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mfdfa" | "mf-dfa" => Ok(MethodChoice::Mfdfa),
            "biosw" | "bi-osw" => Ok(MethodChoice::Biosw),
            "both" => Ok(MethodChoice::Both),
            other => Err(format!("unknown method `{other}` (expected mfdfa, biosw or both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    /// Positive prices, converted to log returns before analysis.
    Price,
    Return,
}

impl FromStr for InputKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "price" | "prices" => Ok(InputKind::Price),
            "return" | "returns" => Ok(InputKind::Return),
            other => Err(format!("unknown kind `{other}` (expected price or return)")),
        }
    }
}

/// Input column, by header name or 0-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl FromStr for ColumnSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty column selector".into());
        }
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Name(n) => write!(f, "{n}"),
            ColumnSelector::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScaleSpec {
    /// Derived from the series length and detrending order.
    Auto,
    LogSpaced { min: usize, max: usize, count: usize },
}

impl FromStr for ScaleSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ScaleSpec::Auto);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts.as_slice() else {
            return Err(format!("scales `{s}` must be `min:max:count` or `auto`"));
        };
        let num = |v: &str, what: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("scales: {what} `{v}` is not a positive integer"))
        };
        Ok(ScaleSpec::LogSpaced {
            min: num(min, "min")?,
            max: num(max, "max")?,
            count: num(count, "count")?,
        })
    }
}

/// Parses `default` or a comma-separated list of reals.
pub fn parse_q_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    if s.trim().eq_ignore_ascii_case("default") {
        return Ok(DEFAULT_Q_GRID.to_vec());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("q grid entry `{}` is not a number", v.trim()))
        })
        .collect()
}

/// Parses `lo:hi`.
pub fn parse_fit_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("fit range `{s}` must be `lo:hi`"))?;
    let num = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| format!("fit range bound `{v}` is not a positive integer"))
    };
    Ok((num(lo)?, num(hi)?))
}

/// Parses a comma-separated list of surrogate modes; `none` means no
/// surrogates.
pub fn parse_surrogates(s: &str) -> std::result::Result<Vec<SurrogateMode>, String> {
    if s.trim().eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| match v.trim().to_ascii_lowercase().as_str() {
            "shuffle" => Ok(SurrogateMode::Shuffle),
            "fisher-yates" | "fisher_yates" => Ok(SurrogateMode::FisherYates),
            "phase-single" | "phase_single_angle" => Ok(SurrogateMode::PhaseSingleAngle),
            "phase-random" | "phase_random" => Ok(SurrogateMode::PhaseRandom),
            other => Err(format!(
                "unknown surrogate `{other}` (expected shuffle, fisher-yates, phase-single, phase-random or none)"
            )),
        })
        .collect()
}

/// A q grid as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid(pub Vec<f64>);

impl FromStr for QGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_q_grid(s).map(QGrid)
    }
}

/// Surrogate modes as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateList(pub Vec<SurrogateMode>);

impl FromStr for SurrogateList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_surrogates(s).map(SurrogateList)
    }
}

pub fn parse_delimiter(s: &str) -> std::result::Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter `{s}` must be a single ASCII character or `tab`")),
    }
}

/// Report label of a surrogate family.
pub fn variant_name(mode: SurrogateMode) -> &'static str {
    if mode.is_shuffle() {
        "shuffled"
    } else {
        "surrogate"
    }
}

pub const DEFAULT_OVERLAP_FRACTION: f64 = 0.25;
pub const DEFAULT_REPLICATES: usize = 10;

/// Everything that determines a report. Echoed verbatim into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub column: ColumnSelector,
    pub kind: InputKind,
    pub delimiter: char,
    pub method: MethodChoice,
    pub order: usize,
    pub q_grid: Vec<f64>,
    pub scales: ScaleSpec,
    /// `l / s`; the overlap at scale `s` is `floor(fraction * s)`, at least 1.
    pub overlap_fraction: f64,
    /// Inclusive scale ranges for the log-log fit; empty means the whole
    /// scale grid.
    pub fit_ranges: Vec<(usize, usize)>,
    pub surrogates: Vec<SurrogateMode>,
    pub replicates: usize,
    pub seed: u64,
}

impl AnalysisConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            column: ColumnSelector::Index(1),
            kind: InputKind::Price,
            delimiter: ',',
            method: MethodChoice::Both,
            order: 1,
            q_grid: DEFAULT_Q_GRID.to_vec(),
            scales: ScaleSpec::Auto,
            overlap_fraction: DEFAULT_OVERLAP_FRACTION,
            fit_ranges: Vec::new(),
            surrogates: vec![SurrogateMode::Shuffle, SurrogateMode::PhaseSingleAngle],
            replicates: DEFAULT_REPLICATES,
            seed: 0,
        }
    }

    /// Checks everything that does not depend on the data.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(1..=MAX_ORDER).contains(&self.order) {
            return bad(format!("--order must be between 1 and {MAX_ORDER}, got {}", self.order));
        }
        if self.q_grid.len() < 3 {
            return bad("--q-grid needs at least 3 values for the singularity spectrum".into());
        }
        if self.q_grid.iter().any(|q| !q.is_finite()) {
            return bad("--q-grid values must be finite".into());
        }
        if self.q_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("--q-grid must be strictly increasing without duplicates".into());
        }
        if !(self.overlap_fraction > 0.0 && self.overlap_fraction < 0.5) {
            return bad(format!(
                "--overlap-frac must lie strictly between 0 and 0.5, got {}",
                self.overlap_fraction
            ));
        }
        if self.replicates == 0 {
            return bad("--replicates must be at least 1".into());
        }
        if !self.delimiter.is_ascii() {
            return bad("--delimiter must be ASCII".into());
        }
        let floor = min_window(self.order).max(4);
        if let ScaleSpec::LogSpaced { min, max, count } = self.scales {
            if min < floor {
                return bad(format!(
                    "--scales minimum {min} is below {floor}, the smallest window order {} can detrend",
                    self.order
                ));
            }
            if min >= max {
                return bad(format!("--scales minimum {min} must be below maximum {max}"));
            }
            if count < MIN_FIT_SCALES {
                return bad(format!("--scales count must be at least {MIN_FIT_SCALES}"));
            }
        }
        for &(lo, hi) in &self.fit_ranges {
            if lo >= hi {
                return bad(format!("--fit-range {lo}:{hi} is empty"));
            }
        }
        let shuffles = self.surrogates.iter().filter(|m| m.is_shuffle()).count();
        let phases = self.surrogates.len() - shuffles;
        if shuffles > 1 || phases > 1 {
            return bad("--surrogates takes at most one shuffle mode and one phase mode".into());
        }
        Ok(())
    }
}
