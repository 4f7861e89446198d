use std::time::Instant;

use mfdfa::scaling::{default_scales, log_spaced_scales, MIN_FIT_SCALES};
use mfdfa::surrogate::surrogate;
use mfdfa::{
    delta_h, delta_h_within, describe, fit_hurst_skip_flagged, fluctuation_surface, legendre,
    profile, tau, DetrendConfig, FluctuationSurface, Method, Overlap, SurrogateConfig,
    SurrogateMode, TimeSeries,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{variant_name, AnalysisConfig, ScaleSpec};
use crate::error::{CliError, Result};
use crate::ingest::{ingest, Ingested};
use crate::report::{Analysis, AnalysisReport, Fit, ReplicateStats, SCHEMA_VERSION};

/// Wall-clock seconds per pipeline stage. Kept out of the report so the
/// report stays byte-identical between runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub stage: String,
    pub seconds: f64,
}

impl Timings {
    fn record(&mut self, stage: &str, since: Instant) -> Instant {
        self.stages.push(Stage {
            stage: stage.to_string(),
            seconds: since.elapsed().as_secs_f64(),
        });
        Instant::now()
    }
}

/// Reads the configured input and runs the full analysis.
pub fn analyze(cfg: &AnalysisConfig) -> Result<(AnalysisReport, Timings)> {
    cfg.validate()?;
    let mut timings = Timings::default();
    let start = Instant::now();
    let input = ingest(&cfg.input, &cfg.column, cfg.kind, cfg.delimiter as u8)?;
    timings.record("ingest", start);
    let report = run(cfg, &input, &mut timings)?;
    Ok((report, timings))
}

struct Variant {
    name: &'static str,
    mode: Option<SurrogateMode>,
    seeds: Vec<u64>,
    series: Vec<TimeSeries<f64>>,
}

/// Runs the analysis on an already ingested series.
pub fn run(cfg: &AnalysisConfig, input: &Ingested, timings: &mut Timings) -> Result<AnalysisReport> {
    cfg.validate()?;
    let mut clock = Instant::now();
    let series = &input.series;
    let n = series.len();
    let descriptive = describe(series)?;
    let scales = resolve_scales(cfg, n)?;
    let fit_ranges = if cfg.fit_ranges.is_empty() {
        vec![(scales[0], scales[scales.len() - 1])]
    } else {
        cfg.fit_ranges.clone()
    };
    clock = timings.record("describe", clock);

    let mut variants = vec![Variant {
        name: "original",
        mode: None,
        seeds: Vec::new(),
        series: vec![series.clone()],
    }];
    for &mode in &cfg.surrogates {
        let seeds = replicate_seeds(cfg.seed, mode, cfg.replicates);
        let replicas = seeds
            .par_iter()
            .map(|&seed| surrogate(series, &SurrogateConfig::new(mode, seed)))
            .collect::<mfdfa::Result<Vec<_>>>()?;
        variants.push(Variant {
            name: variant_name(mode),
            mode: Some(mode),
            seeds,
            series: replicas,
        });
    }
    clock = timings.record("surrogates", clock);

    let detrend = DetrendConfig::new(cfg.order)?;
    let overlap = Overlap::Fraction(cfg.overlap_fraction);
    let methods = cfg.method.methods();
    let tasks: Vec<(Method, usize, usize)> = methods
        .iter()
        .flat_map(|&m| {
            variants
                .iter()
                .enumerate()
                .flat_map(move |(v, var)| (0..var.series.len()).map(move |r| (m, v, r)))
        })
        .collect();
    let surfaces = tasks
        .par_iter()
        .map(|&(method, v, r)| {
            let p = profile(&variants[v].series[r])?;
            fluctuation_surface(&p, method, &cfg.q_grid, &scales, overlap, detrend)
        })
        .collect::<mfdfa::Result<Vec<_>>>()?;
    clock = timings.record("fluctuation", clock);

    let mut analyses = Vec::new();
    let mut next = 0;
    for &method in &methods {
        for var in &variants {
            let replicas = &surfaces[next..next + var.series.len()];
            next += var.series.len();
            analyses.push(analysis(method, var, replicas, &fit_ranges)?);
        }
    }
    timings.record("scaling", clock);

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        input: input.summary.clone(),
        descriptive,
        scales,
        fit_ranges,
        analyses,
    })
}

fn resolve_scales(cfg: &AnalysisConfig, n: usize) -> Result<Vec<usize>> {
    let scales = match cfg.scales {
        ScaleSpec::Auto => default_scales(n, cfg.order)?,
        ScaleSpec::LogSpaced { min, max, count } => {
            if max > n / 4 {
                return Err(CliError::Config(format!(
                    "--scales maximum {max} exceeds N/4 = {} for a series of {n} points",
                    n / 4
                )));
            }
            log_spaced_scales(min, max, count)
        }
    };
    if scales.len() < MIN_FIT_SCALES {
        return Err(CliError::Config(format!(
            "only {} distinct scales fit a series of {n} points; at least {MIN_FIT_SCALES} are needed",
            scales.len()
        )));
    }
    Ok(scales)
}

/// Per-replicate seeds, a deterministic function of the master seed and the
/// surrogate mode.
pub fn replicate_seeds(master: u64, mode: SurrogateMode, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(match mode {
        SurrogateMode::Shuffle => 1,
        SurrogateMode::FisherYates => 2,
        SurrogateMode::PhaseSingleAngle => 3,
        SurrogateMode::PhaseRandom => 4,
    });
    (0..count).map(|_| rng.next_u64()).collect()
}

fn analysis(
    method: Method,
    var: &Variant,
    replicas: &[FluctuationSurface<f64>],
    fit_ranges: &[(usize, usize)],
) -> Result<Analysis> {
    let surface = if replicas.len() == 1 {
        replicas[0].clone()
    } else {
        FluctuationSurface::geometric_mean(replicas)?
    };
    let fits = fit_ranges
        .iter()
        .map(|&range| {
            let mut fit = fit(&surface, range)?;
            if var.mode.is_some() {
                let values = replicas
                    .iter()
                    .map(|s| Ok(delta_h(&fit_hurst_skip_flagged(s, range)?)?))
                    .collect::<Result<Vec<f64>>>()?;
                fit.replicate_delta_h = Some(ReplicateStats::from_values(values));
            }
            Ok(fit)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis {
        method,
        variant: var.name.to_string(),
        surrogate_mode: var.mode,
        replicate_seeds: var.seeds.clone(),
        flagged: surface.flagged(),
        surface,
        fits,
    })
}

fn fit(surface: &FluctuationSurface<f64>, range: (usize, usize)) -> Result<Fit> {
    let hurst = fit_hurst_skip_flagged(surface, range)?;
    let spectrum = legendre(&hurst)?;
    Ok(Fit {
        scale_range: range,
        tau: tau(&hurst),
        delta_h: delta_h(&hurst)?,
        delta_h_q10: delta_h_within(&hurst, -10.0, 10.0).ok(),
        delta_alpha: spectrum.width,
        h2: hurst.h_at(2.0),
        h_non_increasing: hurst.is_non_increasing(0.0),
        spectrum,
        hurst,
        replicate_delta_h: None,
    })
}
