//! Surrogate series for separating the two sources of multifractality:
//! shuffling destroys temporal correlations but keeps the value distribution,
//! Fourier phase rotation keeps the power spectrum but pulls the distribution
//! towards Gaussian.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{TimeSeries, MIN_ANALYSIS_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateMode {
    /// `swap_factor * N` random transpositions.
    Shuffle,
    /// Single-pass unbiased Fisher-Yates permutation.
    FisherYates,
    /// Every positive frequency rotated by the same random angle.
    PhaseSingleAngle,
    /// Independent random angle per positive frequency.
    PhaseRandom,
}

impl SurrogateMode {
    pub fn name(self) -> &'static str {
        match self {
            SurrogateMode::Shuffle => "shuffle",
            SurrogateMode::FisherYates => "fisher_yates",
            SurrogateMode::PhaseSingleAngle => "phase_single_angle",
            SurrogateMode::PhaseRandom => "phase_random",
        }
    }

    pub fn is_shuffle(self) -> bool {
        matches!(self, SurrogateMode::Shuffle | SurrogateMode::FisherYates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateConfig {
    pub seed: u64,
    pub mode: SurrogateMode,
    /// Transpositions per sample in [`SurrogateMode::Shuffle`].
    pub swap_factor: usize,
    /// Overrides the drawn angle in [`SurrogateMode::PhaseSingleAngle`].
    pub fixed_angle: Option<f64>,
}

pub const DEFAULT_SWAP_FACTOR: usize = 20;

impl SurrogateConfig {
    pub fn new(mode: SurrogateMode, seed: u64) -> Self {
        Self {
            seed,
            mode,
            swap_factor: DEFAULT_SWAP_FACTOR,
            fixed_angle: None,
        }
    }

    pub fn with_fixed_angle(mut self, angle: f64) -> Self {
        self.fixed_angle = Some(angle);
        self
    }
}

/// Random permutation of the series.
pub fn shuffle<T: Scalar>(series: &TimeSeries<T>, cfg: &SurrogateConfig) -> Result<TimeSeries<T>> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: series.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut values = series.values().to_vec();
    match cfg.mode {
        SurrogateMode::Shuffle => {
            if cfg.swap_factor == 0 {
                return Err(Error::InvalidConfig("swap_factor must be at least 1".into()));
            }
            let n = values.len();
            for _ in 0..cfg.swap_factor * n {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                values.swap(a, b);
            }
        }
        SurrogateMode::FisherYates => values.shuffle(&mut rng),
        other => {
            return Err(Error::InvalidConfig(format!(
                "{} is not a shuffling mode",
                other.name()
            )))
        }
    }
    TimeSeries::new(
        values,
        format!("{} [{}]", series.label(), cfg.mode.name()),
        series.kind(),
    )
}

/// Phase-rotated surrogate with the same amplitude spectrum.
pub fn phase_randomize<T: Scalar>(
    series: &TimeSeries<T>,
    cfg: &SurrogateConfig,
) -> Result<TimeSeries<T>> {
    phase_randomize_with_residue(series, cfg).map(|(s, _)| s)
}

/// [`phase_randomize`] that also returns the largest imaginary part left by
/// the inverse transform, which conjugate symmetry should keep at rounding
/// level.
pub fn phase_randomize_with_residue<T: Scalar>(
    series: &TimeSeries<T>,
    cfg: &SurrogateConfig,
) -> Result<(TimeSeries<T>, T)> {
    let n = series.len();
    if n < MIN_ANALYSIS_LEN {
        return Err(Error::TooShort {
            required: MIN_ANALYSIS_LEN,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let two_pi = std::f64::consts::TAU;
    let single = match cfg.mode {
        SurrogateMode::PhaseSingleAngle => Some(match cfg.fixed_angle {
            Some(theta) => theta,
            None => loop {
                let theta = rng.random_range(0.0..two_pi);
                if theta > 0.0 {
                    break theta;
                }
            },
        }),
        SurrogateMode::PhaseRandom => None,
        other => {
            return Err(Error::InvalidConfig(format!(
                "{} is not a phase mode",
                other.name()
            )))
        }
    };

    let mut planner = FftPlanner::<T>::new();
    let mut spectrum: Vec<Complex<T>> = series
        .values()
        .iter()
        .map(|&x| Complex::new(x, T::zero()))
        .collect();
    planner.plan_fft_forward(n).process(&mut spectrum);

    spectrum[0].im = T::zero();
    if n % 2 == 0 {
        spectrum[n / 2].im = T::zero();
    }
    for k in 1..=(n - 1) / 2 {
        let theta = single.unwrap_or_else(|| rng.random_range(0.0..two_pi));
        let rotation = Complex::new(T::of(theta.cos()), T::of(theta.sin()));
        spectrum[k] = spectrum[k] * rotation;
        spectrum[n - k] = spectrum[k].conj();
    }

    planner.plan_fft_inverse(n).process(&mut spectrum);
    let scale = T::of_usize(n);
    let residue = spectrum
        .iter()
        .map(|c| (c.im / scale).abs())
        .fold(T::zero(), T::max);
    let values = spectrum.into_iter().map(|c| c.re / scale).collect();
    let out = TimeSeries::new(
        values,
        format!("{} [{}]", series.label(), cfg.mode.name()),
        series.kind(),
    )?;
    Ok((out, residue))
}

/// Dispatches on `cfg.mode`.
pub fn surrogate<T: Scalar>(series: &TimeSeries<T>, cfg: &SurrogateConfig) -> Result<TimeSeries<T>> {
    if cfg.mode.is_shuffle() {
        shuffle(series, cfg)
    } else {
        phase_randomize(series, cfg)
    }
}

/// `|X_k|` for every bin of the discrete Fourier transform.
pub fn amplitude_spectrum<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut buf: Vec<Complex<T>> = values.iter().map(|&x| Complex::new(x, T::zero())).collect();
    FftPlanner::<T>::new()
        .plan_fft_forward(values.len())
        .process(&mut buf);
    buf.into_iter().map(|c| c.norm()).collect()
}
