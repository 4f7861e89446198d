//! Synthetic series with known scaling, used as oracles for the pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{SeriesKind, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    GaussianIid,
    /// Student-t innovations; heavier tails for smaller `df`.
    StudentT { df: f64 },
    /// Multiplicative binomial measure. Each split hands weight `p` to one
    /// half and `1 - p` to the other; with `randomize_halves` the side that
    /// gets `p` is a seeded coin flip per node, otherwise always the left.
    BinomialCascade { p: f64, randomize_halves: bool },
    /// Cumulative sum of Gaussian increments.
    RandomWalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub length: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, length: usize, seed: u64) -> Self {
        Self { kind, length, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::BadSpec("length must be positive".into()));
        }
        match self.kind {
            GeneratorKind::StudentT { df } if !(df > 2.0 && df.is_finite()) => {
                Err(Error::BadSpec(format!("student-t needs df > 2, got {df}")))
            }
            GeneratorKind::BinomialCascade { p, .. } => {
                if !(p > 0.5 && p < 1.0) {
                    return Err(Error::BadSpec(format!("cascade weight {p} outside (0.5, 1)")));
                }
                if !self.length.is_power_of_two() || self.length < 2 {
                    return Err(Error::BadSpec(format!(
                        "cascade length {} is not a power of two",
                        self.length
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn label(&self) -> String {
        match self.kind {
            GeneratorKind::GaussianIid => "gaussian_iid".to_string(),
            GeneratorKind::StudentT { df } => format!("student_t(df={df})"),
            GeneratorKind::BinomialCascade { p, .. } => format!("binomial_cascade(p={p})"),
            GeneratorKind::RandomWalk => "random_walk".to_string(),
        }
    }
}

pub fn generate<T: Scalar>(spec: &GeneratorSpec) -> Result<TimeSeries<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.length;
    let values: Vec<f64> = match spec.kind {
        GeneratorKind::GaussianIid => (0..n).map(|_| StandardNormal.sample(&mut rng)).collect(),
        GeneratorKind::StudentT { df } => {
            let dist = StudentT::new(df).map_err(|e| Error::BadSpec(e.to_string()))?;
            (0..n).map(|_| dist.sample(&mut rng)).collect()
        }
        GeneratorKind::RandomWalk => {
            let mut level = 0.0;
            (0..n)
                .map(|_| {
                    let step: f64 = StandardNormal.sample(&mut rng);
                    level += step;
                    level
                })
                .collect()
        }
        GeneratorKind::BinomialCascade {
            p,
            randomize_halves,
        } => {
            let mut mass = vec![1.0f64];
            while mass.len() < n {
                mass = mass
                    .iter()
                    .flat_map(|&m| {
                        let (left, right) = if randomize_halves && rng.random_bool(0.5) {
                            (1.0 - p, p)
                        } else {
                            (p, 1.0 - p)
                        };
                        [m * left, m * right]
                    })
                    .collect();
            }
            mass
        }
    };
    TimeSeries::new(
        values.into_iter().map(T::of).collect(),
        spec.label(),
        SeriesKind::Generic,
    )
}

/// Below this |q| the closed form loses digits to cancellation and its
/// second-order expansion around `q = 0` is used instead.
const SERIES_CUTOFF: f64 = 1e-5;

/// Generalized Hurst exponent of the binomial cascade,
/// `h(q) = 1/q - ln(p^q + (1-p)^q) / (q ln 2)`.
///
/// The limit at `q = 0` is `-(ln p + ln(1-p)) / (2 ln 2)`. `p = 0.5` is
/// accepted as the monofractal limit with `h = 1`.
pub fn cascade_h_analytic(p: f64, q: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&p) || !q.is_finite() {
        return Err(Error::BadP { p });
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let ln2 = std::f64::consts::LN_2;
    if q.abs() < SERIES_CUTOFF {
        let a = lp + lq;
        let b = lp * lp + lq * lq;
        return Ok(-a / (2.0 * ln2) - q * (b / 4.0 - a * a / 8.0) / ln2);
    }
    // ln(p^q + (1-p)^q) via log-sum-exp so |q| in the hundreds stays finite.
    let (x, y) = (q * lp, q * lq);
    let peak = x.max(y);
    let log_sum = peak + ((x - peak).exp() + (y - peak).exp()).ln();
    Ok(1.0 / q - log_sum / (q * ln2))
}
