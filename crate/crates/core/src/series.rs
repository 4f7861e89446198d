//! Time-series container, log-return preprocessing, profile construction and
//! moment-based descriptive statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, CompensatedSum, Scalar};

/// Minimum length accepted by analysis entry points.
pub const MIN_ANALYSIS_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Price,
    Return,
    Generic,
}

/// An ordered sequence of finite samples with a label and a kind tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries<T> {
    values: Vec<T>,
    label: String,
    kind: SeriesKind,
}

impl<T: Scalar> TimeSeries<T> {
    /// Wraps `values`, rejecting any NaN or infinity.
    pub fn new(values: Vec<T>, label: impl Into<String>, kind: SeriesKind) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            label: label.into(),
            kind,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// Same samples under a different label.
    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn require_len(&self, required: usize) -> Result<()> {
        if self.values.len() < required {
            return Err(Error::TooShort {
                required,
                actual: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Logarithmic returns `r_t = ln I_{t+1} - ln I_t` of a price series.
///
/// Each return is evaluated as `ln(I_{t+1} / I_t)`, which is the same quantity
/// but avoids cancelling two large logarithms.
pub fn log_returns<T: Scalar>(prices: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    prices.require_len(2)?;
    if let Some(index) = prices.values.iter().position(|&p| p <= T::zero()) {
        return Err(Error::NonPositivePrice {
            index,
            value: prices.values[index].as_f64(),
        });
    }
    let returns = prices
        .values
        .windows(2)
        .map(|w| (w[1] / w[0]).ln())
        .collect();
    TimeSeries::new(returns, prices.label.clone(), SeriesKind::Return)
}

/// Cumulative sum of the mean-centred series.
///
/// Index `i` (0-based) holds `Y(i + 1)` in the usual 1-based notation, so the
/// last element is the full sum of centred values and vanishes up to rounding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile<T> {
    values: Vec<T>,
    source_mean: T,
}

impl<T: Scalar> Profile<T> {
    /// Builds a profile from already-cumulated values. Used by tests and by
    /// callers that detrend something other than a centred cumulative sum.
    pub fn from_values(values: Vec<T>, source_mean: T) -> Self {
        Self {
            values,
            source_mean,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source_mean(&self) -> T {
        self.source_mean
    }
}

pub fn profile<T: Scalar>(series: &TimeSeries<T>) -> Result<Profile<T>> {
    series.require_len(MIN_ANALYSIS_LEN)?;
    let xs = &series.values;
    let n = T::of_usize(xs.len());

    let first = xs[0];
    let mean = if xs.iter().all(|&x| x == first) {
        first
    } else {
        compensated_sum(xs.iter().copied()) / n
    };
    let mut centred: Vec<T> = xs.iter().map(|&x| x - mean).collect();
    // Second pass removes the rounding left in the mean so Y(N) lands on zero.
    let residual = compensated_sum(centred.iter().copied()) / n;
    if residual != T::zero() {
        for d in &mut centred {
            *d = *d - residual;
        }
    }

    let mut acc = CompensatedSum::new();
    let values = centred
        .into_iter()
        .map(|d| {
            acc.add(d);
            acc.value()
        })
        .collect();
    Ok(Profile {
        values,
        source_mean: mean + residual,
    })
}

/// Moment statistics in the layout of a return-series summary table.
/// `kurtosis` is the raw fourth standardized moment (3 for a normal law).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats<T> {
    pub n: usize,
    pub mean: T,
    pub min: T,
    pub max: T,
    pub skewness: T,
    pub kurtosis: T,
}

pub fn describe<T: Scalar>(series: &TimeSeries<T>) -> Result<DescriptiveStats<T>> {
    series.require_len(MIN_ANALYSIS_LEN)?;
    let xs = &series.values;
    let (min, max) = xs
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if min == max {
        return Err(Error::ZeroVariance);
    }
    let n = T::of_usize(xs.len());
    let mean = (compensated_sum(xs.iter().copied()) / n).max(min).min(max);

    let mut m2 = CompensatedSum::new();
    let mut m3 = CompensatedSum::new();
    let mut m4 = CompensatedSum::new();
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2.add(d2);
        m3.add(d2 * d);
        m4.add(d2 * d2);
    }
    let m2 = m2.value() / n;
    if m2 <= T::zero() {
        return Err(Error::ZeroVariance);
    }
    let m3 = m3.value() / n;
    let m4 = m4.value() / n;
    Ok(DescriptiveStats {
        n: xs.len(),
        mean,
        min,
        max,
        skewness: m3 / m2.powf(T::of(1.5)),
        kurtosis: m4 / (m2 * m2),
    })
}
