//! Polynomial detrending, per-window variance and the q-th order fluctuation
//! function.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::segmentation::{self, min_window, Method, Overlap, SegmentationPlan, Window};
use crate::series::Profile;

pub const MAX_ORDER: usize = 5;

/// Root-mean-square residuals below this many ulps of the largest sample in
/// the window are treated as an exact fit.
const RESIDUAL_FLOOR_ULPS: f64 = 64.0;

/// Degree `m` of the local polynomial trend (1 = linear, 2 = quadratic, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetrendConfig {
    order: usize,
}

impl DetrendConfig {
    pub fn new(order: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::BadOrder { order });
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl Default for DetrendConfig {
    fn default() -> Self {
        Self { order: 1 }
    }
}

/// Least-squares polynomial detrending for windows of one fixed length.
///
/// Holds an orthonormal basis of the degree-`m` polynomials sampled on the
/// window abscissae mapped onto `[-1, 1]`; the residual of a window is its
/// samples minus their projection onto that basis.
#[derive(Debug, Clone)]
pub struct Detrender<T> {
    length: usize,
    /// `order + 1` orthonormal columns of `length` samples each.
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Detrender<T> {
    pub fn new(length: usize, cfg: DetrendConfig) -> Result<Self> {
        let required = min_window(cfg.order);
        if length < required {
            return Err(Error::WindowTooShort { length, required });
        }
        let span = (length - 1) as f64;
        let xs: Vec<f64> = (0..length).map(|i| 2.0 * i as f64 / span - 1.0).collect();

        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cfg.order + 1);
        for degree in 0..=cfg.order {
            let mut col: Vec<f64> = xs.iter().map(|x| x.powi(degree as i32)).collect();
            // Gram-Schmidt applied twice keeps the columns orthogonal to
            // working precision.
            for _ in 0..2 {
                for q in &basis {
                    let dot: f64 = q.iter().zip(&col).map(|(a, b)| a * b).sum();
                    col.iter_mut().zip(q).for_each(|(c, a)| *c -= dot * a);
                }
            }
            let norm = col.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!(norm > 0.0, "degenerate polynomial basis for length {length}");
            col.iter_mut().for_each(|c| *c /= norm);
            basis.push(col);
        }
        Ok(Self {
            length,
            basis: basis
                .into_iter()
                .map(|col| col.into_iter().map(T::of).collect())
                .collect(),
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Mean squared residual `(1/s) sum (Y - y_fit)^2` of `samples`.
    pub fn variance(&self, samples: &[T]) -> T {
        assert_eq!(samples.len(), self.length, "window length mismatch");
        let n = T::of_usize(self.length);
        // Shifting by the window mean is absorbed by the constant column and
        // keeps the projection free of the profile's offset.
        let shift = samples.iter().copied().sum::<T>() / n;
        let coeffs: Vec<T> = self
            .basis
            .iter()
            .map(|q| {
                q.iter()
                    .zip(samples)
                    .map(|(&a, &y)| a * (y - shift))
                    .sum::<T>()
            })
            .collect();
        let mut ss = T::zero();
        for (i, &y) in samples.iter().enumerate() {
            let fit = self
                .basis
                .iter()
                .zip(&coeffs)
                .fold(T::zero(), |acc, (q, &c)| acc + q[i] * c);
            let r = (y - shift) - fit;
            ss = ss + r * r;
        }
        let variance = ss / n;
        // Residuals at the rounding level of the samples carry no information;
        // such a window is a perfect fit and reports exactly zero.
        let magnitude = samples.iter().fold(T::zero(), |m, y| m.max(y.abs()));
        let floor = T::of(RESIDUAL_FLOOR_ULPS) * T::epsilon() * magnitude;
        if variance <= floor * floor {
            T::zero()
        } else {
            variance
        }
    }
}

/// Detrended variance `F^2(v, s)` of one window of the profile.
pub fn window_variance<T: Scalar>(
    profile: &Profile<T>,
    window: Window,
    cfg: DetrendConfig,
) -> Result<T> {
    if window.end() > profile.len() {
        return Err(Error::WindowOutOfBounds {
            start: window.start,
            end: window.end(),
            len: profile.len(),
        });
    }
    let detrender = Detrender::new(window.length, cfg)?;
    Ok(detrender.variance(&profile.values()[window.start..window.end()]))
}

/// Variances of every window in `plan`, in plan order.
pub fn plan_variances<T: Scalar>(
    profile: &Profile<T>,
    plan: &SegmentationPlan,
    cfg: DetrendConfig,
) -> Result<Vec<T>> {
    let detrender = Detrender::new(plan.scale, cfg)?;
    let ys = profile.values();
    plan.windows
        .iter()
        .map(|w| {
            if w.end() > ys.len() {
                return Err(Error::WindowOutOfBounds {
                    start: w.start,
                    end: w.end(),
                    len: ys.len(),
                });
            }
            Ok(detrender.variance(&ys[w.start..w.end()]))
        })
        .collect()
}

/// q-th order fluctuation function over a set of window variances.
///
/// For `q != 0` this is the power mean `(mean(F2^(q/2)))^(1/q)`, for `q = 0`
/// the geometric mean `exp(mean(ln F2) / 2)`. The power mean is evaluated in
/// log space so `|q| = 20` neither overflows nor underflows.
///
/// A zero variance makes every `q <= 0` moment diverge and is reported as
/// [`Error::ZeroVarianceWithNegativeQ`].
pub fn fq<T: Scalar>(variances: &[T], q: T) -> Result<T> {
    if variances.is_empty() {
        return Err(Error::EmptyWindows);
    }
    if q <= T::zero() && variances.iter().any(|&v| v <= T::zero()) {
        return Err(Error::ZeroVarianceWithNegativeQ { q: q.as_f64() });
    }
    // Every power mean of identical values is that value; skip the rounding.
    let first = variances[0];
    if first > T::zero() && variances.iter().all(|&v| v == first) {
        return Ok(first.sqrt());
    }
    let n = T::of_usize(variances.len());
    let half = T::of(0.5);
    if q == T::zero() {
        let mean_log = variances.iter().map(|v| v.ln()).sum::<T>() / n;
        return Ok((half * mean_log).exp());
    }
    let exponents: Vec<T> = variances
        .iter()
        .filter(|&&v| v > T::zero())
        .map(|v| half * q * v.ln())
        .collect();
    if exponents.is_empty() {
        return Ok(T::zero());
    }
    let peak = exponents
        .iter()
        .copied()
        .fold(T::neg_infinity(), T::max);
    let scaled: T = exponents.iter().map(|&a| (a - peak).exp()).sum();
    Ok(((peak + (scaled / n).ln()) / q).exp())
}

/// `F_q(s)` over a q grid and a scale grid.
///
/// `values[i][j]` holds `F_{q_i}(s_j)`; a cell is `None` (flagged) when the
/// moment diverged on a zero-variance window or came out non-positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSurface<T> {
    q_grid: Vec<T>,
    scales: Vec<usize>,
    values: Vec<Vec<Option<T>>>,
    method: Method,
    /// Windows used at each scale.
    window_counts: Vec<usize>,
    /// Overlap in samples at each scale (Bi-OSW only).
    overlaps: Vec<Option<usize>>,
}

impl<T: Scalar> FluctuationSurface<T> {
    /// Wraps externally computed values, one row per q.
    pub fn from_values(
        q_grid: Vec<T>,
        scales: Vec<usize>,
        values: Vec<Vec<T>>,
        method: Method,
    ) -> Result<Self> {
        validate_q_grid(&q_grid)?;
        validate_scales(&scales)?;
        if values.len() != q_grid.len() || values.iter().any(|row| row.len() != scales.len()) {
            return Err(Error::InvalidGrid(
                "value matrix shape does not match the grids".into(),
            ));
        }
        let values = values
            .into_iter()
            .map(|row| row.into_iter().map(positive).collect())
            .collect();
        Ok(Self {
            window_counts: vec![0; scales.len()],
            overlaps: vec![None; scales.len()],
            q_grid,
            scales,
            values,
            method,
        })
    }

    pub fn q_grid(&self) -> &[T] {
        &self.q_grid
    }

    pub fn scales(&self) -> &[usize] {
        &self.scales
    }

    pub fn values(&self) -> &[Vec<Option<T>>] {
        &self.values
    }

    pub fn value(&self, q_index: usize, scale_index: usize) -> Option<T> {
        self.values[q_index][scale_index]
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn window_counts(&self) -> &[usize] {
        &self.window_counts
    }

    pub fn overlaps(&self) -> &[Option<usize>] {
        &self.overlaps
    }

    /// `(q, s)` of every flagged cell, in row-major order.
    pub fn flagged(&self) -> Vec<(T, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_none() {
                    out.push((self.q_grid[i], self.scales[j]));
                }
            }
        }
        out
    }

    pub fn is_column_flagged(&self, scale_index: usize) -> bool {
        self.values.iter().any(|row| row[scale_index].is_none())
    }

    /// Multiplies every value by `factor`; flags are kept.
    pub fn rescaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        for row in &mut out.values {
            for v in row.iter_mut() {
                *v = v.map(|x| x * factor);
            }
        }
        out
    }

    /// Cell-wise geometric mean of surfaces over identical grids. A cell is
    /// flagged if it is flagged in any input.
    pub fn geometric_mean(surfaces: &[Self]) -> Result<Self> {
        let first = surfaces.first().ok_or(Error::EmptyWindows)?;
        if surfaces
            .iter()
            .any(|s| s.q_grid != first.q_grid || s.scales != first.scales || s.method != first.method)
        {
            return Err(Error::InvalidGrid("surfaces differ in grids or method".into()));
        }
        let k = T::of_usize(surfaces.len());
        let mut out = first.clone();
        for (i, row) in out.values.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = T::zero();
                let mut complete = true;
                for s in surfaces {
                    match s.values[i][j] {
                        Some(v) => acc = acc + v.ln(),
                        None => complete = false,
                    }
                }
                *cell = complete.then(|| (acc / k).exp());
            }
        }
        Ok(out)
    }
}

fn positive<T: Scalar>(v: T) -> Option<T> {
    (v.is_finite() && v > T::zero()).then_some(v)
}

pub(crate) fn validate_q_grid<T: Scalar>(q_grid: &[T]) -> Result<()> {
    if q_grid.is_empty() {
        return Err(Error::InvalidGrid("empty q grid".into()));
    }
    if q_grid.iter().any(|q| !q.is_finite()) {
        return Err(Error::InvalidGrid("non-finite q".into()));
    }
    if q_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "q grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

pub(crate) fn validate_scales(scales: &[usize]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidGrid("empty scale grid".into()));
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "scale grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Evaluates `F_q(s)` for every `(q, s)` on the grids.
///
/// Scales are processed in parallel; each column is reduced in window order,
/// so the result does not depend on scheduling.
pub fn fluctuation_surface<T: Scalar>(
    profile: &Profile<T>,
    method: Method,
    q_grid: &[T],
    scales: &[usize],
    overlap: Overlap,
    cfg: DetrendConfig,
) -> Result<FluctuationSurface<T>> {
    validate_q_grid(q_grid)?;
    validate_scales(scales)?;

    let columns: Vec<(Vec<Option<T>>, usize, Option<usize>)> = scales
        .par_iter()
        .map(|&s| {
            let plan = segmentation::plan(method, profile.len(), s, overlap, cfg.order())?;
            let variances = plan_variances(profile, &plan, cfg)?;
            let column = q_grid
                .iter()
                .map(|&q| match fq(&variances, q) {
                    Ok(v) => Ok(positive(v)),
                    Err(Error::ZeroVarianceWithNegativeQ { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((column, plan.len(), plan.overlap))
        })
        .collect::<Result<Vec<_>>>()?;

    let values = (0..q_grid.len())
        .map(|i| columns.iter().map(|(col, _, _)| col[i]).collect())
        .collect();
    Ok(FluctuationSurface {
        q_grid: q_grid.to_vec(),
        scales: scales.to_vec(),
        values,
        method,
        window_counts: columns.iter().map(|c| c.1).collect(),
        overlaps: columns.iter().map(|c| c.2).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{profile, SeriesKind, TimeSeries};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn prof(values: Vec<f64>) -> Profile<f64> {
        Profile::from_values(values, 0.0)
    }

    fn whole(len: usize) -> Window {
        Window { start: 0, length: len }
    }

    /// Brute-force least squares through the normal equations on raw
    /// abscissae, solved by Gaussian elimination with partial pivoting.
    fn naive_variance(ys: &[f64], order: usize) -> f64 {
        let k = order + 1;
        let mut a = vec![vec![0.0; k + 1]; k];
        for (i, &y) in ys.iter().enumerate() {
            let x = i as f64;
            for r in 0..k {
                for c in 0..k {
                    a[r][c] += x.powi((r + c) as i32);
                }
                a[r][k] += x.powi(r as i32) * y;
            }
        }
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            for r in 0..k {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    for c in col..=k {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
        let coef: Vec<f64> = (0..k).map(|r| a[r][k] / a[r][r]).collect();
        ys.iter()
            .enumerate()
            .map(|(i, &y)| {
                let fit: f64 = coef
                    .iter()
                    .enumerate()
                    .map(|(p, c)| c * (i as f64).powi(p as i32))
                    .sum();
                (y - fit).powi(2)
            })
            .sum::<f64>()
            / ys.len() as f64
    }

    #[test]
    fn linear_window_has_zero_variance() {
        let p = prof((0..40).map(|i| 3.0 - 0.25 * i as f64).collect());
        let v = window_variance(&p, Window { start: 5, length: 20 }, DetrendConfig::default())
            .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn alternating_window_variance() {
        let p = prof(vec![0.0, 1.0, 0.0, 1.0]);
        let v = window_variance(&p, whole(4), DetrendConfig::default()).unwrap();
        // Hand least squares: slope 0.2, intercept 0.2, residuals
        // [-0.2, 0.6, -0.6, 0.2] -> variance 0.2.
        assert!((v - 0.2).abs() < 1e-15, "{v}");
        assert!((v - naive_variance(&[0.0, 1.0, 0.0, 1.0], 1)).abs() < 1e-15);
    }

    #[test]
    fn quadratic_needs_order_two() {
        let ys: Vec<f64> = (0..30).map(|i| 0.5 * (i as f64).powi(2) - 2.0 * i as f64 + 1.0).collect();
        let p = prof(ys);
        let v2 = window_variance(&p, whole(30), DetrendConfig::new(2).unwrap()).unwrap();
        let v1 = window_variance(&p, whole(30), DetrendConfig::new(1).unwrap()).unwrap();
        assert_eq!(v2, 0.0);
        assert!(v1 > 1.0, "{v1}");
    }

    #[test]
    fn window_errors() {
        let p = prof(vec![0.0; 10]);
        assert_eq!(
            window_variance(&p, whole(4), DetrendConfig::new(3).unwrap()).unwrap_err(),
            Error::WindowTooShort { length: 4, required: 5 }
        );
        assert!(matches!(
            window_variance(&p, Window { start: 8, length: 4 }, DetrendConfig::default()),
            Err(Error::WindowOutOfBounds { .. })
        ));
        assert_eq!(DetrendConfig::new(0).unwrap_err(), Error::BadOrder { order: 0 });
        assert_eq!(DetrendConfig::new(6).unwrap_err(), Error::BadOrder { order: 6 });
    }

    #[test]
    fn matches_naive_least_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for order in 1..=3 {
            for len in [order + 2, 7, 16, 33] {
                let ys: Vec<f64> = (0..len).map(|_| rng.random_range(-5.0..5.0)).collect();
                let got = window_variance(&prof(ys.clone()), whole(len), DetrendConfig::new(order).unwrap())
                    .unwrap();
                let want = naive_variance(&ys, order);
                assert!((got - want).abs() <= 1e-9 * want.max(1e-12), "m={order} s={len}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn stable_for_long_cubic_windows() {
        // Exact cubic on 500 samples with a large offset: raw Vandermonde
        // normal equations would be hopeless here.
        let ys: Vec<f64> = (0..500)
            .map(|i| {
                let x = i as f64;
                1.0e4 + 0.3 * x - 2.0e-3 * x * x + 1.0e-6 * x * x * x
            })
            .collect();
        let v = window_variance(&prof(ys), whole(500), DetrendConfig::new(3).unwrap()).unwrap();
        assert!(v < 1e-18, "{v}");
    }

    #[test]
    fn fq_examples() {
        for q in [-20.0, -2.0, 0.0, 0.5, 2.0, 20.0] {
            let v: f64 = fq(&[2.25, 2.25, 2.25], q).unwrap();
            assert!((v - 1.5).abs() < 1e-14, "q={q}: {v}");
        }
        assert!((fq(&[1.0, 4.0], 2.0).unwrap() - 2.5f64.sqrt()).abs() < 1e-15);
        assert!((fq(&[1.0, 4.0], 0.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fq_errors() {
        assert_eq!(fq::<f64>(&[], 2.0).unwrap_err(), Error::EmptyWindows);
        assert_eq!(
            fq(&[1.0, 0.0], -2.0).unwrap_err(),
            Error::ZeroVarianceWithNegativeQ { q: -2.0 }
        );
        assert!(fq(&[1.0, 0.0], 0.0).is_err());
        // Positive moments tolerate a perfectly fitted window.
        assert!((fq(&[4.0, 0.0], 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(fq(&[0.0, 0.0], 2.0).unwrap(), 0.0);
    }

    #[test]
    fn fq_extreme_moments_do_not_overflow() {
        let vars = [1e-300, 1e-10, 1.0, 1e10];
        for q in [-20.0, 20.0] {
            let v: f64 = fq(&vars, q).unwrap();
            assert!(v.is_finite() && v > 0.0);
        }
        let vars32 = [1e-30f32, 1.0, 1e30];
        assert!(fq(&vars32, -20.0f32).unwrap().is_finite());
        assert!(fq(&vars32, 20.0f32).unwrap().is_finite());
    }

    #[test]
    fn fq_is_continuous_at_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let vars: Vec<f64> = (0..20).map(|_| rng.random_range(0.01..10.0)).collect();
            let f0 = fq(&vars, 0.0).unwrap();
            for q in [-0.01, 0.01] {
                assert!((fq(&vars, q).unwrap() - f0).abs() / f0 < 0.01);
            }
        }
    }

    fn noise_profile(n: usize, seed: u64) -> Profile<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        profile(&TimeSeries::new(xs, "noise", SeriesKind::Generic).unwrap()).unwrap()
    }

    fn slope(xs: &[f64], ys: &[f64]) -> f64 {
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        num / den
    }

    #[test]
    fn white_noise_second_moment_scales_with_half() {
        let scales = [16, 23, 32, 45, 64, 91, 128, 181, 256];
        let xs: Vec<f64> = scales.iter().map(|&s| (s as f64).ln()).collect();
        for method in [Method::MfDfa, Method::BiOsw] {
            let mut total = 0.0;
            for seed in 0..8 {
                let p = noise_profile(4096, seed);
                let surface = fluctuation_surface(
                    &p,
                    method,
                    &[2.0],
                    &scales,
                    Overlap::default(),
                    DetrendConfig::default(),
                )
                .unwrap();
                let ys: Vec<f64> = surface.values()[0].iter().map(|v| v.unwrap().ln()).collect();
                let h = slope(&xs, &ys);
                assert!((h - 0.5).abs() < 0.1, "{method} seed {seed}: {h}");
                total += h;
            }
            let mean = total / 8.0;
            assert!((mean - 0.5).abs() < 0.03, "{method}: {mean}");
        }
    }

    #[test]
    fn surface_is_monotone_in_q_and_reproducible() {
        let p = noise_profile(2048, 9);
        let q: Vec<f64> = (-10..=10).map(|k| k as f64).collect();
        let scales = [10, 20, 40, 80];
        let a = fluctuation_surface(&p, Method::BiOsw, &q, &scales, Overlap::Samples(3), DetrendConfig::default())
            .unwrap();
        let b = fluctuation_surface(&p, Method::BiOsw, &q, &scales, Overlap::Samples(3), DetrendConfig::default())
            .unwrap();
        assert_eq!(a, b);
        for j in 0..scales.len() {
            for i in 1..q.len() {
                assert!(a.value(i - 1, j).unwrap() <= a.value(i, j).unwrap());
            }
        }
        assert_eq!(a.overlaps(), &[Some(3); 4]);
    }

    #[test]
    fn constant_series_flags_everything() {
        let s = TimeSeries::new(vec![0.3; 256], "flat", SeriesKind::Generic).unwrap();
        let p = profile(&s).unwrap();
        let surface = fluctuation_surface(
            &p,
            Method::MfDfa,
            &[-2.0, 0.0, 2.0],
            &[8, 16, 32],
            Overlap::default(),
            DetrendConfig::default(),
        )
        .unwrap();
        assert_eq!(surface.flagged().len(), 9);
    }

    #[test]
    fn zero_window_flags_only_non_positive_q() {
        // Leading zeros keep the profile exactly zero over the first windows.
        let mut xs = vec![0.0; 64];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..224 {
            let a: f64 = rng.random_range(0.5..1.5);
            xs.push(a);
            xs.push(-a);
        }
        let p = profile(&TimeSeries::new(xs, "gap", SeriesKind::Generic).unwrap()).unwrap();
        let surface = fluctuation_surface(
            &p,
            Method::MfDfa,
            &[-2.0, 0.0, 2.0],
            &[16, 32, 128],
            Overlap::default(),
            DetrendConfig::default(),
        )
        .unwrap();
        assert_eq!(surface.flagged(), vec![(-2.0, 16), (-2.0, 32), (0.0, 16), (0.0, 32)]);
        assert!(surface.value(2, 0).is_some());
        assert!(surface.is_column_flagged(0) && !surface.is_column_flagged(2));
    }

    #[test]
    fn grid_validation() {
        let p = noise_profile(256, 1);
        let cfg = DetrendConfig::default();
        assert!(fluctuation_surface(&p, Method::MfDfa, &[2.0, 1.0], &[8], Overlap::default(), cfg).is_err());
        assert!(fluctuation_surface(&p, Method::MfDfa, &[2.0], &[16, 8], Overlap::default(), cfg).is_err());
        assert!(fluctuation_surface::<f64>(&p, Method::MfDfa, &[], &[8], Overlap::default(), cfg).is_err());
        assert!(matches!(
            fluctuation_surface(&p, Method::MfDfa, &[2.0], &[65], Overlap::default(), cfg),
            Err(Error::ScaleTooLarge { .. })
        ));
    }

    #[test]
    fn works_in_f32() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xs: Vec<f32> = (0..1024).map(|_| StandardNormal.sample(&mut rng)).collect();
        let p = profile(&TimeSeries::new(xs, "f32", SeriesKind::Generic).unwrap()).unwrap();
        let surface = fluctuation_surface(
            &p,
            Method::BiOsw,
            &[-4.0f32, 0.0, 4.0],
            &[16, 32, 64],
            Overlap::default(),
            DetrendConfig::default(),
        )
        .unwrap();
        assert!(surface.flagged().is_empty());
    }

    #[test]
    fn identical_variances_are_exact() {
        let v = [0.37f64];
        for q in [-10.0, -0.5, 0.0, 0.5, 3.0, 10.0] {
            assert_eq!(fq(&v, q).unwrap(), 0.37f64.sqrt());
            assert_eq!(fq(&[4.0f64; 7], q).unwrap(), 2.0);
        }
    }

    proptest! {
        #[test]
        fn raising_order_never_increases_variance(
            ys in prop::collection::vec(-100.0f64..100.0, 8..64)
        ) {
            let p = prof(ys.clone());
            let mut prev = f64::INFINITY;
            for order in 1..=MAX_ORDER.min(ys.len() - 2) {
                let v = window_variance(&p, whole(ys.len()), DetrendConfig::new(order).unwrap()).unwrap();
                prop_assert!(v <= prev * (1.0 + 1e-9) + 1e-20);
                prev = v;
            }
        }

        #[test]
        fn power_mean_monotone(
            vars in prop::collection::vec(1.0e-6f64..1.0e6, 1..50),
            q1 in -20.0f64..20.0,
            q2 in -20.0f64..20.0,
        ) {
            let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
            let a = fq(&vars, lo).unwrap();
            let b = fq(&vars, hi).unwrap();
            prop_assert!(a <= b * (1.0 + 1e-12), "{} > {}", a, b);
        }
    }
}
