//! Generalized Hurst exponents from log-log regression of `F_q(s)` on `s`,
//! the mass exponent `tau(q) = q h(q) - 1` and the Legendre singularity
//! spectrum `alpha = h + q h'`, `f(alpha) = q^2 h' + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuation::{validate_q_grid, FluctuationSurface};
use crate::scalar::Scalar;
use crate::segmentation::min_window;

/// Fewest scales a slope is fitted over.
pub const MIN_FIT_SCALES: usize = 4;

/// Default q grid, dense around zero so the
/// derivative in [`legendre`] has neighbours with unit spacing.
pub const DEFAULT_Q_GRID: [f64; 21] = [
    -20.0, -16.0, -12.0, -10.0, -8.0, -6.0, -4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 6.0,
    8.0, 10.0, 12.0, 16.0, 20.0,
];

pub fn default_q_grid<T: Scalar>() -> Vec<T> {
    DEFAULT_Q_GRID.iter().map(|&q| T::of(q)).collect()
}

/// Up to `count` distinct integers spaced evenly in `ln s` over `[min, max]`.
pub fn log_spaced_scales(min: usize, max: usize, count: usize) -> Vec<usize> {
    if count == 0 || min > max {
        return Vec::new();
    }
    if count == 1 || min == max {
        return vec![min];
    }
    let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            ((lo + t * (hi - lo)).exp().round() as usize).clamp(min, max)
        })
        .collect();
    out.dedup();
    out
}

/// Target number of points on the default scale grid.
pub const DEFAULT_SCALE_COUNT: usize = 15;

/// Log-spaced scales from `max(10, m + 2)` to `min(N / 4, 500)` with at
/// least [`DEFAULT_SCALE_COUNT`] points (or every integer, if fewer exist).
pub fn default_scales(n_total: usize, order: usize) -> Result<Vec<usize>> {
    let min = min_window(order).max(10);
    let max = (n_total / 4).min(500);
    if max < min {
        return Err(Error::ScaleTooLarge {
            scale: min,
            max,
            len: n_total,
        });
    }
    if max - min < DEFAULT_SCALE_COUNT {
        return Ok((min..=max).collect());
    }
    let mut count = DEFAULT_SCALE_COUNT;
    loop {
        let scales = log_spaced_scales(min, max, count);
        if scales.len() >= DEFAULT_SCALE_COUNT {
            return Ok(scales);
        }
        count += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r2: T,
}

/// Ordinary least squares `y = intercept + slope * x` in centred form.
pub fn linear_fit<T: Scalar>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return Err(Error::TooFewScales {
            available: xs.len(),
            required: 2,
        });
    }
    let n = T::of_usize(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx <= T::zero() {
        return Err(Error::InvalidGrid("regression abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let ss_res = ys
        .iter()
        .zip(xs)
        .map(|(&y, &x)| {
            let r = (y - my) - slope * (x - mx);
            r * r
        })
        .sum::<T>();
    let r2 = if syy > T::zero() {
        T::one() - ss_res / syy
    } else {
        T::one()
    };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Estimated `h(q)` with per-q goodness of fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstSpectrum<T> {
    q_grid: Vec<T>,
    h: Vec<T>,
    /// Coefficient of determination per q; NaN when `h` was supplied directly.
    r2: Vec<T>,
    scale_range: (usize, usize),
    scales_used: Vec<usize>,
}

impl<T: Scalar> HurstSpectrum<T> {
    /// Spectrum from known exponents, without regression diagnostics.
    pub fn from_exponents(q_grid: Vec<T>, h: Vec<T>) -> Result<Self> {
        validate_q_grid(&q_grid)?;
        if h.len() != q_grid.len() {
            return Err(Error::InvalidGrid("h and q grids differ in length".into()));
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite h".into()));
        }
        let r2 = vec![T::nan(); h.len()];
        Ok(Self {
            q_grid,
            h,
            r2,
            scale_range: (0, 0),
            scales_used: Vec::new(),
        })
    }

    pub fn q_grid(&self) -> &[T] {
        &self.q_grid
    }

    pub fn h(&self) -> &[T] {
        &self.h
    }

    pub fn r2(&self) -> &[T] {
        &self.r2
    }

    pub fn scale_range(&self) -> (usize, usize) {
        self.scale_range
    }

    pub fn scales_used(&self) -> &[usize] {
        &self.scales_used
    }

    /// `h` at the grid point equal to `q`, if there is one.
    pub fn h_at(&self, q: T) -> Option<T> {
        self.q_grid.iter().position(|&g| g == q).map(|i| self.h[i])
    }

    /// Soft check that `h` does not increase along the grid by more than
    /// `tolerance` between neighbours.
    pub fn is_non_increasing(&self, tolerance: T) -> bool {
        self.h.windows(2).all(|w| w[1] <= w[0] + tolerance)
    }
}

fn fit_columns<T: Scalar>(
    surface: &FluctuationSurface<T>,
    scale_range: (usize, usize),
    columns: &[usize],
) -> Result<HurstSpectrum<T>> {
    if columns.len() < MIN_FIT_SCALES {
        return Err(Error::TooFewScales {
            available: columns.len(),
            required: MIN_FIT_SCALES,
        });
    }
    let xs: Vec<T> = columns
        .iter()
        .map(|&j| T::of_usize(surface.scales()[j]).ln())
        .collect();
    let mut h = Vec::with_capacity(surface.q_grid().len());
    let mut r2 = Vec::with_capacity(surface.q_grid().len());
    for (i, &q) in surface.q_grid().iter().enumerate() {
        let ys = columns
            .iter()
            .map(|&j| {
                surface.value(i, j).map(|v| v.ln()).ok_or(Error::FlaggedColumnInRange {
                    q: q.as_f64(),
                    scale: surface.scales()[j],
                })
            })
            .collect::<Result<Vec<T>>>()?;
        let fit = linear_fit(&xs, &ys)?;
        h.push(fit.slope);
        r2.push(fit.r2);
    }
    Ok(HurstSpectrum {
        q_grid: surface.q_grid().to_vec(),
        h,
        r2,
        scale_range,
        scales_used: columns.iter().map(|&j| surface.scales()[j]).collect(),
    })
}

fn columns_in_range<T: Scalar>(
    surface: &FluctuationSurface<T>,
    (lo, hi): (usize, usize),
) -> Vec<usize> {
    surface
        .scales()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= lo && s <= hi)
        .map(|(j, _)| j)
        .collect()
}

/// Slope of `ln F_q(s)` against `ln s` for every q over the scales inside
/// `scale_range` (inclusive). Any flagged cell in range is an error.
pub fn fit_hurst<T: Scalar>(
    surface: &FluctuationSurface<T>,
    scale_range: (usize, usize),
) -> Result<HurstSpectrum<T>> {
    let columns = columns_in_range(surface, scale_range);
    fit_columns(surface, scale_range, &columns)
}

/// Like [`fit_hurst`], but scales with a flagged cell at any q are left out of
/// the fit for every q. The scales that remain are in
/// [`HurstSpectrum::scales_used`].
pub fn fit_hurst_skip_flagged<T: Scalar>(
    surface: &FluctuationSurface<T>,
    scale_range: (usize, usize),
) -> Result<HurstSpectrum<T>> {
    let columns: Vec<usize> = columns_in_range(surface, scale_range)
        .into_iter()
        .filter(|&j| !surface.is_column_flagged(j))
        .collect();
    fit_columns(surface, scale_range, &columns)
}

/// Degree of multifractality `h(q_min) - h(q_max)` over the whole grid.
pub fn delta_h<T: Scalar>(spec: &HurstSpectrum<T>) -> Result<T> {
    if spec.h.len() < 2 {
        return Err(Error::GridTooSmall {
            len: spec.h.len(),
            required: 2,
        });
    }
    Ok(spec.h[0] - spec.h[spec.h.len() - 1])
}

/// `h(q_lo') - h(q_hi')` where `q_lo'` and `q_hi'` are the extreme grid
/// points inside `[q_lo, q_hi]`.
pub fn delta_h_within<T: Scalar>(spec: &HurstSpectrum<T>, q_lo: T, q_hi: T) -> Result<T> {
    let inside: Vec<usize> = (0..spec.q_grid.len())
        .filter(|&i| spec.q_grid[i] >= q_lo && spec.q_grid[i] <= q_hi)
        .collect();
    if inside.len() < 2 {
        return Err(Error::GridTooSmall {
            len: inside.len(),
            required: 2,
        });
    }
    Ok(spec.h[inside[0]] - spec.h[inside[inside.len() - 1]])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingExponents<T> {
    pub q_grid: Vec<T>,
    pub tau: Vec<T>,
}

pub fn tau<T: Scalar>(spec: &HurstSpectrum<T>) -> ScalingExponents<T> {
    ScalingExponents {
        q_grid: spec.q_grid.clone(),
        tau: spec
            .q_grid
            .iter()
            .zip(&spec.h)
            .map(|(&q, &h)| q * h - T::one())
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularitySpectrum<T> {
    pub q_grid: Vec<T>,
    pub alpha: Vec<T>,
    pub f_alpha: Vec<T>,
    /// `alpha_max - alpha_min`.
    pub width: T,
}

/// `dh/dq` on a possibly non-uniform grid: three-point second-order
/// differences inside, one-sided two-point differences at the ends.
pub fn derivative<T: Scalar>(q: &[T], h: &[T]) -> Vec<T> {
    let n = q.len();
    assert!(n >= 2 && h.len() == n);
    (0..n)
        .map(|i| {
            if i == 0 {
                (h[1] - h[0]) / (q[1] - q[0])
            } else if i == n - 1 {
                (h[n - 1] - h[n - 2]) / (q[n - 1] - q[n - 2])
            } else {
                let left = q[i] - q[i - 1];
                let right = q[i + 1] - q[i];
                (left * left * (h[i + 1] - h[i]) + right * right * (h[i] - h[i - 1]))
                    / (left * right * (left + right))
            }
        })
        .collect()
}

pub fn legendre<T: Scalar>(spec: &HurstSpectrum<T>) -> Result<SingularitySpectrum<T>> {
    if spec.q_grid.len() < 3 {
        return Err(Error::GridTooSmall {
            len: spec.q_grid.len(),
            required: 3,
        });
    }
    let slope = derivative(&spec.q_grid, &spec.h);
    let alpha: Vec<T> = spec
        .q_grid
        .iter()
        .zip(&spec.h)
        .zip(&slope)
        .map(|((&q, &h), &d)| h + q * d)
        .collect();
    let f_alpha: Vec<T> = spec
        .q_grid
        .iter()
        .zip(&slope)
        .map(|(&q, &d)| q * q * d + T::one())
        .collect();
    let lo = alpha.iter().copied().fold(T::infinity(), T::min);
    let hi = alpha.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(SingularitySpectrum {
        q_grid: spec.q_grid.clone(),
        alpha,
        f_alpha,
        width: hi - lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::Method;
    use proptest::prelude::*;

    fn power_law_surface(q: &[f64], scales: &[usize], h: impl Fn(f64) -> f64, c: f64) -> FluctuationSurface<f64> {
        let values = q
            .iter()
            .map(|&qq| scales.iter().map(|&s| c * (s as f64).powf(h(qq))).collect())
            .collect();
        FluctuationSurface::from_values(q.to_vec(), scales.to_vec(), values, Method::MfDfa).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let q = [-4.0, 0.0, 2.0, 4.0];
        let scales = [10, 20, 40, 80, 160];
        let spec = fit_hurst(&power_law_surface(&q, &scales, |_| 0.5, 1.0), (10, 160)).unwrap();
        for (&h, &r2) in spec.h().iter().zip(spec.r2()) {
            assert!((h - 0.5).abs() < 1e-12);
            assert!((r2 - 1.0).abs() < 1e-12);
        }
        let spec = fit_hurst(&power_law_surface(&q, &scales, |_| 0.7, 2.0), (10, 160)).unwrap();
        assert!(spec.h().iter().all(|h| (h - 0.7).abs() < 1e-12));
        assert_eq!(spec.scales_used(), &scales);
    }

    #[test]
    fn fit_errors() {
        let q = [1.0, 2.0];
        let scales = [10, 20, 40, 80, 160];
        let s = power_law_surface(&q, &scales, |_| 0.5, 1.0);
        assert_eq!(
            fit_hurst(&s, (20, 80)).unwrap_err(),
            Error::TooFewScales { available: 3, required: 4 }
        );
        let mut values: Vec<Vec<f64>> = q
            .iter()
            .map(|_| scales.iter().map(|&s| (s as f64).sqrt()).collect())
            .collect();
        values[0][2] = 0.0;
        let flagged = FluctuationSurface::from_values(q.to_vec(), scales.to_vec(), values, Method::BiOsw).unwrap();
        assert_eq!(
            fit_hurst(&flagged, (10, 160)).unwrap_err(),
            Error::FlaggedColumnInRange { q: 1.0, scale: 40 }
        );
        let lenient = fit_hurst_skip_flagged(&flagged, (10, 160)).unwrap();
        assert_eq!(lenient.scales_used(), &[10, 20, 80, 160]);
        assert!((lenient.h()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rescaling_leaves_slopes_unchanged() {
        let q = [-10.0, -2.0, 0.0, 2.0, 10.0];
        let scales = [10, 14, 20, 28, 40, 57, 80];
        let base = power_law_surface(&q, &scales, |q| 0.6 - 0.02 * q, 1.0);
        let a = fit_hurst(&base, (10, 80)).unwrap();
        for c in [1e-6, 0.37, 5.0, 1e8] {
            let b = fit_hurst(&base.rescaled(c), (10, 80)).unwrap();
            for (x, y) in a.h().iter().zip(b.h()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tau_identities() {
        let q: Vec<f64> = vec![-2.0, 0.0, 2.0, 5.0];
        let spec = HurstSpectrum::from_exponents(q.clone(), vec![0.8, 0.65, 0.5, 0.3]).unwrap();
        let t = tau(&spec);
        assert_eq!(t.tau[1], -1.0);
        assert_eq!(t.tau[2], 0.0);
        assert!((t.tau[0] - (-2.6)).abs() < 1e-15);

        let flat = HurstSpectrum::from_exponents(q.clone(), vec![0.7; 4]).unwrap();
        let t = tau(&flat);
        for (&qq, &tt) in q.iter().zip(&t.tau) {
            assert!((tt - (0.7 * qq - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_h_cases() {
        let q: Vec<f64> = vec![-10.0, -4.0, 0.0, 4.0, 10.0, 20.0];
        let flat = HurstSpectrum::from_exponents(q.clone(), vec![0.5; 6]).unwrap();
        assert_eq!(delta_h(&flat).unwrap(), 0.0);
        let spec = HurstSpectrum::from_exponents(q, vec![0.9, 0.7, 0.6, 0.5, 0.4, 0.35]).unwrap();
        assert!((delta_h(&spec).unwrap() - 0.55).abs() < 1e-15);
        assert!((delta_h_within(&spec, -10.0, 10.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(delta_h_within(&spec, 11.0, 19.0).is_err());
        let one = HurstSpectrum::from_exponents(vec![2.0], vec![0.5]).unwrap();
        assert!(matches!(delta_h(&one), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn legendre_of_constant_h() {
        let spec: HurstSpectrum<f64> = HurstSpectrum::from_exponents(default_q_grid(), vec![0.62; 21]).unwrap();
        let s = legendre(&spec).unwrap();
        assert!(s.alpha.iter().all(|a| (a - 0.62).abs() < 1e-12));
        assert!(s.f_alpha.iter().all(|f| (f - 1.0).abs() < 1e-12));
        assert!(s.width.abs() < 1e-12);
    }

    #[test]
    fn legendre_of_linear_h() {
        let (a, b) = (0.8, 0.015);
        let q: Vec<f64> = (-10..=10).map(|k| k as f64).collect();
        let h: Vec<f64> = q.iter().map(|q| a - b * q).collect();
        let s = legendre(&HurstSpectrum::from_exponents(q.clone(), h).unwrap()).unwrap();
        for (i, &qq) in q.iter().enumerate() {
            assert!((s.alpha[i] - (a - 2.0 * b * qq)).abs() < 1e-12);
            assert!((s.f_alpha[i] - (1.0 - b * qq * qq)).abs() < 1e-12);
        }
        assert!((s.width - 4.0 * b * 10.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_exact_for_quadratics_on_uneven_grid() {
        let q: Vec<f64> = DEFAULT_Q_GRID.to_vec();
        let h: Vec<f64> = q.iter().map(|q| 0.3 + 0.1 * q - 0.004 * q * q).collect();
        let d = derivative(&q, &h);
        for i in 1..q.len() - 1 {
            assert!((d[i] - (0.1 - 0.008 * q[i])).abs() < 1e-12);
        }
        assert!(legendre(&HurstSpectrum::from_exponents(vec![0.0, 1.0], vec![0.5, 0.4]).unwrap()).is_err());
    }

    #[test]
    fn scale_grids() {
        assert_eq!(log_spaced_scales(10, 1000, 3), vec![10, 100, 1000]);
        assert_eq!(log_spaced_scales(4, 6, 10), vec![4, 5, 6]);
        let d = default_scales(8192, 1).unwrap();
        assert_eq!(d.first(), Some(&10));
        assert_eq!(d.last(), Some(&500));
        assert!(d.len() >= DEFAULT_SCALE_COUNT);
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        let small = default_scales(100, 1).unwrap();
        assert_eq!((small[0], *small.last().unwrap()), (10, 25));
        assert!(small.len() >= DEFAULT_SCALE_COUNT);
        assert_eq!(default_scales(60, 1).unwrap(), (10..=15).collect::<Vec<_>>());
        assert!(default_scales(30, 1).is_err());
        assert_eq!(default_scales(2850, 1).unwrap().last(), Some(&500));
    }

    proptest! {
        #[test]
        fn legendre_is_one_near_zero(
            h in prop::collection::vec(0.0f64..2.0, 21)
        ) {
            let spec = HurstSpectrum::from_exponents(default_q_grid(), h).unwrap();
            let s = legendre(&spec).unwrap();
            let zero = DEFAULT_Q_GRID.iter().position(|&q| q == 0.0).unwrap();
            prop_assert!((s.f_alpha[zero] - 1.0).abs() < 1e-12);
            prop_assert!(s.width >= 0.0);
            prop_assert_eq!(tau(&spec).tau[zero], -1.0);
        }
    }
}
