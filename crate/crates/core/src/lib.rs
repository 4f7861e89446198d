//! Multifractal detrended fluctuation analysis of one-dimensional series.
//!
//! The pipeline runs `series -> profile -> segmentation -> fluctuation ->
//! scaling`:
//!
//! * [`series`]: containers, log returns, profile and moment statistics.
//! * [`segmentation`]: window layouts, either the bidirectional
//!   non-overlapping tiling ([`Method::MfDfa`]) or the binary-split
//!   overlapped sliding windows ([`Method::BiOsw`]).
//! * [`fluctuation`]: polynomial detrending and `F_q(s)`.
//! * [`scaling`]: `h(q)`, `tau(q)` and the singularity spectrum.
//! * [`surrogate`]: shuffled and phase-randomized surrogates.
//! * [`synth`]: generators with known scaling, including the binomial cascade.
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below name the common instantiations.
//!
//! ```
//! use mfdfa::{fluctuation_surface, fit_hurst, profile, DetrendConfig, Method, Overlap};
//! use mfdfa::synth::{generate, GeneratorKind, GeneratorSpec};
//!
//! let series: mfdfa::TimeSeries64 =
//!     generate(&GeneratorSpec::new(GeneratorKind::GaussianIid, 4096, 7)).unwrap();
//! let profile = profile(&series).unwrap();
//! let scales = [16, 32, 64, 128, 256];
//! let surface = fluctuation_surface(
//!     &profile, Method::BiOsw, &[2.0], &scales, Overlap::default(), DetrendConfig::default(),
//! ).unwrap();
//! let spectrum = fit_hurst(&surface, (16, 256)).unwrap();
//! assert!((spectrum.h()[0] - 0.5).abs() < 0.1);
//! ```

pub mod error;
pub mod fluctuation;
pub mod scalar;
pub mod scaling;
pub mod segmentation;
pub mod series;
pub mod surrogate;
pub mod synth;

pub use error::{Error, Result};
pub use fluctuation::{
    fluctuation_surface, fq, window_variance, DetrendConfig, Detrender, FluctuationSurface,
};
pub use scalar::Scalar;
pub use scaling::{
    delta_h, delta_h_within, fit_hurst, fit_hurst_skip_flagged, legendre, tau, HurstSpectrum,
    ScalingExponents, SingularitySpectrum,
};
pub use segmentation::{
    biosw_plan, mfdfa_plan, segment_count_ratio, Method, Overlap, SegmentationPlan, Window,
};
pub use series::{describe, log_returns, profile, DescriptiveStats, Profile, SeriesKind, TimeSeries};
pub use surrogate::{phase_randomize, shuffle, SurrogateConfig, SurrogateMode};

pub type TimeSeries64 = TimeSeries<f64>;
pub type Profile64 = Profile<f64>;
pub type DescriptiveStats64 = DescriptiveStats<f64>;
pub type FluctuationSurface64 = FluctuationSurface<f64>;
pub type HurstSpectrum64 = HurstSpectrum<f64>;
pub type ScalingExponents64 = ScalingExponents<f64>;
pub type SingularitySpectrum64 = SingularitySpectrum<f64>;

pub type TimeSeries32 = TimeSeries<f32>;
pub type Profile32 = Profile<f32>;
pub type DescriptiveStats32 = DescriptiveStats<f32>;
pub type FluctuationSurface32 = FluctuationSurface<f32>;
pub type HurstSpectrum32 = HurstSpectrum<f32>;
pub type ScalingExponents32 = ScalingExponents<f32>;
pub type SingularitySpectrum32 = SingularitySpectrum<f32>;
