//! Window layouts over a profile.
//!
//! Two strategies are provided:
//!
//! * [`mfdfa_plan`]: `N_s = floor(N / s)` non-overlapping windows laid from the
//!   start of the profile, then the same tiling repeated from the end, for
//!   `2 N_s` windows in total.
//! * [`biosw_plan`]: the profile is split into two halves of length
//!   `n = floor(N / 2)`. The first half is covered left to right by windows of
//!   length `s` advancing by `s - l`, the second half right to left with the
//!   same stride. Each pass holds `N*_s = ceil((n - s) / (s - l)) + 1` windows;
//!   the last window of a pass may run into the other half.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Bidirectional non-overlapping tiling.
    #[serde(rename = "mfdfa")]
    MfDfa,
    /// Binary split with overlapped sliding windows.
    #[serde(rename = "biosw")]
    BiOsw,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MfDfa => "mfdfa",
            Method::BiOsw => "biosw",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A half-open range `[start, start + length)` of profile indices (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub length: usize,
}

impl Window {
    pub fn end(&self) -> usize {
        self.start + self.length
    }
}

/// Overlap between neighbouring Bi-OSW windows, either fixed or relative to
/// the scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overlap {
    Samples(usize),
    Fraction(f64),
}

impl Overlap {
    /// Overlap in samples for windows of length `scale`.
    ///
    /// A fraction resolves to `floor(fraction * s)`, raised to 1 if it
    /// rounds to zero, and must still satisfy `l < s / 2`.
    pub fn resolve(self, scale: usize) -> Result<usize> {
        let l = match self {
            Overlap::Samples(l) => l,
            Overlap::Fraction(f) => {
                if !(f > 0.0 && f < 0.5) {
                    return Err(Error::InvalidConfig(format!(
                        "overlap fraction {f} outside (0, 0.5)"
                    )));
                }
                ((f * scale as f64).floor() as usize).max(1)
            }
        };
        check_overlap(scale, l)?;
        Ok(l)
    }
}

impl Default for Overlap {
    fn default() -> Self {
        Overlap::Fraction(0.25)
    }
}

fn check_overlap(scale: usize, overlap: usize) -> Result<()> {
    if overlap == 0 || 2 * overlap >= scale {
        return Err(Error::BadOverlap { overlap, scale });
    }
    Ok(())
}

/// Smallest window a degree-`order` polynomial fit leaves residual freedom in.
pub fn min_window(order: usize) -> usize {
    order + 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationPlan {
    pub windows: Vec<Window>,
    pub scale: usize,
    pub method: Method,
    /// Overlap `l` in samples; `None` for MF-DFA.
    pub overlap: Option<usize>,
    /// Number of windows in the forward and backward pass.
    pub counts: (usize, usize),
}

impl SegmentationPlan {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn forward(&self) -> &[Window] {
        &self.windows[..self.counts.0]
    }

    pub fn backward(&self) -> &[Window] {
        &self.windows[self.counts.0..]
    }
}

pub fn mfdfa_plan(n_total: usize, scale: usize, order: usize) -> Result<SegmentationPlan> {
    let min = min_window(order).max(4);
    if scale < min {
        return Err(Error::ScaleTooSmall { scale, min });
    }
    let max = n_total / 4;
    if scale > max {
        return Err(Error::ScaleTooLarge {
            scale,
            max,
            len: n_total,
        });
    }
    let count = n_total / scale;
    let forward = (0..count).map(|v| Window {
        start: v * scale,
        length: scale,
    });
    let backward = (1..=count).map(|v| Window {
        start: n_total - v * scale,
        length: scale,
    });
    let windows: Vec<Window> = forward.chain(backward).collect();
    debug_assert!(windows.iter().all(|w| w.end() <= n_total));
    Ok(SegmentationPlan {
        windows,
        scale,
        method: Method::MfDfa,
        overlap: None,
        counts: (count, count),
    })
}

/// `ceil((len - s) / (s - l)) + 1`: windows needed to cover `len` samples.
fn pass_count(len: usize, scale: usize, overlap: usize) -> usize {
    (len - scale).div_ceil(scale - overlap) + 1
}

/// Windows per pass, `N*_s`, for the Bi-OSW layout.
pub fn biosw_segment_count(n_total: usize, scale: usize, overlap: usize) -> Result<usize> {
    check_overlap(scale, overlap)?;
    let half = n_total / 2;
    if scale > half {
        return Err(Error::ScaleTooLarge {
            scale,
            max: half,
            len: n_total,
        });
    }
    Ok(pass_count(half, scale, overlap))
}

pub fn biosw_plan(
    n_total: usize,
    scale: usize,
    overlap: usize,
    order: usize,
) -> Result<SegmentationPlan> {
    check_overlap(scale, overlap)?;
    let min = min_window(order);
    if scale < min {
        return Err(Error::ScaleTooSmall { scale, min });
    }
    let forward_count = biosw_segment_count(n_total, scale, overlap)?;
    let half = n_total / 2;
    // For odd N the second half holds the extra sample; counting its windows
    // from its own length keeps the middle sample covered.
    let backward_count = pass_count(n_total - half, scale, overlap);
    let stride = scale - overlap;

    let forward = (0..forward_count).map(|k| Window {
        start: k * stride,
        length: scale,
    });
    let backward = (0..backward_count).map(|k| Window {
        start: n_total - scale - k * stride,
        length: scale,
    });
    let windows: Vec<Window> = forward.chain(backward).collect();
    assert!(
        windows.iter().all(|w| w.end() <= n_total),
        "Bi-OSW window out of bounds"
    );
    Ok(SegmentationPlan {
        windows,
        scale,
        method: Method::BiOsw,
        overlap: Some(overlap),
        counts: (forward_count, backward_count),
    })
}

/// Builds the plan for `method`; `overlap` is ignored for MF-DFA.
pub fn plan(
    method: Method,
    n_total: usize,
    scale: usize,
    overlap: Overlap,
    order: usize,
) -> Result<SegmentationPlan> {
    match method {
        Method::MfDfa => mfdfa_plan(n_total, scale, order),
        Method::BiOsw => biosw_plan(n_total, scale, overlap.resolve(scale)?, order),
    }
}

/// `2 N*_s / N_s`: equals 1 exactly when the Bi-OSW layout holds half as many
/// windows as the bidirectional one.
pub fn segment_count_ratio(
    n_total: usize,
    scale: usize,
    overlap: usize,
    order: usize,
) -> Result<f64> {
    let classic = mfdfa_plan(n_total, scale, order)?;
    biosw_plan(n_total, scale, overlap, order)?;
    let per_pass = biosw_segment_count(n_total, scale, overlap)?;
    Ok((2 * per_pass) as f64 / classic.counts.0 as f64)
}
