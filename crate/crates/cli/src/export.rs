//! Tidy plot CSVs, one per figure type. Floats are written in shortest
//! round-trip form so values read back equal the report's exactly.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, Result};
use crate::report::AnalysisReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    /// `F_q(s)` surfaces.
    Fluctuation,
    /// `h(q)` with per-q `r2`.
    Hurst,
    Tau,
    /// `(alpha, f(alpha))` pairs.
    Spectrum,
}

impl View {
    pub const ALL: [View; 4] = [View::Fluctuation, View::Hurst, View::Tau, View::Spectrum];

    pub fn name(self) -> &'static str {
        match self {
            View::Fluctuation => "fluctuation",
            View::Hurst => "hurst",
            View::Tau => "tau",
            View::Spectrum => "spectrum",
        }
    }

    pub fn header(self) -> &'static str {
        match self {
            View::Fluctuation => "method,variant,q,s,fq",
            View::Hurst => "method,variant,q,h,r2",
            View::Tau => "method,variant,q,tau",
            View::Spectrum => "method,variant,q,alpha,f_alpha",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name())
    }
}

impl FromStr for View {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        View::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| CliError::UnknownView(s.to_string()))
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Writes `view` as CSV. Scaling views use each analysis's first fit range;
/// flagged `F_q(s)` cells are left empty.
pub fn write_view<W: Write>(report: &AnalysisReport, view: View, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{}", view.header())?;
    for a in &report.analyses {
        let (method, variant) = (a.method.name(), a.variant.as_str());
        if view == View::Fluctuation {
            for (i, q) in a.surface.q_grid().iter().enumerate() {
                for (j, s) in a.surface.scales().iter().enumerate() {
                    match a.surface.value(i, j) {
                        Some(v) => writeln!(out, "{method},{variant},{q},{s},{v}")?,
                        None => writeln!(out, "{method},{variant},{q},{s},")?,
                    }
                }
            }
            continue;
        }
        let Some(fit) = a.fits.first() else { continue };
        let qs = fit.hurst.q_grid();
        for (i, q) in qs.iter().enumerate() {
            match view {
                View::Hurst => writeln!(
                    out,
                    "{method},{variant},{q},{},{}",
                    fit.hurst.h()[i],
                    fit.hurst.r2()[i]
                )?,
                View::Tau => writeln!(out, "{method},{variant},{q},{}", fit.tau.tau[i])?,
                View::Spectrum => writeln!(
                    out,
                    "{method},{variant},{q},{},{}",
                    fit.spectrum.alpha[i], fit.spectrum.f_alpha[i]
                )?,
                View::Fluctuation => unreachable!(),
            }
        }
    }
    Ok(())
}

pub fn export_view(report: &AnalysisReport, view: View, path: &Path) -> Result<()> {
    let write_err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(write_err)?);
    write_view(report, view, &mut out).map_err(write_err)?;
    out.flush().map_err(write_err)
}

/// Writes every view into `dir` and returns the paths in [`View::ALL`] order.
pub fn export_all(report: &AnalysisReport, dir: &Path) -> Result<Vec<PathBuf>> {
    View::ALL
        .iter()
        .map(|&view| {
            let path = dir.join(view.file_name());
            export_view(report, view, &path)?;
            Ok(path)
        })
        .collect()
}
