//! Terminal tables. Every number shown is a field of the report, rounded
//! for display.

use std::io::{self, Write};

use crate::report::AnalysisReport;

fn num(v: f64) -> String {
    format!("{v:.4}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), num)
}

pub fn write_summary<W: Write>(report: &AnalysisReport, out: &mut W) -> io::Result<()> {
    let d = &report.descriptive;
    let input = &report.input;
    writeln!(
        out,
        "Input: column {} ({} rows, {})",
        input.column,
        input.rows,
        if input.log_returns {
            format!("log returns, N = {}", input.length)
        } else {
            format!("returns, N = {}", input.length)
        }
    )?;
    writeln!(out)?;
    writeln!(out, "Descriptive statistics")?;
    writeln!(
        out,
        "{:>8} {:>12} {:>12} {:>12} {:>10} {:>10}",
        "N", "Mean", "Minimum", "Maximum", "Skewness", "Kurtosis"
    )?;
    writeln!(
        out,
        "{:>8} {:>12} {:>12} {:>12} {:>10} {:>10}",
        d.n,
        num(d.mean),
        num(d.min),
        num(d.max),
        num(d.skewness),
        num(d.kurtosis)
    )?;

    let Some(first) = report.analyses.first() else {
        return Ok(());
    };
    let columns: Vec<String> = report
        .analyses
        .iter()
        .map(|a| format!("{}/{}", a.method, a.variant))
        .collect();
    let width = columns.iter().map(String::len).max().unwrap_or(8).max(8);

    for (k, range) in report.fit_ranges.iter().enumerate() {
        writeln!(out)?;
        writeln!(out, "Generalized Hurst exponents h(q), s = {}..{}", range.0, range.1)?;
        write!(out, "{:>6}", "q")?;
        for c in &columns {
            write!(out, " {c:>width$}")?;
        }
        writeln!(out)?;
        for (i, q) in first.fits[k].hurst.q_grid().iter().enumerate() {
            write!(out, "{q:>6}")?;
            for a in &report.analyses {
                write!(out, " {:>width$}", num(a.fits[k].hurst.h()[i]))?;
            }
            writeln!(out)?;
        }
    }

    writeln!(out)?;
    writeln!(out, "Multifractality degree")?;
    writeln!(
        out,
        "{:<width$} {:>9} {:>8} {:>8} {:>8} {:>8} {:>26}",
        "method/variant", "s", "h(2)", "dh", "dh[10]", "dalpha", "replicate dh mean [min, max]"
    )?;
    for (a, label) in report.analyses.iter().zip(&columns) {
        for fit in &a.fits {
            let replicates = fit.replicate_delta_h.as_ref().map_or_else(
                || "-".to_string(),
                |r| format!("{} [{}, {}]", num(r.mean), num(r.min), num(r.max)),
            );
            writeln!(
                out,
                "{:<width$} {:>9} {:>8} {:>8} {:>8} {:>8} {:>26}",
                label,
                format!("{}..{}", fit.scale_range.0, fit.scale_range.1),
                opt(fit.h2),
                num(fit.delta_h),
                opt(fit.delta_h_q10),
                num(fit.delta_alpha),
                replicates
            )?;
        }
    }

    let flagged: Vec<String> = report
        .analyses
        .iter()
        .filter(|a| !a.flagged.is_empty())
        .map(|a| format!("{}/{}: {} cells", a.method, a.variant, a.flagged.len()))
        .collect();
    if !flagged.is_empty() {
        writeln!(out)?;
        writeln!(
            out,
            "Flagged (q, s) cells, excluded from the fits: {}",
            flagged.join("; ")
        )?;
    }
    Ok(())
}
