//! Command-line pipeline around the `mfdfa` library: CSV ingestion, the
//! original-plus-surrogates analysis under either segmentation method, a
//! canonical JSON report and tidy plot CSVs derived from it.
//!
//! Exit codes are listed in [`error::exit`].

pub mod app;
pub mod config;
pub mod error;
pub mod export;
pub mod ingest;
pub mod report;
pub mod run;
pub mod summary;

pub use config::AnalysisConfig;
pub use error::{CliError, Result};
pub use export::View;
pub use ingest::{ingest, ingest_reader, Ingested, InputSummary};
pub use report::AnalysisReport;
pub use run::{analyze, run, Timings};
