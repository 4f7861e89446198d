use std::io::Write;

use mfdfa_cli::config::{ColumnSelector, InputKind};
use mfdfa_cli::{ingest, ingest_reader, CliError};

fn read(text: &str, column: ColumnSelector, kind: InputKind) -> Result<mfdfa_cli::Ingested, CliError> {
    ingest_reader(text.as_bytes(), &column, kind, b',')
}

#[test]
fn two_prices_give_one_return() {
    let got = read(
        "date,close\n2004-02-09,410.2\n2004-02-10,412.0",
        ColumnSelector::Name("close".into()),
        InputKind::Price,
    )
    .unwrap();
    assert_eq!(got.series.len(), 1);
    let expected = (412.0f64 / 410.2).ln();
    assert_eq!(got.series.values()[0], expected);
    assert!(got.summary.header);
    assert!(got.summary.log_returns);
    assert_eq!(got.summary.rows, 2);
    assert_eq!(got.summary.column, "close");
}

#[test]
fn malformed_row_names_line_and_column() {
    let err = read(
        "date,close\n2004-02-09,abc\n2004-02-10,412.0",
        ColumnSelector::Name("close".into()),
        InputKind::Price,
    )
    .unwrap_err();
    match err {
        CliError::Parse { row, column, .. } => {
            assert_eq!(row, 2);
            assert_eq!(column, "close");
        }
        other => panic!("{other:?}"),
    }
    let err = read("1.0\n2.0\n\n3.0\nnan\n", ColumnSelector::Index(0), InputKind::Return).unwrap_err();
    assert!(matches!(err, CliError::Parse { row: 5, .. }), "{err:?}");
}

#[test]
fn header_is_detected_for_index_selection() {
    let with = read("t,r\n0,0.1\n1,-0.2\n", ColumnSelector::Index(1), InputKind::Return).unwrap();
    assert!(with.summary.header);
    assert_eq!(with.summary.column, "r");
    assert_eq!(with.series.values(), &[0.1, -0.2]);

    let without = read("0,0.1\n1,-0.2\n", ColumnSelector::Index(1), InputKind::Return).unwrap();
    assert!(!without.summary.header);
    assert_eq!(without.summary.column, "#1");
    assert_eq!(without.series.values(), &[0.1, -0.2]);
}

#[test]
fn blank_lines_and_whitespace_are_skipped() {
    let got = read("v\n\n 1.5 \n\n2.5\n   \n3.5\n", ColumnSelector::Index(0), InputKind::Return).unwrap();
    assert_eq!(got.series.values(), &[1.5, 2.5, 3.5]);
}

#[test]
fn other_delimiters() {
    let got = ingest_reader(
        "a;b\n1;10\n2;20\n".as_bytes(),
        &ColumnSelector::Name("b".into()),
        InputKind::Price,
        b';',
    )
    .unwrap();
    assert_eq!(got.series.values(), &[2.0f64.ln()]);
}

#[test]
fn error_cases() {
    let missing = read("a,b\n1,2\n", ColumnSelector::Name("close".into()), InputKind::Return).unwrap_err();
    assert!(matches!(missing, CliError::Config(_)), "{missing:?}");

    let short = read("1,2\n3\n", ColumnSelector::Index(1), InputKind::Return).unwrap_err();
    assert!(matches!(short, CliError::Parse { row: 2, .. }), "{short:?}");

    let negative = read("p\n10\n-1\n", ColumnSelector::Index(0), InputKind::Price).unwrap_err();
    assert!(matches!(negative, CliError::Parse { row: 3, .. }), "{negative:?}");
    // Non-positive values are fine as returns.
    assert_eq!(
        read("p\n10\n-1\n", ColumnSelector::Index(0), InputKind::Return)
            .unwrap()
            .series
            .len(),
        2
    );

    let one_price = read("p\n10\n", ColumnSelector::Index(0), InputKind::Price).unwrap_err();
    assert!(matches!(one_price, CliError::Data(_)), "{one_price:?}");

    let err = ingest(
        std::path::Path::new("/definitely/not/here.csv"),
        &ColumnSelector::Index(0),
        InputKind::Price,
        b',',
    )
    .unwrap_err();
    assert!(matches!(err, CliError::FileNotFound(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn fixture_has_2850_returns() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/prices_2851.csv");
    let got = ingest(&path, &ColumnSelector::Name("price".into()), InputKind::Price, b',').unwrap();
    assert_eq!(got.summary.rows, 2851);
    assert_eq!(got.series.len(), 2850);
}

#[test]
fn reads_from_disk() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "date,close\n2004-02-09,410.2\n2004-02-10,412.0\n2004-02-11,409.9").unwrap();
    let got = ingest(file.path(), &ColumnSelector::Name("close".into()), InputKind::Price, b',').unwrap();
    assert_eq!(got.series.len(), 2);
}
