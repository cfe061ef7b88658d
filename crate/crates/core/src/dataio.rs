//! CSV ingestion and report serialization.
//!
//! Input is comma-separated UTF-8 with a mandatory header row; quoting is
//! optional. Every selected cell must be a finite decimal number (`.` as
//! the separator, exponents allowed). Missing values are errors.
//!
//! Reports serialize as
//! `{ "measures": {…}, "rotations": [ { "response", "regressors",
//! "coefficients", "denominator", "numerators", "sse", "flag" } ] }`
//! with keys in a fixed order and floats written as shortest round-trip
//! decimals.

use std::fmt::{Display, Write as _};
use std::io::Read;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Direction};
use crate::error::{Error, Result};
use crate::estimators::{FitResult, Rotation};
use crate::lattice::{DeterminantKind, Lattice};
use crate::scalar::Scalar;

/// Which header columns to load, plus product columns computed per row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColumnSelection {
    pub names: Vec<String>,
    /// `(output name, factor names)`.
    pub derived: Vec<(String, Vec<String>)>,
}

impl ColumnSelection {
    /// Selects the named columns. An empty list selects every header column.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ColumnSelection {
            names: names.into_iter().map(Into::into).collect(),
            derived: Vec::new(),
        }
    }

    /// Adds `name := f₁·f₂·…`; factors may name selected or earlier derived
    /// columns.
    pub fn derive<I, S>(mut self, name: impl Into<String>, factors: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.derived
            .push((name.into(), factors.into_iter().map(Into::into).collect()));
        self
    }
}

/// Reads a dataset from CSV text.
pub fn read_csv<T: Scalar, R: Read>(input: R, selection: &ColumnSelection) -> Result<Dataset<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();

    let names: Vec<String> = if selection.names.is_empty() {
        headers.iter().map(str::to_string).collect()
    } else {
        selection.names.clone()
    };
    let mut seen = std::collections::HashSet::new();
    for name in names.iter().chain(selection.derived.iter().map(|(n, _)| n)) {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateColumn(name.clone()));
        }
    }
    let indices = names
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingHeader(name.clone()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut columns: Vec<Vec<T>> = vec![Vec::new(); names.len()];
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                expected_len, len, ..
            } => Error::Ragged {
                row,
                expected: *expected_len as usize,
                found: *len as usize,
            },
            _ => csv_error(e),
        })?;
        for ((name, &idx), column) in names.iter().zip(&indices).zip(columns.iter_mut()) {
            let cell = record.get(idx).unwrap_or("");
            let value = T::parse_decimal(cell).ok_or_else(|| Error::NonNumeric {
                row,
                column: name.clone(),
                value: cell.to_string(),
            })?;
            column.push(value);
        }
    }
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(Error::EmptyData);
    }

    let mut data = Dataset::new(names.into_iter().zip(columns))?;
    for (name, factors) in &selection.derived {
        for f in factors {
            data.column(f)?;
        }
        let values = data.evaluate(&Direction::product(factors.iter().cloned()))?;
        data = data.with_column(name.clone(), values)?;
    }
    Ok(data)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Input(e.to_string())
}

/// Writes a dataset as CSV. Floats use shortest round-trip formatting, so
/// [`read_csv`] reproduces every value exactly.
pub fn write_csv<T: Scalar + Display>(data: &Dataset<T>) -> String {
    let mut out = String::new();
    let names: Vec<&str> = data.names().collect();
    out.push_str(&names.join(","));
    out.push('\n');
    let cols: Vec<&[T]> = data.columns().map(|(_, c)| c).collect();
    for i in 0..data.n() {
        let cells: Vec<String> = cols.iter().map(|c| c[i].to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Serializable summary of one rotation or fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationReport {
    pub response: String,
    pub regressors: Vec<String>,
    pub coefficients: Vec<f64>,
    pub denominator: f64,
    pub numerators: Vec<f64>,
    pub sse: Option<f64>,
    /// `well-posed`, `near-singular`, `singular` or `error`.
    pub flag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RotationReport {
    pub fn from_fit<T: Scalar>(fit: &FitResult<T>) -> Self {
        RotationReport {
            response: fit.spec.response().to_string(),
            regressors: fit.spec.regressors().iter().map(|d| d.to_string()).collect(),
            coefficients: fit.coefficients.iter().map(Scalar::as_f64).collect(),
            denominator: fit.denominator.as_f64(),
            numerators: fit.numerators.iter().map(Scalar::as_f64).collect(),
            sse: Some(fit.sse.as_f64()),
            flag: fit.condition.as_str().to_string(),
            error: None,
        }
    }

    pub fn from_rotation<T: Scalar>(rotation: &Rotation<T>) -> Self {
        match &rotation.outcome {
            Ok(fit) => RotationReport::from_fit(fit),
            Err(e) => RotationReport {
                response: rotation.response.to_string(),
                regressors: rotation.regressors.iter().map(|d| d.to_string()).collect(),
                coefficients: Vec::new(),
                denominator: match e {
                    Error::Singular { determinant } => *determinant,
                    _ => 0.0,
                },
                numerators: Vec::new(),
                sse: None,
                flag: match e {
                    Error::Singular { .. } => "singular",
                    _ => "error",
                }
                .to_string(),
                error: Some(e.to_string()),
            },
        }
    }
}

/// Lattice measures plus any number of fitted rotations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub measures: IndexMap<String, f64>,
    pub rotations: Vec<RotationReport>,
}

impl Report {
    pub fn is_empty(&self) -> bool {
        self.measures.is_empty() && self.rotations.is_empty()
    }
}

/// Named determinant measures for unity and `columns` (two or three), with
/// their `Δ/n²` scalings. With `vertices` set, every cached vertex sum is
/// listed first.
pub fn measure_catalog<T: Scalar>(
    lattice: &Lattice<T>,
    columns: &[Direction],
    vertices: bool,
) -> Result<IndexMap<String, f64>> {
    let mut out = IndexMap::new();
    let one = Direction::unity();
    if vertices {
        let dirs: Vec<&Direction> = std::iter::once(&one).chain(columns).collect();
        for (i, a) in dirs.iter().enumerate() {
            for b in &dirs[i..] {
                out.insert(format!("vertex_{a}_{b}"), lattice.vertex(a, b)?.as_f64());
            }
        }
    }

    let mut kinds: Vec<DeterminantKind> = columns
        .iter()
        .map(|a| DeterminantKind::Variance(a.clone()))
        .collect();
    for (i, a) in columns.iter().enumerate() {
        for b in &columns[i + 1..] {
            kinds.push(DeterminantKind::Covariance(a.clone(), b.clone()));
            kinds.push(DeterminantKind::InternalCovariance(a.clone(), b.clone()));
            kinds.push(DeterminantKind::InternalCovariance(b.clone(), a.clone()));
            kinds.push(DeterminantKind::General2(one.clone(), b.clone(), a.clone(), one.clone()));
            kinds.push(DeterminantKind::BaseVariance(a.clone(), b.clone()));
        }
    }
    for kind in &kinds {
        out.insert(format!("delta_{}", kind.subscript()), lattice.determinant(kind)?.as_f64());
    }
    for kind in &kinds {
        if let Ok(s) = lattice.scaled_sigma(kind) {
            out.insert(format!("sigma2_{}", kind.subscript()), s.as_f64());
        }
    }
    if let [a, b, c] = columns {
        let form = DeterminantKind::Form1(a.clone(), b.clone(), c.clone());
        out.insert(format!("delta_{}", form.subscript()), lattice.form_determinant(&form)?.as_f64());
    }
    Ok(out)
}

/// Serializes a report. Fails on a report with neither measures nor rotations.
pub fn write_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    if report.is_empty() {
        return Err(Error::Precondition("nothing to report".into()));
    }
    match format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(report).map_err(|e| Error::Input(e.to_string()))?;
            text.push('\n');
            Ok(text.into_bytes())
        }
        Format::Text => Ok(render_text(report).into_bytes()),
    }
}

/// Parses a JSON report produced by [`write_report`].
pub fn parse_report(bytes: &[u8]) -> Result<Report> {
    serde_json::from_slice(bytes).map_err(|e| Error::Input(e.to_string()))
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    if !report.measures.is_empty() {
        out.push_str("measures\n");
        let width = report.measures.keys().map(|k| k.len()).max().unwrap_or(0);
        for (k, v) in &report.measures {
            let _ = writeln!(out, "  {k:<width$}  {v}");
        }
    }
    if !report.rotations.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("rotations\n");
        let header = ["model", "coefficients", "denominator", "sse", "flag"].map(String::from);
        let rows: Vec<[String; 5]> = report
            .rotations
            .iter()
            .map(|r| {
                let coefficients = r
                    .coefficients
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                [
                    format!("{} = {}", r.response, r.regressors.join(" + ")),
                    format!("({coefficients})"),
                    r.denominator.to_string(),
                    r.sse.map_or_else(|| "-".to_string(), |s| s.to_string()),
                    r.flag.clone(),
                ]
            })
            .collect();
        let mut widths = header.clone().map(|h| h.len());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for row in std::iter::once(&header).chain(&rows) {
            let line: Vec<String> = row
                .iter()
                .zip(widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(out, "  {}", line.join("  ").trim_end());
        }
        for r in &report.rotations {
            if let Some(e) = &r.error {
                let _ = writeln!(out, "  {}: {e}", r.response);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::fit_all_rotations;

    const D1: &str = "x,y\n1,2\n2,3\n3,5\n";

    #[test]
    fn reads_d1() {
        let data: Dataset<f64> = read_csv(D1.as_bytes(), &ColumnSelection::new(["x", "y"])).unwrap();
        assert_eq!(data.n(), 3);
        assert_eq!(data.column("x").unwrap(), &[1.0, 2.0, 3.0]);
        assert_eq!(data.column("y").unwrap(), &[2.0, 3.0, 5.0]);
    }

    #[test]
    fn derived_interaction_column() {
        let sel = ColumnSelection::new(["x", "y"]).derive("xy", ["x", "y"]);
        let data: Dataset<f64> = read_csv(D1.as_bytes(), &sel).unwrap();
        assert_eq!(data.column("xy").unwrap(), &[2.0, 6.0, 15.0]);
        let bad = ColumnSelection::new(["x"]).derive("xy", ["x", "y"]);
        assert_eq!(
            read_csv::<f64, _>(D1.as_bytes(), &bad).unwrap_err(),
            Error::ColumnNotFound("y".into())
        );
        let dup = ColumnSelection::new(["x", "y"]).derive("x", ["y", "y"]);
        assert!(matches!(
            read_csv::<f64, _>(D1.as_bytes(), &dup),
            Err(Error::DuplicateColumn(_))
        ));
    }

    #[test]
    fn input_errors() {
        let sel = ColumnSelection::new(["x", "y"]);
        assert_eq!(
            read_csv::<f64, _>("x,y\n1,apple\n".as_bytes(), &sel).unwrap_err(),
            Error::NonNumeric {
                row: 1,
                column: "y".into(),
                value: "apple".into()
            }
        );
        assert_eq!(
            read_csv::<f64, _>("x,y\n1,2\n3\n".as_bytes(), &sel).unwrap_err(),
            Error::Ragged {
                row: 2,
                expected: 2,
                found: 1
            }
        );
        assert_eq!(
            read_csv::<f64, _>("x,y\n".as_bytes(), &sel).unwrap_err(),
            Error::EmptyData
        );
        assert_eq!(
            read_csv::<f64, _>(D1.as_bytes(), &ColumnSelection::new(["x", "z"])).unwrap_err(),
            Error::MissingHeader("z".into())
        );
        assert!(matches!(
            read_csv::<f64, _>("x,y\n1,\n".as_bytes(), &sel),
            Err(Error::NonNumeric { row: 1, .. })
        ));
        assert!(matches!(
            read_csv::<f64, _>("x,y\n1,\"2,5\"\n".as_bytes(), &sel),
            Err(Error::NonNumeric { row: 1, .. })
        ));
    }

    #[test]
    fn quoting_and_scientific_notation() {
        let text = "\"x\",\"y\"\n\"1.5e2\",-2E-1\n";
        let data: Dataset<f64> = read_csv(text.as_bytes(), &ColumnSelection::default()).unwrap();
        assert_eq!(data.column("x").unwrap(), &[150.0]);
        assert_eq!(data.column("y").unwrap(), &[-0.2]);
    }

    #[test]
    fn exact_ingest() {
        use num_rational::BigRational;
        let data: Dataset<BigRational> =
            read_csv("x\n0.1\n".as_bytes(), &ColumnSelection::default()).unwrap();
        assert_eq!(data.column("x").unwrap()[0], BigRational::new(1.into(), 10.into()));
    }

    fn d1_report() -> Report {
        let data: Dataset<f64> = read_csv(D1.as_bytes(), &ColumnSelection::default()).unwrap();
        let cols = [Direction::column("x"), Direction::column("y")];
        let dirs = [Direction::unity(), cols[0].clone(), cols[1].clone()];
        let lattice = Lattice::build(&data, &dirs).unwrap();
        Report {
            measures: measure_catalog(&lattice, &cols, false).unwrap(),
            rotations: fit_all_rotations(&data, &dirs)
                .unwrap()
                .iter()
                .map(RotationReport::from_rotation)
                .collect(),
        }
    }

    #[test]
    fn measure_keys_for_d1() {
        let r = d1_report();
        let expected = [
            ("delta_11xx", 6.0),
            ("delta_11yy", 14.0),
            ("delta_11xy", 9.0),
            ("delta_1yxx", 2.0),
            ("delta_1xyy", -2.0),
            ("delta_1yx1", -9.0),
            ("delta_xxyy", 3.0),
        ];
        for (k, v) in expected {
            assert_eq!(r.measures[k], v, "{k}");
        }
        assert!(!r.measures.contains_key("sigma2_1yx1"));
        assert_eq!(r.measures["sigma2_11xy"], 1.0);
    }

    #[test]
    fn json_report() {
        let r = d1_report();
        let bytes = write_report(&r, Format::Json).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(value["measures"]["delta_xxyy"], 3.0);
        let unity = &value["rotations"][2];
        assert_eq!(unity["response"], "1");
        let c = unity["coefficients"].as_array().unwrap();
        assert!((c[0].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-12);
        assert!((c[1].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(parse_report(&bytes).unwrap(), r);
    }

    #[test]
    fn empty_report_is_rejected() {
        assert!(matches!(
            write_report(&Report::default(), Format::Json),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn text_report_layout() {
        let text = String::from_utf8(write_report(&d1_report(), Format::Text).unwrap()).unwrap();
        assert!(text.starts_with("measures\n"));
        assert!(text.contains("delta_xxyy"));
        assert!(text.contains("1 = x + y"));
        assert!(text.contains("y = 1 + x"));
        assert!(text.contains("well-posed"));
    }

    #[test]
    fn csv_write_then_read_is_exact() {
        let data = Dataset::<f64>::from_f64(&[("a", &[0.1, 1.0 / 3.0, -2.5e-300, 1e21])]).unwrap();
        let text = write_csv(&data);
        let back: Dataset<f64> = read_csv(text.as_bytes(), &ColumnSelection::default()).unwrap();
        assert_eq!(back, data);
    }
}
