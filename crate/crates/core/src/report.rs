//! Flat report rows and their JSON / CSV encodings.
//!
//! Both encodings of a row carry identical values: floats are rounded to 12
//! significant digits and then printed in shortest round-trip form, counts
//! are decimal strings, and field order is fixed.

use std::io::{self, Write};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::bounds::{BoundReport, PolyBoundReport};
use crate::counting::ConvolutionReport;
use crate::num::Real;
use crate::partset::ResidueSpec;
use crate::series::{SeriesCheckReport, SeriesPoint};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rounds to 12 significant decimal digits; non-finite values pass through.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// The text both encodings use for a float.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&round12(x)).expect("finite float serializes")
    } else {
        String::new()
    }
}

fn ser_real<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) if x.is_finite() => s.serialize_f64(round12(*x)),
        _ => s.serialize_none(),
    }
}

fn opt_cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Something that can be written as a CSV row and a JSON object.
pub trait Tabular: Serialize {
    fn headers() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

/// One check evaluation. Fields that do not apply are omitted from JSON and
/// left empty in CSV.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Row {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub residues: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub log_count: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub bound: Option<f64>,
    /// Integer-valued bound or right side, as a decimal string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_real")]
    pub ratio: Option<f64>,
    pub holds: bool,
}

impl Tabular for Row {
    fn headers() -> &'static [&'static str] {
        &[
            "check",
            "m",
            "R",
            "variant",
            "n",
            "t",
            "x",
            "count",
            "log_count",
            "bound",
            "bound_exact",
            "slack",
            "lhs",
            "rhs",
            "margin",
            "ratio",
            "holds",
        ]
    }

    fn cells(&self) -> Vec<String> {
        let real = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
        vec![
            self.check.clone(),
            opt_cell(&self.m),
            self.residues.clone().unwrap_or_default(),
            self.variant.clone().unwrap_or_default(),
            opt_cell(&self.n),
            real(self.t),
            real(self.x),
            self.count.clone().unwrap_or_default(),
            real(self.log_count),
            real(self.bound),
            self.bound_exact.clone().unwrap_or_default(),
            real(self.slack),
            real(self.lhs),
            real(self.rhs),
            real(self.margin),
            real(self.ratio),
            self.holds.to_string(),
        ]
    }
}

fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn residues_label(rs: &[usize]) -> String {
    rs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl Row {
    pub fn from_bound<T: Real>(check: &str, r: &BoundReport<T>) -> Self {
        Self {
            check: check.into(),
            m: Some(r.m),
            residues: Some(residues_label(&r.residues)),
            variant: Some(r.variant.label()),
            n: Some(r.n),
            count: Some(r.count.to_string()),
            log_count: r.log_count.map(to_f64),
            bound: Some(to_f64(r.bound)),
            slack: r.slack.map(to_f64),
            holds: r.holds,
            ..Self::default()
        }
    }

    pub fn from_poly(r: &PolyBoundReport) -> Self {
        Self {
            check: "rpoly".into(),
            m: Some(r.m),
            residues: Some(residues_label(&r.residues)),
            variant: Some("r-plus".into()),
            n: Some(r.n),
            count: Some(r.count.to_string()),
            bound_exact: Some(r.bound.to_string()),
            holds: r.holds,
            ..Self::default()
        }
    }

    pub fn from_convolution(spec: &ResidueSpec, r: &ConvolutionReport) -> Self {
        Self {
            check: "convolution".into(),
            m: Some(spec.m()),
            residues: Some(spec.residues_label()),
            variant: Some("full-a".into()),
            n: Some(r.n),
            count: Some(r.lhs.to_string()),
            bound_exact: Some(r.rhs.to_string()),
            holds: r.holds,
            ..Self::default()
        }
    }

    pub fn from_series<T: Real>(r: &SeriesCheckReport<T>) -> Self {
        let (t, x) = match r.point {
            SeriesPoint::T(t) => (Some(to_f64(t)), None),
            SeriesPoint::X(x) => (None, Some(to_f64(x))),
        };
        Self {
            check: r.check.name().into(),
            m: r.m,
            residues: (!r.residues.is_empty() || r.m.is_some())
                .then(|| residues_label(&r.residues)),
            t,
            x,
            lhs: Some(to_f64(r.lhs)),
            rhs: Some(to_f64(r.rhs)),
            margin: Some(to_f64(r.margin)),
            holds: r.holds,
            ..Self::default()
        }
    }
}

/// One line of the `table` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub p_a: String,
    pub p_a_plus: String,
    pub p_r_plus: String,
    #[serde(serialize_with = "ser_real")]
    pub theorem1_bound: Option<f64>,
    #[serde(serialize_with = "ser_real")]
    pub slack: Option<f64>,
    #[serde(serialize_with = "ser_real")]
    pub ratio: Option<f64>,
}

impl TableRow {
    pub fn new(n: usize, p_a: &BigUint, p_a_plus: &BigUint, p_r_plus: &BigUint) -> Self {
        Self {
            n,
            p_a: p_a.to_string(),
            p_a_plus: p_a_plus.to_string(),
            p_r_plus: p_r_plus.to_string(),
            theorem1_bound: None,
            slack: None,
            ratio: None,
        }
    }
}

impl Tabular for TableRow {
    fn headers() -> &'static [&'static str] {
        &["n", "p_a", "p_a_plus", "p_r_plus", "theorem1_bound", "slack", "ratio"]
    }

    fn cells(&self) -> Vec<String> {
        let real = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
        vec![
            self.n.to_string(),
            self.p_a.clone(),
            self.p_a_plus.clone(),
            self.p_r_plus.clone(),
            real(self.theorem1_bound),
            real(self.slack),
            real(self.ratio),
        ]
    }
}

/// Writes rows as a JSON array (one object per line) or as CSV with a header.
pub fn write_rows<W: Write, R: Tabular>(out: W, rows: &[R], format: Format) -> io::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            out.write_all(b"[")?;
            for (i, row) in rows.iter().enumerate() {
                out.write_all(if i == 0 { b"\n" } else { b",\n" })?;
                serde_json::to_writer(&mut out, row)?;
            }
            out.write_all(b"\n]\n")?;
            out.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::headers())?;
            for row in rows {
                w.write_record(row.cells())?;
            }
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(fmt_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_real(0.1 + 0.2), "0.3");
        assert_eq!(fmt_real(2.0), "2.0");
        assert_eq!(fmt_real(-1.25e-30), "-1.25e-30");
        assert_eq!(fmt_real(f64::NAN), "");
    }

    #[test]
    fn json_and_csv_agree() {
        let row = Row {
            check: "theorem1".into(),
            m: Some(4),
            residues: Some("1,3".into()),
            n: Some(10),
            count: Some("12345678901234567890123".into()),
            bound: Some(1.0 / 3.0),
            slack: Some(2e-20),
            holds: true,
            ..Row::default()
        };
        let mut json = Vec::new();
        write_rows(&mut json, std::slice::from_ref(&row), Format::Json).unwrap();
        let json = String::from_utf8(json).unwrap();
        assert_eq!(
            json,
            "[\n{\"check\":\"theorem1\",\"m\":4,\"R\":\"1,3\",\"n\":10,\
             \"count\":\"12345678901234567890123\",\"bound\":0.333333333333,\
             \"slack\":2e-20,\"holds\":true}\n]\n"
        );
        let mut csv = Vec::new();
        write_rows(&mut csv, &[row], Format::Csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let line = csv.lines().nth(1).unwrap();
        assert_eq!(
            line,
            "theorem1,4,\"1,3\",,10,,,12345678901234567890123,,0.333333333333,,2e-20,,,,,true"
        );
    }
}
