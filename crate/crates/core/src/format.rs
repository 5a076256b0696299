//! Deterministic JSON and CSV encodings of point runs.
//!
//! JSON layout (keys always in this order, optional keys omitted):
//!
//! ```text
//! {
//!   "dim": 2,
//!   "points": [[x, y], ...],
//!   "params": [a_1, ...],
//!   "analysis": { "r": r, "v": [..], "period": m | null, "residual": e }
//! }
//! ```
//!
//! Floats are written with 17 significant digits in scientific notation,
//! which round-trips every finite `f64`, so write -> read -> write is
//! byte-identical.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::engine::{IcsAnalysis, IcsSequence};
use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRecord {
    pub r: f64,
    pub v: Vec<f64>,
    pub period: Option<usize>,
    pub residual: f64,
}

impl From<&IcsAnalysis> for AnalysisRecord {
    fn from(a: &IcsAnalysis) -> Self {
        AnalysisRecord {
            r: a.scale_factor,
            v: a.shift_vector.coords().to_vec(),
            period: a.period,
            residual: a.affine_residual,
        }
    }
}

/// Contents of a points file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub params: Option<Vec<f64>>,
    #[serde(default)]
    pub analysis: Option<AnalysisRecord>,
}

/// Fixed 17-significant-digit rendering.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_list(out: &mut String, values: &[f64]) {
    out.push('[');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format_float(*v));
    }
    out.push(']');
}

impl PointsFile {
    pub fn from_sequence(seq: &IcsSequence, params: Option<&[f64]>) -> Self {
        PointsFile {
            dim: seq.d(),
            points: seq.points().iter().map(|p| p.coords().to_vec()).collect(),
            params: params.map(<[f64]>::to_vec),
            analysis: seq.analysis.as_ref().map(AnalysisRecord::from),
        }
    }

    /// Checks dimensions and finiteness.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(Error::Format(format!(
                    "point {} has {} coordinates, expected {}",
                    i + 1,
                    p.len(),
                    self.dim
                )));
            }
        }
        let all = self
            .points
            .iter()
            .flatten()
            .chain(self.params.iter().flatten());
        if all.clone().any(|c| !c.is_finite()) {
            return Err(Error::Format("non-finite value".into()));
        }
        Ok(())
    }

    pub fn to_points(&self) -> Result<Vec<Point>> {
        self.points.iter().map(|c| Point::new(c.clone())).collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"dim\": {},", self.dim);
        out.push_str("  \"points\": [");
        for (i, p) in self.points.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            write_list(&mut out, p);
        }
        out.push_str(if self.points.is_empty() { "]" } else { "\n  ]" });
        if let Some(params) = &self.params {
            out.push_str(",\n  \"params\": ");
            write_list(&mut out, params);
        }
        if let Some(a) = &self.analysis {
            out.push_str(",\n  \"analysis\": {\n");
            let _ = writeln!(out, "    \"r\": {},", format_float(a.r));
            out.push_str("    \"v\": ");
            write_list(&mut out, &a.v);
            out.push_str(",\n");
            match a.period {
                Some(m) => {
                    let _ = writeln!(out, "    \"period\": {m},");
                }
                None => out.push_str("    \"period\": null,\n"),
            }
            let _ = writeln!(out, "    \"residual\": {}", format_float(a.residual));
            out.push_str("  }");
        }
        out.push_str("\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PointsFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    /// One point per row; with `header`, a first row `x1,...,xd`.
    pub fn to_csv(&self, header: bool) -> Result<String> {
        let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        if header {
            wtr.write_record((1..=self.dim).map(|i| format!("x{i}")))
                .map_err(csv_err)?;
        }
        for p in &self.points {
            wtr.write_record(p.iter().map(|c| format_float(*c)))
                .map_err(csv_err)?;
        }
        let bytes = wtr.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// Parses CSV rows of coordinates. A first row that does not parse as
    /// numbers is taken to be a header.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Format(e.to_string()))?;
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(p) => points.push(p),
                Err(_) if row == 0 => continue,
                Err(e) => {
                    return Err(Error::Format(format!("row {}: {e}", row + 1)));
                }
            }
        }
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Format("no points in CSV".into()))?;
        let file = PointsFile {
            dim,
            points,
            params: None,
            analysis: None,
        };
        file.validate()?;
        Ok(file)
    }
}
