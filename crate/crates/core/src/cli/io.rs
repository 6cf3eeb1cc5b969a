//! Loaders and writers shared by every subcommand.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::dsbs::dsbs_source;
use crate::error::{Error, Result};
use crate::probkit::{JointPmf2, Pmf};

fn inline_or_file(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        Ok(std::fs::read_to_string(Path::new(arg))?)
    }
}

pub fn read_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// `dsbs:<p>`, an inline JSON object `{"nx":..,"ny":..,"probs":[..]}`, or the
/// path of a file holding one.
pub fn load_source(arg: &str) -> Result<JointPmf2> {
    if let Some(p) = arg.strip_prefix("dsbs:") {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad crossover in {arg:?}")))?;
        return dsbs_source(p);
    }
    read_json(&inline_or_file(arg)?)
}

/// An inline JSON array of probabilities or the path of a file holding one.
pub fn load_pmf(arg: &str) -> Result<Pmf> {
    read_json(&inline_or_file(arg)?)
}

/// `start:stop:step` (inclusive of `stop` up to rounding) or a
/// comma-separated list.
pub fn parse_grid(arg: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("bad grid {arg:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = arg.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, s] => {
            let (a, b, s) = (num(a)?, num(b)?, num(s)?);
            if !(s > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(bad());
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            let mut g: Vec<f64> = (0..count).map(|i| a + i as f64 * s).collect();
            if let Some(last) = g.last_mut() {
                if (b - *last).abs() < 1e-9 * s.max(1.0) {
                    *last = b;
                }
            }
            g
        }
        [list] => list.split(',').map(num).collect::<Result<_>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() {
        return Err(bad());
    }
    Ok(grid)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Fixed six-decimal rendering; negative zero prints as zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt6).unwrap_or_default()
}

/// A numeric CSV table; empty cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| fmt_opt(*v))).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            let row = rec
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|_| Error::Parse(format!("bad cell {cell:?}")))
                    }
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        let g = parse_grid("0:1:0.05").unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[20], 1.0);
        assert_eq!(parse_grid("0.1, 0.4").unwrap(), vec![0.1, 0.4]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn sources() {
        let s = load_source("dsbs:0.1").unwrap();
        assert!((s.get(0, 0) - 0.45).abs() < 1e-15);
        let j = load_source(r#"{"nx":1,"ny":2,"probs":[0.3,0.7]}"#).unwrap();
        assert_eq!(j.ny(), 2);
        assert!(load_source("dsbs:0.7").is_err());
        assert!(matches!(load_source("/nonexistent/file.json"), Err(Error::Io(_))));
        assert_eq!(load_pmf("[0.25,0.75]").unwrap().probs(), &[0.25, 0.75]);
    }

    #[test]
    fn csv_round_trip() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(vec![Some(-1e-12), None]);
        t.push(vec![Some(0.5), Some(1.0 / 3.0)]);
        let text = t.to_csv().unwrap();
        assert_eq!(text, "a,b\n0.000000,\n0.500000,0.333333\n");
        let back = CsvTable::from_csv(&text).unwrap();
        assert_eq!(back.header, t.header);
        assert_eq!(back.rows[1], vec![Some(0.5), Some(0.333333)]);
        assert_eq!(back.rows[0][1], None);
    }
}
