//! CSV and JSON emitters.
//!
//! CSV layout: `# key=value` lines describing the run, one header line, then
//! one row per grid point. Floats carry 17 significant digits, so parsing a
//! file and writing it again reproduces it byte for byte.

use std::io::Write;

use crate::sweep::SweepRow;
use crate::{CliError, Result};

pub const HEADER: [&str; 7] = [
    "axis_value",
    "beta2",
    "alpha2",
    "entropy_bits",
    "c0_sq",
    "mean_pairs",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::BadValue {
                key: "format".into(),
                message: format!("{s:?} is not one of csv, json"),
            }),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// Metadata plus rows, as read back from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

fn fmt_cell(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(mut out: W, meta: &[(String, String)], rows: &[SweepRow]) -> Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k}={v}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            fmt_cell(r.axis_value),
            fmt_cell(r.beta2),
            fmt_cell(r.alpha2),
            fmt_cell(r.entropy_bits),
            fmt_cell(r.c0_sq),
            fmt_cell(r.mean_pairs),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(meta: &[(String, String)], rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, meta, rows)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut meta = Vec::new();
    let mut body_start = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let Some(comment) = line.strip_prefix("# ") else {
            break;
        };
        let comment = comment.trim_end_matches('\n');
        let (k, v) = comment.split_once('=').ok_or_else(|| CliError::Parse {
            line: i + 1,
            message: "comment line is not key=value".into(),
        })?;
        meta.push((k.to_string(), v.to_string()));
        body_start += line.len();
    }
    let mut reader = csv::ReaderBuilder::new().from_reader(&text.as_bytes()[body_start..]);
    let header = reader.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(CliError::Parse {
            line: meta.len() + 1,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = meta.len() + i + 2;
        let num = |j: usize| {
            record[j].parse::<f64>().map_err(|e| CliError::Parse {
                line,
                message: format!("column {}: {e}", HEADER[j]),
            })
        };
        rows.push(SweepRow {
            axis_value: num(0)?,
            beta2: num(1)?,
            alpha2: num(2)?,
            entropy_bits: num(3)?,
            c0_sq: num(4)?,
            mean_pairs: num(5)?,
            error: Some(record[6].to_string()).filter(|e| !e.is_empty()),
        });
    }
    Ok(Table { meta, rows })
}

/// JSON array of row objects; non-finite values become `null`.
pub fn json_string(rows: &[SweepRow]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}

pub fn render(format: Format, meta: &[(String, String)], rows: &[SweepRow]) -> Result<String> {
    match format {
        Format::Csv => csv_string(meta, rows),
        Format::Json => json_string(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<SweepRow> {
        vec![
            SweepRow {
                axis_value: 0.1,
                beta2: 1.0 / 3.0,
                alpha2: 4.0 / 3.0,
                entropy_bits: 1.2345678901234567,
                c0_sq: 0.75,
                mean_pairs: 1.0 / 3.0,
                error: None,
            },
            SweepRow::failed(0.2, "degenerate mode: m = 0, k_perp = 0".into()),
        ]
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let meta = vec![
            ("label".to_string(), "x".to_string()),
            ("note".to_string(), "a=b, c".to_string()),
        ];
        let text = csv_string(&meta, &rows()).unwrap();
        let table = parse_csv(&text).unwrap();
        assert_eq!(table.meta, meta);
        assert_eq!(table.rows[0], rows()[0]);
        assert!(table.rows[1].beta2.is_nan());
        assert_eq!(csv_string(&table.meta, &table.rows).unwrap(), text);
    }

    #[test]
    fn csv_layout() {
        let text = csv_string(&[("k".into(), "v".into())], &rows()[..1]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# k=v");
        assert_eq!(lines[1], HEADER.join(","));
        assert!(lines[2].starts_with("1.0000000000000001e-1,3.3333333333333331e-1,"));
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn json_nulls_for_failed_rows() {
        let s = json_string(&rows()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[1]["beta2"], serde_json::Value::Null);
        assert_eq!(v[0]["c0_sq"], 0.75);
        assert_eq!(v[1]["error"], "degenerate mode: m = 0, k_perp = 0");
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
        assert!(parse_csv("# novalue\n").is_err());
    }
}
