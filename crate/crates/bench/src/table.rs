//! Rendering of result rows in the column layout
//! `Data set, Dim., Scan, Double 1..K, Combined 1..K`.

use kfn_core::{Error, Result};

use crate::experiment::ResultRow;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableFormat {
    #[default]
    Csv,
    Markdown,
}

const DEFAULT_K: usize = 5;

fn columns(rows: &[ResultRow]) -> usize {
    rows.iter()
        .map(|r| r.combined.len().max(r.double.len()))
        .max()
        .unwrap_or(DEFAULT_K)
}

pub fn emit_table(rows: &[ResultRow], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => emit_csv(rows),
        TableFormat::Markdown => emit_markdown(rows),
    }
}

fn emit_csv(rows: &[ResultRow]) -> String {
    let k = columns(rows);
    let mut out = String::from("dataset,dim,scan");
    for prefix in ["double", "combined"] {
        for i in 1..=k {
            out.push_str(&format!(",{prefix}_{i}"));
        }
    }
    out.push('\n');
    for r in rows {
        let dim = r.dim.map(|d| d.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{dim},{}", csv_field(&r.label), r.scan));
        for values in [&r.double, &r.combined] {
            for i in 0..k {
                out.push(',');
                if let Some(v) = values.get(i) {
                    // shortest representation that parses back exactly
                    out.push_str(&format!("{v:?}"));
                }
            }
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_markdown(rows: &[ResultRow]) -> String {
    let k = columns(rows);
    let mut out = String::from("| Data set | Dim. | Scan |");
    for prefix in ["Double", "Combined"] {
        for i in 1..=k {
            out.push_str(&format!(" {prefix} {i} |"));
        }
    }
    out.push('\n');
    out.push_str("|---|---:|---:|");
    for _ in 0..2 * k {
        out.push_str("---:|");
    }
    out.push('\n');
    for r in rows {
        let dim = r.dim.map_or_else(|| "---".to_string(), |d| d.to_string());
        out.push_str(&format!("| {} | {dim} | {} |", r.label, r.scan));
        for values in [&r.double, &r.combined] {
            for i in 0..k {
                match values.get(i) {
                    // Rust rounds ties to even
                    Some(v) => out.push_str(&format!(" {v:.2} |")),
                    None => out.push_str(" --- |"),
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Geometric means, over every cell with both baselines, of the combined
/// cost as a fraction of the double cost and of the scan cost.
pub fn summary_line(rows: &[ResultRow]) -> Option<String> {
    let mut vs_double = Vec::new();
    let mut vs_scan = Vec::new();
    for r in rows {
        for (d, c) in r.double.iter().zip(&r.combined) {
            vs_double.push(d / c);
            vs_scan.push(1.0 / c);
        }
    }
    if vs_double.is_empty() {
        return None;
    }
    let geo = |v: &[f64]| (v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64).exp();
    let (a, b) = (geo(&vs_double), geo(&vs_scan));
    Some(format!(
        "Combined cost, geometric mean: {:.1}% of double ({:.1}x), {:.1}% of scan ({:.1}x)",
        100.0 * a,
        1.0 / a,
        100.0 * b,
        1.0 / b
    ))
}

/// Reads rows written by the CSV emitter.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(1, e.to_string()))?
        .clone();
    let k = headers.iter().filter(|h| h.starts_with("combined_")).count();
    if headers.len() != 3 + 2 * k {
        return Err(parse_error(1, "unexpected header layout".into()));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_error(line, e.to_string()))?;
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| parse_error(line, format!("invalid number {s:?}")))
        };
        let dim = match &record[1] {
            "" => None,
            d => Some(d.parse().map_err(|_| parse_error(line, "invalid dimension".into()))?),
        };
        let scan = record[2]
            .parse()
            .map_err(|_| parse_error(line, "invalid scan count".into()))?;
        let cells = |offset: usize| -> Result<Vec<f64>> {
            record
                .iter()
                .skip(offset)
                .take(k)
                .filter(|c| !c.is_empty())
                .map(num)
                .collect()
        };
        rows.push(ResultRow {
            label: record[0].to_string(),
            dim,
            scan,
            double: cells(3)?,
            combined: cells(3 + k)?,
        });
    }
    Ok(rows)
}

fn parse_error(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}
