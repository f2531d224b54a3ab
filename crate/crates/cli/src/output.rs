use std::io::{self, Write};

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Writes one JSON object per line, or an aligned table whose columns are
/// the keys of the records in first-seen order.
pub fn emit(records: &[Value], format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                writeln!(out, "{r}")?;
            }
        }
        Format::Table => {
            let mut cols: Vec<&str> = Vec::new();
            for r in records {
                if let Value::Object(m) = r {
                    for k in m.keys() {
                        if !cols.contains(&k.as_str()) {
                            cols.push(k);
                        }
                    }
                }
            }
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| cols.iter().map(|c| r.get(c).map_or("-".into(), cell)).collect())
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| rows.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(cols.clone()))?;
            for r in &rows {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(())
}

pub fn summary_line(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", cell(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => cell(other),
    }
}
