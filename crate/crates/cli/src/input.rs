use std::fs::File;
use std::path::Path;

use arboreal::index_sets::IndexFamily;
use arboreal::rational::parse_rational;
use arboreal::{IndexVector, QuadPair, Rational};

use crate::CliError;

pub fn pair(s: &str) -> Result<QuadPair, CliError> {
    let s = s.trim();
    s.parse()
        .map_err(|e| CliError::Input(format!("bad pair {s:?}: {e}")))
}

pub fn rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    parse_rational(s).map_err(|e| CliError::Input(format!("bad rational {s:?}: {e}")))
}

pub fn vector(s: &str) -> Result<IndexVector, CliError> {
    s.parse()
        .map_err(|e| CliError::Input(format!("bad index vector {s:?}: {e}")))
}

/// Reads pairs from a CSV file with rows `a,b,alpha` or `c,alpha`. Lines
/// starting with `#` are skipped, as is a header row that does not parse.
pub fn pairs_from_csv(path: &Path) -> Result<Vec<QuadPair>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let fields: Vec<&str> = record.iter().collect();
        match fields.join(",").parse::<QuadPair>() {
            Ok(p) => out.push(p),
            Err(_) if row == 0 => continue,
            Err(e) => {
                return Err(CliError::Input(format!(
                    "{} row {}: {e}",
                    path.display(),
                    row + 1
                )))
            }
        }
    }
    Ok(out)
}

pub fn pairs(inline: &[String], csv: Option<&Path>) -> Result<Vec<QuadPair>, CliError> {
    let mut out = inline.iter().map(|s| pair(s)).collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = csv {
        out.extend(pairs_from_csv(path)?);
    }
    if out.is_empty() {
        return Err(CliError::Input("no pairs given".into()));
    }
    Ok(out)
}

pub fn family(inline: &[String], file: Option<&Path>) -> Result<IndexFamily, CliError> {
    let members = if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let fam = IndexFamily::parse(&text).map_err(|e| CliError::Input(e.to_string()))?;
        let mut m = fam.members().to_vec();
        for s in inline {
            m.push(vector(s)?);
        }
        m
    } else {
        inline.iter().map(|s| vector(s)).collect::<Result<_, _>>()?
    };
    IndexFamily::new(members).map_err(|e| CliError::Input(e.to_string()))
}
