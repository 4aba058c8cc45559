use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Reads one value per line, or a single-column CSV with an optional header.
pub fn read_sample(path: &Path) -> Result<Vec<f64>> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_sample(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_sample(text: &str) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.context("malformed CSV")?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        let fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        match fields.as_slice() {
            [] => continue,
            [one] => match one.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => values.push(v),
                Ok(v) => bail!("line {line}: value {v} is not a positive finite number"),
                Err(_) if values.is_empty() && k == 0 => continue,
                Err(_) => bail!("line {line}: '{one}' is not a number"),
            },
            _ => bail!("line {line}: expected a single column, found {}", fields.len()),
        }
    }
    if values.is_empty() {
        bail!("no observations found");
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_lines() {
        assert_eq!(parse_sample("29.3\n23.8\n").unwrap(), vec![29.3, 23.8]);
        assert_eq!(parse_sample("1\r\n\r\n2e-3\n").unwrap(), vec![1.0, 0.002]);
    }

    #[test]
    fn header_is_skipped_once() {
        assert_eq!(parse_sample("yield\n0.5\n1.5\n").unwrap(), vec![0.5, 1.5]);
        let err = parse_sample("yield\n0.5\nabc\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn bad_values_report_lines() {
        let err = parse_sample("1.0\n-2\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_sample("1.0\n2,3\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("single column"), "{err}");
        assert!(parse_sample("x\n").is_err());
        assert!(parse_sample("0\n").is_err());
    }
}
