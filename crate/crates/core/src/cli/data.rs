//! Reading one- or two-column numeric data files.
//!
//! Fields are separated by commas or whitespace. A first line that does not
//! parse as numbers is taken as a header; blank lines and lines starting with
//! `#` are skipped. With commas, an empty field leaves a hole so columns of
//! different lengths can share a file.

use std::fs;
use std::path::Path;

pub fn read_columns(path: &Path) -> Result<Vec<Vec<f64>>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_columns(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn split(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

pub fn parse_columns(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    let mut seen_content = false;
    for (number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split(line);
        let parsed: Vec<Option<Result<f64, _>>> =
            fields.iter().map(|f| (!f.is_empty()).then(|| f.parse::<f64>())).collect();
        let numeric = parsed.iter().all(|p| !matches!(p, Some(Err(_))));
        if !seen_content {
            seen_content = true;
            if !numeric {
                // header
                width = Some(fields.len());
                continue;
            }
        }
        let w = *width.get_or_insert(fields.len());
        if fields.len() != w {
            return Err(format!("line {}: expected {w} field(s), found {}", number + 1, fields.len()));
        }
        if !(1..=2).contains(&w) {
            return Err(format!("line {}: data files have one or two columns, found {w}", number + 1));
        }
        columns.resize_with(w, Vec::new);
        for (k, (field, value)) in fields.iter().zip(parsed).enumerate() {
            match value {
                None => {}
                Some(Ok(v)) if v.is_finite() => columns[k].push(v),
                _ => return Err(format!("line {}: '{field}' is not a finite number", number + 1)),
            }
        }
    }
    if columns.iter().all(Vec::is_empty) {
        return Err("no numeric data".into());
    }
    Ok(columns)
}
