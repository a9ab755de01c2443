//! Matrix files: comma-separated, one point per line, lines starting with
//! `#` are comments. Values are integers, decimals, or `p/q` fractions. Rows are
//! normalized to first coordinate zero on load.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use tropfw_core::{DataMatrix, Scalar, TropicalPoint};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Line { line: u64, msg: String },
    #[error("{0}")]
    Core(#[from] tropfw_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl InputError {
    fn line(line: u64, msg: impl Into<String>) -> Self {
        InputError::Line { line, msg: msg.into() }
    }

    fn in_file(self, path: &Path) -> Self {
        match self {
            InputError::Line { line, msg } => InputError::Line {
                line,
                msg: format!("{msg} (in {})", path.display()),
            },
            other => other,
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<DataMatrix, InputError> {
    let mut rows = Vec::new();
    let mut width: Option<(usize, u64)> = None;
    for (index, raw) in text.lines().enumerate() {
        let line = index as u64 + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let values = body
            .split(',')
            .map(str::trim)
            .enumerate()
            .map(|(i, field)| {
                field
                    .parse::<Scalar>()
                    .map_err(|_| InputError::line(line, format!("field {} `{field}` is not a number", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match width {
            None => width = Some((values.len(), line)),
            Some((w, first)) if w != values.len() => {
                return Err(InputError::line(
                    line,
                    format!("expected {w} values (as on line {first}), found {}", values.len()),
                ))
            }
            Some(_) => {}
        }
        rows.push(TropicalPoint::normalize(values).map_err(|e| InputError::line(line, e.to_string()))?);
    }
    if rows.is_empty() {
        return Err(InputError::Usage("no data rows".into()));
    }
    Ok(DataMatrix::new(rows)?)
}

pub fn read_matrix(path: &Path) -> Result<DataMatrix, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_matrix(&text).map_err(|e| e.in_file(path))
}

/// One line per row, exact values (`p/q` for non-integers).
pub fn write_matrix(x: &DataMatrix) -> String {
    let mut out = String::new();
    for row in x.rows() {
        writeln!(out, "{}", format_row(row)).expect("writing to a String");
    }
    out
}

pub fn format_row(p: &TropicalPoint) -> String {
    p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blank_lines_and_fractions() {
        let x = parse_matrix("# header\n0, 1, 5\n\n1,3/2,2.25\n  # trailing\n").unwrap();
        assert_eq!(x.nrows(), 2);
        assert_eq!(format_row(x.row(1)), "0,1/2,5/4");
    }

    #[test]
    fn ragged_row_names_its_line() {
        let err = parse_matrix("0,1,2\n# c\n0,1\n").unwrap_err().to_string();
        assert!(err.starts_with("line 3:"), "{err}");
    }

    #[test]
    fn bad_field_names_its_line() {
        let err = parse_matrix("0,1,2\n0,x,2\n").unwrap_err().to_string();
        assert!(err.starts_with("line 2:") && err.contains("`x`"), "{err}");
    }

    #[test]
    fn exact_round_trip() {
        let x = parse_matrix("0,1/3,-7/11\n0,1e3,0.000000000001\n").unwrap();
        assert_eq!(parse_matrix(&write_matrix(&x)).unwrap(), x);
    }

    #[test]
    fn empty_input() {
        assert!(parse_matrix("# nothing\n").is_err());
    }
}
