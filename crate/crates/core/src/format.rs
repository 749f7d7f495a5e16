//! Matrix text and JSON formats.
//!
//! Text: one row per line, entries separated by whitespace, each entry
//! `p` or `p/q`. Blank lines and lines starting with `#` are ignored.
//!
//! JSON: `{"rows": n, "cols": m, "entries": [["p/q", ...], ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::rational::Rational;

pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Rational>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {w} entries, found {}", row.len()),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no matrix rows".into(),
        });
    }
    Matrix::from_rows(rows)
}

pub fn render_matrix<T: std::fmt::Display>(m: &Matrix<T>) -> String {
    m.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl<T: std::fmt::Display> From<&Matrix<T>> for MatrixJson {
    fn from(m: &Matrix<T>) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| m.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for RatMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        let rows = j
            .entries
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|s| {
                        s.parse::<Rational>().map_err(|e| Error::Parse {
                            line: i + 1,
                            msg: e.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_rows(rows)?;
        if m.rows() != j.rows || m.cols() != j.cols {
            return Err(Error::Parse {
                line: 0,
                msg: format!(
                    "declared {}x{} but entries are {}x{}",
                    j.rows,
                    j.cols,
                    m.rows(),
                    m.cols()
                ),
            });
        }
        Ok(m)
    }
}

pub fn matrix_to_json<T: std::fmt::Display>(m: &Matrix<T>) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix json is always serializable")
}

pub fn matrix_from_json(s: &str) -> Result<RatMatrix> {
    let j: MatrixJson = serde_json::from_str(s)?;
    RatMatrix::try_from(&j)
}

/// Entries as a nested array of strings, the compact form used inside reports.
pub fn entries_json<T: std::fmt::Display>(m: &Matrix<T>) -> Vec<Vec<String>> {
    MatrixJson::from(m).entries
}

pub fn int_matrix_from_text(text: &str) -> Result<IntMatrix> {
    let m = parse_matrix(text)?;
    m.try_map(|x| {
        x.to_integer().ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("non-integer entry {x}"),
        })
    })
}
