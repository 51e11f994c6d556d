//! Plain-text matrix and vector files.
//!
//! Matrix: first line `m,n`, then `m` lines of `n` comma-separated decimals.
//! Vector: one decimal per line. Values are written with Rust's shortest
//! round-trip formatting, so reading back yields the identical `f64`s.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{OtkError, Result};
use crate::linalg::DenseMatrix;

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> OtkError {
    OtkError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| OtkError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| OtkError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_value(path: &Path, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("not a number: {:?}", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, "non-finite value"));
    }
    Ok(v)
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut s = format!("{},{}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        for (j, v) in a.row(i).iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            write!(s, "{v:?}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_matrix(text: &str, path: &Path) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty matrix file"))?;
    let dims: Vec<&str> = header.split(',').collect();
    let parse_dim = |s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|d| *d > 0)
            .ok_or_else(|| parse_err(path, 1, format!("bad dimension {:?}", s.trim())))
    };
    if dims.len() != 2 {
        return Err(parse_err(path, 1, "header must be `m,n`"));
    }
    let (m, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let mut data = Vec::with_capacity(m * n);
    let mut rows = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if rows == m {
            return Err(parse_err(path, lineno, format!("more than {m} rows")));
        }
        let before = data.len();
        for field in line.split(',') {
            data.push(parse_value(path, lineno, field)?);
        }
        if data.len() - before != n {
            return Err(parse_err(
                path,
                lineno,
                format!("expected {n} columns, found {}", data.len() - before),
            ));
        }
        rows += 1;
    }
    if rows != m {
        return Err(parse_err(
            path,
            text.lines().count(),
            format!("expected {m} rows, found {rows}"),
        ));
    }
    DenseMatrix::new(m, n, data)
}

pub fn format_vector(v: &[f64]) -> String {
    let mut s = String::with_capacity(v.len() * 20);
    for x in v {
        writeln!(s, "{x:?}").unwrap();
    }
    s
}

pub fn parse_vector(text: &str, path: &Path) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_value(path, i + 1, l))
        .collect()
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    parse_matrix(&read(path)?, path)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    write(path.as_ref(), &format_matrix(a))
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    parse_vector(&read(path)?, path)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    write(path.as_ref(), &format_vector(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matrix_text_round_trips(vals in prop::collection::vec(-1e6f64..1e6, 6), scale in -300i32..300) {
            let data: Vec<f64> = vals.iter().map(|v| v * 10f64.powi(scale / 10)).collect();
            let a = DenseMatrix::new(2, 3, data).unwrap();
            let back = parse_matrix(&format_matrix(&a), Path::new("mem")).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn vector_text_round_trips(v in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..20)) {
            let back = parse_vector(&format_vector(&v), Path::new("mem")).unwrap();
            prop_assert_eq!(back, v);
        }
    }

    #[test]
    fn reports_line_of_bad_field() {
        let err = parse_matrix("2,2\n1,2\n3,x\n", Path::new("a.csv")).unwrap_err();
        match err {
            OtkError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_matrix("2,2\n1,2,3\n", Path::new("a.csv")).unwrap_err();
        assert!(matches!(err, OtkError::Parse { line: 2, .. }));
        assert!(parse_matrix("2,2\n1,2\n", Path::new("a.csv")).is_err());
        assert!(matches!(
            parse_vector("1.0\n\nnan\n", Path::new("v")).unwrap_err(),
            OtkError::Parse { line: 3, .. }
        ));
    }
}
