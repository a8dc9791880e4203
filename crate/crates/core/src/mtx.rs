//! Matrix Market coordinate exchange for [`SparseSymMatrix`].
//!
//! Reads `pattern` or `real` (also `integer`) coordinate files with a
//! `symmetric` or `general` header. Indices are 1-based on disk. Files are
//! always written with a `symmetric` header listing the lower triangle only.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Pattern,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    Symmetric,
    General,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixMarket {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str) -> Result<(Field, Symmetry)> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(parse_err(1, "first line must start with %%MatrixMarket"));
    }
    if tokens.len() != 5 {
        return Err(parse_err(1, "header must have the form %%MatrixMarket matrix coordinate <field> <symmetry>"));
    }
    if tokens[1] != "matrix" {
        return Err(parse_err(1, format!("unsupported object '{}'", tokens[1])));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}', only coordinate is read", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "pattern" => Field::Pattern,
        "real" | "integer" => Field::Real,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "symmetric" => Symmetry::Symmetric,
        "general" => Symmetry::General,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };
    Ok((field, symmetry))
}

fn parse_index(token: Option<&str>, line: usize) -> Result<usize> {
    let token = token.ok_or_else(|| parse_err(line, "missing index"))?;
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad index '{token}'")))
}

/// Reads a square symmetric coordinate matrix.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseSymMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_matrix_market_from(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_matrix_market_from<R: BufRead>(reader: R) -> Result<SparseSymMatrix> {
    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));

    let (field, symmetry) = match lines.next() {
        Some((_, line)) => parse_header(&line.map_err(|e| Error::io("<input>", e))?)?,
        None => return Err(parse_err(1, "empty file")),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();

    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        let Some((n, nnz)) = size else {
            let rows = parse_index(tok.next(), lineno)?;
            let cols = parse_index(tok.next(), lineno)?;
            let nnz = parse_index(tok.next(), lineno)?;
            if tok.next().is_some() {
                return Err(parse_err(lineno, "size line must have exactly three fields"));
            }
            if rows != cols {
                return Err(parse_err(lineno, format!("matrix must be square, got {rows}x{cols}")));
            }
            size = Some((rows, nnz));
            entries.reserve(nnz);
            continue;
        };
        if entries.len() == nnz {
            return Err(parse_err(lineno, format!("more than the declared {nnz} entries")));
        }
        let row = parse_index(tok.next(), lineno)?;
        let col = parse_index(tok.next(), lineno)?;
        if row == 0 || col == 0 || row > n || col > n {
            return Err(Error::IndexOutOfBounds {
                line: lineno,
                row,
                col,
                n,
            });
        }
        let value = match field {
            Field::Pattern => 1.0,
            Field::Real => {
                let t = tok.next().ok_or_else(|| parse_err(lineno, "missing value"))?;
                let v: f64 = t
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad value '{t}'")))?;
                if !v.is_finite() {
                    return Err(parse_err(lineno, "value is not finite"));
                }
                v
            }
        };
        if tok.next().is_some() {
            return Err(parse_err(lineno, "trailing fields on entry line"));
        }
        entries.push((row - 1, col - 1, value));
    }

    let (n, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    if entries.len() != nnz {
        return Err(parse_err(
            0,
            format!("declared {nnz} entries but found {}", entries.len()),
        ));
    }

    match symmetry {
        Symmetry::Symmetric => SparseSymMatrix::from_triplets(n, &entries),
        Symmetry::General => {
            let mut seen: HashMap<(usize, usize), f64> = HashMap::with_capacity(entries.len());
            for &(i, j, v) in &entries {
                if seen.insert((i, j), v).is_some() {
                    return Err(Error::DuplicateEntry { row: i, col: j });
                }
            }
            for &(i, j, v) in &entries {
                match seen.get(&(j, i)) {
                    Some(m) if m.to_bits() == v.to_bits() => {}
                    _ => return Err(Error::Asymmetric { row: i, col: j }),
                }
            }
            let lower: Vec<_> = entries.into_iter().filter(|&(i, j, _)| i >= j).collect();
            SparseSymMatrix::from_triplets(n, &lower)
        }
    }
}

/// Writes the lower triangle with a `symmetric` header.
///
/// Matrices whose stored values are all exactly 1 are written as `pattern`,
/// everything else as `real` with shortest round-trip formatting.
pub fn write_matrix_market(a: &SparseSymMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_matrix_market_to(a, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_matrix_market_to<W: Write>(a: &SparseSymMatrix, w: &mut W) -> std::io::Result<()> {
    let pattern = a.values().iter().all(|&v| v == 1.0);
    let field = if pattern { "pattern" } else { "real" };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} symmetric")?;
    let lower = a.lower_triangle().count();
    writeln!(w, "{} {} {}", a.n(), a.n(), lower)?;
    for (i, j, v) in a.lower_triangle() {
        if pattern {
            writeln!(w, "{} {}", i + 1, j + 1)?;
        } else {
            writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}
