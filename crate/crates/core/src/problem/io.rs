//! Line-oriented text format:
//!
//! ```text
//! LINSUP-PROBLEM 1
//! I <rows> J <cols>
//! <I lines of J reals: rows of A>
//! <one line of I reals: b>
//! <one line of J reals: c>
//! ```
//!
//! Reals are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::Problem;
use crate::error::{Error, Result};

pub const MAGIC: &str = "LINSUP-PROBLEM 1";

pub fn write_problem<W: Write>(problem: &Problem, mut out: W) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "I {} J {}", problem.rows(), problem.cols())?;
    for i in 0..problem.rows() {
        write_reals(&mut out, problem.row(i))?;
    }
    write_reals(&mut out, problem.b())?;
    write_reals(&mut out, problem.c())?;
    out.flush()?;
    Ok(())
}

fn write_reals<W: Write>(out: &mut W, values: &[f64]) -> Result<()> {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.write_all(b" ")?;
        }
        write!(out, "{v:.16e}")?;
    }
    out.write_all(b"\n")?;
    Ok(())
}

pub fn save_problem(problem: &Problem, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_problem(problem, BufWriter::new(file))
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    read_problem(BufReader::new(File::open(path)?))
}

pub fn read_problem<R: BufRead>(input: R) -> Result<Problem> {
    // Blank lines (e.g. a trailing newline) are not records.
    let mut lines = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push((n + 1, line));
        }
    }
    let mut records = lines.into_iter();

    let (n, magic) = records.next().ok_or(Error::Format { line: 1, msg: "empty file".into() })?;
    if magic.trim() != MAGIC {
        return Err(Error::Format { line: n, msg: format!("expected `{MAGIC}`, found `{}`", magic.trim()) });
    }
    let (n, dims) = records.next().ok_or(Error::Format { line: n + 1, msg: "missing dimension line".into() })?;
    let (rows, cols) = parse_dims(&dims).ok_or_else(|| Error::Format {
        line: n,
        msg: format!("expected `I <int> J <int>`, found `{}`", dims.trim()),
    })?;

    let body: Vec<(usize, String)> = records.collect();
    if body.len() != rows + 2 {
        return Err(Error::DimensionMismatch(format!(
            "header declares I={rows}, which needs {} data lines (rows, b, c); found {}",
            rows + 2,
            body.len()
        )));
    }

    let mut a = Vec::with_capacity(rows * cols);
    for (n, line) in &body[..rows] {
        a.extend(parse_reals(*n, line, cols, "matrix row")?);
    }
    let (n, line) = &body[rows];
    let b = parse_reals(*n, line, rows, "b")?;
    let (n, line) = &body[rows + 1];
    let c = parse_reals(*n, line, cols, "c")?;

    Problem::new(rows, cols, a, b, c)
}

fn parse_dims(line: &str) -> Option<(usize, usize)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    match tokens.as_slice() {
        ["I", i, "J", j] => Some((i.parse().ok()?, j.parse().ok()?)),
        _ => None,
    }
}

fn parse_reals(line_no: usize, line: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(expected);
    for token in line.split_whitespace() {
        let v: f64 = token
            .parse()
            .map_err(|_| Error::Format { line: line_no, msg: format!("`{token}` is not a real number") })?;
        if !v.is_finite() {
            return Err(Error::NonFinite { line: line_no, token: token.to_string() });
        }
        values.push(v);
    }
    if values.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "{what} at line {line_no} has {} values, expected {expected}",
            values.len()
        )));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_infeasible, GeneratorSpec};

    fn roundtrip(p: &Problem) -> Problem {
        let mut buf = Vec::new();
        write_problem(p, &mut buf).unwrap();
        read_problem(buf.as_slice()).unwrap()
    }

    #[test]
    fn generated_instance_roundtrips() {
        let p = generate_infeasible(&GeneratorSpec::new(2, 3, 11)).unwrap();
        assert_eq!((p.rows(), p.cols()), (4, 3));
        assert_eq!(roundtrip(&p), p);
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        let p = generate_infeasible(&GeneratorSpec::new(3, 5, 2)).unwrap();
        save_problem(&p, &path).unwrap();
        assert_eq!(load_problem(&path).unwrap(), p);
    }

    #[test]
    fn extra_row_is_dimension_mismatch() {
        let text = "LINSUP-PROBLEM 1\nI 2 J 2\n1 0\n0 1\n1 1\n1 2\n1 1\n";
        assert!(matches!(read_problem(text.as_bytes()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn short_row_is_dimension_mismatch() {
        let text = "LINSUP-PROBLEM 1\nI 2 J 2\n1 0\n0\n1 2\n1 1\n";
        assert!(matches!(read_problem(text.as_bytes()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn infinite_entry_rejected() {
        let text = "LINSUP-PROBLEM 1\nI 1 J 2\n1 inf\n1\n1 1\n";
        assert!(matches!(read_problem(text.as_bytes()), Err(Error::NonFinite { line: 3, .. })));
        let text = "LINSUP-PROBLEM 1\nI 1 J 2\n1 1\nNaN\n1 1\n";
        assert!(matches!(read_problem(text.as_bytes()), Err(Error::NonFinite { line: 4, .. })));
    }

    #[test]
    fn bad_header_rejected() {
        assert!(matches!(read_problem("LP 1\nI 1 J 1\n1\n1\n1\n".as_bytes()), Err(Error::Format { line: 1, .. })));
        assert!(matches!(
            read_problem("LINSUP-PROBLEM 1\nrows 1 cols 1\n1\n1\n1\n".as_bytes()),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(matches!(read_problem("".as_bytes()), Err(Error::Format { .. })));
        assert!(matches!(
            read_problem("LINSUP-PROBLEM 1\nI 1 J 1\n1\nx\n1\n".as_bytes()),
            Err(Error::Format { line: 4, .. })
        ));
    }

    #[test]
    fn extreme_values_roundtrip_bit_exact() {
        let vals = [f64::MIN_POSITIVE, 1.0 / 3.0, -1.7e150, 5e-324, 0.1 + 0.2];
        let p = Problem::new(1, 5, vals.to_vec(), vec![-0.0], vals.to_vec()).unwrap();
        let q = roundtrip(&p);
        for (x, y) in p.matrix().iter().zip(q.matrix()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
