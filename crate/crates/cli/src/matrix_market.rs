//! Matrix Market reader and writer for dense matrices and vectors.
//!
//! Supported headers: `%%MatrixMarket matrix coordinate|array real
//! general|symmetric`. Coordinate entries use 1-based indices; symmetric
//! files store the lower triangle and are expanded to full storage on read.
//! Array data is stored column-major. Other fields (`complex`, `integer`,
//! `pattern`) and symmetries (`skew-symmetric`, `hermitian`) are rejected
//! with a dedicated error rather than misread.
//!
//! The writer serializes every value with 17 significant decimal digits,
//! the shortest width that makes the decimal round trip bit-exact for
//! every finite double, so `write` followed by `read` reproduces a matrix
//! entrywise exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use dgsor::linalg::{DenseMatrix, Vector};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

/// Whitespace tokens of the data section, each tagged with its 1-based
/// source line for error reporting. Tolerating arbitrary line breaks between
/// numbers keeps the reader compatible with the format's whitespace rules.
struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(lines: &'a [String]) -> Self {
        let mut items = Vec::new();
        // Line 1 is the header; comments and blank lines are skipped.
        for (idx, line) in lines.iter().enumerate().skip(1) {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            for tok in trimmed.split_whitespace() {
                items.push((idx + 1, tok));
            }
        }
        Tokens {
            items,
            pos: 0,
            last_line: lines.len().max(1),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.items.get(self.pos) {
            Some(&(line, tok)) => {
                self.pos += 1;
                Ok((line, tok))
            }
            None => Err(CliError::parse(
                self.last_line,
                format!("unexpected end of file: expected {what}"),
            )),
        }
    }

    fn next_index(&mut self, what: &str) -> Result<(usize, usize)> {
        let (line, tok) = self.next(what)?;
        let value = tok
            .parse::<usize>()
            .map_err(|_| CliError::parse(line, format!("expected {what}, found '{tok}'")))?;
        Ok((line, value))
    }

    fn next_value(&mut self, what: &str) -> Result<(usize, f64)> {
        let (line, tok) = self.next(what)?;
        let value = tok
            .parse::<f64>()
            .map_err(|_| CliError::parse(line, format!("expected {what}, found '{tok}'")))?;
        Ok((line, value))
    }

    fn expect_end(&mut self) -> Result<()> {
        if let Some(&(line, tok)) = self.items.get(self.pos) {
            return Err(CliError::parse(
                line,
                format!("unexpected trailing data '{tok}'"),
            ));
        }
        Ok(())
    }
}

fn parse_header(lines: &[String]) -> Result<(Format, Symmetry)> {
    let header = lines
        .first()
        .ok_or_else(|| CliError::parse(1, "empty file".to_string()))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(CliError::parse(
            1,
            "expected header '%%MatrixMarket matrix <format> <field> <symmetry>'",
        ));
    }
    if tokens[1] != "matrix" {
        return Err(CliError::parse(
            1,
            format!("unsupported object '{}': only 'matrix' is supported", tokens[1]),
        ));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => {
            return Err(CliError::parse(
                1,
                format!("unknown format '{other}': expected 'coordinate' or 'array'"),
            ))
        }
    };
    if tokens[3] != "real" {
        return Err(CliError::UnsupportedField(tokens[3].clone()));
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(CliError::UnsupportedSymmetry(other.to_string())),
    };
    Ok((format, symmetry))
}

fn parse_matrix(lines: &[String]) -> Result<DenseMatrix> {
    let (format, symmetry) = parse_header(lines)?;
    let mut tokens = Tokens::new(lines);
    let (size_line, rows) = tokens.next_index("row count")?;
    let (_, cols) = tokens.next_index("column count")?;
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(CliError::parse(
            size_line,
            format!("symmetric matrix must be square, got {rows} x {cols}"),
        ));
    }
    if rows == 0 || cols == 0 {
        return Err(CliError::parse(size_line, "matrix dimensions must be positive"));
    }
    let mut a = DenseMatrix::zeros(rows, cols);
    match format {
        Format::Coordinate => {
            let (_, nnz) = tokens.next_index("entry count")?;
            for _ in 0..nnz {
                let (line, i) = tokens.next_index("row index")?;
                let (_, j) = tokens.next_index("column index")?;
                let (_, v) = tokens.next_value("entry value")?;
                if i == 0 || i > rows || j == 0 || j > cols {
                    return Err(CliError::parse(
                        line,
                        format!("index ({i}, {j}) outside {rows} x {cols}"),
                    ));
                }
                if symmetry == Symmetry::Symmetric && j > i {
                    return Err(CliError::parse(
                        line,
                        format!(
                            "entry ({i}, {j}) lies above the diagonal: symmetric files store the lower triangle"
                        ),
                    ));
                }
                // Duplicate entries accumulate, the convention for
                // unassembled coordinate files.
                a[(i - 1, j - 1)] += v;
                if symmetry == Symmetry::Symmetric && i != j {
                    a[(j - 1, i - 1)] += v;
                }
            }
        }
        Format::Array => match symmetry {
            Symmetry::General => {
                for j in 0..cols {
                    for i in 0..rows {
                        let (_, v) = tokens.next_value("array value")?;
                        a[(i, j)] = v;
                    }
                }
            }
            Symmetry::Symmetric => {
                for j in 0..cols {
                    for i in j..rows {
                        let (_, v) = tokens.next_value("array value")?;
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                    }
                }
            }
        },
    }
    tokens.expect_end()?;
    Ok(a)
}

/// Reads a dense matrix from Matrix Market text.
pub fn read_matrix<R: Read>(reader: R) -> Result<DenseMatrix> {
    let lines: Vec<String> = BufReader::new(reader)
        .lines()
        .collect::<std::io::Result<_>>()?;
    parse_matrix(&lines)
}

/// Reads a vector: a Matrix Market matrix with a single column (or a single
/// row, which is transposed on the fly).
pub fn read_vector<R: Read>(reader: R) -> Result<Vector> {
    let lines: Vec<String> = BufReader::new(reader)
        .lines()
        .collect::<std::io::Result<_>>()?;
    let m = parse_matrix(&lines)?;
    if m.cols() == 1 {
        Ok(Vector::from_vec(
            (0..m.rows()).map(|i| m[(i, 0)]).collect(),
        ))
    } else if m.rows() == 1 {
        Ok(Vector::from_vec(
            (0..m.cols()).map(|j| m[(0, j)]).collect(),
        ))
    } else {
        Err(CliError::parse(
            2,
            format!(
                "expected a vector (one row or one column), got {} x {}",
                m.rows(),
                m.cols()
            ),
        ))
    }
}

pub fn read_matrix_file(path: &Path) -> Result<DenseMatrix> {
    read_matrix(File::open(path)?)
}

pub fn read_vector_file(path: &Path) -> Result<Vector> {
    read_vector(File::open(path)?)
}

/// Writes a matrix in coordinate format, using `symmetric` storage (lower
/// triangle only) when the matrix is exactly symmetric and `general`
/// otherwise. Zero entries are omitted; values carry 17 significant digits.
pub fn write_matrix<W: Write>(writer: W, m: &DenseMatrix) -> std::io::Result<()> {
    let mut w = BufWriter::new(writer);
    let symmetric = is_symmetric(m);
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..m.rows() {
        let jmax = if symmetric { i + 1 } else { m.cols() };
        for j in 0..jmax {
            let v = m[(i, j)];
            if v != 0.0 {
                entries.push((i + 1, j + 1, v));
            }
        }
    }
    let symmetry = if symmetric { "symmetric" } else { "general" };
    writeln!(w, "%%MatrixMarket matrix coordinate real {symmetry}")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(w, "{i} {j} {v:.16e}")?;
    }
    w.flush()
}

/// Writes a vector in `array` format as an `n x 1` matrix with 17
/// significant digits per value.
pub fn write_vector<W: Write>(writer: W, v: &Vector) -> std::io::Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for i in 0..v.len() {
        writeln!(w, "{:.16e}", v[i])?;
    }
    w.flush()
}

pub fn write_matrix_file(path: &Path, m: &DenseMatrix) -> std::io::Result<()> {
    write_matrix(File::create(path)?, m)
}

pub fn write_vector_file(path: &Path, v: &Vector) -> std::io::Result<()> {
    write_vector(File::create(path)?, v)
}

fn is_symmetric(m: &DenseMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    for i in 0..m.rows() {
        for j in 0..i {
            if m[(i, j)].to_bits() != m[(j, i)].to_bits() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn read_matrix_str(text: &str) -> Result<DenseMatrix> {
        read_matrix(text.as_bytes())
    }

    fn read_vector_str(text: &str) -> Result<Vector> {
        read_vector(text.as_bytes())
    }

    #[test]
    fn coordinate_symmetric_file_expands_to_full_storage() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n\
                    % the two-by-two model\n\
                    2 2 3\n\
                    1 1 2.0\n\
                    2 1 1.0\n\
                    2 2 2.0\n";
        let a = read_matrix_str(text).unwrap();
        let expected = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert_eq!(a, expected);
    }

    #[test]
    fn array_file_reads_column_major() {
        let text = "%%MatrixMarket matrix array real general\n\
                    2 2\n1.0\n2.0\n3.0\n4.0\n";
        let a = read_matrix_str(text).unwrap();
        let expected = DenseMatrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 4.0]]);
        assert_eq!(a, expected);
    }

    #[test]
    fn array_two_by_one_reads_as_vector() {
        let text = "%%MatrixMarket matrix array real general\n2 1\n3.0\n3.0\n";
        let b = read_vector_str(text).unwrap();
        assert_eq!(b.as_slice(), &[3.0, 3.0]);
    }

    #[test]
    fn single_row_matrix_also_reads_as_vector() {
        let text = "%%MatrixMarket matrix array real general\n1 3\n1.0\n2.0\n3.0\n";
        let b = read_vector_str(text).unwrap();
        assert_eq!(b.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn symmetric_array_stores_the_packed_lower_triangle() {
        let text = "%%MatrixMarket matrix array real symmetric\n\
                    3 3\n1.0\n2.0\n3.0\n4.0\n5.0\n6.0\n";
        let a = read_matrix_str(text).unwrap();
        let expected = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 5.0],
            vec![3.0, 5.0, 6.0],
        ]);
        assert_eq!(a, expected);
    }

    #[test]
    fn complex_field_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 2.0 0.0\n";
        assert!(matches!(
            read_matrix_str(text),
            Err(CliError::UnsupportedField(f)) if f == "complex"
        ));
    }

    #[test]
    fn pattern_field_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n";
        assert!(matches!(
            read_matrix_str(text),
            Err(CliError::UnsupportedField(f)) if f == "pattern"
        ));
    }

    #[test]
    fn skew_symmetry_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 1.0\n";
        assert!(matches!(
            read_matrix_str(text),
            Err(CliError::UnsupportedSymmetry(s)) if s == "skew-symmetric"
        ));
    }

    #[test]
    fn malformed_header_is_a_parse_error_at_line_one() {
        let err = read_matrix_str("%%NotMatrixMarket nonsense\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }));
    }

    #[test]
    fn out_of_bounds_index_reports_its_line() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    2 2 2\n\
                    1 1 1.0\n\
                    3 1 1.0\n";
        let err = read_matrix_str(text).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn upper_triangle_entry_in_symmetric_file_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n\
                    2 2 1\n\
                    1 2 1.0\n";
        let err = read_matrix_str(text).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn truncated_file_reports_end_of_input() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n";
        let err = read_matrix_str(text).unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }), "{err}");
    }

    #[test]
    fn trailing_data_is_rejected() {
        let text = "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.0\n1 1 2.0\n";
        let err = read_matrix_str(text).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn non_numeric_value_reports_its_line() {
        let text = "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 abc\n";
        let err = read_matrix_str(text).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn two_by_two_matrix_is_not_a_vector() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n4.0\n";
        assert!(matches!(read_vector_str(text), Err(CliError::Parse { .. })));
    }

    #[test]
    fn duplicate_coordinate_entries_accumulate() {
        let text = "%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1.5\n1 1 0.25\n";
        let a = read_matrix_str(text).unwrap();
        assert_eq!(a[(0, 0)], 1.75);
    }

    #[test]
    fn symmetric_matrix_round_trips_bit_exactly() {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let n = 6;
        let factor = DenseMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
        let mut a = factor.transpose().matmul(&factor);
        for i in 0..n {
            a[(i, i)] += n as f64;
        }
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real symmetric"));
        let back = read_matrix_str(&text).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn general_matrix_round_trips_bit_exactly() {
        let mut r = ChaCha8Rng::seed_from_u64(6);
        let a = DenseMatrix::from_fn(3, 4, |_, _| r.gen_range(-10.0..10.0));
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general"));
        let back = read_matrix_str(&text).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn vector_round_trips_bit_exactly() {
        let v = Vector::from_vec(vec![
            1.0 / 3.0,
            -2.0e-300,
            12345.678901234567,
            0.0,
            f64::MIN_POSITIVE,
        ]);
        let mut buf = Vec::new();
        write_vector(&mut buf, &v).unwrap();
        let back = read_vector(buf.as_slice()).unwrap();
        assert_eq!(v.as_slice(), back.as_slice());
    }

    #[test]
    fn seventeen_digit_serialization_round_trips_random_doubles() {
        let mut r = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x: f64 = r.gen_range(-1.0..1.0) * 10f64.powi(r.gen_range(-30..30));
            let text = format!("{x:.16e}");
            let back: f64 = text.parse().unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{x} -> {text} -> {back}");
        }
    }
}
