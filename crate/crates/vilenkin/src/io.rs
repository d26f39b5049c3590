//! Flat-file interchange: grids and spectra as `index,re,im` CSV, atomic
//! decompositions as `k,mu_k,interval_rank,base_rank`, and tabulated growth
//! targets as `n,phi`.
//!
//! Numbers are written with Rust's shortest-round-trip float formatting, so
//! a write → read cycle reproduces every value bit for bit and identical
//! data always serializes to identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::group::GroupSpec;
use crate::hardy::AtomicDecomposition;
use crate::transform::{GridFunction, Spectrum};

pub const GRID_HEADER: &str = "index,re,im";
pub const DECOMPOSITION_HEADER: &str = "k,mu_k,interval_rank,base_rank";
pub const PHI_HEADER: &str = "n,phi";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line 1: expected header `{expected}`, got `{got}`")]
    BadHeader { expected: &'static str, got: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("expected {expected} data rows, found {got}")]
    WrongLength { expected: u64, got: u64 },
}

fn complex_rows_to_csv(values: &[Complex64]) -> String {
    let mut out = String::with_capacity(values.len() * 24 + GRID_HEADER.len() + 1);
    out.push_str(GRID_HEADER);
    out.push('\n');
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{i},{},{}", v.re, v.im).expect("string writes are infallible");
    }
    out
}

fn complex_rows_from_reader<R: BufRead>(
    reader: R,
    expected_len: u64,
) -> Result<Vec<Complex64>, IoError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()?
        .unwrap_or_default();
    if header.trim_end() != GRID_HEADER {
        return Err(IoError::BadHeader {
            expected: GRID_HEADER,
            got: header,
        });
    }
    let mut values = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 2;
        let mut parts = line.split(',');
        let malformed = |msg: String| IoError::Malformed { line: lineno, msg };
        let index: u64 = parts
            .next()
            .ok_or_else(|| malformed("missing index".into()))?
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad index: {e}")))?;
        if index != values.len() as u64 {
            return Err(malformed(format!(
                "index {index} out of order, expected {}",
                values.len()
            )));
        }
        let re: f64 = parts
            .next()
            .ok_or_else(|| malformed("missing re column".into()))?
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad re: {e}")))?;
        let im: f64 = parts
            .next()
            .ok_or_else(|| malformed("missing im column".into()))?
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad im: {e}")))?;
        if parts.next().is_some() {
            return Err(malformed("too many columns".into()));
        }
        values.push(Complex64::new(re, im));
    }
    if values.len() as u64 != expected_len {
        return Err(IoError::WrongLength {
            expected: expected_len,
            got: values.len() as u64,
        });
    }
    Ok(values)
}

/// Serializes sample values in rank order.
pub fn grid_to_csv(f: &GridFunction) -> String {
    complex_rows_to_csv(f.samples())
}

/// Serializes coefficients in index order.
pub fn spectrum_to_csv(s: &Spectrum) -> String {
    complex_rows_to_csv(s.coeffs())
}

/// Parses a grid for `spec`, insisting on exactly M_N consecutive rows.
pub fn grid_from_reader<R: BufRead>(reader: R, spec: &GroupSpec) -> Result<GridFunction, IoError> {
    let values = complex_rows_from_reader(reader, spec.points())?;
    Ok(GridFunction::from_samples(spec, values))
}

/// Parses a spectrum for `spec`, insisting on exactly M_N consecutive rows.
pub fn spectrum_from_reader<R: BufRead>(reader: R, spec: &GroupSpec) -> Result<Spectrum, IoError> {
    let values = complex_rows_from_reader(reader, spec.points())?;
    Ok(Spectrum::from_coeffs(spec, values))
}

pub fn write_grid_csv(path: &Path, f: &GridFunction) -> Result<(), IoError> {
    Ok(fs::write(path, grid_to_csv(f))?)
}

pub fn read_grid_csv(path: &Path, spec: &GroupSpec) -> Result<GridFunction, IoError> {
    grid_from_reader(BufReader::new(fs::File::open(path)?), spec)
}

pub fn write_spectrum_csv(path: &Path, s: &Spectrum) -> Result<(), IoError> {
    Ok(fs::write(path, spectrum_to_csv(s))?)
}

pub fn read_spectrum_csv(path: &Path, spec: &GroupSpec) -> Result<Spectrum, IoError> {
    spectrum_from_reader(BufReader::new(fs::File::open(path)?), spec)
}

/// Serializes the weights and supporting intervals of a decomposition; the
/// base column holds the canonical representative rank(base) mod M_rank.
pub fn decomposition_to_csv(d: &AtomicDecomposition) -> String {
    let mut out = String::new();
    out.push_str(DECOMPOSITION_HEADER);
    out.push('\n');
    for (k, (w, atom)) in d.weights().iter().zip(d.atoms()).enumerate() {
        let spec = atom.spec();
        writeln!(
            out,
            "{k},{w},{},{}",
            atom.interval().rank(),
            atom.interval().prefix_rank(spec)
        )
        .expect("string writes are infallible");
    }
    out
}

pub fn write_decomposition_csv(path: &Path, d: &AtomicDecomposition) -> Result<(), IoError> {
    Ok(fs::write(path, decomposition_to_csv(d))?)
}

/// Reads a tabulated growth target: `n,phi` rows. Shape constraints
/// (sorted, nondecreasing, nonnegative) are enforced by `PhiSpec::new`, not
/// here.
pub fn read_phi_table(path: &Path) -> Result<Vec<(u64, f64)>, IoError> {
    phi_table_from_reader(BufReader::new(fs::File::open(path)?))
}

pub fn phi_table_from_reader<R: BufRead>(reader: R) -> Result<Vec<(u64, f64)>, IoError> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != PHI_HEADER {
        return Err(IoError::BadHeader {
            expected: PHI_HEADER,
            got: header,
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 2;
        let malformed = |msg: String| IoError::Malformed { line: lineno, msg };
        let mut parts = line.split(',');
        let n: u64 = parts
            .next()
            .ok_or_else(|| malformed("missing n".into()))?
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad n: {e}")))?;
        let phi: f64 = parts
            .next()
            .ok_or_else(|| malformed("missing phi".into()))?
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad phi: {e}")))?;
        if parts.next().is_some() {
            return Err(malformed("too many columns".into()));
        }
        rows.push((n, phi));
    }
    Ok(rows)
}
