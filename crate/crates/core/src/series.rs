//! Observation container for a `T × d` real time series.
//!
//! Rows are time points, columns are components. The container is immutable
//! once built; [`MultivariateSeries::center`] returns a new series.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Smallest sample size accepted by the test.
pub const MIN_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSeries {
    values: DMatrix<f64>,
    centered: bool,
    means: Option<Vec<f64>>,
}

impl MultivariateSeries {
    /// Builds a series from a `T × d` matrix. All entries must be finite.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        if values.ncols() == 0 {
            return Err(Error::domain("series must have at least one component"));
        }
        if values.nrows() == 0 {
            return Err(Error::TooShort { len: 0, min: 1 });
        }
        if let Some(pos) = values.iter().position(|x| !x.is_finite()) {
            let (row, col) = (pos % values.nrows(), pos / values.nrows());
            return Err(Error::Parse {
                row: row + 1,
                col: col + 1,
                msg: "non-finite value".into(),
            });
        }
        Ok(Self {
            values,
            centered: false,
            means: None,
        })
    }

    /// Builds a series from time-major rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let t = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::Ragged {
                    row: i + 1,
                    expected: d,
                    found: r.len(),
                });
            }
        }
        if t == 0 {
            return Err(Error::TooShort { len: 0, min: 1 });
        }
        Self::from_matrix(DMatrix::from_fn(t, d, |i, j| rows[i][j]))
    }

    /// Builds a univariate series.
    pub fn univariate(xs: &[f64]) -> Result<Self> {
        Self::from_matrix(DMatrix::from_column_slice(xs.len(), 1, xs))
    }

    /// Builds a series from a row-major buffer of `t * d` values.
    pub fn from_row_major(t: usize, d: usize, data: &[f64]) -> Result<Self> {
        if data.len() != t * d {
            return Err(Error::domain(format!(
                "buffer has {} values, expected {t} x {d}",
                data.len()
            )));
        }
        if t == 0 {
            return Err(Error::TooShort { len: 0, min: 1 });
        }
        Self::from_matrix(DMatrix::from_row_slice(t, d, data))
    }

    /// Number of observations `T`.
    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.nrows() == 0
    }

    /// Number of components `d`.
    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    /// `2⌊T/2⌋`, the number of observations entering spectral computations.
    pub fn effective_len(&self) -> usize {
        2 * (self.len() / 2)
    }

    /// True when `T` is odd and the last observation is ignored by the
    /// spectral computations.
    pub fn is_truncated(&self) -> bool {
        self.len() % 2 == 1
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// Column means removed by [`center`](Self::center), if any.
    pub fn means(&self) -> Option<&[f64]> {
        self.means.as_deref()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let t = self.len();
        &self.values.as_slice()[j * t..(j + 1) * t]
    }

    pub fn row(&self, t: usize) -> Vec<f64> {
        self.values.row(t).iter().copied().collect()
    }

    /// Rejects series shorter than [`MIN_LEN`].
    pub fn check_testable(&self) -> Result<()> {
        if self.len() < MIN_LEN {
            return Err(Error::TooShort {
                len: self.len(),
                min: MIN_LEN,
            });
        }
        Ok(())
    }

    /// Subtracts column means. Idempotent up to rounding.
    pub fn center(&self) -> Self {
        let t = self.len() as f64;
        let mut values = self.values.clone();
        let mut removed = Vec::with_capacity(self.dim());
        for mut col in values.column_iter_mut() {
            let mean = col.iter().sum::<f64>() / t;
            col.add_scalar_mut(-mean);
            removed.push(mean);
        }
        let means = match &self.means {
            Some(prev) => prev.iter().zip(&removed).map(|(a, b)| a + b).collect(),
            None => removed,
        };
        Self {
            values,
            centered: true,
            means: Some(means),
        }
    }

    /// Multiplies every observation by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: &self.values * c,
            centered: self.centered,
            means: self.means.as_ref().map(|m| m.iter().map(|x| x * c).collect()),
        }
    }

    /// Keeps the listed components, in the given order.
    pub fn select_components(&self, idx: &[usize]) -> Result<Self> {
        if let Some(&bad) = idx.iter().find(|&&j| j >= self.dim()) {
            return Err(Error::domain(format!("component index {bad} out of range")));
        }
        if idx.is_empty() {
            return Err(Error::domain("no components selected"));
        }
        let values = self.values.select_columns(idx);
        Ok(Self {
            values,
            centered: self.centered,
            means: self.means.as_ref().map(|m| idx.iter().map(|&j| m[j]).collect()),
        })
    }

    pub fn read_csv<R: Read>(reader: R, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut width = None;
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 1;
            let rec = rec.map_err(|e| Error::Parse {
                row,
                col: 0,
                msg: e.to_string(),
            })?;
            let expected = *width.get_or_insert(rec.len());
            if rec.len() != expected {
                return Err(Error::Ragged {
                    row,
                    expected,
                    found: rec.len(),
                });
            }
            let mut vals = Vec::with_capacity(expected);
            for (j, field) in rec.iter().enumerate() {
                let x: f64 = field.parse().map_err(|_| Error::Parse {
                    row,
                    col: j + 1,
                    msg: format!("not a number: {field:?}"),
                })?;
                if !x.is_finite() {
                    return Err(Error::Parse {
                        row,
                        col: j + 1,
                        msg: format!("non-finite value: {field:?}"),
                    });
                }
                vals.push(x);
            }
            rows.push(vals);
        }
        Self::from_rows(&rows)
    }

    /// Writes the series in the same CSV layout [`load_csv`] reads. Values
    /// use the shortest representation that round-trips exactly.
    pub fn write_csv<W: Write>(&self, mut w: W, header: bool) -> Result<()> {
        if header {
            let names: Vec<String> = (1..=self.dim()).map(|j| format!("x{j}")).collect();
            writeln!(w, "{}", names.join(","))?;
        }
        for t in 0..self.len() {
            let line: Vec<String> = self.values.row(t).iter().map(|x| format!("{x:?}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Reads a comma-separated file with one time point per row.
///
/// No minimum length is enforced here; the test entry points reject series
/// shorter than [`MIN_LEN`].
pub fn load_csv(path: impl AsRef<Path>, has_header: bool, center: bool) -> Result<MultivariateSeries> {
    let file = std::fs::File::open(path)?;
    let s = MultivariateSeries::read_csv(std::io::BufReader::new(file), has_header)?;
    Ok(if center { s.center() } else { s })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<MultivariateSeries> {
        MultivariateSeries::read_csv(s.as_bytes(), false)
    }

    #[test]
    fn ingests_small_file() {
        let s = parse("1,2\n3,4\n5,6").unwrap();
        assert_eq!((s.len(), s.dim()), (3, 2));
        assert_eq!(s.row(1), vec![3.0, 4.0]);
        assert!(!s.is_centered());

        let c = s.center();
        assert_eq!(c.means().unwrap(), &[3.0, 4.0]);
        for j in 0..2 {
            assert_eq!(c.column(j).iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn header_and_scientific_notation() {
        let s = MultivariateSeries::read_csv("a, b\n1e-3, -2.5E2\n.5,3".as_bytes(), true).unwrap();
        assert_eq!(s.row(0), vec![1e-3, -250.0]);
        assert_eq!(s.row(1), vec![0.5, 3.0]);
    }

    #[test]
    fn bad_field_reports_position() {
        match parse("1,x") {
            Err(Error::Parse { row: 1, col: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse("1,2\n3,nan") {
            Err(Error::Parse { row: 2, col: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows() {
        assert!(matches!(
            parse("1,2\n3\n"),
            Err(Error::Ragged { row: 2, expected: 2, found: 1 })
        ));
    }

    #[test]
    fn too_short_for_testing() {
        let s = parse("1\n2\n3\n4").unwrap();
        assert!(matches!(s.check_testable(), Err(Error::TooShort { len: 4, min: 8 })));
    }

    #[test]
    fn centering_cases() {
        let s = MultivariateSeries::univariate(&[1.0, 1.0, 1.0]).unwrap().center();
        assert_eq!(s.column(0), &[0.0, 0.0, 0.0]);
        let s = MultivariateSeries::univariate(&[0.0, 2.0]).unwrap().center();
        assert_eq!(s.column(0), &[-1.0, 1.0]);
    }

    #[test]
    fn centering_is_idempotent() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64 * 0.3 - 1.7).collect();
        let once = MultivariateSeries::univariate(&xs).unwrap().center();
        let twice = once.center();
        for (a, b) in once.column(0).iter().zip(twice.column(0)) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn odd_length_truncation_flag() {
        let s = MultivariateSeries::univariate(&[0.0; 9]).unwrap();
        assert!(s.is_truncated());
        assert_eq!(s.effective_len(), 8);
    }
}
