use std::fs;
use std::path::Path;

use super::{Counters, Metric};
use crate::{Error, Result, Scalar};

/// Dense point cloud, stored point-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorDataset<T> {
    n_points: usize,
    dim: usize,
    values: Vec<T>,
}

impl<T: Scalar> VectorDataset<T> {
    pub fn new(dim: usize, values: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDataset("dimension must be at least 1".into()));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::InvalidDataset(format!(
                "{} values do not divide into points of dimension {dim}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite coordinate in point {}",
                pos / dim
            )));
        }
        Ok(Self {
            n_points: values.len() / dim,
            dim,
            values,
        })
    }

    pub fn from_points(points: &[Vec<T>]) -> Result<Self> {
        let dim = points.first().map_or(1, Vec::len);
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::InvalidDataset(format!(
                "point {bad} has {} coordinates, expected {dim}",
                points[bad].len()
            )));
        }
        Self::new(dim, points.concat())
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks_exact(self.dim)
    }
}

#[inline]
pub(crate) fn euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| {
            let diff = x - y;
            acc + diff * diff
        })
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Comma,
    Whitespace,
}

/// Parses one point per line. Blank lines and lines starting with `#` are
/// skipped; line numbers in errors are 1-based.
pub fn parse_vectors<T: Scalar>(text: &str, delimiter: Delimiter, path: &Path) -> Result<VectorDataset<T>> {
    let mut values = Vec::new();
    let mut dim = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = match delimiter {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
        };
        match dim {
            None => dim = Some(fields.len()),
            Some(d) if d != fields.len() => {
                return Err(parse_err(format!("expected {d} fields, found {}", fields.len())));
            }
            Some(_) => {}
        }
        for field in fields {
            let v: T = field
                .parse()
                .map_err(|_| parse_err(format!("not a number: {field:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(format!("non-finite value: {field:?}")));
            }
            values.push(v);
        }
    }
    match dim {
        None => Err(Error::EmptyInput {
            path: path.to_path_buf(),
        }),
        Some(d) => VectorDataset::new(d, values),
    }
}

pub fn load_vectors<T: Scalar>(path: impl AsRef<Path>, delimiter: Delimiter) -> Result<VectorDataset<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_vectors(&text, delimiter, path)
}

/// Euclidean distances over a borrowed point cloud.
#[derive(Debug)]
pub struct EuclideanOracle<'a, T> {
    data: &'a VectorDataset<T>,
    counters: Counters,
}

impl<'a, T: Scalar> EuclideanOracle<'a, T> {
    pub fn new(data: &'a VectorDataset<T>) -> Self {
        Self {
            data,
            counters: Counters::default(),
        }
    }

    pub fn dataset(&self) -> &'a VectorDataset<T> {
        self.data
    }

    /// Full row of `i`; counted.
    pub fn euclidean_row(&self, i: usize) -> Vec<T> {
        self.row(i)
    }
}

impl<T: Scalar> Metric<T> for EuclideanOracle<'_, T> {
    fn len(&self) -> usize {
        self.data.n_points()
    }

    fn distance(&self, i: usize, j: usize) -> T {
        self.counters.add_evals(1);
        euclidean(self.data.point(i), self.data.point(j))
    }

    fn row_into(&self, i: usize, out: &mut [T]) {
        let n = self.len();
        assert!(i < n, "element {i} out of range");
        assert_eq!(out.len(), n);
        let xi = self.data.point(i);
        for (o, xj) in out.iter_mut().zip(self.data.points()) {
            *o = euclidean(xi, xj);
        }
        self.counters.add_row(n as u64);
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }
}
