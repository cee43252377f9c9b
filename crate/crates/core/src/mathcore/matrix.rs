use serde_json::Value;

use super::scalar::Scalar;
use crate::error::{BorelError, Result};

/// Dense matrix stored column by column; column `j` is the `j`-th vector of a tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds a matrix from its columns. Every column must have `rows` entries.
    pub fn from_columns(rows: usize, columns: Vec<Vec<S>>) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            assert_eq!(c.len(), rows, "column length does not match row count");
            data.extend(c);
        }
        Matrix { rows, cols, data }
    }

    /// Row-major convenience constructor, mostly for tests.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[c * self.rows + r] = v;
    }

    pub fn col(&self, c: usize) -> &[S] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[S]> + '_ {
        (0..self.cols).map(move |c| self.col(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let b = rhs.get(k, j);
                if S::EXACT && b.is_negligible(0.0) {
                    continue;
                }
                for i in 0..self.rows {
                    let v = out.get(i, j).clone() + self.get(i, k).clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![S::zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o = o.clone() + self.get(i, k).clone() * x.clone();
            }
        }
        out
    }

    /// Columns `idx` in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_columns(self.rows, idx.iter().map(|&c| self.col(c).to_vec()).collect())
    }

    /// The first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        Matrix { rows: self.rows, cols: k, data: self.data[..k * self.rows].to_vec() }
    }

    pub fn without_column(&self, c: usize) -> Self {
        let idx: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select_columns(&idx)
    }

    pub fn push_column(&mut self, col: &[S]) {
        assert_eq!(col.len(), self.rows);
        self.data.extend_from_slice(col);
        self.cols += 1;
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Matrix<S>) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn scale_column(&mut self, c: usize, s: &S) {
        for i in 0..self.rows {
            let v = self.get(i, c).clone() * s.clone();
            self.set(i, c, v);
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Largest entry modulus, or 1 when every entry is zero.
    pub fn scale(&self) -> f64 {
        let m = self.data.iter().map(Scalar::modulus).fold(0.0, f64::max);
        if m > 0.0 {
            m
        } else {
            1.0
        }
    }

    pub fn max_abs_diff(&self, other: &Matrix<S>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).modulus())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Matrix<S>, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_zero_column(&self, c: usize, threshold: f64) -> bool {
        self.col(c).iter().all(|x| x.is_negligible(threshold))
    }

    /// Arrays of columns, each entry `[re, im]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.columns()
                .map(|c| Value::Array(c.iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    /// Parses an array of columns. `rows` is needed to type an empty column list.
    pub fn from_json(v: &Value, rows: Option<usize>) -> Result<Self> {
        let cols = v
            .as_array()
            .ok_or_else(|| BorelError::schema("", "expected an array of columns"))?;
        let mut columns = Vec::with_capacity(cols.len());
        for (j, c) in cols.iter().enumerate() {
            let entries = c
                .as_array()
                .ok_or_else(|| BorelError::schema(format!("[{j}]"), "expected a column array"))?;
            let col = entries
                .iter()
                .enumerate()
                .map(|(i, e)| S::from_json(e).map_err(|m| BorelError::schema(format!("[{j}][{i}]"), m)))
                .collect::<Result<Vec<S>>>()?;
            columns.push(col);
        }
        let r = match (rows, columns.first()) {
            (Some(r), _) => r,
            (None, Some(c)) => c.len(),
            (None, None) => 0,
        };
        for (j, c) in columns.iter().enumerate() {
            if c.len() != r {
                return Err(BorelError::schema(
                    format!("[{j}]"),
                    format!("column has {} entries, expected {r}", c.len()),
                ));
            }
        }
        Ok(Self::from_columns(r, columns))
    }
}
