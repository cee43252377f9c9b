//! Complex linear algebra under a canonical-form discipline.
//!
//! Row-reduced echelon form is the complete invariant for the left
//! `GL(m, C)` action on tuples of column vectors, and reduced column echelon
//! form is the canonical basis of a subspace. Every rank decision on the
//! float backend goes through the relative threshold
//! `tol * max|entry|` (or `tol` for an all-zero matrix).

mod matrix;
mod scalar;

pub use matrix::Matrix;
pub use num_complex::Complex64;
pub use scalar::{parse_rational, GaussRat, Scalar};

use crate::error::{BorelError, Result};

/// Relative pivot tolerance of the float backend.
pub const PIVOT_TOL: f64 = 1e-10;

/// Entry-wise tolerance for comparing canonical forms on the float backend.
pub const CANON_TOL: f64 = 1e-9;

/// Result of a row reduction.
#[derive(Clone, Debug)]
pub struct Rref<S> {
    pub canonical: Matrix<S>,
    pub rank: usize,
    /// Column index of each pivot, in row order.
    pub pivots: Vec<usize>,
    /// Smallest accepted pivot, relative to the matrix scale.
    pub min_pivot: f64,
    /// Largest candidate rejected as zero, relative to the matrix scale.
    pub max_rejected: f64,
}

/// Reduced row-echelon form with pivots normalized to 1.
///
/// Float pivoting picks the largest modulus in the column, lowest row on ties.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> Rref<S> {
    rref_with_tol(m, PIVOT_TOL)
}

pub fn rref_with_tol<S: Scalar>(m: &Matrix<S>, tol: f64) -> Rref<S> {
    let (rows, cols) = (m.rows(), m.cols());
    let scale = m.scale();
    let threshold = tol * scale;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut min_pivot = f64::INFINITY;
    let mut max_rejected: f64 = 0.0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let choice = if S::EXACT {
            (r..rows).find(|&i| !a.get(i, c).is_negligible(threshold))
        } else {
            let mut best: Option<(usize, f64)> = None;
            for i in r..rows {
                let v = a.get(i, c).modulus();
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
            match best {
                Some((i, v)) if v >= threshold => Some(i),
                Some((_, v)) => {
                    max_rejected = max_rejected.max(v / scale);
                    None
                }
                None => None,
            }
        };
        let Some(p) = choice else {
            for i in r..rows {
                a.set(i, c, S::zero());
            }
            continue;
        };
        if !S::EXACT {
            min_pivot = min_pivot.min(a.get(p, c).modulus() / scale);
        }
        if p != r {
            for j in c..cols {
                let t = a.get(p, j).clone();
                a.set(p, j, a.get(r, j).clone());
                a.set(r, j, t);
            }
        }
        let inv = S::one() / a.get(r, c).clone();
        a.set(r, c, S::one());
        for j in c + 1..cols {
            let v = a.get(r, j).clone() * inv.clone();
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_negligible(0.0) {
                continue;
            }
            a.set(i, c, S::zero());
            for j in c + 1..cols {
                let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    for i in r..rows {
        for j in 0..cols {
            a.set(i, j, S::zero());
        }
    }
    Rref { canonical: a, rank: r, pivots, min_pivot, max_rejected }
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    rref(m).rank
}

/// A linear subspace of `C^ambient`, stored by its reduced column-echelon basis.
///
/// Two subspaces are equal exactly when their stored bases agree entry-wise.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Matrix<S>,
    /// Row `pivot_rows[i]` of basis column `i` is 1; other basis columns vanish there.
    pivot_rows: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0), pivot_rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivot_rows: (0..ambient).collect() }
    }

    /// Span of the columns of `m`.
    pub fn span(m: &Matrix<S>) -> Self {
        let red = rref(&m.transpose());
        let basis = red.canonical.transpose().leading_columns(red.rank);
        Subspace { ambient: m.rows(), basis, pivot_rows: red.pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// Coordinates of `x` in the stored basis (meaningful when `x` lies in the subspace).
    pub fn coords_of(&self, x: &[S]) -> Vec<S> {
        self.pivot_rows.iter().map(|&p| x[p].clone()).collect()
    }

    pub fn contains(&self, x: &[S]) -> bool {
        let c = self.coords_of(x);
        let y = self.basis.mul_vec(&c);
        let scale = x.iter().map(Scalar::modulus).fold(1.0, f64::max);
        x.iter().zip(&y).all(|(a, b)| (a.clone() - b.clone()).is_negligible(CANON_TOL * scale))
    }

    /// Canonical bases agree entry-wise within `tol` times the larger basis scale.
    pub fn approx_eq(&self, other: &Subspace<S>, tol: f64) -> bool {
        let scale = self.basis.scale().max(other.basis.scale());
        self.ambient == other.ambient && self.basis.approx_eq(&other.basis, tol * scale)
    }

    /// `g` applied to the subspace.
    pub fn transform(&self, g: &Matrix<S>) -> Self {
        Subspace::span(&g.mul(&self.basis))
    }
}

/// Canonical basis of the column span of `m` plus the coordinates of every column in it.
pub fn span_coords<S: Scalar>(m: &Matrix<S>) -> (Subspace<S>, Matrix<S>) {
    let basis = Subspace::span(m);
    let coords = Matrix::from_columns(basis.dim(), m.columns().map(|c| basis.coords_of(c)).collect());
    (basis, coords)
}

/// Images of the columns of `m` in `C^rows / s`.
///
/// The complement of `s` is spanned by the standard vectors indexed by the
/// non-pivot rows of its echelon basis, taken in increasing index order.
pub fn quotient_coords<S: Scalar>(m: &Matrix<S>, s: &Subspace<S>) -> Result<Matrix<S>> {
    if s.ambient_dim() != m.rows() {
        return Err(BorelError::DimensionMismatch(format!(
            "subspace of C^{} applied to vectors of C^{}",
            s.ambient_dim(),
            m.rows()
        )));
    }
    let rows = m.rows();
    let mut is_pivot = vec![false; rows];
    for &p in s.pivot_rows() {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..rows).filter(|&i| !is_pivot[i]).collect();
    let columns = m
        .columns()
        .map(|x| {
            let a = s.coords_of(x);
            let along = s.basis().mul_vec(&a);
            free.iter().map(|&i| x[i].clone() - along[i].clone()).collect()
        })
        .collect();
    Ok(Matrix::from_columns(free.len(), columns))
}

/// Basis of `{x : m x = 0}`, one column per free variable.
pub fn null_space<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let red = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut out = Matrix::zeros(n, 0);
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![S::zero(); n];
        v[f] = S::one();
        for (row, &p) in red.pivots.iter().enumerate() {
            v[p] = -red.canonical.get(row, f).clone();
        }
        out.push_column(&v);
    }
    out
}

pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(BorelError::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let red = rref(&m.hcat(&Matrix::identity(n)));
    if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
        return Err(BorelError::InvalidInput("matrix is singular".into()));
    }
    Ok(Matrix::from_fn(n, n, |i, j| red.canonical.get(i, n + j).clone()))
}

pub fn determinant<S: Scalar>(m: &Matrix<S>) -> S {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = m.clone();
    let mut det = S::one();
    for c in 0..n {
        let p = if S::EXACT {
            (c..n).find(|&i| !a.get(i, c).is_negligible(0.0))
        } else {
            (c..n).max_by(|&i, &j| a.get(i, c).modulus().total_cmp(&a.get(j, c).modulus()).then(j.cmp(&i)))
        };
        let Some(p) = p.filter(|&p| !a.get(p, c).is_negligible(0.0)) else {
            return S::zero();
        };
        if p != c {
            for j in 0..n {
                let t = a.get(p, j).clone();
                a.set(p, j, a.get(c, j).clone());
                a.set(c, j, t);
            }
            det = -det;
        }
        let piv = a.get(c, c).clone();
        det = det * piv.clone();
        for i in c + 1..n {
            let f = a.get(i, c).clone() / piv.clone();
            for j in c..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(c, j).clone();
                a.set(i, j, v);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn q(re: i64) -> GaussRat {
        GaussRat::from_i64(re)
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let id = Matrix::<GaussRat>::identity(3);
        let r = rref(&id);
        assert_eq!(r.canonical, id);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn proportional_rows() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.canonical, Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(0), q(0)]]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::<Complex64>::zeros(3, 3)), 0);
        let m = Matrix::from_columns(
            3,
            vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(1), q(1), q(0)]],
        );
        assert_eq!(rank(&m), 2);
        let f = Matrix::from_columns(2, vec![vec![c(1.0), c(0.0)], vec![c(1.0), c(1e-14)]]);
        assert_eq!(rank(&f), 1);
    }

    #[test]
    fn empty_matrices() {
        let e = Matrix::<GaussRat>::zeros(0, 3);
        assert_eq!(rank(&e), 0);
        let e = Matrix::<Complex64>::zeros(2, 0);
        let (s, coords) = span_coords(&e);
        assert_eq!(s.dim(), 0);
        assert_eq!(coords.rows(), 0);
    }

    #[test]
    fn span_of_proportional_columns() {
        let m = Matrix::from_columns(3, vec![vec![q(1), q(1), q(0)], vec![q(2), q(2), q(0)]]);
        let (s, coords) = span_coords(&m);
        assert_eq!(s.dim(), 1);
        assert_eq!(coords, Matrix::from_rows(vec![vec![q(1), q(2)]]));
        let id = Matrix::<GaussRat>::identity(3);
        let (s, coords) = span_coords(&id);
        assert_eq!(s.dim(), 3);
        assert_eq!(coords, id);
    }

    #[test]
    fn quotient_by_first_axis() {
        let s = Subspace::span(&Matrix::from_columns(3, vec![vec![q(1), q(0), q(0)]]));
        let out = quotient_coords(&Matrix::identity(3), &s).unwrap();
        assert_eq!(
            out,
            Matrix::from_columns(2, vec![vec![q(0), q(0)], vec![q(1), q(0)], vec![q(0), q(1)]])
        );
        let inside = Matrix::from_columns(3, vec![vec![q(5), q(0), q(0)]]);
        assert_eq!(quotient_coords(&inside, &s).unwrap(), Matrix::zeros(2, 1));
        assert!(quotient_coords(&Matrix::identity(2), &s).is_err());
    }

    #[test]
    fn null_space_and_inverse() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]]);
        let k = null_space(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(m.mul(&k), Matrix::zeros(2, 1));
        let g = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]);
        let gi = inverse(&g).unwrap();
        assert_eq!(g.mul(&gi), Matrix::identity(2));
        assert_eq!(determinant(&g), q(1));
        assert!(inverse(&Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]])).is_err());
    }
}
