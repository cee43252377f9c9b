//! Complete flags in `C^n`, stored through an adapted basis.

use serde_json::Value;

use crate::error::{BorelError, Result};
use crate::mathcore::{inverse, rank, Matrix, Scalar, Subspace, CANON_TOL};

/// A complete flag `F^0 ⊂ F^1 ⊂ ... ⊂ F^n = C^n` with `F^j` spanned by the
/// first `j` columns of an invertible adapted matrix.
///
/// The columns double as the vectors `v^1, ..., v^n` of an affine flag, so
/// every `Flag` is also an affine flag. Two flags are equal when all their
/// subspaces agree, whatever the adapted matrices.
#[derive(Clone, Debug)]
pub struct Flag<S> {
    adapted: Matrix<S>,
}

/// A flag together with the vectors `v^j`; identical to [`Flag`] by construction.
pub type AffineFlag<S> = Flag<S>;

impl<S: Scalar> Flag<S> {
    pub fn new(adapted: Matrix<S>) -> Result<Self> {
        let n = adapted.rows();
        if adapted.cols() != n || n == 0 {
            return Err(BorelError::DimensionMismatch(format!(
                "adapted basis must be a non-empty square matrix, found {}x{}",
                n,
                adapted.cols()
            )));
        }
        let r = rank(&adapted);
        if r < n {
            return Err(BorelError::NonSpanning { rank: r, dim: n });
        }
        Ok(Flag { adapted })
    }

    /// `⟨e_1⟩ ⊂ ⟨e_1, e_2⟩ ⊂ ...`
    pub fn standard(n: usize) -> Self {
        Flag { adapted: Matrix::identity(n) }
    }

    /// `⟨e_n⟩ ⊂ ⟨e_n, e_{n-1}⟩ ⊂ ...`
    pub fn reversed_standard(n: usize) -> Self {
        Flag { adapted: Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { S::one() } else { S::zero() }) }
    }

    pub fn n(&self) -> usize {
        self.adapted.rows()
    }

    pub fn adapted(&self) -> &Matrix<S> {
        &self.adapted
    }

    /// `v^{j+1}`, the `j`-th adapted column (0-based).
    pub fn vector(&self, j: usize) -> &[S] {
        self.adapted.col(j)
    }

    /// `F^j`.
    pub fn subspace(&self, j: usize) -> Subspace<S> {
        Subspace::span(&self.adapted.leading_columns(j))
    }

    /// `F^1`.
    pub fn line(&self) -> Subspace<S> {
        self.subspace(1)
    }

    pub fn approx_eq(&self, other: &Flag<S>) -> bool {
        self.n() == other.n() && (1..self.n()).all(|j| self.subspace(j).approx_eq(&other.subspace(j), CANON_TOL))
    }

    /// `g · F`.
    pub fn transform(&self, g: &Matrix<S>) -> Flag<S> {
        Flag { adapted: g.mul(&self.adapted) }
    }

    /// Same flag with adapted column `j` multiplied by `lambda`.
    pub fn rescaled(&self, j: usize, lambda: &S) -> Flag<S> {
        let mut adapted = self.adapted.clone();
        adapted.scale_column(j, lambda);
        Flag { adapted }
    }

    /// The annihilator flag under the bilinear pairing `x^T y`: its `j`-th
    /// space is the annihilator of `F^{n-j}`.
    pub fn dual(&self) -> Flag<S> {
        let inv = inverse(&self.adapted).expect("adapted basis is invertible");
        let n = self.n();
        Flag { adapted: Matrix::from_fn(n, n, |i, j| inv.get(n - 1 - j, i).clone()) }
    }

    /// `{"n": int, "adapted": [columns]}`.
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "n": self.n(), "adapted": self.adapted.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1)
            .ok_or_else(|| BorelError::schema(".n", "expected a positive integer"))? as usize;
        let cols = v.get("adapted").ok_or_else(|| BorelError::schema(".adapted", "missing"))?;
        let adapted = Matrix::<S>::from_json(cols, Some(n)).map_err(|e| e.within(".adapted"))?;
        if adapted.cols() != n {
            return Err(BorelError::schema(".adapted", format!("expected {n} columns, found {}", adapted.cols())));
        }
        Flag::new(adapted)
    }
}

/// Four flags in a common `C^n`.
#[derive(Clone, Debug)]
pub struct FlagQuad<S> {
    flags: [Flag<S>; 4],
}

impl<S: Scalar> FlagQuad<S> {
    pub fn new(flags: [Flag<S>; 4]) -> Result<Self> {
        let n = flags[0].n();
        if let Some(f) = flags.iter().find(|f| f.n() != n) {
            return Err(BorelError::DimensionMismatch(format!("flags in C^{n} and C^{} mixed", f.n())));
        }
        Ok(FlagQuad { flags })
    }

    pub fn n(&self) -> usize {
        self.flags[0].n()
    }

    pub fn flags(&self) -> &[Flag<S>; 4] {
        &self.flags
    }

    pub fn into_flags(self) -> [Flag<S>; 4] {
        self.flags
    }

    /// Flags reordered so that slot `p` holds old flag `perm[p]`.
    pub fn permuted(&self, perm: [usize; 4]) -> FlagQuad<S> {
        FlagQuad { flags: perm.map(|p| self.flags[p].clone()) }
    }

    pub fn transform(&self, g: &Matrix<S>) -> FlagQuad<S> {
        FlagQuad { flags: self.flags.clone().map(|f| f.transform(g)) }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.flags.iter().map(Flag::to_json).collect())
    }

    /// An array of four flags.
    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| BorelError::schema("", "expected an array of four flags"))?;
        if arr.len() != 4 {
            return Err(BorelError::schema("", format!("expected four flags, found {}", arr.len())));
        }
        let mut flags = Vec::with_capacity(4);
        for (i, f) in arr.iter().enumerate() {
            flags.push(Flag::from_json(f).map_err(|e| e.within(&format!("[{i}]")))?);
        }
        let flags: [Flag<S>; 4] = flags.try_into().expect("four flags");
        FlagQuad::new(flags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathcore::GaussRat;

    fn q(re: i64) -> GaussRat {
        GaussRat::from_i64(re)
    }

    #[test]
    fn equality_ignores_the_adapted_basis() {
        let f = Flag::<GaussRat>::standard(3);
        let g = Flag::new(Matrix::from_rows(vec![
            vec![q(2), q(5), q(1)],
            vec![q(0), q(3), q(7)],
            vec![q(0), q(0), q(4)],
        ]))
        .unwrap();
        assert!(f.approx_eq(&g));
        assert!(!f.approx_eq(&Flag::reversed_standard(3)));
    }

    #[test]
    fn rejects_singular_bases() {
        let m = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(2), q(2)]]);
        assert!(matches!(Flag::new(m), Err(BorelError::NonSpanning { rank: 1, dim: 2 })));
    }

    #[test]
    fn dual_of_standard_is_reversed() {
        let f = Flag::<GaussRat>::standard(4);
        assert!(f.dual().approx_eq(&Flag::reversed_standard(4)));
        let g = Flag::new(Matrix::from_rows(vec![
            vec![q(1), q(2), q(0)],
            vec![q(3), q(1), q(1)],
            vec![q(0), q(1), q(5)],
        ]))
        .unwrap();
        assert!(g.dual().dual().approx_eq(&g));
    }

    #[test]
    fn json_round_trip_and_paths() {
        let f = Flag::<GaussRat>::reversed_standard(2);
        let back = Flag::<GaussRat>::from_json(&f.to_json()).unwrap();
        assert!(back.approx_eq(&f));
        let bad = serde_json::json!([f.to_json(), f.to_json(), { "n": 2, "adapted": [[["1","0"]], [["0","0"],["1","0"]]] }, f.to_json()]);
        match FlagQuad::<GaussRat>::from_json(&bad) {
            Err(BorelError::Schema { path, .. }) => assert_eq!(path, "[2].adapted[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
