//! The Veronese embedding `P^1 → F(C^n)` and the symmetric-power
//! representation of `SL(2, C)` on binary forms of degree `n - 1`.
//!
//! `C^n` is identified with binary forms through the monomial basis:
//! coordinate `k` is the coefficient of `s^{n-1-k} t^k`.

use crate::error::{BorelError, Result};
use crate::flag::Flag;
use crate::hypvol::ProjPoint;
use crate::mathcore::{determinant, rank, Complex64, Matrix, Scalar};

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    S::from_i64(acc)
}

fn pow<S: Scalar>(x: &S, e: usize) -> S {
    (0..e).fold(S::one(), |acc, _| acc * x.clone())
}

/// `z_i^n = (x^i, C(i,1) x^{i-1} y, ..., y^i, 0, ..., 0)`.
pub fn veronese_basis_vector<S: Scalar>(x: &S, y: &S, i: usize, n: usize) -> Vec<S> {
    assert!(i < n, "level must be below n");
    let mut v = vec![S::zero(); n];
    for (j, slot) in v.iter_mut().enumerate().take(i + 1) {
        *slot = binomial::<S>(i, j) * pow(x, i - j) * pow(y, j);
    }
    v
}

/// `π_n(g)` for any `2 × 2` matrix: column `k` holds the coefficients of
/// `(a s + c t)^{n-1-k} (b s + d t)^k` where `g = [[a, b], [c, d]]`.
pub fn sym_power_unchecked<S: Scalar>(g: &Matrix<S>, n: usize) -> Matrix<S> {
    assert_eq!((g.rows(), g.cols()), (2, 2), "sym_power acts on 2x2 matrices");
    let first = [g.get(0, 0).clone(), g.get(1, 0).clone()];
    let second = [g.get(0, 1).clone(), g.get(1, 1).clone()];
    let columns = (0..n)
        .map(|k| {
            let mut p = vec![S::one()];
            for _ in 0..n - 1 - k {
                p = poly_mul(&p, &first);
            }
            for _ in 0..k {
                p = poly_mul(&p, &second);
            }
            p
        })
        .collect();
    Matrix::from_columns(n, columns)
}

/// `π_n(g)` for `g ∈ SL(2, C)`.
pub fn sym_power<S: Scalar>(g: &Matrix<S>, n: usize) -> Result<Matrix<S>> {
    if (g.rows(), g.cols()) != (2, 2) {
        return Err(BorelError::DimensionMismatch(format!("expected a 2x2 matrix, found {}x{}", g.rows(), g.cols())));
    }
    let d = determinant(g);
    if !(d.clone() - S::one()).is_negligible(1e-9) {
        return Err(BorelError::Determinant(format!("{:?}", d.to_c64())));
    }
    Ok(sym_power_unchecked(g, n))
}

/// `φ_n([x : y])` with adapted basis `π_n([[x, -ȳ], [y, x̄]])`.
///
/// The first `j` columns are the forms divisible by `(x s + y t)^{n-j}`,
/// which span the same space as `z_{n-1}^n, ..., z_{n-j}^n`.
pub fn veronese_flag_homog<S: Scalar>(x: &S, y: &S, n: usize) -> Flag<S> {
    assert!(n >= 1, "n must be positive");
    let g = Matrix::from_rows(vec![vec![x.clone(), -y.conj()], vec![y.clone(), x.conj()]]);
    Flag::new(sym_power_unchecked(&g, n)).expect("[x : y] is not [0 : 0], so the basis is invertible")
}

/// `φ_n(ξ)` from unit-norm homogeneous coordinates, so that the adapted basis
/// is the image of a unitary matrix.
pub fn veronese_flag(xi: &ProjPoint, n: usize) -> Flag<Complex64> {
    let (x, y) = xi.homog();
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let (x, y) = (x / r, y / r);
    veronese_flag_homog(&x, &y, n)
}

/// `D = diag(1, ..., n - 1)` applied after deleting the first coordinate.
pub fn project_and_scale<S: Scalar>(v: &[S]) -> Vec<S> {
    v[1..].iter().enumerate().map(|(i, x)| x.clone() * S::from_i64(i as i64 + 1)).collect()
}

/// The flag `D · p(F)` in `C^{n-1}`, where `p` deletes the first coordinate
/// and the level that `p` collapses is dropped.
pub fn reduce_flag<S: Scalar>(f: &Flag<S>) -> Result<Flag<S>> {
    let n = f.n();
    if n < 3 {
        return Err(BorelError::InvalidInput(format!("reduce_flag needs n >= 3, found {n}")));
    }
    let mut kept = Matrix::zeros(n - 1, 0);
    for j in 0..n {
        let v = project_and_scale(f.vector(j));
        let mut trial = kept.clone();
        trial.push_column(&v);
        if rank(&trial) > kept.cols() {
            kept = trial;
        }
    }
    Flag::new(kept)
}
