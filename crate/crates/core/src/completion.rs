//! Normal form for a pair of transverse flags with a generic line, and the
//! unique line completing such a triple to a maximal quadruple.

use crate::error::{BorelError, Result};
use crate::flag::Flag;
use crate::hypvol::omega;
use crate::mathcore::{inverse, null_space, rank, Complex64, Matrix, Scalar, Subspace, PIVOT_TOL};

/// `g` with `g·F_0` the standard flag, `g·F_1` the reversed standard flag and
/// `g·L = ⟨e_1 + ... + e_n⟩`.
///
/// Requires `F_0^k ∩ F_1^{n-k} = 0` for every `k` and that `L` lies in no
/// hyperplane `F_0^{k-1} + F_1^{n-k}`.
pub fn normalize_triple<S: Scalar>(f0: &Flag<S>, f1: &Flag<S>, line: &Subspace<S>) -> Result<Matrix<S>> {
    let n = f0.n();
    if f1.n() != n || line.ambient_dim() != n || line.dim() != 1 {
        return Err(BorelError::DimensionMismatch(format!("need two flags and a line in C^{n}")));
    }
    for k in 1..n {
        let m = f0.adapted().leading_columns(k).hcat(&f1.adapted().leading_columns(n - k));
        if rank(&m) < n {
            return Err(BorelError::NotGeneric(format!("F0^{k} and F1^{} intersect", n - k)));
        }
    }
    // u_k spans F0^k ∩ F1^{n-k+1}
    let mut u = Matrix::zeros(n, 0);
    for k in 1..=n {
        let a = f0.adapted().leading_columns(k);
        let b = f1.adapted().leading_columns(n - k + 1);
        let ker = null_space(&a.hcat(&b));
        let x: Vec<S> = ker.col(0)[..k].to_vec();
        u.push_column(&a.mul_vec(&x));
    }
    let uinv = inverse(&u)?;
    let ell = line.basis().col(0).to_vec();
    let c = uinv.mul_vec(&ell);
    let scale = c.iter().map(Scalar::modulus).fold(0.0, f64::max);
    if let Some(k) = c.iter().position(|x| x.is_negligible(PIVOT_TOL * scale)) {
        return Err(BorelError::NotGeneric(format!(
            "the line lies in F0^{} + F1^{}",
            k,
            n - k - 1
        )));
    }
    for (k, ck) in c.iter().enumerate() {
        u.scale_column(k, ck);
    }
    inverse(&u)
}

/// The line `F_3^1` making `(F_0, F_1, F_2, F_3)` maximal, for a generic
/// triple `(F_0, F_1, F_2^1)`: `g^{-1} ⟨(ω^{n-1}, ..., ω, 1)⟩`.
pub fn maximal_completion(f0: &Flag<Complex64>, f1: &Flag<Complex64>, l2: &Subspace<Complex64>) -> Result<Subspace<Complex64>> {
    let g = normalize_triple(f0, f1, l2)?;
    let n = f0.n();
    let w: Vec<Complex64> = (0..n).map(|k| omega().powu((n - 1 - k) as u32)).collect();
    let ginv = inverse(&g)?;
    Ok(Subspace::span(&Matrix::from_columns(n, vec![ginv.mul_vec(&w)])))
}
