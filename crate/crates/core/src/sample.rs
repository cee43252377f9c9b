//! Reproducible random inputs.
//!
//! Sample `i` of a run seeded with `s` always draws from the ChaCha8 stream
//! `(s, i)`, so results do not depend on how samples are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::flag::{Flag, FlagQuad};
use crate::hypvol::ProjPoint;
use crate::mathcore::{rank, Complex64, GaussRat, Matrix, Scalar};

pub type SampleRng = ChaCha8Rng;

/// The generator owned by sample `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix<Complex64> {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// A random element of `GL(n)` with complex Gaussian entries.
pub fn random_gl(n: usize, rng: &mut impl Rng) -> Matrix<Complex64> {
    loop {
        let g = gaussian_matrix(n, n, rng);
        if rank(&g) == n {
            return g;
        }
    }
}

/// Gram-Schmidt on the columns of `m`, which must be independent.
pub fn orthonormalize(m: &Matrix<Complex64>) -> Matrix<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(m.cols());
    for c in m.columns() {
        let mut v = c.to_vec();
        for u in &cols {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    Matrix::from_columns(m.rows(), cols)
}

/// A flag with unitary adapted basis, the Q factor of a complex Gaussian matrix.
pub fn random_flag(n: usize, rng: &mut impl Rng) -> Flag<Complex64> {
    Flag::new(orthonormalize(&random_gl(n, rng))).expect("unitary basis")
}

pub fn random_quad(n: usize, rng: &mut impl Rng) -> FlagQuad<Complex64> {
    FlagQuad::new(std::array::from_fn(|_| random_flag(n, rng))).expect("common dimension")
}

pub fn random_flags(n: usize, count: usize, rng: &mut impl Rng) -> Vec<Flag<Complex64>> {
    (0..count).map(|_| random_flag(n, rng)).collect()
}

/// A finite point of `P^1` with Gaussian affine coordinate.
pub fn random_point(rng: &mut impl Rng) -> ProjPoint {
    ProjPoint::finite(gaussian(rng) * std::f64::consts::SQRT_2)
}

/// A Gaussian integer with both parts in `-bound..=bound`.
pub fn small_gauss_int(bound: i64, rng: &mut impl Rng) -> GaussRat {
    GaussRat::from_gauss_int(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound))
}

pub fn rational_matrix(rows: usize, cols: usize, bound: i64, rng: &mut impl Rng) -> Matrix<GaussRat> {
    Matrix::from_fn(rows, cols, |_, _| small_gauss_int(bound, rng))
}

/// A flag whose adapted basis has small Gaussian integer entries.
pub fn random_rational_flag(n: usize, rng: &mut impl Rng) -> Flag<GaussRat> {
    loop {
        if let Ok(f) = Flag::new(rational_matrix(n, n, 3, rng)) {
            return f;
        }
    }
}

/// `k + 1` vectors spanning `C^m`, drawn with the backend's sampler.
pub fn random_spanning<S: Sampled>(m: usize, k: usize, rng: &mut impl Rng) -> Matrix<S> {
    loop {
        let raw = S::matrix(m, k + 1, rng);
        if rank(&raw) == m {
            return raw;
        }
    }
}

/// Backend-specific random matrices.
pub trait Sampled: Scalar {
    fn matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix<Self>;
    fn flag(n: usize, rng: &mut impl Rng) -> Flag<Self>;
}

impl Sampled for Complex64 {
    fn matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix<Self> {
        gaussian_matrix(rows, cols, rng)
    }

    fn flag(n: usize, rng: &mut impl Rng) -> Flag<Self> {
        random_flag(n, rng)
    }
}

impl Sampled for GaussRat {
    fn matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix<Self> {
        rational_matrix(rows, cols, 3, rng)
    }

    fn flag(n: usize, rng: &mut impl Rng) -> Flag<Self> {
        random_rational_flag(n, rng)
    }
}
