//! An independent evaluation of `B_3` through incidence geometry in `P^2`.
//!
//! A flag in `C^3` is a point `P` on a projective line `L`. The value is a
//! volume of four points on one line (when two lines coincide), on an
//! auxiliary line (when all four lines are concurrent) or a sum of four such
//! volumes otherwise.

use crate::error::{BorelError, Result};
use crate::flag::FlagQuad;
use crate::hypvol::ideal_volume_of_vectors;
use crate::mathcore::{rank, Matrix, Scalar, Subspace};

type Vec3<S> = [S; 3];

/// `a × b`, so that `(a × b)·x = det(a, b, x)`.
fn cross<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    let m = |i: usize, j: usize| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
    [m(1, 2), m(2, 0), m(0, 1)]
}

fn dot<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

fn proportional<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> bool {
    rank(&Matrix::from_columns(3, vec![a.to_vec(), b.to_vec()])) < 2
}

fn vec3<S: Scalar>(x: &[S]) -> Vec3<S> {
    [x[0].clone(), x[1].clone(), x[2].clone()]
}

/// Which branch of the case split was taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B3Case {
    /// Lines `L_i` and `L_j` coincide; `i` is the smallest such index.
    EqualLines(usize),
    /// The four lines pass through one point.
    Concurrent,
    Generic,
}

struct ProjFlag<S> {
    point: Vec3<S>,
    /// Normal of the plane over the line: `x` lies on it iff `normal · x = 0`.
    normal: Vec3<S>,
}

/// `F ∩ L'`: the point `L ∩ L'`, or `P` itself when `L = L'`.
fn meet<S: Scalar>(f: &ProjFlag<S>, normal: &Vec3<S>) -> Vec3<S> {
    if proportional(&f.normal, normal) {
        f.point.clone()
    } else {
        cross(&f.normal, normal)
    }
}

/// Volume of four points lying on the line with the given normal.
fn vol_on_line<S: Scalar>(normal: &Vec3<S>, pts: &[Vec3<S>; 4]) -> f64 {
    let plane = Subspace::span(&Matrix::from_columns(
        3,
        vec![pick_in_plane(normal, 0), pick_in_plane(normal, 1), pick_in_plane(normal, 2)],
    ));
    debug_assert_eq!(plane.dim(), 2);
    let coords = |x: &Vec3<S>| {
        let c = plane.coords_of(x);
        (c[0].to_c64(), c[1].to_c64())
    };
    ideal_volume_of_vectors([coords(&pts[0]), coords(&pts[1]), coords(&pts[2]), coords(&pts[3])])
}

/// `normal × e_k`, a vector of the plane; two of the three span it.
fn pick_in_plane<S: Scalar>(normal: &Vec3<S>, k: usize) -> Vec<S> {
    let mut e = [S::zero(), S::zero(), S::zero()];
    e[k] = S::one();
    cross(normal, &e).to_vec()
}

fn proj_flags<S: Scalar>(q: &FlagQuad<S>) -> Result<[ProjFlag<S>; 4]> {
    if q.n() != 3 {
        return Err(BorelError::InvalidInput(format!("the projective evaluation needs n = 3, found n = {}", q.n())));
    }
    Ok(q.flags().clone().map(|f| {
        let p = vec3(f.vector(0));
        let w = vec3(f.vector(1));
        ProjFlag { normal: cross(&p, &w), point: p }
    }))
}

fn classify<S: Scalar>(fl: &[ProjFlag<S>; 4]) -> B3Case {
    for i in 0..4 {
        if (0..4).any(|j| j != i && proportional(&fl[i].normal, &fl[j].normal)) {
            return B3Case::EqualLines(i);
        }
    }
    let normals = Matrix::from_columns(3, fl.iter().map(|f| f.normal.to_vec()).collect());
    if rank(&normals) == 2 {
        B3Case::Concurrent
    } else {
        B3Case::Generic
    }
}

fn volume_on<S: Scalar>(fl: &[ProjFlag<S>; 4], normal: &Vec3<S>) -> f64 {
    let pts = std::array::from_fn(|k| meet(&fl[k], normal));
    vol_on_line(normal, &pts)
}

/// The common point of four concurrent lines.
fn common_point<S: Scalar>(fl: &[ProjFlag<S>; 4]) -> Vec3<S> {
    let m = Matrix::from_rows(fl.iter().map(|f| f.normal.to_vec()).collect());
    let k = crate::mathcore::null_space(&m);
    vec3(k.col(0))
}

/// `B_3` by the projective case split, with the auxiliary line in the
/// concurrent case given by the normal `e_k` for the largest coordinate of
/// the common point.
pub fn b3_projective_oracle<S: Scalar>(q: &FlagQuad<S>) -> Result<f64> {
    b3_projective_with_aux(q, None)
}

/// As [`b3_projective_oracle`] with an explicit auxiliary line (by its normal)
/// for the concurrent case. Rejected if the line passes through the common point.
pub fn b3_projective_with_aux<S: Scalar>(q: &FlagQuad<S>, aux: Option<[S; 3]>) -> Result<f64> {
    let fl = proj_flags(q)?;
    Ok(match classify(&fl) {
        B3Case::EqualLines(i) => volume_on(&fl, &fl[i].normal),
        B3Case::Concurrent => {
            let p = common_point(&fl);
            let normal = match aux {
                Some(m) => {
                    let scale = p.iter().chain(&m).map(Scalar::modulus).fold(1e-300, f64::max);
                    if dot(&m, &p).is_negligible(1e-10 * scale * scale) {
                        return Err(BorelError::InvalidInput("auxiliary line contains the common point".into()));
                    }
                    m
                }
                None => {
                    let k = (0..3).max_by(|&a, &b| p[a].modulus().total_cmp(&p[b].modulus())).expect("three coordinates");
                    let mut e = [S::zero(), S::zero(), S::zero()];
                    e[k] = S::one();
                    e
                }
            };
            volume_on(&fl, &normal)
        }
        B3Case::Generic => (0..4).map(|i| volume_on(&fl, &fl[i].normal)).sum(),
    })
}

/// The branch [`b3_projective_oracle`] takes on `q`.
pub fn b3_case<S: Scalar>(q: &FlagQuad<S>) -> Result<B3Case> {
    Ok(classify(&proj_flags(q)?))
}
