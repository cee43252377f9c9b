//! Bloch–Wigner dilogarithm, cross-ratios on `P^1(C)` and signed volumes of
//! ideal tetrahedra.
//!
//! Orientation: `ideal_volume(inf, 0, 1, z) = D(z)`, so the positively
//! oriented regular ideal tetrahedron has fourth vertex `e^{i pi/3}`.

use std::f64::consts::PI;
use std::sync::LazyLock;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{BorelError, Result};
use crate::mathcore::Scalar;

/// `+1` for the convention above; `-1` flips every volume and the matching `omega`.
pub const ORIENTATION: f64 = 1.0;

/// `e^{i pi/3}` under the active orientation convention.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, ORIENTATION * PI / 3.0)
}

static V3: LazyLock<f64> = LazyLock::new(|| dilog_bw_finite(Complex64::from_polar(1.0, PI / 3.0)));

/// Volume of the regular ideal tetrahedron, the maximum of `D`.
pub fn v3() -> f64 {
    *V3
}

/// A point `[a : b]` of the complex projective line; `[1 : 0]` is infinity.
#[derive(Clone, Copy, Debug)]
pub struct ProjPoint {
    a: Complex64,
    b: Complex64,
}

impl ProjPoint {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if a == Complex64::new(0.0, 0.0) && b == Complex64::new(0.0, 0.0) {
            return Err(BorelError::InvalidInput("[0:0] is not a projective point".into()));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(BorelError::InvalidInput("non-finite homogeneous coordinate".into()));
        }
        Ok(ProjPoint { a, b })
    }

    pub fn infinity() -> Self {
        ProjPoint { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) }
    }

    /// The affine point `[z : 1]`.
    pub fn finite(z: Complex64) -> Self {
        ProjPoint { a: z, b: Complex64::new(1.0, 0.0) }
    }

    pub fn homog(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    /// Scaled so the larger coordinate has modulus 1.
    pub fn normalized(&self) -> Self {
        let s = self.a.norm().max(self.b.norm());
        ProjPoint { a: self.a / s, b: self.b / s }
    }

    /// Möbius action of the 2x2 matrix `[[p, q], [r, s]]`.
    pub fn transform(&self, g: [[Complex64; 2]; 2]) -> Self {
        ProjPoint {
            a: g[0][0] * self.a + g[0][1] * self.b,
            b: g[1][0] * self.a + g[1][1] * self.b,
        }
    }

    /// Projective equality, `a b' = a' b` up to a relative tolerance.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        let p = self.normalized();
        let q = other.normalized();
        (p.a * q.b - q.a * p.b).norm() <= tol
    }

    /// `[[re_a, im_a], [re_b, im_b]]`.
    pub fn to_json(&self) -> Value {
        serde_json::json!([[self.a.re, self.a.im], [self.b.re, self.b.im]])
    }

    /// Accepts the pair form, the string `"inf"`, or a complex literal such as `"0.5+0.866i"`.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse(s),
            Value::Array(pair) if pair.len() == 2 => {
                let a = Complex64::from_json(&pair[0]).map_err(|m| BorelError::schema("[0]", m))?;
                let b = Complex64::from_json(&pair[1]).map_err(|m| BorelError::schema("[1]", m))?;
                ProjPoint::new(a, b).map_err(|e| BorelError::schema("", e.to_string()))
            }
            other => Err(BorelError::schema("", format!("expected a projective point, found {other}"))),
        }
    }

    /// `"inf"` or a complex literal `x+yi`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ProjPoint::infinity());
        }
        parse_complex(t)
            .map(ProjPoint::finite)
            .ok_or_else(|| BorelError::schema("", format!("not a complex literal: {s:?}")))
    }
}

/// Parses `x`, `yi`, `x+yi`, `x-yi` (also with `j`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().ok().map(|x| Complex64::new(x, 0.0));
    };
    // the split point is the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let imag = |x: &str| -> Option<f64> {
        match x {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => x.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// A point of `C ∪ {inf}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li2(z) + arg(1 - z) log|z|`, zero at `0`, `1`, `inf`.
pub fn dilog_bw(z: ExtComplex) -> f64 {
    match z {
        ExtComplex::Infinity => 0.0,
        ExtComplex::Finite(z) => dilog_bw_finite(z),
    }
}

pub fn dilog_bw_finite(z: Complex64) -> f64 {
    if !z.is_finite() || z.im == 0.0 {
        return 0.0;
    }
    // D(1/z) = -D(z) and D(1 - z) = -D(z) bring z into |w| <= 1, Re w <= 1/2.
    let mut w = z;
    let mut sign = 1.0;
    if w.norm_sqr() > 1.0 {
        w = w.inv();
        sign = -sign;
    }
    if w.re > 0.5 {
        w = Complex64::new(1.0, 0.0) - w;
        sign = -sign;
    }
    let li2 = if w.norm() <= 0.5 { li2_power_series(w) } else { li2_bernoulli(w) };
    let one_minus = Complex64::new(1.0, 0.0) - w;
    sign * (li2.im + one_minus.arg() * w.norm().ln())
}

fn li2_power_series(w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = w;
    for k in 1..=80u32 {
        let term = p / f64::from(k * k);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        p *= w;
    }
    sum
}

/// `B_{2j} / (2j + 1)!` for `j = 1..`.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211_680.0,
    -1.0 / 10_886_400.0,
    1.0 / 526_901_760.0,
    -4.064_761_645_144_225_6e-11,
    8.921_691_020_456_452e-13,
    -1.993_929_586_072_107_4e-14,
    4.518_980_029_619_918e-16,
    -1.035_651_761_218_124_7e-17,
    2.395_218_621_026_187e-19,
    -5.581_785_874_325_009e-21,
];

// Li2(w) = sum_k B_k u^{k+1} / (k+1)!, u = -log(1 - w), valid for |u| < 2 pi.
fn li2_bernoulli(w: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - w).ln();
    let u2 = u * u;
    let mut sum = u - u2 / 4.0;
    let mut p = u * u2;
    for c in BERNOULLI_OVER_FACTORIAL {
        sum += p * c;
        p *= u2;
    }
    sum
}

/// `((z0 - z2)(z1 - z3)) / ((z0 - z3)(z1 - z2))` in homogeneous coordinates.
///
/// When numerator and denominator both vanish (three coincident points, or
/// two coincident pairs) the result is reported as `0`.
pub fn cross_ratio(p0: &ProjPoint, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> ExtComplex {
    let p = [p0.normalized(), p1.normalized(), p2.normalized(), p3.normalized()];
    let det = |i: usize, j: usize| p[i].a * p[j].b - p[j].a * p[i].b;
    let num = det(0, 2) * det(1, 3);
    let den = det(0, 3) * det(1, 2);
    if num == Complex64::new(0.0, 0.0) {
        ExtComplex::Finite(Complex64::new(0.0, 0.0))
    } else if den == Complex64::new(0.0, 0.0) {
        ExtComplex::Infinity
    } else {
        ExtComplex::Finite(num / den)
    }
}

/// Points closer than this (as `|det|` of max-normalized coordinates) coincide.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// Signed hyperbolic volume of the ideal tetrahedron with the given vertices;
/// zero as soon as two vertices coincide.
pub fn ideal_volume(p0: &ProjPoint, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> f64 {
    let p = [p0.normalized(), p1.normalized(), p2.normalized(), p3.normalized()];
    for i in 0..4 {
        for j in 0..i {
            if (p[i].a * p[j].b - p[j].a * p[i].b).norm() <= COINCIDENCE_TOL {
                return 0.0;
            }
        }
    }
    ORIENTATION * dilog_bw(cross_ratio(p0, p1, p2, p3))
}

/// Volume of four vectors of `C^2` read as projective points; zero if any vector vanishes.
pub fn ideal_volume_of_vectors(v: [(Complex64, Complex64); 4]) -> f64 {
    let mut pts = [ProjPoint::infinity(); 4];
    for (slot, (a, b)) in pts.iter_mut().zip(v) {
        match ProjPoint::new(a, b) {
            Ok(p) => *slot = p,
            Err(_) => return 0.0,
        }
    }
    ideal_volume(&pts[0], &pts[1], &pts[2], &pts[3])
}

#[cfg(test)]
mod tests {
    use super::*;

    const V3_REF: f64 = 1.014_941_606_409_653_6;
    const CATALAN: f64 = 0.915_965_594_177_219;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vanishes_on_the_real_line() {
        for x in [0.37, -2.0, 5.0, 0.0, 1.0] {
            assert_eq!(dilog_bw_finite(c(x, 0.0)), 0.0);
        }
        assert_eq!(dilog_bw(ExtComplex::Infinity), 0.0);
    }

    #[test]
    fn reference_values() {
        assert!((v3() - V3_REF).abs() < 1e-15);
        assert!((dilog_bw_finite(c(0.0, 1.0)) - CATALAN).abs() < 1e-15);
    }

    #[test]
    fn branch_boundaries_are_continuous() {
        // |w| = 1/2 switches series; Re w = 1/2 and |z| = 1 switch symmetries
        for z in [c(0.5, 1e-9), c(0.0, 0.5), c(0.5, 0.5), c(0.5, 0.866), c(0.6, 0.8)] {
            let e = 1e-7;
            let d = dilog_bw_finite(z);
            for dz in [c(e, 0.0), c(0.0, e), c(-e, 0.0), c(0.0, -e)] {
                assert!((dilog_bw_finite(z + dz) - d).abs() < 1e-6, "jump near {z}");
            }
        }
    }

    #[test]
    fn cross_ratio_convention() {
        let z = c(0.3, -1.7);
        let cr = cross_ratio(
            &ProjPoint::infinity(),
            &ProjPoint::finite(c(0.0, 0.0)),
            &ProjPoint::finite(c(1.0, 0.0)),
            &ProjPoint::finite(z),
        );
        match cr {
            ExtComplex::Finite(w) => assert!((w - z).norm() < 1e-14),
            ExtComplex::Infinity => panic!("finite expected"),
        }
    }

    #[test]
    fn coincident_points() {
        let p = ProjPoint::finite(c(2.0, 1.0));
        let q = ProjPoint::finite(c(-1.0, 0.5));
        let r = ProjPoint::infinity();
        match cross_ratio(&p, &p, &q, &r) {
            ExtComplex::Finite(w) => assert!((w - c(1.0, 0.0)).norm() < 1e-14),
            ExtComplex::Infinity => panic!(),
        }
        assert_eq!(cross_ratio(&p, &q, &p, &r), ExtComplex::Finite(c(0.0, 0.0)));
        assert_eq!(cross_ratio(&p, &q, &r, &p), ExtComplex::Infinity);
        assert_eq!(cross_ratio(&p, &p, &p, &r), ExtComplex::Finite(c(0.0, 0.0)));
        assert_eq!(ideal_volume(&p, &q, &p, &r), 0.0);
    }

    #[test]
    fn regular_simplex_volume() {
        let v = ideal_volume(
            &ProjPoint::infinity(),
            &ProjPoint::finite(c(0.0, 0.0)),
            &ProjPoint::finite(c(1.0, 0.0)),
            &ProjPoint::finite(omega()),
        );
        assert!((v - V3_REF).abs() < 1e-14);
    }

    #[test]
    fn zero_vector_gives_zero_volume() {
        let o = (c(0.0, 0.0), c(0.0, 0.0));
        let v = ideal_volume_of_vectors([o, (c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0))]);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5+2i"), Some(c(0.5, 2.0)));
        assert_eq!(parse_complex("-1-i"), Some(c(-1.0, -1.0)));
        assert_eq!(parse_complex("3"), Some(c(3.0, 0.0)));
        assert_eq!(parse_complex("-2.5i"), Some(c(0.0, -2.5)));
        assert_eq!(parse_complex("1e-3+1e+2i"), Some(c(1e-3, 100.0)));
        assert_eq!(parse_complex("i"), Some(c(0.0, 1.0)));
        assert!(parse_complex("abc").is_none());
        assert!(ProjPoint::parse("inf").unwrap().approx_eq(&ProjPoint::infinity(), 0.0));
    }
}
