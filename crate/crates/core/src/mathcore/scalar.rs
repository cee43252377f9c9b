//! Complex scalars with an exact (Gaussian rational) and a floating backend.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

/// Field element used by every matrix routine in the crate.
///
/// The exact backend never rounds; the float backend compares against zero
/// only through [`Scalar::is_negligible`] with a caller-supplied threshold.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for the exact backend.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_gauss_int(re: i64, im: i64) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_gauss_int(v, 0)
    }

    /// `|z|` as a double, used for pivot selection and scale estimates.
    fn modulus(&self) -> f64;

    /// Exact zero for the rational backend; `|z| < threshold` for floats.
    fn is_negligible(&self, threshold: f64) -> bool;

    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;

    /// Entry-wise equality: exact for rationals, within `tol` for floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `[re, im]` as JSON: decimal strings in exact mode, doubles otherwise.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, String>;
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_gauss_int(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, threshold: f64) -> bool {
        self.norm() < threshold
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        let (re, im) = json_pair(v)?;
        Ok(Complex64::new(json_to_f64(re)?, json_to_f64(im)?))
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{}i)", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        assert!(!rhs.is_zero(), "division by exact zero");
        let d = rhs.norm_sqr();
        let num = self * rhs.conj_owned();
        GaussRat { re: num.re / &d, im: num.im / d }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl GaussRat {
    fn conj_owned(self) -> GaussRat {
        GaussRat { re: self.re, im: -self.im }
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn rat_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("not a rational literal: {s:?}");
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }

    fn from_gauss_int(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_negligible(&self, _threshold: f64) -> bool {
        self.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn conj(&self) -> Self {
        self.clone().conj_owned()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_json(&self) -> Value {
        serde_json::json!([rat_to_string(&self.re), rat_to_string(&self.im)])
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        let (re, im) = json_pair(v)?;
        Ok(GaussRat { re: json_to_rational(re)?, im: json_to_rational(im)? })
    }
}

fn json_pair(v: &Value) -> Result<(&Value, &Value), String> {
    match v.as_array() {
        Some(a) if a.len() == 2 => Ok((&a[0], &a[1])),
        _ => Err(format!("expected a complex number [re, im], found {v}")),
    }
}

fn json_to_f64(v: &Value) -> Result<f64, String> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| format!("bad number {n}")),
        Value::String(s) => parse_rational(s).map(|r| rat_to_f64(&r)),
        other => Err(format!("expected a number, found {other}")),
    }
}

fn json_to_rational(v: &Value) -> Result<BigRational, String> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                let f = n.as_f64().ok_or_else(|| format!("bad number {n}"))?;
                BigRational::from_float(f).ok_or_else(|| format!("non-finite number {f}"))
            }
        }
        other => Err(format!("expected a rational, found {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rational_field_ops() {
        let a = GaussRat::from_gauss_int(1, 2);
        let b = GaussRat::from_gauss_int(3, -1);
        let q = a.clone() / b.clone();
        assert_eq!(q * b, a);
        assert_eq!(GaussRat::from_gauss_int(0, 1) * GaussRat::from_gauss_int(0, 1), GaussRat::from_i64(-1));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn json_round_trip() {
        let z = GaussRat::from_ratios((1, 3), (-5, 2));
        assert_eq!(GaussRat::from_json(&z.to_json()).unwrap(), z);
        let w = Complex64::new(0.5, -1.25);
        assert_eq!(<Complex64 as Scalar>::from_json(&Scalar::to_json(&w)).unwrap(), w);
    }
}
