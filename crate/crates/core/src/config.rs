//! The configuration complex: `GL(m)`-orbits of spanning vector tuples, the
//! two families of face maps, the boundaries `∂`, `d` and `D = ∂ - d`, and
//! the volume cochain on 4-tuples.

use serde_json::Value;

use crate::error::{BorelError, Result};
use crate::hypvol::ideal_volume_of_vectors;
use crate::mathcore::{quotient_coords, rref, Matrix, Scalar, Subspace, CANON_TOL, PIVOT_TOL};

/// A point of `σ_k(m)`: a spanning `(k+1)`-tuple of vectors in `C^m` up to `GL(m)`.
///
/// The stored matrix is the reduced row-echelon form of any representative,
/// so equal orbits have equal matrices. Zero columns are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Config<S> {
    vectors: Matrix<S>,
    pivots: Vec<usize>,
}

/// Canonical representative of `raw`, provided its columns span `C^rows`.
pub fn make_config<S: Scalar>(raw: &Matrix<S>) -> Result<Config<S>> {
    let red = rref(raw);
    if red.rank < raw.rows() {
        return Err(BorelError::NonSpanning { rank: red.rank, dim: raw.rows() });
    }
    Ok(Config { vectors: red.canonical, pivots: red.pivots })
}

impl<S: Scalar> Config<S> {
    /// The configuration `[⟨columns⟩; columns]` of an arbitrary tuple: the
    /// tuple is read inside its own span.
    pub fn of_span(raw: &Matrix<S>) -> Self {
        let red = rref(raw);
        let vectors = Matrix::from_fn(red.rank, raw.cols(), |i, j| red.canonical.get(i, j).clone());
        Config { vectors, pivots: red.pivots }
    }

    /// `[0; (0, ..., 0)]` with `len` zero vectors.
    pub fn zero_space(len: usize) -> Self {
        Config { vectors: Matrix::zeros(0, len), pivots: Vec::new() }
    }

    /// Ambient dimension `m`.
    pub fn m(&self) -> usize {
        self.vectors.rows()
    }

    /// Tuple length minus one.
    pub fn k(&self) -> usize {
        self.vectors.cols().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.vectors.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.cols() == 0
    }

    pub fn vectors(&self) -> &Matrix<S> {
        &self.vectors
    }

    pub fn approx_eq(&self, other: &Config<S>) -> bool {
        self.pivots == other.pivots && self.vectors.approx_eq(&other.vectors, CANON_TOL)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(BorelError::IndexOutOfRange { index: i, len: self.len() });
        }
        Ok(())
    }

    /// `ε_i`: drop vector `i` and pass to the span of the rest.
    pub fn face_epsilon(&self, i: usize) -> Result<Config<S>> {
        self.check_index(i)?;
        Ok(Config::of_span(&self.vectors.without_column(i)))
    }

    /// `η_i`: drop vector `i` and pass to the quotient by the line it spans
    /// (by the zero space when it vanishes).
    pub fn face_eta(&self, i: usize) -> Result<Config<S>> {
        self.check_index(i)?;
        let line = Subspace::span(&self.vectors.select_columns(&[i]));
        let rest = quotient_coords(&self.vectors.without_column(i), &line)?;
        Ok(Config::of_span(&rest))
    }

    /// The tuple reordered so that new position `p` holds old vector `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Config<S> {
        Config::of_span(&self.vectors.select_columns(perm))
    }

    pub fn is_zero_vector(&self, j: usize) -> bool {
        self.vectors.is_zero_column(j, PIVOT_TOL * self.vectors.scale())
    }

    /// `{"m": int, "vectors": [columns]}`.
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "m": self.m(), "vectors": self.vectors.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| BorelError::schema(".m", "expected a non-negative integer"))? as usize;
        let vectors = v.get("vectors").ok_or_else(|| BorelError::schema(".vectors", "missing"))?;
        let raw = Matrix::<S>::from_json(vectors, Some(m)).map_err(|e| e.within(".vectors"))?;
        make_config(&raw)
    }
}

/// Which boundary operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    /// `∂ = Σ (-1)^i ε_i`
    Partial,
    /// `d = Σ (-1)^i η_i`
    Quotient,
    /// `D = ∂ - d`
    Full,
}

/// A finite integer combination of configurations, like terms collected.
#[derive(Clone, Debug, Default)]
pub struct Chain<S> {
    terms: Vec<(i64, Config<S>)>,
}

impl<S: Scalar> Chain<S> {
    pub fn new() -> Self {
        Chain { terms: Vec::new() }
    }

    pub fn single(c: Config<S>) -> Self {
        let mut ch = Chain::new();
        ch.add(1, c);
        ch
    }

    pub fn add(&mut self, coeff: i64, c: Config<S>) {
        if coeff == 0 {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, t)| t.approx_eq(&c)) {
            self.terms[pos].0 += coeff;
            if self.terms[pos].0 == 0 {
                self.terms.remove(pos);
            }
        } else {
            self.terms.push((coeff, c));
        }
    }

    pub fn add_chain(&mut self, coeff: i64, other: &Chain<S>) {
        for (c, t) in &other.terms {
            self.add(coeff * c, t.clone());
        }
    }

    pub fn terms(&self) -> &[(i64, Config<S>)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_of(&self, c: &Config<S>) -> i64 {
        self.terms.iter().find(|(_, t)| t.approx_eq(c)).map_or(0, |(k, _)| *k)
    }

    /// `self - other` is the empty chain.
    pub fn same_as(&self, other: &Chain<S>) -> bool {
        let mut diff = self.clone();
        diff.add_chain(-1, other);
        diff.is_empty()
    }

    /// Termwise boundary.
    pub fn boundary(&self, kind: BoundaryKind) -> Result<Chain<S>> {
        let mut out = Chain::new();
        for (c, t) in &self.terms {
            out.add_chain(*c, &boundary(t, kind)?);
        }
        Ok(out)
    }

    /// `[{coeff, config}]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(c, t)| serde_json::json!({ "coeff": c, "config": t.to_json() }))
                .collect(),
        )
    }
}

impl<S: Scalar> FromIterator<(i64, Config<S>)> for Chain<S> {
    fn from_iter<T: IntoIterator<Item = (i64, Config<S>)>>(iter: T) -> Self {
        let mut ch = Chain::new();
        for (c, t) in iter {
            ch.add(c, t);
        }
        ch
    }
}

/// `∂c`, `dc` or `Dc` with like terms collected.
pub fn boundary<S: Scalar>(c: &Config<S>, kind: BoundaryKind) -> Result<Chain<S>> {
    if c.k() < 1 {
        return Err(BorelError::InvalidInput("boundary needs a tuple of at least two vectors".into()));
    }
    let mut out = Chain::new();
    for i in 0..c.len() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        if kind != BoundaryKind::Quotient {
            out.add(sign, c.face_epsilon(i)?);
        }
        if kind != BoundaryKind::Partial {
            let s = if kind == BoundaryKind::Full { -sign } else { sign };
            out.add(s, c.face_eta(i)?);
        }
    }
    Ok(out)
}

/// The volume cochain on `σ_3`: ideal volume of the four vectors when `m = 2`
/// and none vanishes, zero otherwise.
pub fn vol3<S: Scalar>(c: &Config<S>) -> f64 {
    assert_eq!(c.len(), 4, "vol3 is defined on 4-tuples");
    if c.m() != 2 || (0..4).any(|j| c.is_zero_vector(j)) {
        return 0.0;
    }
    let v = c.vectors();
    let col = |j: usize| (v.get(0, j).to_c64(), v.get(1, j).to_c64());
    ideal_volume_of_vectors([col(0), col(1), col(2), col(3)])
}

/// `Σ coeff · f(config)`, rejecting terms whose tuple length is not `k + 1`.
pub fn eval_chain<S: Scalar>(f: impl Fn(&Config<S>) -> f64, ch: &Chain<S>, k: usize) -> Result<f64> {
    let mut sum = 0.0;
    for (coeff, c) in ch.terms() {
        if c.len() != k + 1 {
            return Err(BorelError::DimensionMismatch(format!(
                "cochain on {}-tuples evaluated on a {}-tuple",
                k + 1,
                c.len()
            )));
        }
        sum += *coeff as f64 * f(c);
    }
    Ok(sum)
}

/// Number of `k`-tuples of non-negative integers summing to `n`.
pub fn compositions(k: usize, n: usize) -> Result<u128> {
    if k == 0 {
        return Err(BorelError::InvalidInput("compositions need k >= 1".into()));
    }
    // C(n + k - 1, k - 1)
    let mut acc: u128 = 1;
    for i in 1..k as u128 {
        acc = acc * (n as u128 + i) / i;
    }
    Ok(acc)
}
