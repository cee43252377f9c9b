//! Seeded Monte-Carlo property suites.
//!
//! Sample `i` draws only from [`stream`]`(seed, i)` and outcomes are reduced
//! in sample order, so a report depends on the seed alone.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::{json, Value};

use crate::borel::{borel_bn, bound, bound_factor, chain_map_defect, is_general_position};
use crate::config::{boundary, eval_chain, vol3, BoundaryKind, Chain, Config};
use crate::error::{BorelError, Result};
use crate::exec::Exec;
use crate::flag::{Flag, FlagQuad};
use crate::hypvol::{ideal_volume, ProjPoint};
use crate::mathcore::{rank, Complex64, GaussRat, Matrix, Scalar};
use crate::projective::{b3_case, b3_projective_oracle, b3_projective_with_aux, B3Case};
use crate::sample::{random_point, random_spanning, stream, Sampled};
use crate::veronese::veronese_flag;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Cocycle,
    GlInvariance,
    Alternation,
    Bound,
    D4Vol,
    ChainMap,
    VeroneseValue,
    OracleB3,
    Relations,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Cocycle,
        Property::GlInvariance,
        Property::Alternation,
        Property::Bound,
        Property::D4Vol,
        Property::ChainMap,
        Property::VeroneseValue,
        Property::OracleB3,
        Property::Relations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Cocycle => "cocycle",
            Property::GlInvariance => "gl-invariance",
            Property::Alternation => "alternation",
            Property::Bound => "bound",
            Property::D4Vol => "d4vol",
            Property::ChainMap => "chainmap",
            Property::VeroneseValue => "veronese-value",
            Property::OracleB3 => "oracle-b3",
            Property::Relations => "relations",
        }
    }

    /// Residual tolerance used when none is given.
    pub fn default_tol(self) -> f64 {
        match self {
            Property::Cocycle | Property::GlInvariance | Property::Alternation | Property::VeroneseValue => 1e-8,
            Property::Bound | Property::D4Vol | Property::OracleB3 => 1e-9,
            Property::ChainMap | Property::Relations => 0.0,
        }
    }

    /// Suites whose identities are checked on exact chains regardless of mode.
    pub fn always_exact(self) -> bool {
        matches!(self, Property::ChainMap | Property::Relations)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = BorelError;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| BorelError::InvalidInput(format!("unknown property {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub property: Property,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Overrides [`Property::default_tol`].
    pub tol: Option<f64>,
    /// Rational inputs and exact linear algebra where the suite supports it.
    pub exact: bool,
    pub exec: Exec,
}

impl SuiteConfig {
    pub fn new(property: Property, n: usize, samples: usize, seed: u64) -> Self {
        SuiteConfig { property, n, samples, seed, tol: None, exact: false, exec: Exec::Parallel }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| self.property.default_tol())
    }
}

/// Result of one suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub property: Property,
    pub n: usize,
    pub samples: usize,
    pub failures: usize,
    pub max_abs_residual: f64,
    /// Property-specific maximum, e.g. `max |B_n| / bound` for `bound`.
    pub max_statistic: Option<f64>,
    pub seed: u64,
    pub tol: f64,
    pub exact: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": "verify",
            "property": self.property.name(),
            "n": self.n,
            "samples": self.samples,
            "failures": self.failures,
            "max_abs_residual": self.max_abs_residual,
            "seed": self.seed,
            "tol": self.tol,
            "exact": self.exact,
        });
        if let Some(s) = self.max_statistic {
            v["max_statistic"] = json!(s);
        }
        v
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Outcome {
    residual: f64,
    failed: bool,
    stat: Option<f64>,
}

impl Outcome {
    fn residual(r: f64, tol: f64) -> Self {
        Outcome { residual: r, failed: r.is_nan() || r > tol, stat: None }
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    let n = cfg.n;
    let min_n = match cfg.property {
        Property::D4Vol | Property::Relations => 0,
        _ => 2,
    };
    if n < min_n {
        return Err(BorelError::InvalidInput(format!("{} needs n >= {min_n}", cfg.property)));
    }
    if cfg.property == Property::OracleB3 && n != 3 {
        return Err(BorelError::InvalidInput("oracle-b3 is defined for n = 3 only".into()));
    }
    let tol = cfg.tol();
    let exact = cfg.exact || cfg.property.always_exact();
    let outcomes = cfg.exec.map(cfg.samples, |i| {
        let mut rng = stream(cfg.seed, i as u64);
        if exact {
            sample::<GaussRat>(cfg.property, n, i, tol, &mut rng)
        } else {
            sample::<Complex64>(cfg.property, n, i, tol, &mut rng)
        }
    });
    let mut report = Report {
        property: cfg.property,
        n,
        samples: cfg.samples,
        failures: 0,
        max_abs_residual: 0.0,
        max_statistic: None,
        seed: cfg.seed,
        tol,
        exact,
    };
    for o in outcomes {
        report.failures += usize::from(o.failed);
        report.max_abs_residual = report.max_abs_residual.max(o.residual);
        if let Some(s) = o.stat {
            report.max_statistic = Some(report.max_statistic.map_or(s, |m: f64| m.max(s)));
        }
    }
    Ok(report)
}

fn sample<S: Sampled>(p: Property, n: usize, index: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    match p {
        Property::Cocycle => cocycle::<S>(n, tol, rng),
        Property::GlInvariance => gl_invariance::<S>(n, tol, rng),
        Property::Alternation => alternation::<S>(n, tol, rng),
        Property::Bound => bound_check::<S>(n, tol, rng),
        Property::D4Vol => d4vol::<S>(2 + index % 2, tol, rng),
        Property::ChainMap => chain_map::<S>(n, rng),
        Property::VeroneseValue => veronese_value(n, tol, rng),
        Property::OracleB3 => oracle_b3::<S>(index, tol, rng),
        Property::Relations => relations::<S>(1 + index % 4, rng),
    }
}

fn quad_of<S: Scalar>(flags: Vec<Flag<S>>) -> FlagQuad<S> {
    FlagQuad::new(flags.try_into().expect("four flags")).expect("common dimension")
}

/// `Σ_i (-1)^i B_n(F_0, ..., F̂_i, ..., F_4)`.
pub fn cocycle_residual<S: Scalar>(flags: &[Flag<S>; 5]) -> f64 {
    (0..5)
        .map(|i| {
            let face: Vec<Flag<S>> = (0..5).filter(|&k| k != i).map(|k| flags[k].clone()).collect();
            let b = borel_bn(&quad_of(face));
            if i % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum::<f64>()
        .abs()
}

fn cocycle<S: Sampled>(n: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let flags: [Flag<S>; 5] = std::array::from_fn(|_| S::flag(n, rng));
    Outcome::residual(cocycle_residual(&flags), tol)
}

fn random_quad<S: Sampled>(n: usize, rng: &mut impl Rng) -> FlagQuad<S> {
    quad_of((0..4).map(|_| S::flag(n, rng)).collect())
}

fn random_invertible<S: Sampled>(n: usize, rng: &mut impl Rng) -> Matrix<S> {
    loop {
        let g = S::matrix(n, n, rng);
        if rank(&g) == n {
            return g;
        }
    }
}

fn nonzero<S: Sampled>(rng: &mut impl Rng) -> S {
    loop {
        let x = S::matrix(1, 1, rng).get(0, 0).clone();
        if !x.is_negligible(1e-3) {
            return x;
        }
    }
}

/// Invariance under `GL(n)` and under rescaling of the affine lift.
fn gl_invariance<S: Sampled>(n: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let q = random_quad::<S>(n, rng);
    let g = random_invertible::<S>(n, rng);
    let slot = rng.random_range(0..4);
    let col = rng.random_range(0..n);
    let lambda = nonzero::<S>(rng);
    let mut flags = q.flags().clone();
    flags[slot] = flags[slot].rescaled(col, &lambda);
    let b = borel_bn(&q);
    let moved = (borel_bn(&q.transform(&g)) - b).abs();
    let lifted = (borel_bn(&FlagQuad::new(flags).expect("same n")) - b).abs();
    Outcome::residual(moved.max(lifted), tol)
}

/// All 24 permutations of `0..4` with their signs.
pub fn permutations4() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions = (0..4).flat_map(|i| (0..i).map(move |j| (j, i))).filter(|&(j, i)| p[j] > p[i]).count();
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    out
}

fn alternation<S: Sampled>(n: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let q = random_quad::<S>(n, rng);
    let b = borel_bn(&q);
    let r = permutations4()
        .into_iter()
        .map(|(p, sign)| (borel_bn(&q.permuted(p)) - sign * b).abs())
        .fold(0.0, f64::max);
    Outcome::residual(r, tol)
}

/// `|B_n| ≤ bound`; near-maximal samples must also be in general position.
fn bound_check<S: Sampled>(n: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let q = random_quad::<S>(n, rng);
    let b = borel_bn(&q).abs();
    let excess = (b - bound(n)).max(0.0);
    let near_max = b > bound(n) - 1e-6;
    let failed = excess > tol || (near_max && !is_general_position(&q).general);
    Outcome { residual: excess, failed, stat: Some(b / bound(n)) }
}

fn d4vol<S: Sampled>(m: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let c = Config::of_span(&random_spanning::<S>(m, 4, rng));
    Outcome::residual(d4vol_residual(&c), tol)
}

/// `|Vol(D_4 τ)|` for a 5-tuple `τ`.
pub fn d4vol_residual<S: Scalar>(tau: &Config<S>) -> f64 {
    let ch = boundary(tau, BoundaryKind::Full).expect("5-tuple");
    eval_chain(vol3, &ch, 3).expect("4-tuples").abs()
}

fn chain_size<S: Scalar>(ch: &Chain<S>) -> f64 {
    ch.terms().iter().map(|(c, _)| c.unsigned_abs() as f64).sum()
}

/// Odd `k = 3`: the defect vanishes. Even `k = 2`: it is `n^2 [0; (0, 0)]`.
fn chain_map<S: Sampled>(n: usize, rng: &mut impl Rng) -> Outcome {
    let flags: Vec<Flag<S>> = (0..4).map(|_| S::flag(n, rng)).collect();
    let odd = chain_map_defect(&flags).expect("four flags");
    let even = chain_map_defect(&flags[..3]).expect("three flags");
    let mut anomaly = Chain::new();
    anomaly.add((n * n) as i64, Config::zero_space(2));
    let mut diff = even;
    diff.add_chain(-1, &anomaly);
    let r = chain_size(&odd) + chain_size(&diff);
    Outcome { residual: r, failed: r != 0.0, stat: None }
}

fn veronese_value(n: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let p: [ProjPoint; 4] = std::array::from_fn(|_| random_point(rng));
    let q = FlagQuad::new(p.map(|x| veronese_flag(&x, n))).expect("common n");
    let want = bound_factor(n) * ideal_volume(&p[0], &p[1], &p[2], &p[3]);
    Outcome::residual((borel_bn(&q) - want).abs() / bound_factor(n), tol)
}

fn dual_quad<S: Scalar>(q: &FlagQuad<S>) -> FlagQuad<S> {
    FlagQuad::new(q.flags().clone().map(|f| f.dual())).expect("common n")
}

/// `|b3_projective_oracle(q) - B_3(q^⊥)|`, plus the spread over two
/// auxiliary lines when the lines of `q` are concurrent.
pub fn oracle_b3_residual<S: Sampled>(q: &FlagQuad<S>, rng: &mut impl Rng) -> f64 {
    let oracle = b3_projective_oracle(q).expect("n = 3");
    let mut r = (oracle - borel_bn(&dual_quad(q))).abs();
    if b3_case(q).expect("n = 3") == B3Case::Concurrent {
        let m = S::matrix(3, 1, rng);
        let aux = [m.get(0, 0).clone(), m.get(1, 0).clone(), m.get(2, 0).clone()];
        if let Ok(other) = b3_projective_with_aux(q, Some(aux)) {
            r = r.max((other - oracle).abs());
        }
    }
    r
}

fn flag_from<S: Scalar>(a: &[S], b: &[S], c: &[S]) -> Option<Flag<S>> {
    Flag::new(Matrix::from_columns(3, vec![a.to_vec(), b.to_vec(), c.to_vec()])).ok()
}

fn combo<S: Scalar>(a: &S, x: &[S], b: &S, y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(u, v)| a.clone() * u.clone() + b.clone() * v.clone()).collect()
}

/// Flags with `L_0 = L_2` and `P_0 ≠ P_2`.
pub fn equal_lines_quad<S: Sampled>(rng: &mut impl Rng) -> FlagQuad<S> {
    loop {
        let f0 = S::flag(3, rng);
        let (a, b) = (nonzero::<S>(rng), nonzero::<S>(rng));
        let p2 = combo(&a, f0.vector(0), &b, f0.vector(1));
        let Some(f2) = flag_from(&p2, f0.vector(0), f0.vector(2)) else { continue };
        let q = FlagQuad::new([f0, S::flag(3, rng), f2, S::flag(3, rng)]).expect("n = 3");
        if matches!(b3_case(&q), Ok(B3Case::EqualLines(0))) {
            return q;
        }
    }
}

/// Four flags whose lines pass through a common point.
pub fn concurrent_quad<S: Sampled>(rng: &mut impl Rng) -> FlagQuad<S> {
    loop {
        let x = S::matrix(3, 1, rng).col(0).to_vec();
        let flags: Vec<Flag<S>> = (0..4)
            .filter_map(|_| {
                let w = S::matrix(3, 1, rng).col(0).to_vec();
                let p = combo(&nonzero::<S>(rng), &x, &nonzero::<S>(rng), &w);
                let extra = S::matrix(3, 1, rng).col(0).to_vec();
                flag_from(&p, &x, &extra)
            })
            .collect();
        if flags.len() < 4 {
            continue;
        }
        let q = quad_of(flags);
        if b3_case(&q) == Ok(B3Case::Concurrent) {
            return q;
        }
    }
}

/// Sample `i` is generic for `i ≡ 0`, has two equal lines for `i ≡ 1` and
/// concurrent lines for `i ≡ 2 (mod 3)`.
fn oracle_b3<S: Sampled>(index: usize, tol: f64, rng: &mut impl Rng) -> Outcome {
    let q = match index % 3 {
        0 => random_quad::<S>(3, rng),
        1 => equal_lines_quad::<S>(rng),
        _ => concurrent_quad::<S>(rng),
    };
    Outcome::residual(oracle_b3_residual(&q, rng), tol)
}

/// A spanning 5-tuple in `C^m` built to hit degenerate cases often: vectors
/// are zero, multiples of earlier ones, or random with equal odds.
pub fn degenerate_friendly_config<S: Sampled>(m: usize, rng: &mut impl Rng) -> Config<S> {
    loop {
        let mut cols: Vec<Vec<S>> = Vec::with_capacity(5);
        for k in 0..5 {
            let v = match rng.random_range(0..4) {
                0 => vec![S::zero(); m],
                1 if k > 0 => {
                    let src = cols[rng.random_range(0..k)].clone();
                    let c = nonzero::<S>(rng);
                    src.into_iter().map(|x| x * c.clone()).collect()
                }
                _ => S::matrix(m, 1, rng).col(0).to_vec(),
            };
            cols.push(v);
        }
        let raw = Matrix::from_columns(m, cols);
        if rank(&raw) == m {
            return Config::of_span(&raw);
        }
    }
}

/// Number of violated face relations and boundary identities on `c`.
///
/// For `0 ≤ i ≤ j ≤ k - 1`: `ε_j ε_i = ε_i ε_{j+1}`, `η_j η_i = η_i η_{j+1}`,
/// `η_j ε_i = ε_i η_{j+1}` and `ε_j η_i = η_i ε_{j+1}`; then `∂∂`, `dd`,
/// `∂d + d∂` and `DD` vanish.
pub fn relation_violations<S: Scalar>(c: &Config<S>) -> usize {
    let k = c.k();
    let eps = |x: &Config<S>, i: usize| x.face_epsilon(i).expect("index in range");
    let eta = |x: &Config<S>, i: usize| x.face_eta(i).expect("index in range");
    let mut bad = 0;
    for j in 0..k {
        for i in 0..=j {
            bad += usize::from(!eps(&eps(c, i), j).approx_eq(&eps(&eps(c, j + 1), i)));
            bad += usize::from(!eta(&eta(c, i), j).approx_eq(&eta(&eta(c, j + 1), i)));
            bad += usize::from(!eta(&eps(c, i), j).approx_eq(&eps(&eta(c, j + 1), i)));
            bad += usize::from(!eps(&eta(c, i), j).approx_eq(&eta(&eps(c, j + 1), i)));
        }
    }
    let single = Chain::single(c.clone());
    let apply = |ch: &Chain<S>, kind| ch.boundary(kind).expect("long enough");
    let (p, d, full) = (BoundaryKind::Partial, BoundaryKind::Quotient, BoundaryKind::Full);
    bad += usize::from(!apply(&apply(&single, p), p).is_empty());
    bad += usize::from(!apply(&apply(&single, d), d).is_empty());
    let mut mixed = apply(&apply(&single, d), p);
    mixed.add_chain(1, &apply(&apply(&single, p), d));
    bad += usize::from(!mixed.is_empty());
    bad += usize::from(!apply(&apply(&single, full), full).is_empty());
    bad
}

fn relations<S: Sampled>(m: usize, rng: &mut impl Rng) -> Outcome {
    let r = relation_violations(&degenerate_friendly_config::<S>(m, rng)) as f64;
    Outcome { residual: r, failed: r != 0.0, stat: None }
}
