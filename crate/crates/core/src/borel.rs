//! The maps `t_J` and `T_k` from affine flags to configurations, and the
//! cocycle `B_n = T_3^* Vol` on quadruples of flags.

use crate::config::{boundary, vol3, BoundaryKind, Chain, Config};
use crate::error::{BorelError, Result};
use crate::exec::Exec;
use crate::flag::{Flag, FlagQuad};
use crate::hypvol::v3;
use crate::mathcore::{rref, Matrix, Scalar};

/// `n(n^2 - 1)/6`, the number of multi-indices with `j_0 + ... + j_3 = n - 2`.
pub fn bound_factor(n: usize) -> f64 {
    let n = n as f64;
    n * (n * n - 1.0) / 6.0
}

/// The sharp bound `n(n^2 - 1)/6 · v_3` on `|B_n|`.
pub fn bound(n: usize) -> f64 {
    bound_factor(n) * v3()
}

/// Reduction of `[F_0^{j_0} | ... | F_k^{j_k} | v_0^{j_0+1} ... v_k^{j_k+1}]`.
///
/// Rows of the echelon form with no pivot in the subspace block, read on the
/// vector block, are the canonical coordinates of the vectors in the quotient.
struct Quotient<S> {
    sub_dim: usize,
    config: Config<S>,
}

fn quotient<S: Scalar>(flags: &[Flag<S>], j: &[usize]) -> Quotient<S> {
    let n = flags[0].n();
    let width: usize = j.iter().sum();
    let len = flags.len();
    let mut m = Matrix::zeros(n, 0);
    for (f, &ji) in flags.iter().zip(j) {
        for c in 0..ji {
            m.push_column(f.vector(c));
        }
    }
    for (f, &ji) in flags.iter().zip(j) {
        m.push_column(f.vector(ji));
    }
    let red = rref(&m);
    let sub_dim = red.pivots.iter().take_while(|&&p| p < width).count();
    let rows = red.rank - sub_dim;
    let block = Matrix::from_fn(rows, len, |i, c| red.canonical.get(sub_dim + i, width + c).clone());
    Quotient { sub_dim, config: Config::of_span(&block) }
}

fn check_indices<S: Scalar>(flags: &[Flag<S>], j: &[usize]) -> Result<usize> {
    let n = flags.first().map(Flag::n).ok_or_else(|| BorelError::InvalidInput("empty flag tuple".into()))?;
    if flags.len() != j.len() {
        return Err(BorelError::DimensionMismatch(format!("{} flags but {} indices", flags.len(), j.len())));
    }
    if let Some(f) = flags.iter().find(|f| f.n() != n) {
        return Err(BorelError::DimensionMismatch(format!("flags in C^{n} and C^{} mixed", f.n())));
    }
    if let Some(&bad) = j.iter().find(|&&x| x >= n) {
        return Err(BorelError::IndexOutOfRange { index: bad, len: n });
    }
    Ok(n)
}

/// `t_J`: the vectors `v_i^{j_i+1}` in `⟨F_i^{j_i+1}⟩ / ⟨F_i^{j_i}⟩`.
pub fn t_multi<S: Scalar>(flags: &[Flag<S>], j: &[usize]) -> Result<Config<S>> {
    check_indices(flags, j)?;
    Ok(quotient(flags, j).config)
}

/// `T_k = Σ_J t_J` over `J ∈ [0, n-1]^{k+1}`, like terms collected.
pub fn big_t<S: Scalar>(flags: &[Flag<S>]) -> Result<Chain<S>> {
    let n = check_indices(flags, &vec![0; flags.len()])?;
    let len = flags.len();
    let mut out = Chain::new();
    for idx in 0..n.pow(len as u32) {
        let mut j = vec![0; len];
        let mut r = idx;
        for slot in j.iter_mut().rev() {
            *slot = r % n;
            r /= n;
        }
        out.add(1, quotient(flags, &j).config);
    }
    Ok(out)
}

/// `T_{k-1} ∂_k - D_k T_k` on a `(k+1)`-tuple of affine flags.
pub fn chain_map_defect<S: Scalar>(flags: &[Flag<S>]) -> Result<Chain<S>> {
    if flags.len() < 2 {
        return Err(BorelError::InvalidInput("need at least two flags".into()));
    }
    let mut out = Chain::new();
    for i in 0..flags.len() {
        let face: Vec<Flag<S>> = flags.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, f)| f.clone()).collect();
        out.add_chain(if i % 2 == 0 { 1 } else { -1 }, &big_t(&face)?);
    }
    for (c, t) in big_t(flags)?.terms() {
        out.add_chain(-c, &boundary(t, BoundaryKind::Full)?);
    }
    Ok(out)
}

/// One contributing summand of `B_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summand {
    pub j: [usize; 4],
    pub value: f64,
}

/// Summands with `j_0, j_1, j_2` fixed whose quotient is a plane.
///
/// `j_3` runs upward until the subspace block reaches dimension `n - 1`,
/// past which every quotient has dimension at most one.
fn summands_for<S: Scalar>(q: &FlagQuad<S>, head: [usize; 3], out: &mut Vec<Summand>) {
    let n = q.n();
    let flags = q.flags();
    for j3 in 0..n.saturating_sub(1) {
        let j = [head[0], head[1], head[2], j3];
        let quo = quotient(flags, &j);
        if quo.sub_dim + 1 >= n {
            break;
        }
        if quo.config.m() == 2 {
            out.push(Summand { j, value: vol3(&quo.config) });
        }
    }
}

fn heads(n: usize) -> Vec<[usize; 3]> {
    let top = n.saturating_sub(1);
    let mut out = Vec::with_capacity(top.pow(3));
    for a in 0..top {
        for b in 0..top {
            for c in 0..top {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Every multi-index whose quotient is two-dimensional, in lexicographic order.
pub fn borel_summands<S: Scalar>(q: &FlagQuad<S>) -> Vec<Summand> {
    let mut out = Vec::new();
    for h in heads(q.n()) {
        summands_for(q, h, &mut out);
    }
    out
}

/// `B_n(F_0, ..., F_3)`.
pub fn borel_bn<S: Scalar>(q: &FlagQuad<S>) -> f64 {
    borel_bn_with(q, Exec::Sequential)
}

/// [`borel_bn`] with the outer index triples spread over `exec`. The
/// summation order is fixed, so every executor returns the same bits.
pub fn borel_bn_with<S: Scalar>(q: &FlagQuad<S>, exec: Exec) -> f64 {
    let hs = heads(q.n());
    exec.sum(hs.len(), |i| {
        let mut terms = Vec::new();
        summands_for(q, hs[i], &mut terms);
        terms.iter().map(|s| s.value).sum()
    })
}

/// Outcome of the exhaustive rank test for general position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralPosition {
    pub general: bool,
    /// The decision is exact, or every float rank decision cleared its
    /// threshold by a wide margin.
    pub certified: bool,
}

/// `dim⟨F_0^{j_0}, ..., F_3^{j_3}⟩ = Σ j_i` whenever `Σ j_i ≤ n`.
pub fn is_general_position<S: Scalar>(q: &FlagQuad<S>) -> GeneralPosition {
    let n = q.n();
    let mut margin = f64::INFINITY;
    for j0 in 0..=n {
        for j1 in 0..=n - j0 {
            for j2 in 0..=n - j0 - j1 {
                for j3 in 0..=n - j0 - j1 - j2 {
                    let j = [j0, j1, j2, j3];
                    if j.iter().filter(|&&x| x > 0).count() < 2 {
                        continue;
                    }
                    let mut m = Matrix::zeros(n, 0);
                    for (f, &ji) in q.flags().iter().zip(&j) {
                        for c in 0..ji {
                            m.push_column(f.vector(c));
                        }
                    }
                    let red = rref(&m);
                    if red.rank < j0 + j1 + j2 + j3 {
                        return GeneralPosition { general: false, certified: S::EXACT || red.max_rejected < 1e-12 };
                    }
                    margin = margin.min(red.min_pivot);
                }
            }
        }
    }
    GeneralPosition { general: true, certified: S::EXACT || margin > 1e-6 }
}
