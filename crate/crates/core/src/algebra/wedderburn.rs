//! Recovery of the block structure `sum_k M_{n_k} (x) 1_{m_k}` of a concrete
//! *-algebra of `d x d` matrices.
//!
//! The center is found by a linear solve, split into minimal central
//! projections with a random self-adjoint central element, and every central
//! summand is split further with a random self-adjoint element of the
//! compressed algebra. Matrix units between the resulting eigenspaces give the
//! unitary change of basis.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AlgebraElement, BlockSpec, MultiMatrixAlgebra, TraceWeights};
use crate::closure::WordClosure;
use crate::error::{Error, Result};
use crate::linalg::{
    flatten, gaussian_c, hermitian_eigen, select_columns, stacked_svd, CMat, SpanBuilder, ZERO,
};
use crate::tol::{classify_strict, RankCall, SPAN_REL};

/// Seed used when callers do not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

const MAX_ATTEMPTS: usize = 8;

/// Block form of a concrete matrix *-algebra.
#[derive(Debug, Clone)]
pub struct Decomposition {
    algebra: MultiMatrixAlgebra,
    multiplicities: Vec<usize>,
    unitary: CMat,
}

impl Decomposition {
    /// The abstract algebra, carrying the trace induced by `Tr / d`.
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn block_sizes(&self) -> &[usize] {
        self.algebra.block_sizes()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Unitary whose columns exhibit the block form.
    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn ambient_dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// Abstract image of a concrete member of the algebra.
    pub fn forward(&self, x: &CMat) -> AlgebraElement {
        let y = self.unitary.adjoint() * x * &self.unitary;
        let mut off = 0;
        let mut blocks = Vec::new();
        for (&n, &m) in self.algebra.block_sizes().iter().zip(&self.multiplicities) {
            let b = CMat::from_fn(n, n, |i, j| {
                let mut s = ZERO;
                for t in 0..m {
                    s += y[(off + i * m + t, off + j * m + t)];
                }
                s / m as f64
            });
            blocks.push(b);
            off += n * m;
        }
        self.algebra.element(blocks).expect("shapes follow the decomposition")
    }

    /// Like [`forward`](Self::forward) but rejects matrices outside the algebra.
    pub fn forward_checked(&self, x: &CMat) -> Result<AlgebraElement> {
        let a = self.forward(x);
        let back = self.backward(&a);
        let res = (&back - x).norm() / x.norm().max(1.0);
        if res > 1e-8 {
            return Err(Error::NotSubalgebra(format!(
                "matrix is not in the decomposed algebra (residual {res:.3e})"
            )));
        }
        Ok(a)
    }

    /// Concrete matrix of an abstract element.
    pub fn backward(&self, x: &AlgebraElement) -> CMat {
        let d = self.ambient_dim();
        let mut y = CMat::zeros(d, d);
        let mut off = 0;
        for (k, (&n, &m)) in self
            .algebra
            .block_sizes()
            .iter()
            .zip(&self.multiplicities)
            .enumerate()
        {
            let b = x.block(k);
            for i in 0..n {
                for j in 0..n {
                    for t in 0..m {
                        y[(off + i * m + t, off + j * m + t)] = b[(i, j)];
                    }
                }
            }
            off += n * m;
        }
        &self.unitary * y * self.unitary.adjoint()
    }
}

/// Decomposes the unital *-algebra generated by `generators`.
pub fn wedderburn_decompose(generators: &[CMat], seed: u64) -> Result<Decomposition> {
    let d = check_square(generators)?;
    let mut all: Vec<CMat> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        all.push(g.clone());
        all.push(g.adjoint());
    }
    if all.is_empty() {
        all.push(CMat::identity(d, d));
    }
    let closure = WordClosure::generate(&all, true, SPAN_REL);
    decompose_basis(&closure.orthonormal_basis(), &all, seed)
}

/// Decomposes the algebra spanned by `basis`, which must already be closed
/// under products and adjoints. The unit is adjoined if missing.
pub fn decompose_closed(basis: &[CMat], seed: u64) -> Result<Decomposition> {
    let d = check_square(basis)?;
    let mut span = SpanBuilder::new(d * d);
    for b in basis {
        span.try_push(&flatten(b), SPAN_REL);
    }
    let mut worst: f64 = 0.0;
    for a in basis {
        worst = worst.max(span.relative_residual(&flatten(&a.adjoint())));
        for b in basis {
            let scale = (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max(span.residual(&flatten(&(a * b))) / scale);
        }
    }
    if worst > SPAN_REL {
        return Err(Error::NotStarClosed { residual: worst });
    }
    span.try_push(&flatten(&CMat::identity(d, d)), SPAN_REL);
    let ortho: Vec<CMat> = span
        .basis()
        .iter()
        .map(|v| CMat::from_column_slice(d, d, v.as_slice()))
        .collect();
    decompose_basis(&ortho, &ortho, seed)
}

fn check_square(ms: &[CMat]) -> Result<usize> {
    let d = ms.first().map(|m| m.nrows()).ok_or_else(|| {
        Error::ShapeMismatch("at least one matrix is required".into())
    })?;
    for m in ms {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "expected {d}x{d} matrices, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(d)
}

/// Rank of a column set with the strict undetermined band.
fn strict_rank(cols: &[CMat]) -> Result<usize> {
    if cols.is_empty() {
        return Ok(0);
    }
    let r = cols[0].nrows() * cols[0].ncols();
    let mut m = CMat::zeros(r, cols.len());
    for (c, x) in cols.iter().enumerate() {
        m.set_column(c, &flatten(x));
    }
    let (s, _) = stacked_svd(&[m], cols.len());
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    let mut rank = 0;
    for v in s {
        if classify_strict(v / smax)? == RankCall::NonZero {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Splits ascending eigenvalues into clusters using the strict band on gaps.
fn strict_clusters(vals: &[f64]) -> Result<Vec<Vec<usize>>> {
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut out: Vec<Vec<usize>> = vec![];
    for i in 0..vals.len() {
        if i == 0 {
            out.push(vec![0]);
            continue;
        }
        match classify_strict((vals[i] - vals[i - 1]) / scale)? {
            RankCall::Zero => out.last_mut().unwrap().push(i),
            RankCall::NonZero => out.push(vec![i]),
        }
    }
    Ok(out)
}

fn random_selfadjoint_combo(basis: &[CMat], rng: &mut ChaCha8Rng) -> CMat {
    let n = basis[0].nrows();
    let mut h = CMat::zeros(n, n);
    // complex coefficients: the Hermitian parts of a complex basis alone
    // need not span the self-adjoint part of the algebra
    for b in basis {
        let c = gaussian_c(rng);
        h += b * c + b.adjoint() * c.conj();
    }
    h
}

fn decompose_basis(basis: &[CMat], commute_with: &[CMat], seed: u64) -> Result<Decomposition> {
    let d = basis[0].nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // center: combinations of the basis commuting with every generator
    let m = basis.len();
    let stacks: Vec<CMat> = commute_with
        .iter()
        .map(|g| {
            let mut k = CMat::zeros(d * d, m);
            for (i, b) in basis.iter().enumerate() {
                k.set_column(i, &flatten(&(b * g - g * b)));
            }
            k
        })
        .collect();
    let (s, vt) = stacked_svd(&stacks, m);
    // |[b, g]| <= 2 |g| for orthonormal b; measuring against the generators
    // keeps an abelian algebra (all commutators at rounding level) from being
    // judged against its own noise
    let gmax = commute_with.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let scale = s.iter().cloned().fold(gmax, f64::max);
    let mut center: Vec<CMat> = Vec::new();
    for (i, &sv) in s.iter().enumerate() {
        let zero = scale == 0.0 || classify_strict(sv / scale)? == RankCall::Zero;
        if zero {
            let mut z = CMat::zeros(d, d);
            for (j, b) in basis.iter().enumerate() {
                z += b * vt[(i, j)].conj();
            }
            center.push(z);
        }
    }
    let n_central = center.len();

    // minimal central projections
    let mut last_err = None;
    let mut central_ranges: Option<Vec<CMat>> = None;
    for _ in 0..MAX_ATTEMPTS {
        let h = random_selfadjoint_combo(&center, &mut rng);
        let (vals, vecs) = hermitian_eigen(&h);
        match strict_clusters(&vals) {
            Ok(groups) if groups.len() == n_central => {
                central_ranges = Some(groups.iter().map(|g| select_columns(&vecs, g)).collect());
                break;
            }
            Ok(groups) => {
                last_err = Some(Error::RankDeficiencyUndetermined {
                    value: groups.len() as f64,
                    lo: crate::tol::BAND_LO,
                    hi: crate::tol::BAND_HI,
                })
            }
            Err(e) => last_err = Some(e),
        }
    }
    let central_ranges = central_ranges.ok_or_else(|| last_err.unwrap())?;

    let mut parts: Vec<(usize, usize, CMat)> = Vec::new();
    for v in &central_ranges {
        let r = v.ncols();
        let compressed: Vec<CMat> = basis.iter().map(|b| v.adjoint() * b * v).collect();
        let dim = strict_rank(&compressed)?;
        let n = (dim as f64).sqrt().round() as usize;
        if n == 0 || n * n != dim || r % n != 0 {
            return Err(Error::NotStarClosed { residual: dim as f64 });
        }
        let mult = r / n;
        if n == 1 {
            parts.push((1, mult, v.clone()));
            continue;
        }
        let mut cols = None;
        let mut last = None;
        for _ in 0..MAX_ATTEMPTS {
            match split_factor(&compressed, n, mult, &mut rng) {
                Ok(w) => {
                    cols = Some(v * w);
                    break;
                }
                Err(e) => last = Some(e),
            }
        }
        let cols = cols.ok_or_else(|| last.unwrap())?;
        parts.push((n, mult, cols));
    }
    parts.sort_by_key(|p| p.0);

    let mut unitary = CMat::zeros(d, d);
    let mut off = 0;
    for (_, _, cols) in &parts {
        unitary.view_mut((0, off), (d, cols.ncols())).copy_from(cols);
        off += cols.ncols();
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.0).collect();
    let mults: Vec<usize> = parts.iter().map(|p| p.1).collect();
    let weights: Vec<f64> = mults.iter().map(|&m| m as f64 / d as f64).collect();
    let algebra = MultiMatrixAlgebra::new(BlockSpec::new(sizes)?, TraceWeights::new(weights))?;
    Ok(Decomposition { algebra, multiplicities: mults, unitary })
}

/// Orthonormal columns exhibiting a factor `M_n (x) 1_mult` acting on `C^{n*mult}`.
fn split_factor(basis: &[CMat], n: usize, mult: usize, rng: &mut ChaCha8Rng) -> Result<CMat> {
    let a = random_selfadjoint_combo(basis, rng);
    let (vals, vecs) = hermitian_eigen(&a);
    let groups = strict_clusters(&vals)?;
    if groups.len() != n || groups.iter().any(|g| g.len() != mult) {
        return Err(Error::RankDeficiencyUndetermined {
            value: groups.len() as f64,
            lo: crate::tol::BAND_LO,
            hi: crate::tol::BAND_HI,
        });
    }
    let w: Vec<CMat> = groups.iter().map(|g| select_columns(&vecs, g)).collect();
    let r = n * mult;
    let mut b = CMat::zeros(r, r);
    for x in basis {
        b += x * gaussian_c(rng);
    }
    let mut out = CMat::zeros(r, r);
    out.view_mut((0, 0), (r, mult)).copy_from(&w[0]);
    let bn = b.norm();
    for j in 1..n {
        let t = w[j].adjoint() * &b * &w[0];
        if t.norm() <= 1e-6 * bn {
            return Err(Error::RankDeficiencyUndetermined {
                value: t.norm() / bn,
                lo: crate::tol::BAND_LO,
                hi: crate::tol::BAND_HI,
            });
        }
        // unitary polar factor of t
        let svd = t.svd(true, true);
        let u = svd.u.unwrap() * svd.v_t.unwrap();
        let cols = &w[j] * u;
        out.view_mut((0, j * mult), (r, mult)).copy_from(&cols);
    }
    Ok(out)
}
