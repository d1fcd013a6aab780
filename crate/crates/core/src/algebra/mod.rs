//! Multi-matrix algebras `M = M_{n_1} + ... + M_{n_r}` with faithful traces.
//!
//! Elements are stored blockwise. The fixed orthonormal trace basis of an
//! algebra is the family of scaled matrix units `E^k_{ij} / sqrt(w_k)`, ordered
//! by block, then row, then column; coordinates against this basis identify
//! `M` with `C^D`, `D = sum n_k^2`, isometrically for `<x, y> = tr(y* x)`.

mod automorphism;
mod group;
mod wedderburn;

pub use automorphism::StarAutomorphism;
pub use group::{group_algebra, FiniteGroup, GroupAlgebra};
pub use wedderburn::{decompose_closed, wedderburn_decompose, Decomposition, DEFAULT_SEED};

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, re, CMat, CVec, C64, ONE, ZERO};

/// Ordered block dimensions `n_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec(Vec<usize>);

impl BlockSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::ShapeMismatch("block list is empty".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::ShapeMismatch("block of size 0".into()));
        }
        Ok(BlockSpec(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }
}

/// Positive per-block weights with `sum w_k n_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceWeights(Vec<f64>);

impl TraceWeights {
    pub fn new(weights: Vec<f64>) -> Self {
        TraceWeights(weights)
    }

    /// The trace of the left regular representation: `w_k = n_k / sum n_j^2`.
    pub fn regular(blocks: &BlockSpec) -> Self {
        let d: usize = blocks.sizes().iter().map(|n| n * n).sum();
        TraceWeights(blocks.sizes().iter().map(|&n| n as f64 / d as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, PartialEq)]
struct AlgebraData {
    sizes: Vec<usize>,
    weights: Vec<f64>,
    offsets: Vec<usize>,
    total_dim: usize,
}

/// A direct sum of full matrix algebras with a faithful normalized trace.
///
/// Cloning is cheap; clones compare equal and share storage.
#[derive(Clone)]
pub struct MultiMatrixAlgebra {
    data: Arc<AlgebraData>,
}

impl PartialEq for MultiMatrixAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data == other.data
    }
}

impl fmt::Debug for MultiMatrixAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiMatrixAlgebra")
            .field("blocks", &self.data.sizes)
            .field("weights", &self.data.weights)
            .finish()
    }
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: BlockSpec, weights: TraceWeights) -> Result<Self> {
        let sizes = blocks.0;
        let weights = weights.0;
        if sizes.len() != weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks but {} weights",
                sizes.len(),
                weights.len()
            )));
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        let total: f64 = sizes.iter().zip(&weights).map(|(&n, &w)| n as f64 * w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NormalizationViolation { total });
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &n in &sizes {
            offsets.push(acc);
            acc += n * n;
        }
        Ok(MultiMatrixAlgebra {
            data: Arc::new(AlgebraData { sizes, weights, offsets, total_dim: acc }),
        })
    }

    /// `M_n` with the normalized trace.
    pub fn full_matrix(n: usize) -> Self {
        Self::new(BlockSpec(vec![n]), TraceWeights(vec![1.0 / n as f64]))
            .expect("valid single block")
    }

    /// Blocks with the regular-representation trace.
    pub fn with_regular_trace(sizes: Vec<usize>) -> Result<Self> {
        let blocks = BlockSpec::new(sizes)?;
        let w = TraceWeights::regular(&blocks);
        Self::new(blocks, w)
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.data.sizes
    }

    pub fn weights(&self) -> &[f64] {
        &self.data.weights
    }

    pub fn n_blocks(&self) -> usize {
        self.data.sizes.len()
    }

    /// Offset of block `k` in trace-basis coordinates.
    pub fn offset(&self, k: usize) -> usize {
        self.data.offsets[k]
    }

    /// Dimension as a complex vector space.
    pub fn dim(&self) -> usize {
        self.data.total_dim
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.data.sizes.iter().map(|&n| CMat::zeros(n, n)).collect(),
        }
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.data.sizes.iter().map(|&n| CMat::identity(n, n)).collect(),
        }
    }

    pub fn scalar(&self, c: C64) -> AlgebraElement {
        self.identity().scale(c)
    }

    pub fn element(&self, blocks: Vec<CMat>) -> Result<AlgebraElement> {
        if blocks.len() != self.n_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} block matrices for {} blocks",
                blocks.len(),
                self.n_blocks()
            )));
        }
        for (k, (b, &n)) in blocks.iter().zip(self.block_sizes()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {k} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(AlgebraElement { algebra: self.clone(), blocks })
    }

    /// Matrix unit `E_{ij}` in block `k`.
    pub fn matrix_unit(&self, k: usize, i: usize, j: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.blocks[k][(i, j)] = ONE;
        x
    }

    /// Embeds a single block matrix, zero elsewhere.
    pub fn embed_block(&self, k: usize, m: CMat) -> AlgebraElement {
        let mut x = self.zero();
        assert_eq!(m.nrows(), self.block_sizes()[k]);
        x.blocks[k] = m;
        x
    }

    /// The orthonormal trace basis, in coordinate order.
    pub fn trace_basis(&self) -> Vec<AlgebraElement> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    pub fn basis_element(&self, index: usize) -> AlgebraElement {
        let (k, i, j) = self.coord_index(index);
        self.matrix_unit(k, i, j).scale(re(1.0 / self.weights()[k].sqrt()))
    }

    /// Block, row and column of a coordinate index.
    pub fn coord_index(&self, index: usize) -> (usize, usize, usize) {
        let k = self.data.offsets.partition_point(|&o| o <= index) - 1;
        let n = self.data.sizes[k];
        let r = index - self.data.offsets[k];
        (k, r / n, r % n)
    }

    /// Trace-basis coordinates of `x`.
    pub fn coords(&self, x: &AlgebraElement) -> CVec {
        let mut v = CVec::zeros(self.dim());
        for (k, b) in x.blocks.iter().enumerate() {
            let n = self.data.sizes[k];
            let s = self.data.weights[k].sqrt();
            let off = self.data.offsets[k];
            for i in 0..n {
                for j in 0..n {
                    v[off + i * n + j] = b[(i, j)] * s;
                }
            }
        }
        v
    }

    pub fn from_coords(&self, v: &CVec) -> AlgebraElement {
        assert_eq!(v.len(), self.dim(), "coordinate length");
        let blocks = self
            .data
            .sizes
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let s = 1.0 / self.data.weights[k].sqrt();
                let off = self.data.offsets[k];
                CMat::from_fn(n, n, |i, j| v[off + i * n + j] * s)
            })
            .collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }

    /// Matrix (against the trace basis) of a linear map given on basis elements.
    pub fn linear_map_matrix<F>(&self, mut f: F) -> CMat
    where
        F: FnMut(&AlgebraElement) -> AlgebraElement,
    {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for c in 0..d {
            let img = f(&self.basis_element(c));
            m.set_column(c, &self.coords(&img));
        }
        m
    }

    /// A random element with Gaussian coordinates.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        let v = CVec::from_fn(self.dim(), |_, _| crate::linalg::gaussian_c(rng));
        self.from_coords(&v)
    }

    /// A random unitary `u = sum_k u_k`.
    pub fn random_unitary<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        let blocks = self
            .block_sizes()
            .iter()
            .map(|&n| crate::linalg::random_unitary(n, rng))
            .collect();
        AlgebraElement { algebra: self.clone(), blocks }
    }
}

/// An element of a multi-matrix algebra, stored blockwise.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: MultiMatrixAlgebra,
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMat {
        &self.blocks[k]
    }

    fn same_owner(&self, other: &Self) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.zip(other, |a, b| a * b))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.algebra.weights())
            .map(|(b, &w)| b.trace() * w)
            .sum()
    }

    /// `<self, other> = tr(other* self)`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .zip(other.algebra.weights())
            .map(|((a, b), &w)| b.dotc(a) * w)
            .sum()
    }

    /// The 2-norm `tr(x* x)^{1/2}`.
    pub fn norm2(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    /// Largest blockwise Frobenius norm difference; used for equality checks.
    pub fn distance(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn coords(&self) -> CVec {
        self.algebra.coords(self)
    }

    /// Apply a real function to a self-adjoint element via its spectral decomposition.
    pub fn hermitian_apply(&self, f: impl Fn(f64) -> f64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let (vals, vecs) = hermitian_eigen(b);
                let n = vals.len();
                let mut d = CMat::zeros(n, n);
                for i in 0..n {
                    d[(i, i)] = re(f(vals[i]));
                }
                &vecs * d * vecs.adjoint()
            })
            .collect();
        AlgebraElement { algebra: self.algebra.clone(), blocks }
    }

    /// All eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_spectrum(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(crate::linalg::hermitian_eigenvalues)
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_spectrum().first().copied().unwrap_or(0.0)
    }

    /// Operator norm (max over blocks).
    pub fn op_norm(&self) -> f64 {
        self.blocks.iter().map(crate::linalg::op_norm).fold(0.0, f64::max)
    }

    /// `|| u* u - 1 ||` and `|| u u* - 1 ||`, whichever is larger.
    pub fn unitarity_defect(&self) -> f64 {
        let one = self.algebra.identity();
        let a = (&(&self.adjoint() * self) - &one).op_norm();
        let b = (&(self * &self.adjoint()) - &one).op_norm();
        a.max(b)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|z| *z == ZERO))
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("operands from the same algebra")
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("operands from the same algebra")
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("operands from the same algebra")
    }
}
