//! The standard representation on `L^2(M, tr)`.
//!
//! Vectors of `L^2(M)` are trace-basis coordinates, so `M` acts by ordinary
//! complex matrices. The modular conjugation `J x = x*` is antilinear and is
//! only ever stored as a real-linear map on `(Re v, Im v)`.

use std::io::Write;

use nalgebra::DMatrix;

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::closure::WordClosure;
use crate::error::{Error, Result};
use crate::expectation::conditional_expectation;
use crate::linalg::{flatten, span_distance, stacked_kernel, unflatten, CMat, CVec, C64};
use crate::subalgebra::Subalgebra;
use crate::tol::{RANK_REL, SPAN_REL};

/// `L^2(M, tr)` with its orthonormal basis of scaled matrix units.
#[derive(Debug, Clone)]
pub struct GnsSpace {
    algebra: MultiMatrixAlgebra,
}

pub fn gns(algebra: &MultiMatrixAlgebra) -> GnsSpace {
    GnsSpace { algebra: algebra.clone() }
}

impl GnsSpace {
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn orthonormal_basis(&self) -> Vec<AlgebraElement> {
        self.algebra.trace_basis()
    }

    /// The cyclic vector `Omega = 1`.
    pub fn omega(&self) -> CVec {
        self.algebra.identity().coords()
    }

    pub fn vector(&self, x: &AlgebraElement) -> CVec {
        x.coords()
    }

    pub fn gram_defect(&self) -> f64 {
        let b = self.orthonormal_basis();
        let mut worst: f64 = 0.0;
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((x.inner(y) - C64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    fn check_owner(&self, m: &AlgebraElement) -> Result<()> {
        if m.algebra() == &self.algebra {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }
}

/// A bounded operator on a GNS space.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentedOperator {
    matrix: CMat,
}

impl RepresentedOperator {
    pub fn new(matrix: CMat) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operators are square");
        RepresentedOperator { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMat::identity(dim, dim))
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.matrix.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.matrix * &other.matrix)
    }

    /// `max(|p* - p|, |p^2 - p|)`.
    pub fn projection_defect(&self) -> f64 {
        let p = &self.matrix;
        (p.adjoint() - p).norm().max((p * p - p).norm())
    }

    /// Rank of a projection (trace rounded to the nearest integer).
    pub fn projection_rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    /// Writes the matrix as CSV, one row per matrix row, with `re, im` column pairs.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .flat_map(|j| {
                    let z = self.matrix[(i, j)];
                    [format!("{:.17e}", z.re), format!("{:.17e}", z.im)]
                })
                .collect();
            w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `lambda(m)`: left multiplication on `L^2(M)`.
pub fn left_rep(m: &AlgebraElement, h: &GnsSpace) -> Result<RepresentedOperator> {
    h.check_owner(m)?;
    let a = &h.algebra;
    let d = a.dim();
    let mut out = CMat::zeros(d, d);
    for (k, &n) in a.block_sizes().iter().enumerate() {
        let off = a.offset(k);
        let b = m.block(k);
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    out[(off + i * n + j, off + l * n + j)] = b[(i, l)];
                }
            }
        }
    }
    Ok(RepresentedOperator::new(out))
}

/// `rho(m)`: right multiplication `x -> x m` on `L^2(M)`.
pub fn right_rep(m: &AlgebraElement, h: &GnsSpace) -> Result<RepresentedOperator> {
    h.check_owner(m)?;
    let a = &h.algebra;
    let d = a.dim();
    let mut out = CMat::zeros(d, d);
    for (k, &n) in a.block_sizes().iter().enumerate() {
        let off = a.offset(k);
        let b = m.block(k);
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    out[(off + i * n + j, off + i * n + l)] = b[(l, j)];
                }
            }
        }
    }
    Ok(RepresentedOperator::new(out))
}

/// `J x = x*` as a real-linear map on `R^{2D}`.
#[derive(Debug, Clone)]
pub struct ModularConjugation {
    real: DMatrix<f64>,
}

pub fn modular_conjugation(h: &GnsSpace) -> ModularConjugation {
    let a = &h.algebra;
    let d = a.dim();
    let mut real = DMatrix::zeros(2 * d, 2 * d);
    for (k, &n) in a.block_sizes().iter().enumerate() {
        let off = a.offset(k);
        for i in 0..n {
            for j in 0..n {
                let (r, c) = (off + i * n + j, off + j * n + i);
                real[(r, c)] = 1.0;
                real[(d + r, d + c)] = -1.0;
            }
        }
    }
    ModularConjugation { real }
}

fn realify(m: &CMat) -> DMatrix<f64> {
    let (r, c) = m.shape();
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, c + j)] = -z.im;
            out[(r + i, j)] = z.im;
            out[(r + i, c + j)] = z.re;
        }
    }
    out
}

impl ModularConjugation {
    pub fn real_matrix(&self) -> &DMatrix<f64> {
        &self.real
    }

    fn dim(&self) -> usize {
        self.real.nrows() / 2
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        let d = self.dim();
        let mut x = nalgebra::DVector::zeros(2 * d);
        for i in 0..d {
            x[i] = v[i].re;
            x[d + i] = v[i].im;
        }
        let y = &self.real * x;
        CVec::from_fn(d, |i, _| C64::new(y[i], y[d + i]))
    }

    /// `J A J`, which is complex-linear whenever `A` is.
    pub fn conjugate(&self, op: &RepresentedOperator) -> RepresentedOperator {
        let d = self.dim();
        let r = &self.real * realify(op.matrix()) * &self.real;
        RepresentedOperator::new(CMat::from_fn(d, d, |i, j| C64::new(r[(i, j)], r[(d + i, j)])))
    }

    /// `|J^2 - 1|`.
    pub fn square_defect(&self) -> f64 {
        let n = self.real.nrows();
        (&self.real * &self.real - DMatrix::<f64>::identity(n, n)).norm()
    }

    /// Largest `|<Jx, Jy> - <y, x>|` over pairs of basis and mixed vectors.
    pub fn antiunitary_defect(&self) -> f64 {
        let d = self.dim();
        let mut vs: Vec<CVec> = (0..d)
            .map(|i| {
                let mut v = CVec::zeros(d);
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        for i in 0..d {
            let mut v = CVec::zeros(d);
            v[i] = C64::new(0.6, 0.0);
            v[(i + 1) % d] += C64::new(0.0, 0.8);
            vs.push(v);
        }
        let mut worst: f64 = 0.0;
        for x in &vs {
            let jx = self.apply(x);
            for y in &vs {
                let jy = self.apply(y);
                worst = worst.max((jy.dotc(&jx) - x.dotc(y)).norm());
            }
        }
        worst
    }
}

/// `e_P`: the orthogonal projection of `L^2(M)` onto `L^2(P)`.
pub fn jones_projection(p: &Subalgebra, h: &GnsSpace) -> Result<RepresentedOperator> {
    if p.ambient() != h.algebra() {
        return Err(Error::NotSubalgebra("subalgebra of a different algebra".into()));
    }
    Ok(RepresentedOperator::new(p.projection()))
}

/// Hilbert-Schmidt orthonormal basis of `{T : [T, s] = [T, s*] = 0 for s in S}`.
pub fn commutant(ops: &[RepresentedOperator]) -> Vec<CMat> {
    let Some(first) = ops.first() else {
        return Vec::new();
    };
    let d = first.dim();
    let id = CMat::identity(d, d);
    let mut stack = Vec::with_capacity(2 * ops.len());
    for s in ops {
        for m in [s.matrix().clone(), s.matrix().adjoint()] {
            // vec(sT - Ts) = (1 (x) s - s^T (x) 1) vec(T), column-major
            stack.push(id.kronecker(&m) - m.transpose().kronecker(&id));
        }
    }
    let k = stacked_kernel(&stack, d * d, RANK_REL);
    (0..k.ncols()).map(|c| unflatten(&k.column(c).into_owned(), d, d)).collect()
}

/// Largest relative residual of products and adjoints in the span of `basis`.
pub fn operator_closure_residual(basis: &[CMat]) -> f64 {
    let n = basis.first().map(|b| b.len()).unwrap_or(0);
    let mut s = crate::linalg::SpanBuilder::new(n);
    for b in basis {
        s.try_push(&flatten(b), 1e-13);
    }
    let mut worst: f64 = 0.0;
    for a in basis {
        worst = worst.max(s.relative_residual(&flatten(&a.adjoint())));
        for b in basis {
            let scale = (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max(s.residual(&flatten(&(a * b))) / scale);
        }
    }
    worst
}

/// Largest relative residual between the spans of two operator families.
pub fn operator_span_distance(a: &[CMat], b: &[CMat]) -> f64 {
    let fa: Vec<CVec> = a.iter().map(flatten).collect();
    let fb: Vec<CVec> = b.iter().map(flatten).collect();
    span_distance(&fa, &fb)
}

/// `<M, e_N>`: the algebra generated by `lambda(M)` and the Jones projection of `N`.
#[derive(Debug, Clone)]
pub struct BasicConstruction {
    closure: WordClosure,
    jones: RepresentedOperator,
    left: Vec<CMat>,
}

pub fn basic_construction(n: &Subalgebra, h: &GnsSpace) -> Result<BasicConstruction> {
    let e = jones_projection(n, h)?;
    conditional_expectation(h.algebra(), n)?;
    let mut left = Vec::new();
    for b in h.orthonormal_basis() {
        left.push(left_rep(&b, h)?.into_matrix());
    }
    let mut gens = left.clone();
    gens.push(e.matrix().clone());
    let closure = WordClosure::generate(&gens, true, SPAN_REL);
    Ok(BasicConstruction { closure, jones: e, left })
}

impl BasicConstruction {
    pub fn dim(&self) -> usize {
        self.closure.dim()
    }

    pub fn basis(&self) -> Vec<CMat> {
        self.closure.orthonormal_basis()
    }

    pub fn jones_projection(&self) -> &RepresentedOperator {
        &self.jones
    }

    /// Distance between the generated algebra and `lambda(M) + span lambda(M) e lambda(M)`.
    pub fn mem_span_distance(&self) -> f64 {
        let e = self.jones.matrix();
        let mut fam: Vec<CMat> = self.left.clone();
        for a in &self.left {
            let ae = a * e;
            for b in &self.left {
                fam.push(&ae * b);
            }
        }
        operator_span_distance(&self.basis(), &fam)
    }

    /// Distance between the generated algebra and `J lambda(N)' J`, together
    /// with the dimension of the latter.
    pub fn commutant_comparison(&self, n: &Subalgebra, h: &GnsSpace) -> Result<(f64, usize)> {
        let mut ln = Vec::new();
        for b in n.basis() {
            ln.push(left_rep(b, h)?);
        }
        let j = modular_conjugation(h);
        let jcj: Vec<CMat> = commutant(&ln)
            .into_iter()
            .map(|t| j.conjugate(&RepresentedOperator::new(t)).into_matrix())
            .collect();
        Ok((operator_span_distance(&self.basis(), &jcj), jcj.len()))
    }
}
