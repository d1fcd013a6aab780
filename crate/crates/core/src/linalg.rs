//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let svd = SVD::new(m.clone(), false, false);
    svd.singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Orthonormal basis (as columns) of the null space of the vertically
/// stacked operators. Singular values at most `rel * max(sigma_max, 1)` count
/// as zero; the floor keeps a stack that vanishes up to rounding from being
/// judged on its own noise (all callers stack operators of norm order one).
pub fn stacked_kernel(ops: &[CMat], cols: usize, rel: f64) -> CMat {
    let (s, vt) = stacked_svd(ops, cols);
    let cut = rel * s.iter().cloned().fold(1.0, f64::max);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= cut).collect();
    let mut out = CMat::zeros(cols, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for r in 0..cols {
            out[(r, c)] = vt[(i, r)].conj();
        }
    }
    out
}

/// Singular values and right singular vectors (rows of `vt`) of the stack,
/// padded so that all `cols` right singular vectors are returned.
pub fn stacked_svd(ops: &[CMat], cols: usize) -> (Vec<f64>, CMat) {
    let rows: usize = ops.iter().map(|m| m.nrows()).sum::<usize>().max(cols);
    let mut stack = CMat::zeros(rows, cols);
    let mut r0 = 0;
    for m in ops {
        assert_eq!(m.ncols(), cols, "stacked_kernel: column mismatch");
        stack.view_mut((r0, 0), (m.nrows(), cols)).copy_from(m);
        r0 += m.nrows();
    }
    if cols == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let svd = SVD::new(stack, false, true);
    let vt = svd.v_t.expect("requested v_t");
    (svd.singular_values.iter().cloned().collect(), vt)
}

/// Orthogonal projector onto the span of the (orthonormal) columns.
pub fn projector(cols: &CMat) -> CMat {
    cols * cols.adjoint()
}

/// Orthonormal basis of the range of a projection (eigenvalues above 1/2).
pub fn projection_range(p: &CMat) -> CMat {
    let (vals, vecs) = hermitian_eigen(p);
    let idx: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
    select_columns(&vecs, &idx)
}

pub fn select_columns(m: &CMat, idx: &[usize]) -> CMat {
    let mut out = CMat::zeros(m.nrows(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &m.column(i));
    }
    out
}

/// Group indices of ascending values into clusters whose consecutive gaps
/// are at most `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(g) if v - values[*g.last().unwrap()] <= tol => g.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Number of distinct points in a multiset of reals at absolute tolerance.
pub fn distinct_count(values: &[f64], tol: f64) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    cluster_sorted(&v, tol).len()
}

/// Column-major flattening.
pub fn flatten(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unflatten(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

/// Incrementally maintained orthonormal basis of a subspace of C^n.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    n: usize,
    basis: Vec<CVec>,
}

impl SpanBuilder {
    pub fn new(n: usize) -> Self {
        SpanBuilder { n, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }

    fn orthogonalize(&self, v: &CVec) -> CVec {
        let mut r = v.clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &self.basis {
                let c = b.dotc(&r);
                r.axpy(-c, b, ONE);
            }
        }
        r
    }

    /// Norm of the component of `v` orthogonal to the span, relative to |v|.
    pub fn relative_residual(&self, v: &CVec) -> f64 {
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        self.orthogonalize(v).norm() / nv
    }

    /// Absolute residual norm of `v` against the span.
    pub fn residual(&self, v: &CVec) -> f64 {
        self.orthogonalize(v).norm()
    }

    /// Adds `v` if its relative residual exceeds `rel`; returns whether it was added.
    pub fn try_push(&mut self, v: &CVec, rel: f64) -> bool {
        self.try_push_scaled(v, rel, 0.0)
    }

    /// Like [`try_push`](Self::try_push), measuring the residual against
    /// `max(|v|, scale)`. Products of operands pass the product of their norms
    /// so that cancellation noise is not mistaken for a new direction.
    pub fn try_push_scaled(&mut self, v: &CVec, rel: f64, scale: f64) -> bool {
        let nv = v.norm().max(scale);
        if nv == 0.0 {
            return false;
        }
        let r = self.orthogonalize(v);
        let nr = r.norm();
        if nr / nv <= rel {
            return false;
        }
        self.basis.push(r.unscale(nr));
        true
    }

    /// Basis vectors as columns of an n x dim matrix.
    pub fn to_matrix(&self) -> CMat {
        let mut m = CMat::zeros(self.n, self.basis.len());
        for (c, b) in self.basis.iter().enumerate() {
            m.set_column(c, b);
        }
        m
    }
}

/// Largest relative residual of each vector of `a` against span(`b`), both ways.
pub fn span_distance(a: &[CVec], b: &[CVec]) -> f64 {
    let n = a.first().or(b.first()).map(|v| v.len()).unwrap_or(0);
    let mut sa = SpanBuilder::new(n);
    let mut sb = SpanBuilder::new(n);
    for v in a {
        sa.try_push(v, 1e-13);
    }
    for v in b {
        sb.try_push(v, 1e-13);
    }
    side_distance(a, &sb).max(side_distance(b, &sa))
}

/// Relative residuals of `vs` against `span`, skipping members that are
/// roundoff next to the largest one.
fn side_distance(vs: &[CVec], span: &SpanBuilder) -> f64 {
    let scale = vs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    vs.iter()
        .filter(|v| v.norm() > 1e-12 * scale)
        .map(|v| span.relative_residual(v))
        .fold(0.0, f64::max)
}

pub fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    C64::new(a, b)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> CMat {
    CMat::from_fn(n, m, |_, _| gaussian_c(rng))
}

/// Haar-distributed unitary via phase-corrected QR.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let z = gaussian_matrix(n, n, rng);
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            out[(i, j)] *= ph;
        }
    }
    out
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(n, |_, _| gaussian_c(rng));
    let nv = v.norm();
    v.unscale(nv)
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let z = gaussian_matrix(n, n, rng);
    (&z + z.adjoint()).scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(5, &mut rng);
        let e = &u.adjoint() * &u - CMat::identity(5, 5);
        assert!(e.norm() < 1e-12);
    }

    #[test]
    fn kernel_of_projection_complements_is_intersection() {
        // ran p = span{e0, e1}, ran q = span{e1, e2}: intersection span{e1}
        let mut p = CMat::zeros(3, 3);
        p[(0, 0)] = ONE;
        p[(1, 1)] = ONE;
        let mut q = CMat::zeros(3, 3);
        q[(1, 1)] = ONE;
        q[(2, 2)] = ONE;
        let id = CMat::identity(3, 3);
        let k = stacked_kernel(&[&id - &p, &id - &q], 3, 1e-9);
        assert_eq!(k.ncols(), 1);
        assert!((k[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn span_builder_rejects_dependent() {
        let mut s = SpanBuilder::new(3);
        let a = CVec::from_vec(vec![ONE, ONE, ZERO]);
        let b = CVec::from_vec(vec![ONE, -ONE, ZERO]);
        assert!(s.try_push(&a, 1e-9));
        assert!(s.try_push(&b, 1e-9));
        assert!(!s.try_push(&(a.scale(2.0) + &b), 1e-9));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn clustering() {
        let g = cluster_sorted(&[0.0, 1e-10, 0.5, 1.0, 1.0 + 1e-9], 1e-8);
        assert_eq!(g, vec![vec![0, 1], vec![2], vec![3, 4]]);
    }
}
