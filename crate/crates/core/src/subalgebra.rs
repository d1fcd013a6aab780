//! Unital *-subalgebras of a multi-matrix algebra.

use crate::algebra::{AlgebraElement, GroupAlgebra, MultiMatrixAlgebra, StarAutomorphism};
use crate::error::{Error, Result};
use crate::linalg::{projector, stacked_kernel, CMat, CVec, SpanBuilder};
use crate::tol::{RANK_REL, SPAN_REL};

/// A unital *-subalgebra, held as a trace-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    ambient: MultiMatrixAlgebra,
    basis: Vec<AlgebraElement>,
    coords: CMat,
}

impl Subalgebra {
    fn from_span(ambient: &MultiMatrixAlgebra, span: &SpanBuilder) -> Self {
        let coords = span.to_matrix();
        let basis = span.basis().iter().map(|v| ambient.from_coords(v)).collect();
        Subalgebra { ambient: ambient.clone(), basis, coords }
    }

    fn from_orthonormal_columns(ambient: &MultiMatrixAlgebra, cols: CMat) -> Self {
        let basis = (0..cols.ncols())
            .map(|c| ambient.from_coords(&cols.column(c).into_owned()))
            .collect();
        Subalgebra { ambient: ambient.clone(), basis, coords: cols }
    }

    pub fn whole(ambient: &MultiMatrixAlgebra) -> Self {
        let d = ambient.dim();
        Self::from_orthonormal_columns(ambient, CMat::identity(d, d))
    }

    /// `C 1`.
    pub fn scalars(ambient: &MultiMatrixAlgebra) -> Self {
        let mut s = SpanBuilder::new(ambient.dim());
        s.try_push(&ambient.identity().coords(), SPAN_REL);
        Self::from_span(ambient, &s)
    }

    /// Block-diagonal matrices in every block (a maximal abelian subalgebra).
    pub fn diagonal(ambient: &MultiMatrixAlgebra) -> Self {
        let gens: Vec<AlgebraElement> = ambient
            .block_sizes()
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| (0..n).map(move |i| (k, i)))
            .map(|(k, i)| ambient.matrix_unit(k, i, i))
            .collect();
        close_under_algebra(ambient, &gens).expect("same ambient")
    }

    /// The span of `elems`, which must already be a unital *-subalgebra.
    pub fn from_elements(ambient: &MultiMatrixAlgebra, elems: &[AlgebraElement]) -> Result<Self> {
        let mut s = SpanBuilder::new(ambient.dim());
        for e in elems {
            if e.algebra() != ambient {
                return Err(Error::OwnerMismatch);
            }
            s.try_push(&e.coords(), SPAN_REL);
        }
        let sub = Self::from_span(ambient, &s);
        let unit = sub.residual(&ambient.identity());
        if unit > SPAN_REL {
            return Err(Error::NotSubalgebra(format!("unit not contained (residual {unit:.3e})")));
        }
        let closure = sub.closure_residual();
        if closure > SPAN_REL {
            return Err(Error::NotSubalgebra(format!(
                "span not closed under products and adjoints (residual {closure:.3e})"
            )));
        }
        Ok(sub)
    }

    pub fn ambient(&self) -> &MultiMatrixAlgebra {
        &self.ambient
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis coordinates as orthonormal columns (`D x dim`).
    pub fn coords(&self) -> &CMat {
        &self.coords
    }

    /// Orthogonal projection of `L^2(M)` onto the subalgebra.
    pub fn projection(&self) -> CMat {
        projector(&self.coords)
    }

    fn span(&self) -> SpanBuilder {
        let mut s = SpanBuilder::new(self.ambient.dim());
        for c in 0..self.coords.ncols() {
            s.try_push(&self.coords.column(c).into_owned(), 1e-14);
        }
        s
    }

    /// Relative distance of `x` from the subalgebra.
    pub fn residual(&self, x: &AlgebraElement) -> f64 {
        let v = x.coords();
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        let p: CVec = &self.coords * (self.coords.adjoint() * &v);
        (v - p).norm() / nv
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.residual(x) <= SPAN_REL
    }

    /// Largest relative residual of basis products and adjoints.
    pub fn closure_residual(&self) -> f64 {
        let s = self.span();
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(s.relative_residual(&a.adjoint().coords()));
            for b in &self.basis {
                let scale = (a.norm2() * b.op_norm()).max(f64::MIN_POSITIVE);
                worst = worst.max(s.residual(&(a * b).coords()) / scale);
            }
        }
        worst
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let g = self.coords.adjoint() * &self.coords;
        (g - CMat::identity(self.dim(), self.dim())).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Image under a *-automorphism of the ambient algebra.
    pub fn image(&self, alpha: &StarAutomorphism) -> Result<Self> {
        if alpha.algebra() != &self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let cols = alpha.matrix() * &self.coords;
        Ok(Self::from_orthonormal_columns(&self.ambient, cols))
    }

    /// `u P u*` for a unitary `u` of the ambient algebra.
    pub fn conjugate(&self, u: &AlgebraElement) -> Result<Self> {
        self.image(&StarAutomorphism::from_unitary(u)?)
    }

    /// True when both span the same subspace.
    pub fn same_as(&self, other: &Subalgebra) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|b| self.contains(b))
    }
}

/// Smallest unital *-subalgebra containing `generators`, built by length-lex
/// word closure over the generators and their adjoints.
pub fn close_under_algebra(
    ambient: &MultiMatrixAlgebra,
    generators: &[AlgebraElement],
) -> Result<Subalgebra> {
    let mut gens: Vec<AlgebraElement> = Vec::new();
    for g in generators {
        if g.algebra() != ambient {
            return Err(Error::OwnerMismatch);
        }
        gens.push(g.clone());
        gens.push(g.adjoint());
    }
    let mut span = SpanBuilder::new(ambient.dim());
    let one = ambient.identity();
    span.try_push(&one.coords(), SPAN_REL);
    let mut members = vec![one];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &w in &frontier {
            for g in &gens {
                let cand = &members[w] * g;
                let scale = members[w].norm2() * g.op_norm();
                if span.try_push_scaled(&cand.coords(), SPAN_REL, scale) {
                    members.push(cand);
                    next.push(members.len() - 1);
                }
            }
        }
        frontier = next;
    }
    Ok(Subalgebra::from_span(ambient, &span))
}

/// `P_1 n ... n P_r`, computed as the joint kernel of the complementary projections.
pub fn intersect(subalgebras: &[Subalgebra]) -> Result<Subalgebra> {
    let first = subalgebras
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty subalgebra family".into()))?;
    let ambient = first.ambient.clone();
    if subalgebras.iter().any(|p| p.ambient != ambient) {
        return Err(Error::AmbientMismatch);
    }
    let d = ambient.dim();
    let id = CMat::identity(d, d);
    let stack: Vec<CMat> = subalgebras.iter().map(|p| &id - p.projection()).collect();
    let k = stacked_kernel(&stack, d, RANK_REL);
    Ok(Subalgebra::from_orthonormal_columns(&ambient, k))
}

/// `{x : alpha(x) = x for all alpha}`.
pub fn fixed_point_algebra(
    ambient: &MultiMatrixAlgebra,
    automorphisms: &[StarAutomorphism],
) -> Result<Subalgebra> {
    let d = ambient.dim();
    let id = CMat::identity(d, d);
    let mut stack = Vec::new();
    for a in automorphisms {
        if a.algebra() != ambient {
            return Err(Error::AmbientMismatch);
        }
        a.validate()?;
        stack.push(a.matrix() - &id);
    }
    if stack.is_empty() {
        return Ok(Subalgebra::whole(ambient));
    }
    let k = stacked_kernel(&stack, d, RANK_REL);
    let sub = Subalgebra::from_orthonormal_columns(ambient, k);
    let closure = sub.closure_residual();
    if closure > SPAN_REL {
        return Err(Error::NotSubalgebra(format!("fixed points not closed ({closure:.3e})")));
    }
    Ok(sub)
}

/// `C[H]` inside `C[G]`.
pub fn subgroup_subalgebra(ga: &GroupAlgebra, elements: &[usize]) -> Result<Subalgebra> {
    let g = ga.group();
    if elements.iter().any(|&h| h >= g.order()) || !g.is_subgroup(elements) {
        return Err(Error::NotSubalgebra(format!("{elements:?} is not a subgroup")));
    }
    let elems: Vec<AlgebraElement> = elements.iter().map(|&h| ga.element(h).clone()).collect();
    Subalgebra::from_elements(ga.algebra(), &elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, FiniteGroup, DEFAULT_SEED};
    use crate::linalg::{re, C64};

    fn hadamard(m2: &MultiMatrixAlgebra) -> AlgebraElement {
        let s = 1.0 / 2f64.sqrt();
        m2.element(vec![CMat::from_row_slice(2, 2, &[re(s), re(s), re(s), re(-s)])]).unwrap()
    }

    #[test]
    fn closure_examples() {
        let m2 = MultiMatrixAlgebra::full_matrix(2);
        assert_eq!(close_under_algebra(&m2, &[]).unwrap().dim(), 1);
        let units: Vec<_> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| m2.matrix_unit(0, i, j))
            .collect();
        assert_eq!(close_under_algebra(&m2, &units).unwrap().dim(), 4);
        let p = m2.matrix_unit(0, 0, 0);
        let d = close_under_algebra(&m2, &[p]).unwrap();
        assert_eq!(d.dim(), 2);
        assert!(d.closure_residual() < 1e-12);
        assert!(d.gram_defect() < 1e-12);
        // the unit is contained
        assert!(d.contains(&m2.identity()));
    }

    #[test]
    fn intersection_examples() {
        let m2 = MultiMatrixAlgebra::full_matrix(2);
        let diag = Subalgebra::diagonal(&m2);
        let whole = Subalgebra::whole(&m2);
        assert!(intersect(&[diag.clone(), diag.clone()]).unwrap().same_as(&diag));
        assert!(intersect(&[diag.clone(), whole]).unwrap().same_as(&diag));
        let rotated = diag.conjugate(&hadamard(&m2)).unwrap();
        let meet = intersect(&[diag, rotated]).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&m2.identity()));
        let m3 = MultiMatrixAlgebra::full_matrix(3);
        assert_eq!(
            intersect(&[Subalgebra::whole(&m2), Subalgebra::whole(&m3)]).unwrap_err(),
            Error::AmbientMismatch
        );
    }

    #[test]
    fn fixed_points() {
        let m2 = MultiMatrixAlgebra::full_matrix(2);
        let id = StarAutomorphism::identity(&m2);
        assert_eq!(fixed_point_algebra(&m2, &[id]).unwrap().dim(), 4);
        let z = m2
            .element(vec![CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])])
            .unwrap();
        let a = StarAutomorphism::from_unitary(&z).unwrap();
        let f = fixed_point_algebra(&m2, &[a]).unwrap();
        assert!(f.same_as(&Subalgebra::diagonal(&m2)));

        // inner action of S3 on C[S3] fixes the center: one dimension per class
        let g = FiniteGroup::symmetric(3);
        let ga = group_algebra(&g, DEFAULT_SEED).unwrap();
        let autos: Vec<_> = (0..6)
            .map(|h| StarAutomorphism::from_unitary(ga.element(h)).unwrap())
            .collect();
        assert_eq!(fixed_point_algebra(ga.algebra(), &autos).unwrap().dim(), 3);
    }

    #[test]
    fn subgroup_algebras() {
        let g = FiniteGroup::symmetric(3);
        let ga = group_algebra(&g, DEFAULT_SEED).unwrap();
        let rot = g.subgroup(&[3]);
        let sub = subgroup_subalgebra(&ga, &rot).unwrap();
        assert_eq!(sub.dim(), rot.len());
        assert!(subgroup_subalgebra(&ga, &[0, 1, 2]).is_err() || g.is_subgroup(&[0, 1, 2]));
        let _ = C64::new(0.0, 0.0);
    }
}
