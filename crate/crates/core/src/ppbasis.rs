//! Pimsner-Popa orthonormal bases of `M` over `N` via `E`.
//!
//! Gram-Schmidt against the `N`-valued inner product `<x, y>_N = E(y* x)`:
//! each candidate loses its components along the basis found so far, and a
//! survivor `r` is normalized as `r E(r* r)^{+1/2}`, which makes `E(m* m)` the
//! support projection of `E(r* r)`. Candidates are the unit followed by the
//! trace basis of `M`, in order.

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::expectation::ConditionalExpectation;
use crate::tol::{classify_strict, RankCall};

#[derive(Debug, Clone)]
pub struct PPBasis {
    elements: Vec<AlgebraElement>,
    supports: Vec<AlgebraElement>,
}

/// Residuals of the defining identities.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct PPBasisResiduals {
    /// `max |E(m_i* m_j) - delta_ij f_j|`
    pub orthonormality: f64,
    /// `max |f_j^2 - f_j| + |f_j* - f_j|`
    pub support_projection: f64,
    /// `max |x - sum_j m_j E(m_j* x)| / |x|` over the trace basis
    pub reconstruction: f64,
}

pub fn pp_basis(e: &ConditionalExpectation) -> Result<PPBasis> {
    let m = e.source();
    let mut elements: Vec<AlgebraElement> = Vec::new();
    let mut supports: Vec<AlgebraElement> = Vec::new();
    let candidates = std::iter::once(m.identity()).chain(m.trace_basis());
    for x in candidates {
        let mut r = x.clone();
        for _ in 0..2 {
            for mi in &elements {
                let c = e.apply(&(&mi.adjoint() * &r));
                r = &r - &(mi * &c);
            }
        }
        let rel = r.norm2() / x.norm2();
        match classify_strict(rel) {
            Ok(RankCall::Zero) => continue,
            Ok(RankCall::NonZero) => {}
            Err(_) => return Err(Error::DegenerateNormalization { value: rel }),
        }
        let a = e.apply(&(&r.adjoint() * &r));
        let a = (&a + &a.adjoint()).scale(crate::linalg::re(0.5));
        let spec = a.hermitian_spectrum();
        let top = spec.last().copied().unwrap_or(0.0);
        for &lam in &spec {
            if classify_strict(lam.abs() / top).is_err() {
                return Err(Error::DegenerateNormalization { value: lam / top });
            }
        }
        let cut = crate::tol::BAND_LO * top;
        let inv_sqrt = a.hermitian_apply(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
        let support = a.hermitian_apply(|l| if l > cut { 1.0 } else { 0.0 });
        elements.push(&r * &inv_sqrt);
        supports.push(support);
    }
    Ok(PPBasis { elements, supports })
}

impl PPBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    /// The projections `f_j = E(m_j* m_j)`.
    pub fn supports(&self) -> &[AlgebraElement] {
        &self.supports
    }

    /// `sum_j m_j m_j*`; a basis-independent central element.
    pub fn index_element(&self) -> AlgebraElement {
        let m = self.elements[0].algebra();
        self.elements
            .iter()
            .fold(m.zero(), |acc, x| &acc + &(x * &x.adjoint()))
    }

    pub fn residuals(&self, e: &ConditionalExpectation) -> PPBasisResiduals {
        let mut orthonormality: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let g = e.apply(&(&a.adjoint() * b));
                let r = if i == j { g.distance(&self.supports[j]) } else { g.op_norm() };
                orthonormality = orthonormality.max(r);
            }
        }
        let support_projection = self
            .supports
            .iter()
            .map(|f| (f * f).distance(f) + f.adjoint().distance(f))
            .fold(0.0, f64::max);
        let m = e.source();
        let mut reconstruction: f64 = 0.0;
        for x in m.trace_basis() {
            let rebuilt = self
                .elements
                .iter()
                .fold(m.zero(), |acc, mj| &acc + &(mj * &e.apply(&(&mj.adjoint() * &x))));
            reconstruction = reconstruction.max((&x - &rebuilt).norm2() / x.norm2());
        }
        PPBasisResiduals { orthonormality, support_projection, reconstruction }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, FiniteGroup, MultiMatrixAlgebra, DEFAULT_SEED};
    use crate::expectation::conditional_expectation;
    use crate::linalg::re;
    use crate::subalgebra::{subgroup_subalgebra, Subalgebra};

    fn check(b: &PPBasis, e: &ConditionalExpectation) {
        let r = b.residuals(e);
        assert!(r.orthonormality < 1e-9, "{r:?}");
        assert!(r.support_projection < 1e-9, "{r:?}");
        assert!(r.reconstruction < 1e-8, "{r:?}");
    }

    #[test]
    fn identity_expectation() {
        let m = MultiMatrixAlgebra::with_regular_trace(vec![1, 2]).unwrap();
        let e = conditional_expectation(&m, &Subalgebra::whole(&m)).unwrap();
        let b = pp_basis(&e).unwrap();
        check(&b, &e);
        assert_eq!(b.len(), 1);
        assert!(b.elements()[0].distance(&m.identity()) < 1e-12);
        assert!(b.supports()[0].distance(&m.identity()) < 1e-12);
    }

    #[test]
    fn scalars_in_m2() {
        let m2 = MultiMatrixAlgebra::full_matrix(2);
        let e = conditional_expectation(&m2, &Subalgebra::scalars(&m2)).unwrap();
        let b = pp_basis(&e).unwrap();
        assert_eq!(b.len(), 4);
        check(&b, &e);
        for f in b.supports() {
            assert!(f.distance(&m2.identity()) < 1e-10);
        }
    }

    #[test]
    fn coset_representatives_pass_basis_checks() {
        // {e, s} for a transposition s is a basis of C[S3] over C[Z/3]
        let g = FiniteGroup::symmetric(3);
        let ga = group_algebra(&g, DEFAULT_SEED).unwrap();
        let rot = g.subgroup(&[3]);
        assert_eq!(rot.len(), 3);
        let p = subgroup_subalgebra(&ga, &rot).unwrap();
        let e = conditional_expectation(ga.algebra(), &p).unwrap();
        let s = (0..6).find(|x| !rot.contains(x)).unwrap();
        let reps = PPBasis {
            elements: vec![ga.element(0).clone(), ga.element(s).clone()],
            supports: vec![ga.algebra().identity(), ga.algebra().identity()],
        };
        check(&reps, &e);
        let computed = pp_basis(&e).unwrap();
        check(&computed, &e);
        // sum m_j m_j* does not depend on the basis: it is [G:H] 1
        let two = ga.algebra().scalar(re(2.0));
        assert!(reps.index_element().distance(&two) < 1e-9);
        assert!(computed.index_element().distance(&two) < 1e-9);
    }
}
