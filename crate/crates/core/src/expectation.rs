//! Trace-preserving conditional expectations.
//!
//! For a unital *-subalgebra `P` of a finite-dimensional algebra with a
//! faithful trace, the unique trace-preserving conditional expectation onto `P`
//! is the orthogonal projection of `L^2(M, tr)` onto `L^2(P, tr)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::subalgebra::Subalgebra;
use crate::tol::LAW;

#[derive(Debug, Clone)]
pub struct ConditionalExpectation {
    target: Subalgebra,
    matrix: CMat,
}

/// Largest residual of each conditional-expectation law.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct ExpectationResiduals {
    pub idempotent: f64,
    pub unital: f64,
    pub positive: f64,
    pub trace_preserving: f64,
    pub bimodule: f64,
    pub star: f64,
}

impl ExpectationResiduals {
    pub fn max(&self) -> f64 {
        [
            self.idempotent,
            self.unital,
            self.positive,
            self.trace_preserving,
            self.bimodule,
            self.star,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("idempotent", self.idempotent),
            ("unital", self.unital),
            ("positive", self.positive),
            ("trace_preserving", self.trace_preserving),
            ("bimodule", self.bimodule),
            ("star", self.star),
        ]
    }
}

/// A pair `(a, x)` of basis indices where the bimodule property fails.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct DomainViolation {
    pub target_index: usize,
    pub ambient_index: usize,
    pub residual: f64,
}

/// `E_P`, the trace-preserving expectation of `ambient` onto `target`.
pub fn conditional_expectation(
    ambient: &MultiMatrixAlgebra,
    target: &Subalgebra,
) -> Result<ConditionalExpectation> {
    if target.ambient() != ambient {
        return Err(Error::NotSubalgebra("target lives in a different algebra".into()));
    }
    let unit = target.residual(&ambient.identity());
    if unit > LAW {
        return Err(Error::NotSubalgebra(format!("target is not unital ({unit:.3e})")));
    }
    Ok(ConditionalExpectation { target: target.clone(), matrix: target.projection() })
}

impl ConditionalExpectation {
    /// Wraps an arbitrary operator without any checks; for diagnostics.
    pub fn from_operator_unchecked(target: &Subalgebra, matrix: CMat) -> Self {
        ConditionalExpectation { target: target.clone(), matrix }
    }

    pub fn source(&self) -> &MultiMatrixAlgebra {
        self.target.ambient()
    }

    pub fn target(&self) -> &Subalgebra {
        &self.target
    }

    /// Matrix against the trace basis.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        self.source().from_coords(&(&self.matrix * x.coords()))
    }

    /// Checks every law on the trace basis, plus positivity on `samples`
    /// random elements drawn from `seed`.
    pub fn residuals(&self, seed: u64, samples: usize) -> ExpectationResiduals {
        let m = self.source();
        let basis = m.trace_basis();
        let one = m.identity();
        let id = CMat::identity(m.dim(), m.dim());
        let idempotent = (&self.matrix * &self.matrix - &self.matrix).norm();
        let unital = self.apply(&one).distance(&one);
        let mut trace_preserving: f64 = 0.0;
        let mut star: f64 = 0.0;
        let images: Vec<AlgebraElement> = basis.iter().map(|x| self.apply(x)).collect();
        for (x, ex) in basis.iter().zip(&images) {
            trace_preserving = trace_preserving.max((ex.trace() - x.trace()).norm());
            star = star.max(self.apply(&x.adjoint()).distance(&ex.adjoint()) / x.op_norm());
        }

        let mut positive: f64 = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let randoms: Vec<AlgebraElement> = (0..samples).map(|_| m.random_element(&mut rng)).collect();
        for x in basis.iter().chain(&randoms) {
            let xx = &x.adjoint() * x;
            let scale = xx.op_norm().max(f64::MIN_POSITIVE);
            let lam = self.apply(&xx).min_eigenvalue();
            positive = positive.max((-lam / scale).max(0.0));
        }

        let mut bimodule: f64 = 0.0;
        let tb = self.target.basis();
        for a in tb {
            let na = a.op_norm();
            for b in tb {
                let nb = b.op_norm();
                for (x, ex) in basis.iter().zip(&images) {
                    let lhs = self.apply(&(&(a * x) * b));
                    let rhs = &(a * ex) * b;
                    let r = lhs.try_sub(&rhs).expect("same algebra").norm2() / (na * nb * x.norm2());
                    bimodule = bimodule.max(r);
                }
            }
        }
        let _ = id;
        ExpectationResiduals { idempotent, unital, positive, trace_preserving, bimodule, star }
    }
}

/// Lists `(a, x)` with `E(a x) != a E(x)` or `E(x a) != E(x) a` beyond 1e-10.
pub fn multiplicative_domain_check(e: &ConditionalExpectation) -> Vec<DomainViolation> {
    let basis = e.source().trace_basis();
    let mut out = Vec::new();
    for (ai, a) in e.target().basis().iter().enumerate() {
        let na = a.op_norm();
        for (xi, x) in basis.iter().enumerate() {
            let ex = e.apply(x);
            let left = e.apply(&(a * x)).distance(&(a * &ex));
            let right = e.apply(&(x * a)).distance(&(&ex * a));
            let scale = na * x.op_norm();
            let residual = left.max(right) / scale;
            if residual > LAW {
                out.push(DomainViolation { target_index: ai, ambient_index: xi, residual });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, FiniteGroup, DEFAULT_SEED};
    use crate::linalg::{re, ZERO};
    use crate::subalgebra::subgroup_subalgebra;

    #[test]
    fn identity_and_trace_expectations() {
        let m = MultiMatrixAlgebra::with_regular_trace(vec![1, 2]).unwrap();
        let e = conditional_expectation(&m, &Subalgebra::whole(&m)).unwrap();
        let d = m.dim();
        assert!((e.matrix() - CMat::identity(d, d)).norm() < 1e-12);
        let e = conditional_expectation(&m, &Subalgebra::scalars(&m)).unwrap();
        for x in m.trace_basis() {
            let want = m.scalar(x.trace());
            assert!(e.apply(&x).distance(&want) < 1e-12);
        }
        assert!(e.residuals(1, 10).max() < 1e-10);
    }

    #[test]
    fn subgroup_expectation_kills_outside_elements() {
        let g = FiniteGroup::symmetric(3);
        let ga = group_algebra(&g, DEFAULT_SEED).unwrap();
        let h = g.subgroup(&[1]);
        let p = subgroup_subalgebra(&ga, &h).unwrap();
        let e = conditional_expectation(ga.algebra(), &p).unwrap();
        for x in 0..6 {
            let got = e.apply(ga.element(x));
            if h.contains(&x) {
                assert!(got.distance(ga.element(x)) < 1e-10);
            } else {
                assert!(got.op_norm() < 1e-10);
            }
        }
        assert!(e.residuals(2, 10).max() < 1e-10);
        assert!(multiplicative_domain_check(&e).is_empty());
    }

    #[test]
    fn domain_check_catches_corruption() {
        let m2 = MultiMatrixAlgebra::full_matrix(2);
        let diag = Subalgebra::diagonal(&m2);
        let e = conditional_expectation(&m2, &diag).unwrap();
        assert!(multiplicative_domain_check(&e).is_empty());
        let mut bad = e.matrix().clone();
        bad[(0, 1)] = re(0.3);
        bad[(3, 0)] = re(-0.2);
        let corrupted = ConditionalExpectation::from_operator_unchecked(&diag, bad);
        assert!(!multiplicative_domain_check(&corrupted).is_empty());
        assert!(corrupted.residuals(0, 5).max() > 1e-3);
        let _ = ZERO;
    }

    #[test]
    fn rejects_foreign_target() {
        let m2 = MultiMatrixAlgebra::full_matrix(2);
        let m3 = MultiMatrixAlgebra::full_matrix(3);
        assert!(matches!(
            conditional_expectation(&m2, &Subalgebra::whole(&m3)),
            Err(Error::NotSubalgebra(_))
        ));
    }
}
