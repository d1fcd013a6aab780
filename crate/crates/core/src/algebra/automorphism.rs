//! Trace-preserving *-automorphisms stored as matrices on trace-basis coordinates.

use super::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{CMat, ONE};
use crate::tol::LAW;

#[derive(Debug, Clone)]
pub struct StarAutomorphism {
    algebra: MultiMatrixAlgebra,
    matrix: CMat,
}

impl StarAutomorphism {
    pub fn identity(algebra: &MultiMatrixAlgebra) -> Self {
        let d = algebra.dim();
        StarAutomorphism { algebra: algebra.clone(), matrix: CMat::identity(d, d) }
    }

    /// `Ad(u): x -> u x u*`.
    pub fn from_unitary(u: &AlgebraElement) -> Result<Self> {
        let residual = u.unitarity_defect();
        if residual > LAW {
            return Err(Error::NotUnitary { residual });
        }
        let ua = u.adjoint();
        let algebra = u.algebra().clone();
        let matrix = algebra.linear_map_matrix(|b| &(u * b) * &ua);
        Ok(StarAutomorphism { algebra, matrix })
    }

    /// Wraps a coordinate matrix after checking every automorphism law.
    pub fn from_matrix(algebra: &MultiMatrixAlgebra, matrix: CMat) -> Result<Self> {
        let d = algebra.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::ShapeMismatch(format!("automorphism matrix must be {d}x{d}")));
        }
        let a = StarAutomorphism { algebra: algebra.clone(), matrix };
        a.validate()?;
        Ok(a)
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        self.algebra.from_coords(&(&self.matrix * x.coords()))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        StarAutomorphism { algebra: self.algebra.clone(), matrix: &self.matrix * &other.matrix }
    }

    /// Trace-preserving automorphisms are unitary on L^2, so the inverse is the adjoint.
    pub fn inverse(&self) -> Self {
        StarAutomorphism { algebra: self.algebra.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Smallest `k <= max` with `alpha^k = id`.
    pub fn order(&self, max: usize) -> Option<usize> {
        let id = CMat::identity(self.algebra.dim(), self.algebra.dim());
        let mut p = self.matrix.clone();
        for k in 1..=max {
            if (&p - &id).norm() < 1e-9 {
                return Some(k);
            }
            p = &self.matrix * p;
        }
        None
    }

    /// Largest residual per law over the trace basis:
    /// (multiplicative, star, unital, trace).
    pub fn law_residuals(&self) -> [(&'static str, f64); 4] {
        let basis = self.algebra.trace_basis();
        let imgs: Vec<AlgebraElement> = basis.iter().map(|b| self.apply(b)).collect();
        let mut mult: f64 = 0.0;
        let mut star: f64 = 0.0;
        let mut trace: f64 = 0.0;
        for (i, x) in basis.iter().enumerate() {
            star = star.max(self.apply(&x.adjoint()).distance(&imgs[i].adjoint()));
            trace = trace.max((imgs[i].trace() - x.trace()).norm());
            for (j, y) in basis.iter().enumerate() {
                mult = mult.max(self.apply(&(x * y)).distance(&(&imgs[i] * &imgs[j])));
            }
        }
        let one = self.algebra.identity();
        let unital = self.apply(&one).distance(&one);
        let _ = ONE;
        [("multiplicative", mult), ("star", star), ("unital", unital), ("trace", trace)]
    }

    pub fn validate(&self) -> Result<()> {
        for (law, residual) in self.law_residuals() {
            if residual > LAW {
                return Err(Error::InvariantViolation { law, residual });
            }
        }
        Ok(())
    }
}
