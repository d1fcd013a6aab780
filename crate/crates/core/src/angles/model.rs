//! `M = (+)_{alpha in A} N` with the diagonal copy `P` and the twisted copy `Q`.
//!
//! With `E_P(+) x_a) = sum_a x_a / |A|` and
//! `E_Q((+) x_a) = (+)_b b(sum_a a^{-1}(x_a) / |A|)`, one has
//! `E_P E_Q E_P = |A|^{-2} iota T pi E_P`, where `T = sum_{a,b} a b^{-1}` acts
//! on `N` and `iota`, `pi` identify `P` with `N`.

use serde::Serialize;

use crate::algebra::{AlgebraElement, BlockSpec, MultiMatrixAlgebra, StarAutomorphism, TraceWeights};
use crate::angles::{angle_spectrum, generated_projection_algebra, interior, AngleSpectrum};
use crate::error::{Error, Result};
use crate::expectation::{conditional_expectation, ConditionalExpectation};
use crate::gns::{gns, jones_projection};
use crate::index::{pimsner_popa_index, IndexConfig, IndexResult};
use crate::linalg::{distinct_count, hermitian_eigenvalues, re, CMat};
use crate::subalgebra::{intersect, Subalgebra};
use crate::tol::CLUSTER;

const DUPLICATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct AutomorphismSumModel {
    base: MultiMatrixAlgebra,
    autos: Vec<StarAutomorphism>,
    big: MultiMatrixAlgebra,
    p: Subalgebra,
    q: Subalgebra,
    t: CMat,
}

/// Spectral data of the model.
#[derive(Debug, Clone, Serialize)]
pub struct SumOperatorReport {
    /// Eigenvalues of `T` on `N`, ascending.
    pub t_spectrum: Vec<f64>,
    pub t_distinct: usize,
    /// `|T - T*|` (zero for trace-preserving automorphisms).
    pub t_hermitian_defect: f64,
    /// `|E_P E_Q E_P - |A|^{-2} iota T pi E_P|` in operator norm.
    pub proportionality_residual: f64,
    /// Largest gap between the orthogonal-projection expectations and the explicit formulas.
    pub formula_residual: f64,
    /// `dim(P n Q)`, the diagonal copy of the fixed points.
    pub fixed_point_dim: usize,
    pub fixed_point_index: f64,
    pub angles: AngleSpectrum,
    /// Number of distinct interior eigenvalues of `e_P e_Q e_P`.
    pub angle_operator_distinct: usize,
    /// Dimension of the algebra generated by `e_P, e_Q` (unit adjoined).
    pub projection_algebra_dim: usize,
}

pub fn build_automorphism_model(
    base: &MultiMatrixAlgebra,
    autos: &[StarAutomorphism],
) -> Result<AutomorphismSumModel> {
    if autos.is_empty() {
        return Err(Error::ShapeMismatch("automorphism set is empty".into()));
    }
    for a in autos {
        if a.algebra() != base {
            return Err(Error::AmbientMismatch);
        }
        a.validate()?;
    }
    for i in 0..autos.len() {
        for j in i + 1..autos.len() {
            if autos[i].distance(&autos[j]) <= DUPLICATE_TOL {
                return Err(Error::DuplicateAutomorphism { first: i, second: j });
            }
        }
    }
    let g = autos.len();
    let sizes: Vec<usize> = (0..g).flat_map(|_| base.block_sizes().iter().copied()).collect();
    let weights: Vec<f64> =
        (0..g).flat_map(|_| base.weights().iter().map(move |w| w / g as f64)).collect();
    let big = MultiMatrixAlgebra::new(BlockSpec::new(sizes)?, TraceWeights::new(weights))?;

    let model_basis = base.trace_basis();
    let p_elems: Vec<AlgebraElement> =
        model_basis.iter().map(|x| stack(&big, &vec![x.clone(); g])).collect();
    let q_elems: Vec<AlgebraElement> = model_basis
        .iter()
        .map(|x| stack(&big, &autos.iter().map(|a| a.apply(x)).collect::<Vec<_>>()))
        .collect();
    let p = Subalgebra::from_elements(&big, &p_elems)?;
    let q = Subalgebra::from_elements(&big, &q_elems)?;

    let mut t = CMat::zeros(base.dim(), base.dim());
    for a in autos {
        for b in autos {
            t += a.matrix() * b.inverse().matrix();
        }
    }
    Ok(AutomorphismSumModel { base: base.clone(), autos: autos.to_vec(), big, p, q, t })
}

fn stack(big: &MultiMatrixAlgebra, parts: &[AlgebraElement]) -> AlgebraElement {
    let blocks = parts.iter().flat_map(|x| x.blocks().iter().cloned()).collect();
    big.element(blocks).expect("summand shapes match")
}

impl AutomorphismSumModel {
    pub fn base(&self) -> &MultiMatrixAlgebra {
        &self.base
    }

    pub fn autos(&self) -> &[StarAutomorphism] {
        &self.autos
    }

    pub fn big(&self) -> &MultiMatrixAlgebra {
        &self.big
    }

    pub fn p(&self) -> &Subalgebra {
        &self.p
    }

    pub fn q(&self) -> &Subalgebra {
        &self.q
    }

    /// `T = sum_{a,b} a b^{-1}` on trace-basis coordinates of `N`.
    pub fn t_operator(&self) -> &CMat {
        &self.t
    }

    pub fn apply_t(&self, x: &AlgebraElement) -> AlgebraElement {
        self.base.from_coords(&(&self.t * x.coords()))
    }

    /// The `alpha`-th summand of an element of `M`.
    pub fn component(&self, x: &AlgebraElement, alpha: usize) -> AlgebraElement {
        let nb = self.base.n_blocks();
        self.base
            .element(x.blocks()[alpha * nb..(alpha + 1) * nb].to_vec())
            .expect("summand shapes match")
    }

    /// `x -> (+)_a x`.
    pub fn iota(&self, x: &AlgebraElement) -> AlgebraElement {
        stack(&self.big, &vec![x.clone(); self.autos.len()])
    }

    fn average(&self, parts: impl Iterator<Item = AlgebraElement>) -> AlgebraElement {
        let g = self.autos.len() as f64;
        parts.fold(self.base.zero(), |acc, x| &acc + &x).scale(re(1.0 / g))
    }

    /// `E_P` as given by the averaging formula.
    pub fn formula_e_p(&self, x: &AlgebraElement) -> AlgebraElement {
        let avg = self.average((0..self.autos.len()).map(|a| self.component(x, a)));
        self.iota(&avg)
    }

    /// `E_Q` as given by the twisted averaging formula.
    pub fn formula_e_q(&self, x: &AlgebraElement) -> AlgebraElement {
        let avg = self.average(
            self.autos.iter().enumerate().map(|(a, alpha)| alpha.inverse().apply(&self.component(x, a))),
        );
        stack(&self.big, &self.autos.iter().map(|b| b.apply(&avg)).collect::<Vec<_>>())
    }

    pub fn expectations(&self) -> Result<(ConditionalExpectation, ConditionalExpectation)> {
        Ok((conditional_expectation(&self.big, &self.p)?, conditional_expectation(&self.big, &self.q)?))
    }

    /// Spectrum of `T`, the proportionality check, and the fixed-point index.
    pub fn sum_operator(&self, index: &IndexConfig) -> Result<SumOperatorReport> {
        let g = self.autos.len() as f64;
        let fp = self.big.linear_map_matrix(|x| self.formula_e_p(x));
        let fq = self.big.linear_map_matrix(|x| self.formula_e_q(x));
        let (ep, eq) = self.expectations()?;
        let formula_residual = (&fp - ep.matrix()).norm().max((&fq - eq.matrix()).norm());

        let lhs = &fp * &fq * &fp;
        let rhs = self.big.linear_map_matrix(|x| {
            let n = self.component(&self.formula_e_p(x), 0);
            self.iota(&self.apply_t(&n)).scale(re(1.0 / (g * g)))
        });
        let proportionality_residual = crate::linalg::op_norm(&(lhs - rhs));

        let t_hermitian_defect = (&self.t - self.t.adjoint()).norm();
        let t_spectrum = hermitian_eigenvalues(&self.t);
        let t_distinct = distinct_count(&t_spectrum, CLUSTER);

        let fixed = intersect(&[self.p.clone(), self.q.clone()])?;
        let fixed_point_index = self.fixed_point_index(&fixed, index)?.value;

        let angles = angle_spectrum(&self.p, &self.q)?;
        let angle_operator_distinct = distinct_count(&interior(&angles.raw_eigenvalues), CLUSTER);
        let h = gns(&self.big);
        let jp = jones_projection(&self.p, &h)?;
        let jq = jones_projection(&self.q, &h)?;
        let projection_algebra_dim = generated_projection_algebra(&[jp, jq], true)?.dim();

        Ok(SumOperatorReport {
            t_spectrum,
            t_distinct,
            t_hermitian_defect,
            proportionality_residual,
            formula_residual,
            fixed_point_dim: fixed.dim(),
            fixed_point_index,
            angles,
            angle_operator_distinct,
            projection_algebra_dim,
        })
    }

    fn fixed_point_index(&self, fixed: &Subalgebra, config: &IndexConfig) -> Result<IndexResult> {
        pimsner_popa_index(&conditional_expectation(&self.big, fixed)?, config)
    }
}
