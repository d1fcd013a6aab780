//! The index bound `Ind(E_N) <= L^ell dim A` and the unitary-sum probe.

use serde::Serialize;

use crate::algebra::{AlgebraElement, StarAutomorphism};
use crate::angles::generated_projection_algebra;
use crate::closure::WordClosure;
use crate::error::{Error, Result};
use crate::expectation::conditional_expectation;
use crate::gns::{gns, jones_projection, RepresentedOperator};
use crate::index::{pimsner_popa_index, IndexConfig};
use crate::linalg::{distinct_count, hermitian_eigenvalues, CMat};
use crate::subalgebra::{intersect, Subalgebra};
use crate::tol::{CLUSTER, LAW, SPAN_REL};

/// Relative slack allowed before the bound counts as violated.
pub const BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundReport {
    /// Largest index over the family.
    #[serde(rename = "L")]
    pub l: f64,
    /// Longest word in the unit-adjoined basis.
    pub ell: usize,
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    /// `dim A` and `ell` without the empty word.
    pub dim_a_without_unit: usize,
    pub ell_without_unit: usize,
    #[serde(rename = "indN")]
    pub ind_n: f64,
    pub bound: f64,
    /// `bound / 4`, only for two-member families.
    pub improved_bound: Option<f64>,
    pub satisfied: bool,
    pub improved_satisfied: Option<bool>,
    /// `dim N` for the intersection.
    pub intersection_dim: usize,
    /// Indices of the family members, in order.
    pub member_indices: Vec<f64>,
    /// Relative distance of `e_N` from the span of `A`.
    pub jones_in_span_residual: f64,
    pub closure_residual: f64,
}

pub fn index_bound_check(family: &[Subalgebra], config: &IndexConfig) -> Result<BoundReport> {
    let first = family
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty subalgebra family".into()))?;
    let m = first.ambient().clone();
    let n = intersect(family)?;
    let ind_n = pimsner_popa_index(&conditional_expectation(&m, &n)?, config)?.value;
    let mut member_indices = Vec::with_capacity(family.len());
    for p in family {
        member_indices.push(pimsner_popa_index(&conditional_expectation(&m, p)?, config)?.value);
    }
    let l = member_indices.iter().copied().fold(f64::MIN, f64::max);

    let h = gns(&m);
    let jones: Vec<RepresentedOperator> =
        family.iter().map(|p| jones_projection(p, &h)).collect::<Result<_>>()?;
    let with_unit = generated_projection_algebra(&jones, true)?;
    let without_unit = generated_projection_algebra(&jones, false)?;
    let e_n = jones_projection(&n, &h)?;

    let bound = l.powi(with_unit.ell() as i32) * with_unit.dim() as f64;
    let improved_bound = (family.len() == 2).then_some(bound / 4.0);
    let ok = |b: f64| ind_n <= b * (1.0 + BOUND_SLACK);
    Ok(BoundReport {
        l,
        ell: with_unit.ell(),
        dim_a: with_unit.dim(),
        dim_a_without_unit: without_unit.dim(),
        ell_without_unit: without_unit.ell(),
        ind_n,
        bound,
        improved_bound,
        satisfied: ok(bound),
        improved_satisfied: improved_bound.map(ok),
        intersection_dim: n.dim(),
        member_indices,
        jones_in_span_residual: with_unit.residual(&e_n),
        closure_residual: with_unit.closure_residual(),
    })
}

/// Finite-dimensionality of the generated algebra against the spectrum of unitary sums.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProbeReport {
    /// `dim alg{Ad u}` as linear maps, unit adjoined.
    pub ad_algebra_dim: usize,
    /// `dim alg{Ad(u v*)}` as linear maps, unit adjoined.
    pub ad_quotient_algebra_dim: usize,
    /// `dim alg{u v*}` inside `M`, unit adjoined.
    pub quotient_algebra_dim: usize,
    /// `#spec(sum_{u,v} Ad(u v*))`.
    pub ad_sum_distinct: usize,
    /// `#spec(sum_{u,v} u v*)`.
    pub sum_distinct: usize,
    pub ad_sum_spectrum: Vec<f64>,
    pub sum_spectrum: Vec<f64>,
}

pub fn counterexample_probe(unitaries: &[AlgebraElement]) -> Result<ProbeReport> {
    let first = unitaries
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no unitaries given".into()))?;
    let m = first.algebra().clone();
    if unitaries.iter().any(|u| u.algebra() != &m) {
        return Err(Error::OwnerMismatch);
    }
    for u in unitaries {
        let residual = u.unitarity_defect();
        if residual > LAW {
            return Err(Error::NotUnitary { residual });
        }
    }
    let ads: Vec<StarAutomorphism> =
        unitaries.iter().map(StarAutomorphism::from_unitary).collect::<Result<_>>()?;

    let mut quotients = Vec::new();
    let mut ad_quotients = Vec::new();
    for (u, au) in unitaries.iter().zip(&ads) {
        for (v, av) in unitaries.iter().zip(&ads) {
            quotients.push(u * &v.adjoint());
            ad_quotients.push(au.matrix() * av.inverse().matrix());
        }
    }
    let d = m.dim();
    let ad_sum = ad_quotients.iter().fold(CMat::zeros(d, d), |acc, x| acc + x);
    let sum = quotients.iter().fold(m.zero(), |acc, x| &acc + x);

    let ad_mats: Vec<CMat> = ads.iter().map(|a| a.matrix().clone()).collect();
    let ad_algebra_dim = WordClosure::generate(&ad_mats, true, SPAN_REL).dim();
    let ad_quotient_algebra_dim = WordClosure::generate(&ad_quotients, true, SPAN_REL).dim();
    let quotient_mats: Vec<CMat> = quotients.iter().map(|x| m.linear_map_matrix(|b| x * b)).collect();
    let quotient_algebra_dim = WordClosure::generate(&quotient_mats, true, SPAN_REL).dim();

    let ad_sum_spectrum = hermitian_eigenvalues(&ad_sum);
    let sum_spectrum = sum.hermitian_spectrum();
    Ok(ProbeReport {
        ad_algebra_dim,
        ad_quotient_algebra_dim,
        quotient_algebra_dim,
        ad_sum_distinct: distinct_count(&ad_sum_spectrum, CLUSTER),
        sum_distinct: distinct_count(&sum_spectrum, CLUSTER),
        ad_sum_spectrum,
        sum_spectrum,
    })
}
