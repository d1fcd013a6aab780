//! Angles between subalgebras and the algebra generated by their Jones projections.
//!
//! The angle operator of a pair `(P, Q)` is taken to be `e_P e_Q e_P` on
//! `L^2(M)`. Its eigenvalues `1` come from `P n Q`, its eigenvalues `0` from
//! the orthogonal complement of `P` or from directions of `P` orthogonal to
//! `Q`, and every eigenvalue `lambda` strictly inside `(0, 1)` contributes
//! the angle `arccos sqrt(lambda)`.

mod bound;
mod halmos;
mod model;

pub use bound::{counterexample_probe, index_bound_check, BoundReport, ProbeReport};
pub use halmos::{halmos_decompose, GenericBlock, HalmosDecomposition};
pub use model::{build_automorphism_model, AutomorphismSumModel, SumOperatorReport};

use std::io::Write;

use serde::Serialize;

use crate::closure::WordClosure;
use crate::error::{Error, Result};
use crate::gns::{gns, jones_projection, RepresentedOperator};
use crate::linalg::{flatten, hermitian_eigenvalues, projector, stacked_kernel, CMat};
use crate::subalgebra::{intersect, Subalgebra};
use crate::tol::{CLUSTER, LAW, RANK_REL, SPAN_REL};

/// The algebra spanned by words in a family of projections.
#[derive(Debug, Clone)]
pub struct GeneratedAlgebra {
    generators: Vec<RepresentedOperator>,
    closure: WordClosure,
}

pub fn generated_projection_algebra(
    projections: &[RepresentedOperator],
    adjoin_unit: bool,
) -> Result<GeneratedAlgebra> {
    check_projections(projections)?;
    let gens: Vec<CMat> = projections.iter().map(|p| p.matrix().clone()).collect();
    let closure = WordClosure::generate(&gens, adjoin_unit, SPAN_REL);
    Ok(GeneratedAlgebra { generators: projections.to_vec(), closure })
}

impl GeneratedAlgebra {
    pub fn generators(&self) -> &[RepresentedOperator] {
        &self.generators
    }

    /// Accepted words as generator index sequences; the empty word is the unit.
    pub fn basis_words(&self) -> &[Vec<usize>] {
        self.closure.words()
    }

    pub fn dim(&self) -> usize {
        self.closure.dim()
    }

    /// Length of the longest basis word.
    pub fn ell(&self) -> usize {
        self.closure.ell()
    }

    pub fn unit_adjoined(&self) -> bool {
        self.closure.unit_adjoined()
    }

    pub fn closure_residual(&self) -> f64 {
        self.closure.closure_residual()
    }

    /// Relative distance of `op` from the span.
    pub fn residual(&self, op: &RepresentedOperator) -> f64 {
        self.closure.residual(op.matrix())
    }

    pub fn members(&self) -> &[CMat] {
        self.closure.members()
    }
}

fn check_projections(projections: &[RepresentedOperator]) -> Result<()> {
    let Some(first) = projections.first() else {
        return Ok(());
    };
    for p in projections {
        if p.dim() != first.dim() {
            return Err(Error::ShapeMismatch("projections act on different spaces".into()));
        }
        let residual = p.projection_defect();
        if residual > LAW {
            return Err(Error::NotProjection { residual });
        }
    }
    Ok(())
}

/// Projection onto the intersection of the ranges, via the joint kernel of `1 - f`.
pub fn wedge(projections: &[RepresentedOperator]) -> Result<RepresentedOperator> {
    let first = projections
        .first()
        .ok_or_else(|| Error::ShapeMismatch("wedge of an empty family".into()))?;
    let d = first.dim();
    if projections.iter().any(|p| p.dim() != d) {
        return Err(Error::ShapeMismatch("projections act on different spaces".into()));
    }
    let id = CMat::identity(d, d);
    let stack: Vec<CMat> = projections.iter().map(|p| &id - p.matrix()).collect();
    let k = stacked_kernel(&stack, d, RANK_REL);
    Ok(RepresentedOperator::new(projector(&k)))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AngleSpectrum {
    /// Spectrum of `e_P e_Q e_P`, ascending.
    pub raw_eigenvalues: Vec<f64>,
    /// Nontrivial angles in `(0, pi/2)`, ascending.
    pub angles: Vec<f64>,
    /// `dim(P n Q)`.
    pub intersection_rank: usize,
}

impl AngleSpectrum {
    /// Eigenvalues strictly inside `(0, 1)` after clustering at the shared tolerance.
    pub fn interior_eigenvalues(&self) -> Vec<f64> {
        interior(&self.raw_eigenvalues)
    }

    /// Count of eigenvalues clustered at `1`.
    pub fn unit_multiplicity(&self) -> usize {
        self.raw_eigenvalues.iter().filter(|&&l| l >= 1.0 - CLUSTER).count()
    }

    /// Largest distance of a raw eigenvalue outside `[0, 1]`.
    pub fn range_defect(&self) -> f64 {
        self.raw_eigenvalues
            .iter()
            .map(|&l| (-l).max(l - 1.0).max(0.0))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn interior(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .copied()
        .filter(|&l| l > CLUSTER && l < 1.0 - CLUSTER)
        .collect()
}

pub fn angle_spectrum(p: &Subalgebra, q: &Subalgebra) -> Result<AngleSpectrum> {
    if p.ambient() != q.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let h = gns(p.ambient());
    let ep = jones_projection(p, &h)?.into_matrix();
    let eq = jones_projection(q, &h)?.into_matrix();
    let raw_eigenvalues = hermitian_eigenvalues(&(&ep * &eq * &ep));
    let intersection_rank = intersect(&[p.clone(), q.clone()])?.dim();
    let angles = interior(&raw_eigenvalues)
        .into_iter()
        .rev()
        .map(|l| l.sqrt().acos())
        .collect();
    Ok(AngleSpectrum { raw_eigenvalues, angles, intersection_rank })
}

/// Writes one value per line with 17 significant digits.
pub fn write_spectrum_csv<W: Write>(values: &[f64], mut out: W) -> Result<()> {
    for v in values {
        writeln!(out, "{v:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

/// `|a - b|` in Hilbert-Schmidt norm, used for operator comparisons in reports.
pub fn operator_distance(a: &RepresentedOperator, b: &RepresentedOperator) -> f64 {
    (flatten(a.matrix()) - flatten(b.matrix())).norm()
}
