//! Simultaneous block decomposition of a pair of projections.
//!
//! The space splits into the four intersections `p^q`, `p^q'`, `p'^q`,
//! `p'^q'` (primes are complements) and a generic part carrying a direct sum
//! of 2-dimensional blocks. On a generic block spanned by `v in ran p` and
//! its partner `u in ran(1-p)`,
//!
//! ```text
//! p = [[1, 0], [0, 0]]    q = [[c, s], [s, 1 - c]]    s = sqrt(c (1 - c))
//! ```
//!
//! where `c = cos^2(theta)` is an eigenvalue of `pqp` inside `(0, 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gns::RepresentedOperator;
use crate::linalg::{distinct_count, hermitian_eigen, projection_range, re, CMat, CVec};
use crate::tol::{CLUSTER, LAW};

#[derive(Debug, Clone)]
pub struct GenericBlock {
    pub cos2: f64,
    pub v: CVec,
    pub u: CVec,
}

#[derive(Debug, Clone, Default)]
pub struct HalmosDecomposition {
    pub p_and_q: Vec<CVec>,
    pub p_and_not_q: Vec<CVec>,
    pub not_p_and_q: Vec<CVec>,
    pub not_p_and_not_q: Vec<CVec>,
    pub generic: Vec<GenericBlock>,
    dim: usize,
}

/// Multiplicities of the five summands.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct HalmosCounts {
    pub p_and_q: usize,
    pub p_and_not_q: usize,
    pub not_p_and_q: usize,
    pub not_p_and_not_q: usize,
    pub generic: usize,
}

pub fn halmos_decompose(p: &RepresentedOperator, q: &RepresentedOperator) -> Result<HalmosDecomposition> {
    if p.dim() != q.dim() {
        return Err(Error::ShapeMismatch("projections act on different spaces".into()));
    }
    for f in [p, q] {
        let residual = f.projection_defect();
        if residual > LAW {
            return Err(Error::NotProjection { residual });
        }
    }
    let d = p.dim();
    let pm = p.matrix();
    let qm = q.matrix();
    let id = CMat::identity(d, d);
    let mut out = HalmosDecomposition { dim: d, ..Default::default() };

    let vp = projection_range(pm);
    let (vals, w) = hermitian_eigen(&(vp.adjoint() * qm * &vp));
    for (i, &c) in vals.iter().enumerate() {
        let v = &vp * w.column(i);
        if c >= 1.0 - CLUSTER {
            out.p_and_q.push(v);
        } else if c <= CLUSTER {
            out.p_and_not_q.push(v);
        } else {
            let u = (&id - pm) * (qm * &v);
            let u = u.unscale(u.norm());
            out.generic.push(GenericBlock { cos2: c, v, u });
        }
    }

    let vc = projection_range(&(&id - pm));
    let (vals, w) = hermitian_eigen(&(vc.adjoint() * qm * &vc));
    for (i, &c) in vals.iter().enumerate() {
        let v = &vc * w.column(i);
        if c >= 1.0 - CLUSTER {
            out.not_p_and_q.push(v);
        } else if c <= CLUSTER {
            out.not_p_and_not_q.push(v);
        }
    }
    Ok(out)
}

impl HalmosDecomposition {
    pub fn counts(&self) -> HalmosCounts {
        HalmosCounts {
            p_and_q: self.p_and_q.len(),
            p_and_not_q: self.p_and_not_q.len(),
            not_p_and_q: self.not_p_and_q.len(),
            not_p_and_not_q: self.not_p_and_not_q.len(),
            generic: self.generic.len(),
        }
    }

    /// Generic `cos^2` values, ascending.
    pub fn cos2_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.generic.iter().map(|b| b.cos2).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn distinct_cos2(&self) -> usize {
        distinct_count(&self.cos2_values(), CLUSTER)
    }

    /// Total dimension accounted for (should equal the space dimension).
    pub fn covered_dim(&self) -> usize {
        let c = self.counts();
        c.p_and_q + c.p_and_not_q + c.not_p_and_q + c.not_p_and_not_q + 2 * c.generic
    }

    /// `(p, q)` rebuilt from the blocks.
    pub fn reconstruct(&self) -> (CMat, CMat) {
        let d = self.dim;
        let mut p = CMat::zeros(d, d);
        let mut q = CMat::zeros(d, d);
        let outer = |a: &CVec, b: &CVec| a * b.adjoint();
        for v in &self.p_and_q {
            p += outer(v, v);
            q += outer(v, v);
        }
        for v in &self.p_and_not_q {
            p += outer(v, v);
        }
        for v in &self.not_p_and_q {
            q += outer(v, v);
        }
        for b in &self.generic {
            let c = b.cos2;
            let s = (c * (1.0 - c)).sqrt();
            p += outer(&b.v, &b.v);
            q += outer(&b.v, &b.v) * re(c)
                + (outer(&b.v, &b.u) + outer(&b.u, &b.v)) * re(s)
                + outer(&b.u, &b.u) * re(1.0 - c);
        }
        (p, q)
    }

    /// Largest Frobenius error of the reconstructed pair.
    pub fn reconstruction_residual(&self, p: &RepresentedOperator, q: &RepresentedOperator) -> f64 {
        let (pr, qr) = self.reconstruct();
        (pr - p.matrix()).norm().max((qr - q.matrix()).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn op(rows: &[f64], n: usize) -> RepresentedOperator {
        RepresentedOperator::new(CMat::from_row_slice(n, n, &rows.iter().map(|&x| re(x)).collect::<Vec<_>>()))
    }

    #[test]
    fn equal_projections_have_no_generic_part() {
        let p = op(&[1.0, 0.0, 0.0, 0.0], 2);
        let h = halmos_decompose(&p, &p).unwrap();
        assert_eq!(h.counts().generic, 0);
        assert_eq!(h.counts().p_and_q, 1);
        assert_eq!(h.counts().not_p_and_not_q, 1);
    }

    #[test]
    fn orthogonal_projections() {
        let p = op(&[1.0, 0.0, 0.0, 0.0], 2);
        let q = op(&[0.0, 0.0, 0.0, 1.0], 2);
        let h = halmos_decompose(&p, &q).unwrap();
        let c = h.counts();
        assert_eq!((c.generic, c.p_and_not_q, c.not_p_and_q), (0, 1, 1));
    }

    #[test]
    fn line_at_an_angle() {
        let t: f64 = 0.4;
        let (c, s) = (t.cos(), t.sin());
        let p = op(&[1.0, 0.0, 0.0, 0.0], 2);
        let q = op(&[c * c, c * s, c * s, s * s], 2);
        let h = halmos_decompose(&p, &q).unwrap();
        assert_eq!(h.generic.len(), 1);
        assert!((h.generic[0].cos2 - c * c).abs() < 1e-12);
        assert!(h.reconstruction_residual(&p, &q) < 1e-12);
    }

    #[test]
    fn random_pair_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = 7;
        let mk = |rank: usize, rng: &mut ChaCha8Rng| {
            let u = random_unitary(d, rng);
            let cols = u.columns(0, rank);
            RepresentedOperator::new(cols * cols.adjoint())
        };
        let p = mk(3, &mut rng);
        let q = mk(4, &mut rng);
        let h = halmos_decompose(&p, &q).unwrap();
        assert_eq!(h.covered_dim(), d);
        assert_eq!(h.generic.len(), 3);
        assert!(h.reconstruction_residual(&p, &q) < 1e-9);
    }
}
