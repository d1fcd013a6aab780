mod common;

use common::{block_diagonal, op_dist};
use opalg::algebra::MultiMatrixAlgebra;
use opalg::angles::{angle_spectrum, halmos_decompose, operator_distance, wedge};
use opalg::expectation::conditional_expectation;
use opalg::gns::{gns, jones_projection, RepresentedOperator};
use opalg::index::{pimsner_popa_index, IndexConfig};
use opalg::linalg::random_unitary;
use opalg::subalgebra::Subalgebra;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3)
}

/// A conjugate of a block-diagonal model subalgebra, cut into sub-blocks of size `cut` where possible.
fn conjugated(m: &MultiMatrixAlgebra, cut: usize, seed: u64) -> Subalgebra {
    let parts: Vec<Vec<usize>> = m
        .block_sizes()
        .iter()
        .map(|&n| if n > cut { vec![cut, n - cut] } else { vec![n] })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    block_diagonal(m, &parts).conjugate(&m.random_unitary(&mut rng)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    #[test]
    fn coordinates_are_isometric(s in sizes(), seed in any::<u64>()) {
        let m = MultiMatrixAlgebra::with_regular_trace(s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = m.random_element(&mut rng);
        let y = m.random_element(&mut rng);
        let lhs = y.coords().dotc(&x.coords());
        prop_assert!((lhs - x.inner(&y)).norm() < 1e-10 * (1.0 + x.norm2() * y.norm2()));
    }

    #[test]
    fn expectation_laws_hold(s in sizes(), cut in 1usize..=2, seed in any::<u64>()) {
        let m = MultiMatrixAlgebra::with_regular_trace(s).unwrap();
        let p = conjugated(&m, cut, seed);
        let e = conditional_expectation(&m, &p).unwrap();
        prop_assert!(e.residuals(seed, 8).max() < 1e-10);
    }

    #[test]
    fn angle_spectrum_is_symmetric(s in sizes(), seed in any::<u64>()) {
        let m = MultiMatrixAlgebra::with_regular_trace(s).unwrap();
        let p = conjugated(&m, 1, seed);
        let q = conjugated(&m, 2, seed.wrapping_add(1));
        let a = angle_spectrum(&p, &q).unwrap();
        let b = angle_spectrum(&q, &p).unwrap();
        prop_assert_eq!(a.angles.len(), b.angles.len());
        for (x, y) in a.angles.iter().zip(&b.angles) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!(a.range_defect() < 1e-10);
        prop_assert_eq!(a.intersection_rank, a.unit_multiplicity());
    }

    #[test]
    fn wedge_is_order_free(s in sizes(), seed in any::<u64>()) {
        let m = MultiMatrixAlgebra::with_regular_trace(s).unwrap();
        let h = gns(&m);
        let e: Vec<RepresentedOperator> = (0..3)
            .map(|i| jones_projection(&conjugated(&m, 1 + i % 2, seed.wrapping_add(i as u64)), &h).unwrap())
            .collect();
        let w = wedge(&e).unwrap();
        let r = wedge(&[e[2].clone(), e[0].clone(), e[1].clone()]).unwrap();
        prop_assert!(operator_distance(&w, &r) < 1e-9);
        prop_assert!(w.projection_defect() < 1e-10);
        prop_assert!(op_dist(&(e[0].matrix() * w.matrix()), w.matrix()) < 1e-9);
    }

    #[test]
    fn halmos_reconstructs(d in 2usize..=7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mk = |r: usize| {
            let u = random_unitary(d, &mut rng);
            let c = u.columns(0, r);
            RepresentedOperator::new(c * c.adjoint())
        };
        let p = mk(1 + seed as usize % (d - 1));
        let q = mk(1 + (seed >> 8) as usize % (d - 1));
        let h = halmos_decompose(&p, &q).unwrap();
        prop_assert_eq!(h.covered_dim(), d);
        prop_assert!(h.reconstruction_residual(&p, &q) < 1e-9);
    }

    #[test]
    fn index_brackets_and_lower_bound(s in sizes(), seed in any::<u64>()) {
        let m = MultiMatrixAlgebra::with_regular_trace(s).unwrap();
        let p = conjugated(&m, 1, seed);
        let e = conditional_expectation(&m, &p).unwrap();
        let cfg = IndexConfig { starts: 8, audit_samples: 100, seed, ..Default::default() };
        let r = pimsner_popa_index(&e, &cfg).unwrap();
        prop_assert!(r.value >= 1.0 - 1e-9);
        prop_assert!(r.c_lo <= r.c_hi);
        // the witness attains c_hi
        let w = r.witness(&e);
        let gap = e.apply(&w).try_sub(&w.scale(opalg::linalg::re(r.c_hi))).unwrap().min_eigenvalue();
        prop_assert!(gap.abs() < 1e-7, "gap {}", gap);
    }
}
