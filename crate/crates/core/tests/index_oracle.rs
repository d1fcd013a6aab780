//! The optimizer against an independent dense search on random inclusions.

mod common;

use common::{block_diagonal, dense_index};
use opalg::algebra::{BlockSpec, MultiMatrixAlgebra, TraceWeights};
use opalg::expectation::conditional_expectation;
use opalg::index::{pimsner_popa_index, IndexConfig};
use opalg::subalgebra::Subalgebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_inclusions_match_dense_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..6 {
        let sizes: Vec<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(2..=3)).collect();
        let a: Vec<f64> = sizes.iter().map(|_| rng.random_range(1..=4) as f64).collect();
        let total: f64 = a.iter().zip(&sizes).map(|(a, &n)| a * n as f64).sum();
        let m = MultiMatrixAlgebra::new(
            BlockSpec::new(sizes.clone()).unwrap(),
            TraceWeights::new(a.iter().map(|a| a / total).collect()),
        )
        .unwrap();
        let parts: Vec<Vec<usize>> = sizes.iter().map(|&n| vec![1, n - 1]).collect();
        let p = block_diagonal(&m, &parts).conjugate(&m.random_unitary(&mut rng)).unwrap();
        let e = conditional_expectation(&m, &p).unwrap();
        let ours = pimsner_popa_index(&e, &IndexConfig::default()).unwrap().value;
        let dense = dense_index(&e, 64, case);
        assert!((ours - dense).abs() < 1e-6 * dense, "case {case}: {ours} vs {dense}");
    }
}

#[test]
fn scalars_in_weighted_sums() {
    // Ind(C1 < (+) M_{n_k}) = 1 / min_k w_k n_k ... attained on a minimal projection: 1 / min w_k
    let m = MultiMatrixAlgebra::new(BlockSpec::new(vec![1, 2]).unwrap(), TraceWeights::new(vec![0.2, 0.4])).unwrap();
    let e = conditional_expectation(&m, &Subalgebra::scalars(&m)).unwrap();
    let v = pimsner_popa_index(&e, &IndexConfig::default()).unwrap().value;
    assert!((v - 5.0).abs() < 1e-6, "{v}");
}
