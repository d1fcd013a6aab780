//! Oracles and fixtures shared by the integration tests. Everything here is
//! computed without the library's optimizer or structure recovery.
#![allow(dead_code)]

use opalg::algebra::{group_algebra, AlgebraElement, FiniteGroup, GroupAlgebra, MultiMatrixAlgebra, DEFAULT_SEED};
use opalg::expectation::ConditionalExpectation;
use opalg::linalg::{random_unit_vector, re, CMat, CVec};
use opalg::subalgebra::{subgroup_subalgebra, Subalgebra};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest `c` in `[0, 1]` with `E(p) - c p >= 0`, by bisection on the
/// smallest eigenvalue over the whole algebra.
pub fn bisect_constant(e: &ConditionalExpectation, p: &AlgebraElement) -> f64 {
    let ep = e.apply(p);
    let ok = |c: f64| ep.try_sub(&p.scale(re(c))).unwrap().min_eigenvalue() >= -1e-14;
    let (mut lo, mut hi) = (0.0, 1.0 + 1e-12);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn projection_of(m: &MultiMatrixAlgebra, k: usize, x: &[f64]) -> AlgebraElement {
    let n = m.block_sizes()[k];
    let v = CVec::from_fn(n, |i, _| opalg::linalg::C64::new(x[2 * i], x[2 * i + 1]));
    let v = v.unscale(v.norm());
    m.embed_block(k, &v * v.adjoint())
}

/// Dense multi-start search for the index: per block, `starts` random unit
/// vectors refined by a compass search on `(Re xi, Im xi)` minimizing the
/// bisected constant. Returns `1 / min c`.
pub fn dense_index(e: &ConditionalExpectation, starts: usize, seed: u64) -> f64 {
    let m = e.source().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for k in 0..m.n_blocks() {
        let n = m.block_sizes()[k];
        let runs = if n == 1 { 1 } else { starts };
        for _ in 0..runs {
            let v = random_unit_vector(n, &mut rng);
            let mut x: Vec<f64> = v.iter().flat_map(|z| [z.re, z.im]).collect();
            let f = |x: &[f64]| bisect_constant(e, &projection_of(&m, k, x));
            let mut fx = f(&x);
            let mut step = 0.5;
            while n > 1 && step > 1e-7 {
                let mut moved = false;
                for i in 0..x.len() {
                    for sign in [1.0, -1.0] {
                        let mut y = x.clone();
                        y[i] += sign * step;
                        let fy = f(&y);
                        if fy < fx - 1e-15 {
                            x = y;
                            fx = fy;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            best = best.min(fx);
        }
    }
    1.0 / best
}

pub fn group(name: &str) -> GroupAlgebra {
    group_algebra(&FiniteGroup::builtin(name).unwrap(), DEFAULT_SEED).unwrap()
}

/// `C[H]` for the subgroup generated by `gens`.
pub fn subgroup(ga: &GroupAlgebra, gens: &[usize]) -> Subalgebra {
    subgroup_subalgebra(ga, &ga.group().subgroup(gens)).unwrap()
}

/// A generator whose cyclic subgroup has the requested order.
pub fn element_of_order(ga: &GroupAlgebra, order: usize) -> usize {
    let g = ga.group();
    (0..g.order()).find(|&x| g.subgroup(&[x]).len() == order).expect("element of that order")
}

/// Block-diagonal model subalgebra with the given partition of each block.
pub fn block_diagonal(m: &MultiMatrixAlgebra, partitions: &[Vec<usize>]) -> Subalgebra {
    opalg::cli::config::block_diagonal(m, partitions).unwrap()
}

pub fn unitary(m: &MultiMatrixAlgebra, rng: &mut ChaCha8Rng) -> AlgebraElement {
    m.random_unitary(rng)
}

/// Operator-norm distance between two square matrices.
pub fn op_dist(a: &CMat, b: &CMat) -> f64 {
    opalg::linalg::op_norm(&(a - b))
}
