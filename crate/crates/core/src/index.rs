//! The probabilistic index `Ind E = 1 / sup{c >= 0 : E(x) >= c x for x >= 0}`.
//!
//! Positive elements are sums of minimal projections `p = iota_k(xi xi*)`, so
//! the best constant is the infimum over unit vectors `xi` of each block of
//! the largest `c` with `E(p) - c p >= 0`. Since `E(p) >= 0` and `p` has rank
//! one, that largest `c` is `1 / <E(p)_k^+ xi, xi>` (a Schur complement
//! argument, valid because a faithful `E` keeps `xi` inside the carrier of
//! `E(p)_k`). The index is therefore the maximum of
//!
//! ```text
//! g(xi) = <E(xi xi*)_k^+ xi, xi>
//! ```
//!
//! over the unit spheres of all blocks, found by multi-start projected
//! gradient ascent. With `y = A^+ xi` and `A = E(xi xi*)_k` the real gradient
//! is `2 (y - Phi(y y*) xi)`, where `Phi` is the block compression of `E`
//! (self-adjoint for the Hilbert-Schmidt pairing).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::expectation::ConditionalExpectation;
use crate::linalg::{hermitian_eigen, random_unit_vector, re, CMat, CVec, C64};
use crate::tol::PINV_REL;

/// Optimizer settings.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct IndexConfig {
    /// Random starts per block.
    pub starts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Positive elements sampled by the bracket audit.
    pub audit_samples: usize,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig { starts: 32, max_iterations: 500, seed: 0, audit_samples: 1000 }
    }
}

/// Relative width of the certified bracket `[c_lo, c_hi]`.
pub const BRACKET_REL: f64 = 1e-7;
const CARRIER_TOL: f64 = 1e-4;
const AUDIT_TOL: f64 = 1e-9;
const AUDIT_ROUNDS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct IndexResult {
    /// `1 / c*`, or `f64::INFINITY` when `infinite` is set.
    pub value: f64,
    pub infinite: bool,
    /// The best constant `c*` (taken as `c_hi`).
    pub best_constant: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub witness_block: usize,
    pub witness_vector: Vec<C64>,
    pub starts_used: usize,
    pub seed: u64,
}

/// Serialized form of an [`IndexResult`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IndexReport {
    pub value: Option<f64>,
    pub c_lo: f64,
    pub c_hi: f64,
    pub witness_block: usize,
    pub witness_vector: Vec<[f64; 2]>,
    pub starts_used: usize,
    pub seed: u64,
    /// Always `"trace_preserving"`: the value is that of the trace-preserving
    /// expectation, which need not be the minimizer over all expectations.
    pub expectation: String,
}

impl IndexResult {
    pub fn report(&self) -> IndexReport {
        IndexReport {
            value: if self.infinite { None } else { Some(self.value) },
            c_lo: self.c_lo,
            c_hi: self.c_hi,
            witness_block: self.witness_block,
            witness_vector: self.witness_vector.iter().map(|z| [z.re, z.im]).collect(),
            starts_used: self.starts_used,
            seed: self.seed,
            expectation: "trace_preserving".into(),
        }
    }

    /// The minimal projection realizing `c_hi`.
    pub fn witness(&self, e: &ConditionalExpectation) -> AlgebraElement {
        let xi = CVec::from_vec(self.witness_vector.clone());
        e.source().embed_block(self.witness_block, &xi * xi.adjoint())
    }
}

/// The restriction of `E` to block `k` followed by compression to block `k`.
struct BlockObjective {
    n: usize,
    phi: CMat,
}

struct Eval {
    g: f64,
    grad: CVec,
}

impl BlockObjective {
    fn new(e: &ConditionalExpectation, k: usize) -> Self {
        let m = e.source();
        let n = m.block_sizes()[k];
        let off = m.offset(k);
        let phi = e.matrix().view((off, off), (n * n, n * n)).into_owned();
        BlockObjective { n, phi }
    }

    fn apply(&self, x: &CMat) -> CMat {
        let n = self.n;
        let v = CVec::from_fn(n * n, |r, _| x[(r / n, r % n)]);
        let w = &self.phi * v;
        CMat::from_fn(n, n, |i, j| w[i * n + j])
    }

    fn eval(&self, xi: &CVec) -> Result<Eval> {
        let a = self.apply(&(xi * xi.adjoint()));
        let (vals, vecs) = hermitian_eigen(&a);
        let top = vals.last().copied().unwrap_or(0.0);
        let cut = PINV_REL * top.max(0.0);
        let mut y = CVec::zeros(self.n);
        let mut inside = CVec::zeros(self.n);
        for (i, &lam) in vals.iter().enumerate() {
            if lam > cut && lam > 0.0 {
                let v = vecs.column(i);
                let c = v.dotc(xi);
                y.axpy(c / lam, &v, re(1.0));
                inside.axpy(c, &v, re(1.0));
            }
        }
        let defect = (xi - &inside).norm();
        if defect > CARRIER_TOL {
            return Err(Error::CarrierViolation { defect });
        }
        let g = xi.dotc(&y).re;
        let b = self.apply(&(&y * y.adjoint()));
        let grad = &y - &b * xi;
        Ok(Eval { g, grad })
    }

    /// Projected gradient ascent with backtracking from `start`.
    fn ascend(&self, start: CVec, max_iterations: usize) -> Result<(f64, CVec)> {
        let mut xi = start;
        let mut cur = self.eval(&xi)?;
        if self.n == 1 {
            return Ok((cur.g, xi));
        }
        let mut step = 1.0;
        for _ in 0..max_iterations {
            let radial = xi.dotc(&cur.grad).re;
            let v = &cur.grad - &xi * re(radial);
            let vn2 = v.norm_squared();
            if vn2.sqrt() <= 1e-13 * (1.0 + cur.g) {
                break;
            }
            let mut accepted = false;
            while step > 1e-14 {
                let cand = &xi + &v * re(step);
                let cand = cand.unscale(cand.norm());
                let ev = self.eval(&cand)?;
                if ev.g >= cur.g + 1e-4 * step * vn2 {
                    let gain = ev.g - cur.g;
                    xi = cand;
                    cur = ev;
                    step = (step * 2.0).min(1e6);
                    accepted = gain > 1e-16 * cur.g;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        Ok((cur.g, xi))
    }
}

/// Largest `c` with `E(p) - c p >= 0` for the rank-one projection on `xi` in block `k`.
pub fn pp_constant_for_vector(e: &ConditionalExpectation, k: usize, xi: &CVec) -> Result<f64> {
    let xi = xi.unscale(xi.norm());
    Ok(1.0 / BlockObjective::new(e, k).eval(&xi)?.g)
}

pub fn pimsner_popa_index(e: &ConditionalExpectation, config: &IndexConfig) -> Result<IndexResult> {
    let m = e.source();
    let objectives: Vec<BlockObjective> = (0..m.n_blocks()).map(|k| BlockObjective::new(e, k)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tasks: Vec<(usize, CVec)> = Vec::new();
    for (k, obj) in objectives.iter().enumerate() {
        let count = if obj.n == 1 { 1 } else { config.starts.max(1) };
        for _ in 0..count {
            tasks.push((k, random_unit_vector(obj.n, &mut rng)));
        }
    }
    let starts_used = tasks.len();
    let results: Vec<Result<(f64, CVec)>> = tasks
        .into_par_iter()
        .map(|(k, xi)| objectives[k].ascend(xi, config.max_iterations))
        .collect();

    let mut best: Option<(usize, f64, CVec)> = None;
    let mut block_of = Vec::new();
    for (k, obj) in objectives.iter().enumerate() {
        let count = if obj.n == 1 { 1 } else { config.starts.max(1) };
        block_of.extend(std::iter::repeat_n(k, count));
    }
    for (i, r) in results.into_iter().enumerate() {
        let (g, xi) = r?;
        if best.as_ref().is_none_or(|b| g > b.1) {
            best = Some((block_of[i], g, xi));
        }
    }
    let (mut block, mut g_best, mut xi_best) = best.expect("at least one block");

    // Audit: c_lo must satisfy E(x) - c_lo x >= 0 on sampled positive elements.
    let mut audit_rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    for round in 0..=AUDIT_ROUNDS {
        let c_hi = 1.0 / g_best;
        let c_lo = c_hi * (1.0 - BRACKET_REL);
        let violation = audit(e, c_lo, block, &xi_best, config.audit_samples, &mut audit_rng);
        match violation {
            None => {
                return Ok(IndexResult {
                    value: g_best,
                    infinite: !g_best.is_finite(),
                    best_constant: c_hi,
                    c_lo,
                    c_hi,
                    witness_block: block,
                    witness_vector: xi_best.iter().cloned().collect(),
                    starts_used,
                    seed: config.seed,
                })
            }
            Some(Violation::RankOne(k, xi)) if round < AUDIT_ROUNDS => {
                let (g, x) = objectives[k].ascend(xi, config.max_iterations)?;
                if g > g_best {
                    block = k;
                    g_best = g;
                    xi_best = x;
                }
            }
            Some(_) => {
                return Err(Error::OptimizerNonConvergence { c_lo, c_hi });
            }
        }
    }
    unreachable!("audit loop returns")
}

enum Violation {
    RankOne(usize, CVec),
    General,
}

fn audit(
    e: &ConditionalExpectation,
    c: f64,
    witness_block: usize,
    witness: &CVec,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Violation> {
    let m = e.source();
    let sizes = m.block_sizes();
    for s in 0..samples {
        let (x, rank_one) = match s % 3 {
            0 => {
                let k = s / 3 % sizes.len();
                let xi = random_unit_vector(sizes[k], rng);
                (m.embed_block(k, &xi * xi.adjoint()), Some((k, xi)))
            }
            1 => {
                let y = m.random_element(rng);
                (&y.adjoint() * &y, None)
            }
            _ => {
                let n = sizes[witness_block];
                let noise = random_unit_vector(n, rng) * re(1e-2);
                let xi = witness + noise;
                let xi = xi.unscale(xi.norm());
                (m.embed_block(witness_block, &xi * xi.adjoint()), Some((witness_block, xi)))
            }
        };
        let ex = e.apply(&x);
        let diff = ex.try_sub(&x.scale(re(c))).expect("same algebra");
        if diff.min_eigenvalue() < -AUDIT_TOL * x.op_norm() {
            return Some(match rank_one {
                Some((k, xi)) => Violation::RankOne(k, xi),
                None => Violation::General,
            });
        }
    }
    None
}
