//! Deterministic scenario corpus.
//!
//! Scenario `i` takes its kind from a ten-slot pattern, so every block of ten
//! consecutive scenarios holds one of each: expectation, index, pp_basis,
//! angles on random subalgebras, bound_check on random families, angles on a
//! subgroup pair, bound_check on subgroups, automorphism_sum, decompose and
//! counterexample. Each scenario draws from its own stream, so a prefix of a
//! larger corpus equals the smaller corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{
    matrix_to_spec, AlgebraSpec, AutomorphismSpec, DecomposeSpec, ElementSpec, GroupSpec, Scenario, ScenarioKind,
    SubalgebraSpec,
};
use crate::algebra::FiniteGroup;
use crate::error::{Error, Result};
use crate::linalg::{random_unitary, re, CMat, C64};

pub const PATTERN: [(&str, ScenarioKind); 10] = [
    ("expectation", ScenarioKind::Expectation),
    ("index", ScenarioKind::Index),
    ("pp_basis", ScenarioKind::PpBasis),
    ("angles", ScenarioKind::Angles),
    ("bound_check", ScenarioKind::BoundCheck),
    ("subgroup_angles", ScenarioKind::Angles),
    ("subgroup_bound", ScenarioKind::BoundCheck),
    ("automorphism_sum", ScenarioKind::AutomorphismSum),
    ("decompose", ScenarioKind::Decompose),
    ("counterexample", ScenarioKind::Counterexample),
];

const GROUPS: [&str; 7] = ["Z2", "Z3", "Z4", "Z5", "Z6", "S3", "D4"];

pub fn corpus(seed: u64, count: usize) -> Result<Vec<Scenario>> {
    if count == 0 {
        return Err(Error::ConfigParse("corpus count must be at least 1".into()));
    }
    Ok((0..count).map(|i| scenario(seed, i)).collect())
}

fn stream(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64 + 1);
    rng
}

fn scenario(seed: u64, i: usize) -> Scenario {
    let mut rng = stream(seed, i);
    let (label, kind) = PATTERN[i % PATTERN.len()];
    let mut s = Scenario::new(kind);
    s.id = Some(format!("{i:03}-{label}"));
    s.seed = rng.random::<u32>() as u64;
    match label {
        "expectation" => {
            let blocks = random_blocks(&mut rng);
            s.subalgebra = Some(random_subalgebra(&blocks, &mut rng));
            s.algebra = Some(random_algebra(blocks, &mut rng));
        }
        "index" | "pp_basis" => {
            let blocks = random_blocks(&mut rng);
            s.subalgebra = Some(random_subalgebra(&blocks, &mut rng));
            s.algebra = Some(random_algebra(blocks, &mut rng));
        }
        "angles" => {
            let blocks = random_blocks(&mut rng);
            s.family = Some((0..2).map(|_| random_subalgebra(&blocks, &mut rng)).collect());
            s.algebra = Some(random_algebra(blocks, &mut rng));
        }
        "bound_check" => {
            let blocks = random_blocks(&mut rng);
            let size = rng.random_range(2..=3);
            s.family = Some((0..size).map(|_| random_subalgebra(&blocks, &mut rng)).collect());
            s.algebra = Some(random_algebra(blocks, &mut rng));
        }
        "subgroup_angles" | "subgroup_bound" => {
            let name = GROUPS[rng.random_range(0..GROUPS.len())];
            let order = FiniteGroup::builtin(name).expect("builtin").order();
            let size = if label == "subgroup_angles" { 2 } else { rng.random_range(2..=3) };
            s.family = Some(
                (0..size)
                    .map(|_| SubalgebraSpec::Subgroup {
                        elements: None,
                        generators: Some(vec![rng.random_range(0..order)]),
                    })
                    .collect(),
            );
            s.algebra = Some(AlgebraSpec { group: Some(GroupSpec::Builtin(name.into())), ..Default::default() });
        }
        "automorphism_sum" => {
            let (blocks, autos) = random_automorphisms(i / PATTERN.len(), &mut rng);
            s.algebra = Some(AlgebraSpec { blocks: Some(blocks), ..Default::default() });
            s.automorphisms = Some(autos);
        }
        "decompose" => {
            let n = rng.random_range(1..=3);
            s.decompose = Some(DecomposeSpec {
                generators: None,
                blocks: Some((0..n).map(|_| rng.random_range(1..=3)).collect()),
                multiplicities: Some((0..n).map(|_| rng.random_range(1..=2)).collect()),
            });
        }
        _ => {
            let n = rng.random_range(2..=3);
            let us: Vec<ElementSpec> = if rng.random_bool(0.5) {
                (0..2).map(|_| unitary_spec(&[n], &mut rng)).collect()
            } else {
                // a finite-order quotient u v* with u = 1
                let k = rng.random_range(2..=4) as f64;
                let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / k);
                let d = CMat::from_fn(n, n, |i, j| if i == j { w.powi(i as i32) } else { re(0.0) });
                vec![
                    ElementSpec::Blocks { blocks: vec![matrix_to_spec(&CMat::identity(n, n))] },
                    ElementSpec::Blocks { blocks: vec![matrix_to_spec(&d)] },
                ]
            };
            s.algebra = Some(AlgebraSpec { blocks: Some(vec![n]), ..Default::default() });
            s.unitaries = Some(us);
        }
    }
    s
}

fn random_blocks(rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = rng.random_range(1..=3);
    let mut b: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
    if b == [1] {
        b = vec![2];
    }
    b
}

/// Regular trace or random integer weights written as exact fractions.
fn random_algebra(blocks: Vec<usize>, rng: &mut ChaCha8Rng) -> AlgebraSpec {
    let weights = if rng.random_bool(0.5) {
        None
    } else {
        let a: Vec<u32> = blocks.iter().map(|_| rng.random_range(1..=4)).collect();
        let total: u32 = a.iter().zip(&blocks).map(|(a, &n)| a * n as u32).sum();
        Some(a.iter().map(|a| format!("{a}/{total}")).collect())
    };
    AlgebraSpec { blocks: Some(blocks), weights, group: None }
}

fn unitary_spec(blocks: &[usize], rng: &mut ChaCha8Rng) -> ElementSpec {
    ElementSpec::Blocks { blocks: blocks.iter().map(|&n| matrix_to_spec(&random_unitary(n, rng))).collect() }
}

fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = n;
    // mostly proper partitions, so that the conjugates do not collapse to the whole block
    if n > 1 && rng.random_bool(0.8) {
        let s = rng.random_range(1..n);
        out.push(s);
        left -= s;
    }
    while left > 0 {
        let s = rng.random_range(1..=left);
        out.push(s);
        left -= s;
    }
    out
}

/// A unitary conjugate of a block-diagonal model subalgebra (occasionally the scalars).
fn random_subalgebra(blocks: &[usize], rng: &mut ChaCha8Rng) -> SubalgebraSpec {
    if rng.random_range(0..10) == 0 {
        return SubalgebraSpec::Scalars;
    }
    let partitions = blocks.iter().map(|&n| random_partition(n, rng)).collect();
    SubalgebraSpec::Conjugate {
        of: Box::new(SubalgebraSpec::BlockDiagonal { partitions }),
        unitary: unitary_spec(blocks, rng),
    }
}

/// Cycles through the dihedral reflection pair on `M_2` and identity plus one
/// or two random inner automorphisms of `M_2`, `M_3` and `C + M_2`.
fn random_automorphisms(round: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<AutomorphismSpec>) {
    if round.is_multiple_of(4) {
        let theta = rng.random_range(0.1..1.4);
        let refl = |t: f64| {
            let (c, s) = ((2.0 * t).cos(), (2.0 * t).sin());
            CMat::from_row_slice(2, 2, &[re(c), re(s), re(s), re(-c)])
        };
        let inner = |m: CMat| AutomorphismSpec::Inner { unitary: ElementSpec::Blocks { blocks: vec![matrix_to_spec(&m)] } };
        return (vec![2], vec![inner(refl(0.0)), inner(refl(theta))]);
    }
    let blocks = match round % 4 {
        1 => vec![2],
        2 => vec![3],
        _ => vec![1, 2],
    };
    let extra = rng.random_range(1..=2);
    let mut autos = vec![AutomorphismSpec::Identity];
    for _ in 0..extra {
        autos.push(AutomorphismSpec::Inner { unitary: unitary_spec(&blocks, rng) });
    }
    (blocks, autos)
}
