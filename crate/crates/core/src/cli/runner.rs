//! Executes scenarios and fills their reports.

use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{matrix_from_spec, BuiltAlgebra, Scenario, ScenarioKind, SubalgebraSpec, Tolerances};
use super::corpus::corpus;
use super::report::{Ledger, ReportFile, RunReport, ScenarioError};
use crate::algebra::{wedderburn_decompose, MultiMatrixAlgebra};
use crate::angles::{
    angle_spectrum, build_automorphism_model, counterexample_probe, halmos_decompose, index_bound_check,
    operator_distance, wedge, write_spectrum_csv,
};
use crate::error::{Error, Result};
use crate::expectation::{conditional_expectation, multiplicative_domain_check};
use crate::gns::{basic_construction, gns, jones_projection, modular_conjugation, RepresentedOperator};
use crate::index::{pimsner_popa_index, IndexConfig};
use crate::linalg::{distinct_count, op_norm, random_unitary, CMat};
use crate::ppbasis::pp_basis;
use crate::subalgebra::{intersect, Subalgebra};
use crate::tol::CLUSTER;

/// Settings shared by every scenario of a run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Replaces every scenario (and corpus) seed.
    pub seed: Option<u64>,
    /// Multiplies every residual threshold.
    pub tolerance_scale: f64,
    pub jobs: Option<usize>,
    /// Record wall-clock times (makes reports run-dependent).
    pub timings: bool,
    pub csv_dir: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: None, tolerance_scale: 1.0, jobs: None, timings: false, csv_dir: None }
    }
}

/// Residual thresholds after overrides.
#[derive(Debug, Clone, Copy)]
struct Thresholds {
    law: f64,
    span: f64,
    reconstruction: f64,
    index: f64,
    commuting: f64,
}

impl Thresholds {
    fn new(opts: &RunOptions, t: Option<Tolerances>) -> Self {
        let t = t.unwrap_or_default();
        let s = opts.tolerance_scale * t.scale.unwrap_or(1.0);
        Thresholds {
            law: t.law.unwrap_or(1e-10) * s,
            span: t.span.unwrap_or(1e-9) * s,
            reconstruction: 1e-8 * s,
            index: t.index.unwrap_or(1e-6) * s,
            commuting: 1e-10 * s,
        }
    }
}

/// Replaces corpus scenarios by the scenarios they generate.
pub fn expand(scenarios: &[Scenario], opts: &RunOptions) -> Result<Vec<Scenario>> {
    let mut out = Vec::new();
    for (i, s) in scenarios.iter().enumerate() {
        if s.kind == ScenarioKind::Corpus {
            let spec = s.corpus.ok_or_else(|| Error::ConfigParse("corpus scenario needs 'corpus'".into()))?;
            let seed = opts.seed.unwrap_or(spec.seed);
            let prefix = s.id.clone().unwrap_or_else(|| format!("s{i}"));
            for mut c in corpus(seed, spec.count)? {
                c.id = Some(format!("{prefix}/{}", c.id.unwrap_or_default()));
                out.push(c);
            }
        } else {
            let mut s = s.clone();
            s.id.get_or_insert_with(|| format!("s{i}"));
            out.push(s);
        }
    }
    Ok(out)
}

/// Runs every scenario, in parallel up to `opts.jobs`, keeping input order.
pub fn run_scenarios(scenarios: &[Scenario], opts: &RunOptions) -> Result<ReportFile> {
    let expanded = expand(scenarios, opts)?;
    let work = || expanded.par_iter().enumerate().map(|(i, s)| run_scenario(i, s, opts)).collect::<Vec<_>>();
    let reports = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::ConfigParse(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(ReportFile::new(reports))
}

pub fn anchor(kind: ScenarioKind) -> &'static str {
    match kind {
        ScenarioKind::Decompose => "wedderburn_decompose",
        ScenarioKind::Expectation => "conditional_expectation",
        ScenarioKind::Index => "pimsner_popa_index",
        ScenarioKind::PpBasis => "pp_basis",
        ScenarioKind::Angles => "angle_spectrum",
        ScenarioKind::BoundCheck => "index_bound_check",
        ScenarioKind::AutomorphismSum => "build_automorphism_model",
        ScenarioKind::Counterexample => "counterexample_probe",
        ScenarioKind::Corpus => "corpus",
    }
}

pub fn run_scenario(position: usize, s: &Scenario, opts: &RunOptions) -> RunReport {
    let start = Instant::now();
    let seed = opts.seed.unwrap_or(s.seed);
    let id = s.id.clone().unwrap_or_else(|| format!("s{position}"));
    let mut ctx = Ctx { seed, thr: Thresholds::new(opts, s.tolerances), ledger: Ledger::default(), csv: Vec::new() };
    let result = ctx.dispatch(s);
    let (outputs, error) = match result {
        Ok(v) => (v, None),
        Err(e) => (Value::Null, Some(ScenarioError::from(&e))),
    };
    if let Some(dir) = &opts.csv_dir {
        for (name, values) in &ctx.csv {
            let path = dir.join(format!("{position:04}_{}_{name}.csv", s.kind.name()));
            if let Ok(f) = std::fs::File::create(path) {
                let _ = write_spectrum_csv(values, std::io::BufWriter::new(f));
            }
        }
    }
    RunReport {
        id,
        kind: s.kind.name().to_string(),
        seed,
        anchor: anchor(s.kind).to_string(),
        outputs,
        ledger: ctx.ledger.0,
        error,
        wall_clock_ms: opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

struct Ctx {
    seed: u64,
    thr: Thresholds,
    ledger: Ledger,
    csv: Vec<(String, Vec<f64>)>,
}

fn need<'a, T>(v: &'a Option<T>, field: &str, kind: ScenarioKind) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::ConfigParse(format!("{} scenario needs '{field}'", kind.name())))
}

fn is_subgroup(spec: &SubalgebraSpec) -> bool {
    matches!(spec, SubalgebraSpec::Subgroup { .. })
}

impl Ctx {
    fn dispatch(&mut self, s: &Scenario) -> Result<Value> {
        match s.kind {
            ScenarioKind::Decompose => self.decompose(s),
            ScenarioKind::Expectation => self.expectation(s),
            ScenarioKind::Index => self.index(s),
            ScenarioKind::PpBasis => self.pp_basis(s),
            ScenarioKind::Angles => self.angles(s),
            ScenarioKind::BoundCheck => self.bound_check(s),
            ScenarioKind::AutomorphismSum => self.automorphism_sum(s),
            ScenarioKind::Counterexample => self.counterexample(s),
            ScenarioKind::Corpus => Err(Error::ConfigParse("nested corpus scenario".into())),
        }
    }

    fn index_config(&self, s: &Scenario) -> IndexConfig {
        let mut c = s.index.unwrap_or_default();
        c.seed = self.seed;
        c
    }

    fn algebra(&self, s: &Scenario) -> Result<BuiltAlgebra> {
        need(&s.algebra, "algebra", s.kind)?.build()
    }

    fn target(&self, s: &Scenario, b: &BuiltAlgebra) -> Result<Subalgebra> {
        b.subalgebra(need(&s.subalgebra, "subalgebra", s.kind)?)
    }

    fn decompose(&mut self, s: &Scenario) -> Result<Value> {
        let spec = s.decompose.clone().unwrap_or_default();
        let (gens, expected) = if let Some(g) = &spec.generators {
            (g.iter().map(matrix_from_spec).collect::<Result<Vec<_>>>()?, None)
        } else if let (Some(b), Some(m)) = (&spec.blocks, &spec.multiplicities) {
            let gens = conjugated_block_model(b, m, self.seed)?;
            let mut want: Vec<(usize, usize)> = b.iter().copied().zip(m.iter().copied()).collect();
            want.sort_unstable();
            (gens, Some(want))
        } else {
            let built = self.algebra(s)?;
            let ga = built
                .group
                .ok_or_else(|| Error::ConfigParse("decompose needs generators, a block model or a group".into()))?;
            let g = ga.group();
            (
                (0..g.order()).map(|x| g.left_regular(x)).collect(),
                None,
            )
        };
        let d = wedderburn_decompose(&gens, self.seed)?;
        let mut got: Vec<(usize, usize)> =
            d.block_sizes().iter().copied().zip(d.multiplicities().iter().copied()).collect();
        got.sort_unstable();
        let round_trip = gens
            .iter()
            .map(|g| (d.backward(&d.forward(g)) - g).norm() / g.norm().max(1.0))
            .fold(0.0, f64::max);
        self.ledger.hard("round_trip", round_trip, self.thr.reconstruction);
        let unitary = d.unitary();
        let unitarity = (unitary.adjoint() * unitary - CMat::identity(unitary.ncols(), unitary.ncols())).norm();
        self.ledger.hard("unitary", unitarity, self.thr.span);
        if let Some(want) = &expected {
            self.ledger.hard("block_multiset", if &got == want { 0.0 } else { 1.0 }, 0.0);
        }
        Ok(json!({
            "block_sizes": d.block_sizes(),
            "multiplicities": d.multiplicities(),
            "sorted_pairs": got,
            "ambient_dim": d.ambient_dim(),
        }))
    }

    fn expectation(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let p = self.target(s, &b)?;
        let e = conditional_expectation(&b.algebra, &p)?;
        let r = e.residuals(self.seed, 16);
        for (name, value) in r.named() {
            self.ledger.hard(name, value, self.thr.law);
        }
        let domain = multiplicative_domain_check(&e);
        self.ledger.hard("bimodule_basis_violations", domain.len() as f64, 0.0);
        let mut out = json!({
            "ambient_dim": b.algebra.dim(),
            "target_dim": p.dim(),
            "residuals": r,
        });
        if s.basic_construction {
            let h = gns(&b.algebra);
            let bc = basic_construction(&p, &h)?;
            let (dist, jdim) = bc.commutant_comparison(&p, &h)?;
            self.ledger.hard("basic_construction_span", dist, self.thr.span);
            self.ledger.equal("basic_construction_dim", bc.dim(), jdim);
            self.ledger.hard("basic_construction_mem", bc.mem_span_distance(), self.thr.span);
            let j = modular_conjugation(&h);
            self.ledger.hard("j_involution", j.square_defect(), self.thr.law);
            out["basic_construction"] = json!({ "dim": bc.dim(), "commutant_dim": jdim, "distance": dist });
        }
        Ok(out)
    }

    fn index(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let p = self.target(s, &b)?;
        let e = conditional_expectation(&b.algebra, &p)?;
        let r = pimsner_popa_index(&e, &self.index_config(s))?;
        self.ledger.hard("bracket_width", (r.c_hi - r.c_lo) / r.c_hi, self.thr.index);
        let w = r.witness(&e);
        let tight = e.apply(&w).try_sub(&w.scale(crate::linalg::re(r.c_hi)))?.min_eigenvalue();
        self.ledger.hard("witness_tightness", tight.abs(), self.thr.index);
        let mut out = json!({ "index": r.report() });
        if let (Some(ga), Some(SubalgebraSpec::Subgroup { .. })) = (&b.group, &s.subalgebra) {
            let group_index = ga.group().order() as f64 / p.dim() as f64;
            self.ledger.hard("subgroup_index", (r.value - group_index).abs(), self.thr.index);
            out["group_index"] = json!(group_index);
        }
        Ok(out)
    }

    fn pp_basis(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let p = self.target(s, &b)?;
        let e = conditional_expectation(&b.algebra, &p)?;
        let basis = pp_basis(&e)?;
        let r = basis.residuals(&e);
        self.ledger.hard("orthonormality", r.orthonormality, self.thr.span);
        self.ledger.hard("support_projection", r.support_projection, self.thr.span);
        self.ledger.hard("reconstruction", r.reconstruction, self.thr.reconstruction);
        let idx = basis.index_element();
        let center = idx.hermitian_spectrum();
        Ok(json!({
            "size": basis.len(),
            "support_ranks": basis.supports().iter().map(|f| f.trace().re).collect::<Vec<_>>(),
            "residuals": r,
            "index_element_spectrum": center,
        }))
    }

    fn family(&self, s: &Scenario, b: &BuiltAlgebra) -> Result<Vec<Subalgebra>> {
        let specs = need(&s.family, "family", s.kind)?;
        if specs.is_empty() {
            return Err(Error::ConfigParse("empty family".into()));
        }
        specs.iter().map(|f| b.subalgebra(f)).collect()
    }

    fn wedge_checks(&mut self, fam: &[Subalgebra]) -> Result<()> {
        let h = gns(fam[0].ambient());
        let jones: Vec<RepresentedOperator> = fam.iter().map(|p| jones_projection(p, &h)).collect::<Result<_>>()?;
        let w = wedge(&jones)?;
        let e = jones_projection(&intersect(fam)?, &h)?;
        self.ledger.equal("wedge_rank", w.projection_rank(), e.projection_rank());
        self.ledger.hard("wedge_identity", operator_distance(&w, &e), self.thr.span);
        Ok(())
    }

    fn angles(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let fam = self.family(s, &b)?;
        if fam.len() != 2 {
            return Err(Error::ConfigParse("angles takes a family of exactly two subalgebras".into()));
        }
        let (p, q) = (&fam[0], &fam[1]);
        let spec = angle_spectrum(p, q)?;
        let back = angle_spectrum(q, p)?;
        let h = gns(&b.algebra);
        let ep = jones_projection(p, &h)?;
        let eq = jones_projection(q, &h)?;
        let halmos = halmos_decompose(&ep, &eq)?;
        let commutator = op_norm(&(ep.matrix() * eq.matrix() - eq.matrix() * ep.matrix()));

        self.ledger.hard("raw_range", spec.range_defect(), self.thr.law);
        self.ledger.equal("intersection_rank", spec.intersection_rank, spec.unit_multiplicity());
        let symmetric = if spec.angles.len() == back.angles.len() {
            spec.angles.iter().zip(&back.angles).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        self.ledger.hard("angle_symmetry", symmetric, self.thr.span);
        self.ledger.hard("halmos_reconstruction", halmos.reconstruction_residual(&ep, &eq), self.thr.span);
        self.ledger.equal("halmos_dimension", halmos.covered_dim(), b.algebra.dim());
        self.ledger.equal("halmos_generic_count", halmos.generic.len(), spec.angles.len());
        self.ledger.equal(
            "halmos_distinct_count",
            halmos.distinct_cos2(),
            distinct_count(&spec.interior_eigenvalues(), CLUSTER),
        );
        self.wedge_checks(&fam)?;
        let specs = s.family.as_ref().expect("checked above");
        if specs.iter().all(is_subgroup) {
            self.ledger.hard("subgroup_commuting", commutator, self.thr.commuting);
            self.ledger.hard("subgroup_no_angles", spec.angles.len() as f64, 0.0);
        }
        self.csv.push(("raw_eigenvalues".into(), spec.raw_eigenvalues.clone()));
        Ok(json!({
            "spectrum": spec,
            "halmos": halmos.counts(),
            "commutator_norm": commutator,
        }))
    }

    fn bound_check(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let fam = self.family(s, &b)?;
        let r = index_bound_check(&fam, &self.index_config(s))?;
        self.ledger.soft("bound", r.ind_n / r.bound, 1.0 + 1e-6);
        self.ledger.hard("generated_closure", r.closure_residual, self.thr.span);
        self.ledger.hard("intersection_jones_in_span", r.jones_in_span_residual, self.thr.reconstruction);
        self.wedge_checks(&fam)?;
        Ok(json!({ "bound": r }))
    }

    fn automorphism_sum(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let autos = need(&s.automorphisms, "automorphisms", s.kind)?
            .iter()
            .map(|a| b.automorphism(a))
            .collect::<Result<Vec<_>>>()?;
        let model = build_automorphism_model(&b.algebra, &autos)?;
        let r = model.sum_operator(&self.index_config(s))?;
        self.ledger.hard("proportionality", r.proportionality_residual, self.thr.span);
        self.ledger.hard("expectation_formulas", r.formula_residual, self.thr.span);
        self.ledger.hard("t_self_adjoint", r.t_hermitian_defect, self.thr.span);
        let (ep, eq) = model.expectations()?;
        self.ledger.hard("e_p_laws", ep.residuals(self.seed, 8).max(), self.thr.law);
        self.ledger.hard("e_q_laws", eq.residuals(self.seed, 8).max(), self.thr.law);
        self.csv.push(("t_spectrum".into(), r.t_spectrum.clone()));
        Ok(json!({
            "model_dim": model.big().dim(),
            "automorphisms": autos.len(),
            "sum_operator": r,
        }))
    }

    fn counterexample(&mut self, s: &Scenario) -> Result<Value> {
        let b = self.algebra(s)?;
        let us = need(&s.unitaries, "unitaries", s.kind)?
            .iter()
            .map(|u| b.element(u))
            .collect::<Result<Vec<_>>>()?;
        let r = counterexample_probe(&us)?;
        self.ledger.hard(
            "ad_sum_spectrum_within_algebra",
            r.ad_sum_distinct.saturating_sub(r.ad_quotient_algebra_dim) as f64,
            0.0,
        );
        self.ledger.hard(
            "sum_spectrum_within_algebra",
            r.sum_distinct.saturating_sub(r.quotient_algebra_dim) as f64,
            0.0,
        );
        Ok(json!({ "probe": r }))
    }
}

/// Generators of `(+)_k M_{n_k} (x) 1_{m_k}` conjugated by a seeded random unitary.
///
/// Two random elements of the model and their adjoints generate it for almost
/// every draw; the matrix units of each block are not needed.
pub fn conjugated_block_model(blocks: &[usize], multiplicities: &[usize], seed: u64) -> Result<Vec<CMat>> {
    if blocks.len() != multiplicities.len() || blocks.is_empty() || multiplicities.contains(&0) {
        return Err(Error::ShapeMismatch("blocks and multiplicities must be nonempty and aligned".into()));
    }
    let model = MultiMatrixAlgebra::with_regular_trace(blocks.to_vec())?;
    let d: usize = blocks.iter().zip(multiplicities).map(|(n, m)| n * m).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(d, &mut rng);
    let embed = |x: &crate::algebra::AlgebraElement| {
        let mut y = CMat::zeros(d, d);
        let mut off = 0;
        for (k, (&n, &m)) in blocks.iter().zip(multiplicities).enumerate() {
            let b = x.block(k);
            for i in 0..n {
                for j in 0..n {
                    for t in 0..m {
                        y[(off + i * m + t, off + j * m + t)] = b[(i, j)];
                    }
                }
            }
            off += n * m;
        }
        &u * y * u.adjoint()
    };
    Ok((0..2).map(|_| embed(&model.random_element(&mut rng))).collect())
}
