//! JSON scenario configuration.
//!
//! Matrices are nested row arrays of `[re, im]` pairs. Trace weights are
//! decimal strings (`"0.25"`) or fractions (`"1/6"`) so that exact-intent
//! constants survive round trips; when omitted, the regular trace is used.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    group_algebra, AlgebraElement, BlockSpec, FiniteGroup, GroupAlgebra, MultiMatrixAlgebra, StarAutomorphism,
    TraceWeights, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::index::IndexConfig;
use crate::linalg::{CMat, C64};
use crate::subalgebra::{close_under_algebra, fixed_point_algebra, subgroup_subalgebra, Subalgebra};

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Decompose,
    Expectation,
    Index,
    PpBasis,
    Angles,
    BoundCheck,
    AutomorphismSum,
    Counterexample,
    Corpus,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Decompose => "decompose",
            ScenarioKind::Expectation => "expectation",
            ScenarioKind::Index => "index",
            ScenarioKind::PpBasis => "pp_basis",
            ScenarioKind::Angles => "angles",
            ScenarioKind::BoundCheck => "bound_check",
            ScenarioKind::AutomorphismSum => "automorphism_sum",
            ScenarioKind::Counterexample => "counterexample",
            ScenarioKind::Corpus => "corpus",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: ScenarioKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra: Option<SubalgebraSpec>,
    /// Subalgebra families (`angles` takes exactly two).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<SubalgebraSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphisms: Option<Vec<AutomorphismSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<ElementSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decompose: Option<DecomposeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexConfig>,
    /// Also verify the basic construction identity (`expectation` only).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub basic_construction: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<CorpusSpec>,
}

impl Scenario {
    pub fn new(kind: ScenarioKind) -> Self {
        Scenario {
            id: None,
            kind,
            seed: 0,
            tolerances: None,
            algebra: None,
            subalgebra: None,
            family: None,
            automorphisms: None,
            unitaries: None,
            decompose: None,
            index: None,
            basic_construction: false,
            corpus: None,
        }
    }
}

/// Per-scenario threshold overrides. Unset fields keep the defaults.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub scale: Option<f64>,
    pub law: Option<f64>,
    pub span: Option<f64>,
    pub index: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    #[serde(default)]
    pub seed: u64,
    pub count: usize,
}

/// Either explicit blocks and weights, or the group algebra of a finite group.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GroupSpec {
    /// `Zn`, `Sn` or `Dn` (dihedral of order `2n`).
    Builtin(String),
    Table { table: Vec<Vec<usize>> },
}

/// Nested rows of `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ElementSpec {
    Blocks { blocks: Vec<MatrixSpec> },
    GroupElement { group_element: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubalgebraSpec {
    Whole,
    Scalars,
    Diagonal,
    /// `C[H]`; `elements` lists `H` or `generators` generates it.
    Subgroup {
        #[serde(default)]
        elements: Option<Vec<usize>>,
        #[serde(default)]
        generators: Option<Vec<usize>>,
    },
    /// Unital *-algebra generated by the given elements.
    Generated { elements: Vec<ElementSpec> },
    /// Block-diagonal model: block `k` is cut into diagonal sub-blocks of the given sizes.
    BlockDiagonal { partitions: Vec<Vec<usize>> },
    /// Fixed points of the inner automorphisms of the given unitaries.
    FixedPoints { unitaries: Vec<ElementSpec> },
    /// `u P u*`.
    Conjugate { of: Box<SubalgebraSpec>, unitary: ElementSpec },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AutomorphismSpec {
    Identity,
    Inner { unitary: ElementSpec },
}

/// Input of a `decompose` scenario: explicit generators, or a block model
/// `(+)_k M_{n_k} (x) 1_{m_k}` conjugated by a seeded random unitary. With
/// neither, the algebra's group (if any) is decomposed.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DecomposeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<usize>>,
}

/// An algebra built from its config description, remembering its group when it has one.
#[derive(Debug, Clone)]
pub struct BuiltAlgebra {
    pub algebra: MultiMatrixAlgebra,
    pub group: Option<GroupAlgebra>,
}

pub fn parse_weight(text: &str) -> Result<f64> {
    let bad = || Error::ConfigParse(format!("malformed trace weight '{text}'"));
    let t = text.trim();
    let v = match t.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn matrix_from_spec(m: &MatrixSpec) -> Result<CMat> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::ConfigParse("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| C64::new(m[i][j][0], m[i][j][1])))
}

pub fn matrix_to_spec(m: &CMat) -> MatrixSpec {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<BuiltAlgebra> {
        match (&self.group, &self.blocks) {
            (Some(_), Some(_)) => Err(Error::ConfigParse("give either 'group' or 'blocks', not both".into())),
            (Some(g), None) => {
                if self.weights.is_some() {
                    return Err(Error::ConfigParse("group algebras carry their own trace".into()));
                }
                let group = match g {
                    GroupSpec::Builtin(name) => FiniteGroup::builtin(name)?,
                    GroupSpec::Table { table } => FiniteGroup::new(table.clone())?,
                };
                let ga = group_algebra(&group, DEFAULT_SEED)?;
                Ok(BuiltAlgebra { algebra: ga.algebra().clone(), group: Some(ga) })
            }
            (None, Some(blocks)) => {
                let spec = BlockSpec::new(blocks.clone())?;
                let weights = match &self.weights {
                    None => TraceWeights::regular(&spec),
                    Some(ws) => TraceWeights::new(ws.iter().map(|w| parse_weight(w)).collect::<Result<_>>()?),
                };
                Ok(BuiltAlgebra { algebra: MultiMatrixAlgebra::new(spec, weights)?, group: None })
            }
            (None, None) => Err(Error::ConfigParse("algebra needs 'blocks' or 'group'".into())),
        }
    }
}

impl BuiltAlgebra {
    pub fn element(&self, spec: &ElementSpec) -> Result<AlgebraElement> {
        match spec {
            ElementSpec::Blocks { blocks } => {
                let mats = blocks.iter().map(matrix_from_spec).collect::<Result<Vec<_>>>()?;
                self.algebra.element(mats)
            }
            ElementSpec::GroupElement { group_element } => {
                let ga = self.group_or_err()?;
                if *group_element >= ga.group().order() {
                    return Err(Error::ConfigParse(format!("group element {group_element} out of range")));
                }
                Ok(ga.element(*group_element).clone())
            }
        }
    }

    fn group_or_err(&self) -> Result<&GroupAlgebra> {
        self.group.as_ref().ok_or_else(|| Error::ConfigParse("group data on a non-group algebra".into()))
    }

    pub fn subalgebra(&self, spec: &SubalgebraSpec) -> Result<Subalgebra> {
        let m = &self.algebra;
        match spec {
            SubalgebraSpec::Whole => Ok(Subalgebra::whole(m)),
            SubalgebraSpec::Scalars => Ok(Subalgebra::scalars(m)),
            SubalgebraSpec::Diagonal => Ok(Subalgebra::diagonal(m)),
            SubalgebraSpec::Subgroup { elements, generators } => {
                let ga = self.group_or_err()?;
                let order = ga.group().order();
                let elems = match (elements, generators) {
                    (Some(e), None) => e.clone(),
                    (None, Some(g)) => {
                        if g.iter().any(|&x| x >= order) {
                            return Err(Error::ConfigParse("subgroup generator out of range".into()));
                        }
                        ga.group().subgroup(g)
                    }
                    _ => return Err(Error::ConfigParse("subgroup needs 'elements' or 'generators'".into())),
                };
                subgroup_subalgebra(ga, &elems)
            }
            SubalgebraSpec::Generated { elements } => {
                let elems = elements.iter().map(|e| self.element(e)).collect::<Result<Vec<_>>>()?;
                close_under_algebra(m, &elems)
            }
            SubalgebraSpec::BlockDiagonal { partitions } => {
                block_diagonal(m, partitions)
            }
            SubalgebraSpec::FixedPoints { unitaries } => {
                let autos = unitaries
                    .iter()
                    .map(|u| StarAutomorphism::from_unitary(&self.element(u)?))
                    .collect::<Result<Vec<_>>>()?;
                fixed_point_algebra(m, &autos)
            }
            SubalgebraSpec::Conjugate { of, unitary } => {
                let base = self.subalgebra(of)?;
                base.conjugate(&self.element(unitary)?)
            }
        }
    }

    pub fn automorphism(&self, spec: &AutomorphismSpec) -> Result<StarAutomorphism> {
        match spec {
            AutomorphismSpec::Identity => Ok(StarAutomorphism::identity(&self.algebra)),
            AutomorphismSpec::Inner { unitary } => StarAutomorphism::from_unitary(&self.element(unitary)?),
        }
    }
}

/// Direct sum over blocks of block-diagonal matrices with the given sub-block sizes.
pub fn block_diagonal(m: &MultiMatrixAlgebra, partitions: &[Vec<usize>]) -> Result<Subalgebra> {
    let sizes = m.block_sizes();
    if partitions.len() != sizes.len() {
        return Err(Error::ShapeMismatch(format!("{} partitions for {} blocks", partitions.len(), sizes.len())));
    }
    let mut units = Vec::new();
    for (k, part) in partitions.iter().enumerate() {
        if part.iter().sum::<usize>() != sizes[k] || part.contains(&0) {
            return Err(Error::ShapeMismatch(format!("{part:?} does not partition {}", sizes[k])));
        }
        let mut start = 0;
        for &s in part {
            for i in start..start + s {
                for j in start..start + s {
                    units.push(m.matrix_unit(k, i, j));
                }
            }
            start += s;
        }
    }
    let mut elems = vec![m.identity()];
    elems.extend(units);
    Subalgebra::from_elements(m, &elems)
}
