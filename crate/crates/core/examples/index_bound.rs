//! Index of the intersection of a family against the bound from the algebra
//! generated by the family's Jones projections.

use opalg::algebra::{group_algebra, FiniteGroup, DEFAULT_SEED};
use opalg::angles::index_bound_check;
use opalg::index::IndexConfig;
use opalg::subalgebra::subgroup_subalgebra;

fn main() -> opalg::error::Result<()> {
    let g = FiniteGroup::symmetric(3);
    let ga = group_algebra(&g, DEFAULT_SEED)?;
    let family = vec![
        subgroup_subalgebra(&ga, &g.subgroup(&[3]))?,
        subgroup_subalgebra(&ga, &g.subgroup(&[1]))?,
    ];
    let r = index_bound_check(&family, &IndexConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
    Ok(())
}
