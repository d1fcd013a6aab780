//! Index values for a few inclusions, with the optimizer's bracket and witness.

use opalg::algebra::{group_algebra, BlockSpec, FiniteGroup, MultiMatrixAlgebra, TraceWeights, DEFAULT_SEED};
use opalg::expectation::conditional_expectation;
use opalg::index::{pimsner_popa_index, IndexConfig};
use opalg::ppbasis::pp_basis;
use opalg::subalgebra::{subgroup_subalgebra, Subalgebra};

fn main() -> opalg::error::Result<()> {
    let cfg = IndexConfig::default();

    let m3 = MultiMatrixAlgebra::full_matrix(3);
    let e = conditional_expectation(&m3, &Subalgebra::scalars(&m3))?;
    report("C in M_3", &pimsner_popa_index(&e, &cfg)?);

    let m = MultiMatrixAlgebra::new(BlockSpec::new(vec![1, 1])?, TraceWeights::new(vec![0.25, 0.75]))?;
    let e = conditional_expectation(&m, &Subalgebra::scalars(&m))?;
    report("C in C+C, weights 1/4 3/4", &pimsner_popa_index(&e, &cfg)?);

    let g = FiniteGroup::symmetric(3);
    let ga = group_algebra(&g, DEFAULT_SEED)?;
    let p = subgroup_subalgebra(&ga, &g.subgroup(&[3]))?;
    let e = conditional_expectation(ga.algebra(), &p)?;
    report("C[Z3] in C[S3]", &pimsner_popa_index(&e, &cfg)?);

    let basis = pp_basis(&e)?;
    println!(
        "  basis of size {}, sum m m* has spectrum {:?}",
        basis.len(),
        basis.index_element().hermitian_spectrum()
    );
    Ok(())
}

fn report(name: &str, r: &opalg::index::IndexResult) {
    println!(
        "{name}: index {:.8} (constant in [{:.10}, {:.10}], witness block {})",
        r.value, r.c_lo, r.c_hi, r.witness_block
    );
}
