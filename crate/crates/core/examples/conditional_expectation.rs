//! The trace-preserving expectation onto a subgroup algebra: group elements
//! outside the subgroup are sent to zero.

use opalg::algebra::{group_algebra, FiniteGroup, DEFAULT_SEED};
use opalg::expectation::{conditional_expectation, multiplicative_domain_check};
use opalg::subalgebra::subgroup_subalgebra;

fn main() -> opalg::error::Result<()> {
    let g = FiniteGroup::symmetric(3);
    let ga = group_algebra(&g, DEFAULT_SEED)?;
    let h = g.subgroup(&[1]);
    let p = subgroup_subalgebra(&ga, &h)?;
    let e = conditional_expectation(ga.algebra(), &p)?;
    for x in 0..g.order() {
        let image = e.apply(ga.element(x));
        println!("E(u_{x}) has norm {:.3} (in subgroup: {})", image.op_norm(), h.contains(&x));
    }
    for (law, r) in e.residuals(7, 16).named() {
        println!("{law:>16}: {r:.2e}");
    }
    println!("bimodule violations: {}", multiplicative_domain_check(&e).len());
    Ok(())
}
