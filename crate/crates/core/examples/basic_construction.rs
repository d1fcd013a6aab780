//! The basic construction <M, e_N> on L^2(M), compared with J N' J.

use opalg::algebra::MultiMatrixAlgebra;
use opalg::gns::{basic_construction, gns, modular_conjugation};
use opalg::subalgebra::Subalgebra;

fn main() -> opalg::error::Result<()> {
    let m = MultiMatrixAlgebra::with_regular_trace(vec![1, 2])?;
    let n = Subalgebra::diagonal(&m);
    let h = gns(&m);
    let j = modular_conjugation(&h);
    println!("L^2(M) has dimension {}, J^2 - 1 = {:.2e}", h.dim(), j.square_defect());
    let b = basic_construction(&n, &h)?;
    let e = b.jones_projection();
    println!("e_N: rank {}, projection defect {:.2e}", e.projection_rank(), e.projection_defect());
    let (dist, dim) = b.commutant_comparison(&n, &h)?;
    println!("dim <M, e_N> = {}, dim J N' J = {dim}, span distance {dist:.2e}", b.dim());
    println!("span(M e_N M) distance {:.2e}", b.mem_span_distance());
    Ok(())
}
