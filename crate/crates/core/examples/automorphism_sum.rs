//! The direct-sum model built from a set of automorphisms: the sum operator
//! T and its relation to E_P E_Q E_P.

use opalg::algebra::{MultiMatrixAlgebra, StarAutomorphism};
use opalg::angles::build_automorphism_model;
use opalg::index::IndexConfig;
use opalg::linalg::{CMat, C64};

fn main() -> opalg::error::Result<()> {
    let m2 = MultiMatrixAlgebra::full_matrix(2);
    let z = C64::new(0.0, 0.0);
    let flip = CMat::from_row_slice(2, 2, &[C64::new(1.0, 0.0), z, z, C64::new(-1.0, 0.0)]);
    let autos = vec![
        StarAutomorphism::identity(&m2),
        StarAutomorphism::from_unitary(&m2.element(vec![flip])?)?,
    ];
    let model = build_automorphism_model(&m2, &autos)?;
    let r = model.sum_operator(&IndexConfig::default())?;
    println!("spectrum of T: {:?}", r.t_spectrum);
    println!("proportionality residual {:.2e}", r.proportionality_residual);
    println!("formula residual {:.2e}", r.formula_residual);
    println!("P^Q: dim {}, index {:.6}", r.fixed_point_dim, r.fixed_point_index);
    println!("angles {:?}", r.angles.angles);
    Ok(())
}
