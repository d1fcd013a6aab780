//! Angle spectrum, Halmos decomposition and meet of two subalgebras of M_2.

use opalg::algebra::MultiMatrixAlgebra;
use opalg::angles::{angle_spectrum, halmos_decompose, wedge};
use opalg::gns::{gns, jones_projection};
use opalg::linalg::C64;
use opalg::subalgebra::Subalgebra;

fn main() -> opalg::error::Result<()> {
    let m2 = MultiMatrixAlgebra::full_matrix(2);
    let t: f64 = 0.3;
    let u = m2.element(vec![opalg::linalg::CMat::from_row_slice(
        2,
        2,
        &[C64::new(t.cos(), 0.0), C64::new(-t.sin(), 0.0), C64::new(t.sin(), 0.0), C64::new(t.cos(), 0.0)],
    )])?;
    let p = Subalgebra::diagonal(&m2);
    let q = p.conjugate(&u)?;

    let s = angle_spectrum(&p, &q)?;
    println!("angles {:?}, intersection rank {}", s.angles, s.intersection_rank);

    let h = gns(&m2);
    let (ep, eq) = (jones_projection(&p, &h)?, jones_projection(&q, &h)?);
    let hd = halmos_decompose(&ep, &eq)?;
    println!("halmos {:?}, reconstruction {:.2e}", hd.counts(), hd.reconstruction_residual(&ep, &eq));
    let w = wedge(&[ep, eq])?;
    println!("rank of e_P ^ e_Q: {}", w.projection_rank());
    Ok(())
}
