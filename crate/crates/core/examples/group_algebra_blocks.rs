//! Wedderburn blocks of small group algebras and a round trip through the
//! block-diagonalizing unitary.

use opalg::algebra::{group_algebra, FiniteGroup, DEFAULT_SEED};

fn main() -> opalg::error::Result<()> {
    for name in ["Z4", "S3", "D4"] {
        let g = FiniteGroup::builtin(name)?;
        let ga = group_algebra(&g, DEFAULT_SEED)?;
        let d = ga.decomposition();
        let worst = (0..g.order())
            .map(|x| {
                let l = g.left_regular(x);
                (d.backward(&d.forward(&l)) - &l).norm()
            })
            .fold(0.0, f64::max);
        println!(
            "{name}: |G| = {}, blocks {:?}, multiplicities {:?}, round trip {worst:.2e}",
            g.order(),
            d.block_sizes(),
            d.multiplicities()
        );
    }
    Ok(())
}
