//! A square loop in a 3D grid with small vertical detours. Small scales
//! shave the detours off, large scales keep the loop intact.

use flatnorm::chainlp::{flat_norm_lp, LpConfig};
use flatnorm::complex::{Axis, Cell, Chain, CubicalComplex};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid3(10, 10, 6)?;
    let disk = Chain::from_cells(
        &cx,
        2,
        (2..8).flat_map(|x| (2..8).map(move |y| (Cell::new([x, y, 2], Axis::X.bit() | Axis::Y.bit()), 1.0))),
    )?;
    let mut t = disk.boundary()?;
    // push two edges of the bottom side up around a vertical face
    for x in [3, 5] {
        let face = Chain::from_cells(&cx, 2, [(Cell::new([x, 2, 2], Axis::X.bit() | Axis::Z.bit()), 1.0)])?;
        let df = face.boundary()?;
        let e = cx.require_id(&Cell::new([x, 2, 2], Axis::X.bit()))?;
        t = t.add_scaled(&df, -t.get(e) / df.get(e))?;
    }
    println!("M(T) = {}, cycle: {}", t.unit_mass(), t.boundary()?.is_zero());
    for lambda in [0.05, 0.5, 1.0, 4.0] {
        let d = flat_norm_lp(&t, &LpConfig::new(lambda))?;
        println!(
            "lambda {lambda}: F = {:.4}, M(S) = {}, M(T - dS) = {}",
            d.value,
            d.s_chain.unit_mass(),
            d.t_minus_ds.unit_mass()
        );
    }
    Ok(())
}
