//! Flat norm of a boundary with a spur, by the chain LP.

use flatnorm::chainlp::{flat_norm_lp, LpConfig};
use flatnorm::complex::format::write_chain;
use flatnorm::complex::{boundary_of_set, Axis, BinarySet, Cell, Chain, CubicalComplex};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid2(12, 12)?;
    let square = BinarySet::from_fn(&cx, |[x, y, _]| (3..9).contains(&x) && (3..9).contains(&y));
    // an open spur sticking out of the square
    let spur = Chain::from_cells(&cx, 1, (9..11).map(|x| (Cell::edge2(x, 6, Axis::X), 1.0)))?;
    let t = boundary_of_set(&square).try_add(&spur)?;
    println!("M(T) = {}", t.unit_mass());

    for lambda in [0.1, 0.5, 2.0] {
        let d = flat_norm_lp(&t, &LpConfig::new(lambda))?;
        println!(
            "lambda {lambda}: F = {:.4}, M(S) = {}, M(T - dS) = {}, gap {:.1e}",
            d.value,
            d.s_chain.unit_mass(),
            d.t_minus_ds.unit_mass(),
            d.provenance.gap()
        );
    }
    let d = flat_norm_lp(&t, &LpConfig::new(0.1))?;
    print!("{}", write_chain(&d.t_minus_ds)?);
    Ok(())
}
