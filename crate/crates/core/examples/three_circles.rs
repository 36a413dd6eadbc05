//! Three parallel circles on a torus with alternating orientation. Two
//! different strips are optimal fillings at the critical scale.

use flatnorm::chainlp::{flat_norm_lp, LpConfig};
use flatnorm::complex::{Axis, Cell, Chain, CubicalComplex};
use flatnorm::dualform::{dual_flat_norm, extract_x};

fn main() -> flatnorm::Result<()> {
    let n = 30;
    let cx = CubicalComplex::build(2, &[n, n], &[true, true])?;
    let terms = [0usize, 10, 20].into_iter().enumerate().flat_map(|(i, x)| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        (0..n).map(move |y| (Cell::edge2(x, y, Axis::Y), sign))
    });
    let t = Chain::from_cells(&cx, 1, terms)?;

    let lambda = 0.1;
    let d = flat_norm_lp(&t, &LpConfig::new(lambda).with_uniqueness_probe())?;
    let columns: std::collections::BTreeSet<usize> = d.s_chain.cells().map(|(c, _)| c.coords[0]).collect();
    println!("F = {} (M(T) = {}), S fills columns {:?}..={:?}", d.value, t.unit_mass(), columns.first(), columns.last());
    print!("{}", d.report());

    let dual = dual_flat_norm(&t, lambda, 1e-9)?;
    let x = extract_x(&dual.phi, lambda, 1e-6)?;
    println!("saturated faces: {} of {}", x.len(), cx.num_cells(2));
    Ok(())
}
