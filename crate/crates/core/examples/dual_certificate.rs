//! The dual program: a bounded form whose pairing with `T` certifies the
//! flat norm, checked against the primal by complementary slackness.

use flatnorm::chainlp::{flat_norm_lp, LpConfig};
use flatnorm::complex::{boundary_of_set, BinarySet, CubicalComplex};
use flatnorm::dualform::{complementary_slackness_report, dual_flat_norm, extract_x};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid2(20, 20)?;
    let omega = BinarySet::from_fn(&cx, |[x, y, _]| {
        ((4..16).contains(&x) && (4..16).contains(&y)) && !((9..11).contains(&x) && y < 12)
    });
    let t = boundary_of_set(&omega);
    let lambda = 0.4;

    let primal = flat_norm_lp(&t, &LpConfig::new(lambda))?;
    let dual = dual_flat_norm(&t, lambda, 1e-9)?;
    println!("primal {:.9}  dual {:.9}", primal.value, dual.value);
    println!("|phi| <= {:.6}, |d phi| <= {:.6}", dual.phi.max_abs(), dual.phi.coboundary()?.max_abs());

    let slack = complementary_slackness_report(&primal, &dual.phi, 1e-6)?;
    print!("{}", slack.report());

    let x = extract_x(&dual.phi, lambda, 1e-6)?;
    println!("faces where d phi is saturated: {} (spt S has {})", x.len(), primal.s_chain.len());
    Ok(())
}
