//! Scale signature of a square with a small bump. The bump is absorbed
//! below lambda = 2/3 and kept above it.

use flatnorm::complex::{BinarySet, CubicalComplex};
use flatnorm::mincut::Connectivity;
use flatnorm::shapes::{lambda_sweep, Method, SweepInput};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid2(32, 32)?;
    let omega = BinarySet::from_fn(&cx, |[x, y, _]| {
        ((6..24).contains(&x) && (6..24).contains(&y)) || ((24..27).contains(&x) && (14..17).contains(&y))
    });
    let lambdas: Vec<f64> = (1..=20).map(|i| i as f64 * 0.05).collect();
    let sig = lambda_sweep(SweepInput::Set(&omega), &lambdas, Method::MinCut(Connectivity::Four))?;
    print!("{}", sig.to_csv());
    println!(
        "monotone {}, concave {}, M(S) nonincreasing {}",
        sig.is_monotone(1e-9),
        sig.is_concave(1e-9),
        sig.mass_s_nonincreasing(1e-9)
    );
    for (lambda, d) in lambdas.iter().zip(&sig.decompositions) {
        let kept = d.sigma.as_ref().is_some_and(|s| s.len() == omega.len());
        println!("lambda {lambda:.2}: bump {}", if kept { "kept" } else { "absorbed" });
    }
    Ok(())
}
