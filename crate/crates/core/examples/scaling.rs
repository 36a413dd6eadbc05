//! Dilating a current by `k` and measuring at scale 1 matches measuring the
//! original at scale `k`, up to the factor `k^deg`.

use flatnorm::chainlp::scaling_check;
use flatnorm::complex::{boundary_of_set, BinarySet, CubicalComplex};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid2(10, 10)?;
    let omega = BinarySet::from_fn(&cx, |[x, y, _]| (x + 2 * y) % 7 < 3 && (2..8).contains(&x) && (1..9).contains(&y));
    let t = boundary_of_set(&omega);
    for k in [2.0, 3.0] {
        let r = scaling_check(&t, k)?;
        println!(
            "k = {}: F_1(d_k T) = {:.6}, k * F_k(T) = {:.6}, pushed S objective {:.6}, supports equal {}",
            r.factor, r.dilated_value, r.expected_dilated_value, r.pushed_objective, r.supports_equal
        );
    }
    Ok(())
}
