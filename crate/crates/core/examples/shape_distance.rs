//! Flat norm distances between a few planar shapes.

use flatnorm::complex::{BinarySet, CubicalComplex};
use flatnorm::mincut::Connectivity;
use flatnorm::shapes::{distance_matrix, shape_distance, Method};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid2(32, 32)?;
    let disk = |cx_: f64, cy: f64, r: f64| {
        BinarySet::from_fn(&cx, move |[x, y, _]| {
            let (dx, dy) = (x as f64 + 0.5 - cx_, y as f64 + 0.5 - cy);
            dx * dx + dy * dy <= r * r
        })
    };
    let shapes = vec![
        ("disk".to_string(), disk(16.0, 16.0, 9.0)),
        ("shifted".to_string(), disk(18.0, 16.0, 9.0)),
        ("small".to_string(), disk(16.0, 16.0, 6.0)),
        ("square".to_string(), BinarySet::from_fn(&cx, |[x, y, _]| (8..24).contains(&x) && (8..24).contains(&y))),
    ];

    let d = shape_distance(&shapes[0].1, &shapes[1].1, 0.5, Method::Lp)?;
    println!("disk vs shifted: {:.4} (symmetric difference has {} pixels)", d.value, shapes[0].1.symmetric_difference(&shapes[1].1)?.len());

    let m = distance_matrix(&shapes, 0.5, Method::MinCut(Connectivity::Sixteen))?;
    print!("{}", m.to_csv());
    Ok(())
}
