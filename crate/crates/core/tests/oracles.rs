//! Solvers against exhaustive enumeration on small grids.

mod common;

use flatnorm::chainlp::{flat_norm_lp, LpConfig};
use flatnorm::complex::{BinarySet, CubicalComplex};
use flatnorm::dualform::dual_flat_norm;
use flatnorm::mincut::{l1tv_denoise, perimeter, Connectivity, MincutConfig};
use rand::Rng;

#[test]
fn mincut_matches_enumeration_on_3x3() {
    let cx = CubicalComplex::grid2(3, 3).unwrap();
    let mut rng = common::rng(11);
    for _ in 0..40 {
        let omega: Vec<bool> = (0..9).map(|_| rng.gen_bool(0.5)).collect();
        let set = BinarySet::from_fn(&cx, |[x, y, _]| omega[y * 3 + x]);
        for lambda in [0.3, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0] {
            let (best, argmin) = common::l1tv_bruteforce(3, 3, &omega, lambda);
            let d = l1tv_denoise(&set, &MincutConfig::new(lambda, Connectivity::Four)).unwrap();
            assert!((d.value - best).abs() < 1e-9, "lambda {lambda}: {} vs {best}", d.value);
            // the returned set is the smallest minimizer
            let sigma = d.sigma.unwrap();
            let mask: u32 = (0..9)
                .filter(|&i| sigma.contains_cell([i % 3, i / 3, 0]))
                .map(|i| 1 << i)
                .sum();
            assert!(argmin.contains(&mask));
            assert!(argmin.iter().all(|&m| m & mask == mask));
        }
    }
}

#[test]
fn single_pixel_enumeration_values() {
    let mut omega = vec![false; 9];
    omega[4] = true;
    assert_eq!(common::l1tv_bruteforce(3, 3, &omega, 3.0), (3.0, vec![0]));
    assert_eq!(common::l1tv_bruteforce(3, 3, &omega, 5.0), (4.0, vec![1 << 4]));
}

#[test]
fn four_perimeter_matches_pixel_count() {
    let cx = CubicalComplex::grid2(7, 5).unwrap();
    let mut rng = common::rng(5);
    for _ in 0..20 {
        let set = common::random_image(&cx, &mut rng);
        let naive = common::naive_perimeter(7, 5, &|x, y| set.contains_cell([x, y, 0]));
        assert_eq!(perimeter(&set, Connectivity::Four).unwrap(), naive);
        assert_eq!(common::boundary(&set).unit_mass(), naive);
    }
}

#[test]
fn chain_lp_matches_enumeration_on_2x2() {
    let cx = CubicalComplex::grid2(2, 2).unwrap();
    let mut rng = common::rng(23);
    for _ in 0..30 {
        let t = common::random_edges(2, 2, &mut rng, 0.6);
        let chain = common::chain_from_edges(&cx, &t);
        for lambda in [0.25, 0.5, 1.0, 1.5, 2.5, 4.0] {
            let best = common::filling_bruteforce(2, 2, &t, lambda, 2);
            let d = flat_norm_lp(&chain, &LpConfig::new(lambda)).unwrap();
            assert!((d.value - best).abs() < 1e-9, "lambda {lambda}: lp {} vs {best}", d.value);
            d.check_invariants(1e-9).unwrap();
            let dual = dual_flat_norm(&chain, lambda, 1e-9).unwrap();
            assert!((dual.value - best).abs() < 1e-8);
        }
    }
}

#[test]
fn unit_square_and_single_edge_by_enumeration() {
    let cx = CubicalComplex::grid2(2, 2).unwrap();
    let square: std::collections::HashMap<_, _> = common::face_boundary(0, 0).into_iter().collect();
    assert_eq!(common::filling_bruteforce(2, 2, &square, 5.0, 2), 4.0);
    assert_eq!(common::filling_bruteforce(2, 2, &square, 3.0, 2), 3.0);
    assert_eq!(common::filling_bruteforce(2, 2, &square, 1.0, 2), 1.0);
    let t = common::chain_from_edges(&cx, &square);
    assert_eq!(flat_norm_lp(&t, &LpConfig::new(5.0)).unwrap().value, 4.0);
    let d = flat_norm_lp(&t, &LpConfig::new(3.0)).unwrap();
    assert_eq!((d.value, d.s_chain.len()), (3.0, 1));

    let edge: std::collections::HashMap<_, _> = [((0, 0, b'X'), 1.0)].into_iter().collect();
    assert_eq!(common::filling_bruteforce(2, 2, &edge, 1.0, 2), 1.0);
    let d = flat_norm_lp(&common::chain_from_edges(&cx, &edge), &LpConfig::new(1.0)).unwrap();
    assert_eq!(d.value, 1.0);
    assert!(d.s_chain.is_zero());
}
