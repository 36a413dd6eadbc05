#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use flatnorm::complex::{Axis, BinarySet, Cell, Chain, CubicalComplex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random pixel set grown from a few random rectangles.
pub fn random_image(cx: &Arc<CubicalComplex>, rng: &mut ChaCha8Rng) -> BinarySet {
    let (nx, ny) = (cx.extent()[0], cx.extent()[1]);
    let mut set = BinarySet::empty(cx);
    for _ in 0..rng.gen_range(1..=5) {
        let (x0, y0) = (rng.gen_range(0..nx), rng.gen_range(0..ny));
        let (w, h) = (rng.gen_range(1..=nx / 2), rng.gen_range(1..=ny / 2));
        let add = rng.gen_bool(0.75);
        for y in y0..(y0 + h).min(ny) {
            for x in x0..(x0 + w).min(nx) {
                let id = cx.cell_id(&Cell::face2(x, y)).unwrap();
                if add {
                    set.insert(id);
                } else {
                    set.remove(id);
                }
            }
        }
    }
    for id in 0..cx.num_cells(2) {
        if rng.gen_bool(0.05) {
            if set.contains(id) {
                set.remove(id);
            } else {
                set.insert(id);
            }
        }
    }
    set
}

/// Pixels whose centres lie within `r` of `(cx, cy)`.
pub fn disk(cx: &Arc<CubicalComplex>, centre: (f64, f64), r: f64) -> BinarySet {
    BinarySet::from_fn(cx, |[x, y, _]| {
        let dx = x as f64 + 0.5 - centre.0;
        let dy = y as f64 + 0.5 - centre.1;
        dx * dx + dy * dy <= r * r
    })
}

/// Unit-metric perimeter counted pixel by pixel, outside the grid empty.
pub fn naive_perimeter(nx: usize, ny: usize, inside: &dyn Fn(usize, usize) -> bool) -> f64 {
    let at = |x: i64, y: i64| x >= 0 && y >= 0 && x < nx as i64 && y < ny as i64 && inside(x as usize, y as usize);
    let mut count = 0;
    for y in 0..ny as i64 {
        for x in 0..nx as i64 {
            if at(x, y) {
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    if !at(x + dx, y + dy) {
                        count += 1;
                    }
                }
            }
        }
    }
    count as f64
}

/// Exhaustive minimum of `Per(Sigma) + lambda |Sigma xor Omega|` on a small
/// grid, returning the value and every minimizer (as bit masks).
pub fn l1tv_bruteforce(nx: usize, ny: usize, omega: &[bool], lambda: f64) -> (f64, Vec<u32>) {
    let n = nx * ny;
    assert!(n <= 16);
    let mut best = f64::INFINITY;
    let mut argmin = Vec::new();
    for mask in 0u32..(1 << n) {
        let inside = |x: usize, y: usize| mask >> (y * nx + x) & 1 == 1;
        let fidelity = (0..n).filter(|&i| (mask >> i & 1 == 1) != omega[i]).count() as f64;
        let v = naive_perimeter(nx, ny, &inside) + lambda * fidelity;
        if v < best - 1e-12 {
            best = v;
            argmin = vec![mask];
        } else if (v - best).abs() <= 1e-12 {
            argmin.push(mask);
        }
    }
    (best, argmin)
}

pub type EdgeKey = (usize, usize, u8);

/// Boundary of a planar face written out by hand: counterclockwise, with
/// edges oriented along the positive axes.
pub fn face_boundary(x: usize, y: usize) -> [(EdgeKey, f64); 4] {
    [
        ((x, y, b'X'), 1.0),
        ((x + 1, y, b'Y'), 1.0),
        ((x, y + 1, b'X'), -1.0),
        ((x, y, b'Y'), -1.0),
    ]
}

/// Exhaustive minimum of `lambda M(S) + M(T - dS)` over integer `S` with
/// coefficients in `-range..=range` on an `nx x ny` planar grid.
pub fn filling_bruteforce(nx: usize, ny: usize, t: &HashMap<EdgeKey, f64>, lambda: f64, range: i32) -> f64 {
    let faces: Vec<(usize, usize)> = (0..ny).flat_map(|y| (0..nx).map(move |x| (x, y))).collect();
    let base = (2 * range + 1) as usize;
    let total = base.pow(faces.len() as u32);
    let mut best = f64::INFINITY;
    for code in 0..total {
        let mut c = code;
        let mut residual = t.clone();
        let mut mass_s = 0.0;
        for &(x, y) in &faces {
            let s = (c % base) as i32 - range;
            c /= base;
            if s == 0 {
                continue;
            }
            mass_s += s.abs() as f64;
            for (e, sign) in face_boundary(x, y) {
                *residual.entry(e).or_insert(0.0) -= sign * s as f64;
            }
        }
        let mass_r: f64 = residual.values().map(|v| v.abs()).sum();
        best = best.min(lambda * mass_s + mass_r);
    }
    best
}

pub fn chain_from_edges(cx: &Arc<CubicalComplex>, t: &HashMap<EdgeKey, f64>) -> Chain {
    Chain::from_cells(
        cx,
        1,
        t.iter().filter(|(_, &c)| c != 0.0).map(|(&(x, y, a), &c)| {
            let axis = if a == b'X' { Axis::X } else { Axis::Y };
            (Cell::edge2(x, y, axis), c)
        }),
    )
    .unwrap()
}

/// Random 1-chain with coefficients in {-1, 0, 1} on every edge.
pub fn random_edges(nx: usize, ny: usize, rng: &mut ChaCha8Rng, density: f64) -> HashMap<EdgeKey, f64> {
    let mut t = HashMap::new();
    for y in 0..=ny {
        for x in 0..=nx {
            for (a, ok) in [(b'X', x < nx), (b'Y', y < ny)] {
                if ok && rng.gen_bool(density) {
                    t.insert((x, y, a), if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
                }
            }
        }
    }
    t
}

/// Boundary of a pixel set.
pub fn boundary(set: &BinarySet) -> Chain {
    flatnorm::complex::boundary_of_set(set)
}

/// Vertical circles `x = c` on a `n x n` torus with alternating orientation.
pub fn three_circles(n: usize, xs: [usize; 3]) -> Chain {
    let cx = CubicalComplex::build(2, &[n, n], &[true, true]).unwrap();
    let terms = xs.iter().enumerate().flat_map(|(i, &x)| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        (0..n).map(move |y| (Cell::edge2(x, y, Axis::Y), sign))
    });
    Chain::from_cells(&cx, 1, terms).unwrap()
}

/// Faces `x0 <= x < x1` of a periodic planar complex, as top cell ids.
pub fn strip(cx: &Arc<CubicalComplex>, x0: usize, x1: usize) -> Vec<usize> {
    (0..cx.num_cells(2))
        .filter(|&f| (x0..x1).contains(&cx.cell(2, f).coords[0]))
        .collect()
}

/// A square `[lo, hi)^2` with a `b x b` bump glued to the middle of its
/// right side.
pub fn square_with_bump(cx: &Arc<CubicalComplex>, lo: usize, hi: usize, b: usize) -> BinarySet {
    let mid = (lo + hi) / 2;
    BinarySet::from_fn(cx, |[x, y, _]| {
        let square = (lo..hi).contains(&x) && (lo..hi).contains(&y);
        let bump = (hi..hi + b).contains(&x) && (mid..mid + b).contains(&y);
        square || bump
    })
}

/// A planar square loop at height `z` in a 3D grid with random vertical
/// detours: `detours` loop edges are each replaced by three edges going
/// around a unit face.
pub fn noisy_loop(n: usize, lo: usize, hi: usize, z: usize, detours: usize, rng: &mut ChaCha8Rng) -> Chain {
    let cx = CubicalComplex::grid3(n, n, n).unwrap();
    let faces = (0..cx.num_cells(2)).filter(|&f| {
        let c = cx.cell(2, f);
        c.axes == (Axis::X.bit() | Axis::Y.bit())
            && c.coords[2] == z
            && (lo..hi).contains(&c.coords[0])
            && (lo..hi).contains(&c.coords[1])
    });
    let disk = Chain::from_ids(&cx, 2, faces.map(|f| (f, 1.0)).collect::<Vec<_>>()).unwrap();
    let mut t = disk.boundary().unwrap();
    let mut used = std::collections::HashSet::new();
    let loop_edges: Vec<(usize, f64)> = t.iter().collect();
    while used.len() < detours.min(loop_edges.len()) {
        let (e, c) = loop_edges[rng.gen_range(0..loop_edges.len())];
        if !used.insert(e) {
            continue;
        }
        let edge = cx.cell(1, e);
        // the vertical face above the edge
        let face = Cell::new(edge.coords, edge.axes | Axis::Z.bit());
        let f = cx.require_id(&face).unwrap();
        let df = Chain::from_ids(&cx, 2, [(f, 1.0)]).unwrap().boundary().unwrap();
        let k = c / df.get(e);
        t = t.add_scaled(&df, -k).unwrap();
    }
    t
}
