//! Binary L1TV denoising by minimum s-t cut.
//!
//! Minimizes `Per(Sigma) + lambda |Sigma xor Omega|` over pixel sets. With
//! the 4-neighbourhood the perimeter is the exact unit-metric length of the
//! cell boundary, and the minimum is the flat norm with scale of the
//! boundary current of `Omega`.

mod maxflow;
mod stencil;

pub use stencil::Connectivity;

use std::sync::Arc;

use crate::complex::{boundary_of_set, BinarySet, Chain, CubicalComplex};
use crate::decomposition::{Decomposition, Provenance};
use crate::error::{Error, Result};
use maxflow::FlowNetwork;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MincutConfig {
    pub lambda: f64,
    pub connectivity: Connectivity,
}

impl MincutConfig {
    pub fn new(lambda: f64, connectivity: Connectivity) -> Self {
        MincutConfig {
            lambda,
            connectivity,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive and finite, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Planar pixel grid view of a complex: top-cell id per `(x, y)`.
struct PixelGrid {
    nx: usize,
    ny: usize,
    ids: Vec<usize>,
}

impl PixelGrid {
    fn new(cx: &CubicalComplex) -> Result<Self> {
        if cx.dimension() != 2 {
            return Err(Error::Unsupported(
                "min-cut denoising needs a planar complex; use the chain LP in 3D".into(),
            ));
        }
        if cx.is_periodic() {
            return Err(Error::Unsupported(
                "min-cut denoising does not support periodic complexes; use the chain LP".into(),
            ));
        }
        let (nx, ny) = (cx.extent()[0], cx.extent()[1]);
        let mut ids = vec![0; nx * ny];
        for (id, cell) in cx.cells(2).iter().enumerate() {
            ids[cell.coords[1] * nx + cell.coords[0]] = id;
        }
        Ok(PixelGrid { nx, ny, ids })
    }

    fn id(&self, x: usize, y: usize) -> usize {
        self.ids[y * self.nx + x]
    }

    fn neighbour(&self, x: usize, y: usize, (dx, dy): (i64, i64)) -> Option<usize> {
        let qx = x as i64 + dx;
        let qy = y as i64 + dy;
        if qx < 0 || qy < 0 || qx >= self.nx as i64 || qy >= self.ny as i64 {
            None
        } else {
            Some(self.id(qx as usize, qy as usize))
        }
    }

    /// Every `(pixel, neighbour)` stencil pair once; `None` is the outside.
    fn pairs(&self, conn: Connectivity) -> Vec<(usize, Option<usize>, f64)> {
        let mut out = Vec::new();
        for y in 0..self.ny {
            for x in 0..self.nx {
                let p = self.id(x, y);
                for &(off, w) in &conn.stencil() {
                    out.push((p, self.neighbour(x, y, off), w));
                    let back = (-off.0, -off.1);
                    if self.neighbour(x, y, back).is_none() {
                        out.push((p, None, w));
                    }
                }
            }
        }
        out
    }
}

/// Perimeter of a pixel set under the given stencil. The domain is taken to
/// be surrounded by background, so border pixels contribute their outer edges.
pub fn perimeter(set: &BinarySet, connectivity: Connectivity) -> Result<f64> {
    let grid = PixelGrid::new(set.complex())?;
    Ok(grid
        .pairs(connectivity)
        .into_iter()
        .filter(|&(p, q, _)| set.contains(p) != q.is_some_and(|q| set.contains(q)))
        .map(|(_, _, w)| w)
        .sum())
}

/// Solves the binary L1TV problem for `omega` and returns the flat norm
/// decomposition of its boundary current.
///
/// Among all minimizers the smallest one (the residual source side) is
/// returned. `S` carries `+1` on `Omega \ Sigma` and `-1` on `Sigma \ Omega`,
/// so that `T - dS` is the boundary current of `Sigma`.
pub fn l1tv_denoise(omega: &BinarySet, config: &MincutConfig) -> Result<Decomposition> {
    config.validate()?;
    let cx = omega.complex();
    let grid = PixelGrid::new(cx)?;
    let n = cx.num_cells(2);
    let (s, t) = (n, n + 1);
    let lambda = config.lambda;

    let mut net = FlowNetwork::new(n + 2);
    for p in 0..n {
        if omega.contains(p) {
            net.add_edge(s, p, lambda, 0.0);
        } else {
            net.add_edge(p, t, lambda, 0.0);
        }
    }
    for (p, q, w) in grid.pairs(config.connectivity) {
        match q {
            Some(q) => net.add_edge(p, q, w, w),
            None => net.add_edge(p, t, w, 0.0),
        }
    }
    let max_flow = net.max_flow(s, t);
    let side = net.source_side(s);
    let sigma = BinarySet::from_mask(cx, side[..n].to_vec())?;

    let s_chain = filling_between(omega, &sigma)?;
    let per = perimeter(&sigma, config.connectivity)?;
    let decomposition = Decomposition::assemble(
        boundary_of_set(omega),
        s_chain,
        lambda,
        Some(sigma),
        Some(per),
        Provenance::MinCut {
            connectivity: config.connectivity,
            max_flow,
        },
    )?;
    Ok(decomposition)
}

/// The top-degree chain `[Omega \ Sigma] - [Sigma \ Omega]`.
pub fn filling_between(omega: &BinarySet, sigma: &BinarySet) -> Result<Chain> {
    let cx: &Arc<CubicalComplex> = omega.complex();
    if !cx.same_shape(sigma.complex()) {
        return Err(Error::ComplexMismatch);
    }
    let top = cx.dimension();
    let terms = (0..cx.num_cells(top)).filter_map(|p| match (omega.contains(p), sigma.contains(p)) {
        (true, false) => Some((p, 1.0)),
        (false, true) => Some((p, -1.0)),
        _ => None,
    });
    Chain::from_ids(cx, top, terms)
}
