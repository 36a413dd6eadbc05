//! Pictures of planar decompositions.
//!
//! White background, filling `S` in red, input `T` in blue and the residual
//! `T - dS` in green on top.

use crate::complex::{Axis, Cell, Chain};
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::netpbm::{Pixmap, Rgb};

pub const WHITE: Rgb = [255, 255, 255];
pub const RED: Rgb = [255, 0, 0];
pub const BLUE: Rgb = [0, 0, 255];
pub const GREEN: Rgb = [0, 255, 0];

/// Each grid cell becomes a `scale x scale` block; edges are drawn on the
/// shared pixel lines. Needs a planar complex and a 1-chain input.
pub fn render_decomposition(d: &Decomposition, scale: usize) -> Result<Pixmap> {
    let cx = d.input.complex();
    if cx.dimension() != 2 || d.input.degree() != 1 {
        return Err(Error::Unsupported(
            "only 1-chains in planar complexes can be rendered".into(),
        ));
    }
    if scale < 2 {
        return Err(Error::InvalidParameter(format!("render scale must be at least 2, got {scale}")));
    }
    let (nx, ny) = (cx.extent()[0], cx.extent()[1]);
    let mut img = Pixmap::filled(nx * scale + 1, ny * scale + 1, WHITE);
    for (cell, _) in d.s_chain.cells() {
        let [x, y, _] = cell.coords;
        for py in y * scale..=(y + 1) * scale {
            for px in x * scale..=(x + 1) * scale {
                img.set(px, py, RED);
            }
        }
    }
    draw_edges(&mut img, &d.input, scale, BLUE);
    draw_edges(&mut img, &d.t_minus_ds, scale, GREEN);
    Ok(img)
}

fn draw_edges(img: &mut Pixmap, chain: &Chain, scale: usize, colour: Rgb) {
    for (cell, _) in chain.cells() {
        let Cell { coords: [x, y, _], .. } = cell;
        for k in 0..=scale {
            if cell.spans(Axis::X) {
                img.set(x * scale + k, y * scale, colour);
            } else {
                img.set(x * scale, y * scale + k, colour);
            }
        }
    }
}
