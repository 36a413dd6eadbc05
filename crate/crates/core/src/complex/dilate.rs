use std::sync::Arc;

use super::{Cell, Chain, CubicalComplex};
use crate::error::{Error, Result};

/// Pushes a chain forward under the integer dilation `x -> factor * x`.
///
/// Each k-cell maps to the `factor^k` cells tiling its image, keeping its
/// coefficient, so k-mass scales by exactly `factor^k`. The result lives on
/// a freshly built complex with every extent multiplied by `factor`.
pub fn dilate_pushforward(chain: &Chain, factor: usize) -> Result<Chain> {
    if factor == 0 {
        return Err(Error::InvalidParameter("dilation factor must be positive".into()));
    }
    let target = chain.complex().dilated(factor)?;
    dilate_into(chain, factor, &target)
}

/// Like [`dilate_pushforward`] but onto an existing target complex, which
/// must have the dilated shape.
pub fn dilate_into(chain: &Chain, factor: usize, target: &Arc<CubicalComplex>) -> Result<Chain> {
    if factor == 0 {
        return Err(Error::InvalidParameter("dilation factor must be positive".into()));
    }
    let src = chain.complex();
    let expected: Vec<usize> = src.extent().iter().map(|n| n * factor).collect();
    if target.dimension() != src.dimension()
        || target.extent() != expected.as_slice()
        || target.periodic() != src.periodic()
    {
        return Err(Error::ComplexMismatch);
    }
    let mut out = Chain::zero(target, chain.degree())?;
    for (cell, c) in chain.cells() {
        let spanned: Vec<usize> = (0..3).filter(|a| cell.axes & (1 << a) != 0).collect();
        let base = cell.coords.map(|v| v * factor);
        let count = factor.pow(spanned.len() as u32);
        for mut idx in 0..count {
            let mut coords = base;
            for &a in &spanned {
                coords[a] += idx % factor;
                idx /= factor;
            }
            let id = target.require_id(&Cell::new(coords, cell.axes))?;
            out.add_term(id, c);
        }
    }
    Ok(out)
}
