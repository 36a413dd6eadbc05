//! Cubical grid complexes in two and three dimensions.
//!
//! A k-cell is addressed by its anchor vertex (the corner with the smallest
//! coordinates) and the set of axes it spans. Cells of each degree are
//! numbered in lexicographic order of `(x, y, z)` and then by axis mask
//! (`X < Y < Z`, `XY < XZ < YZ`), so two complexes built from the same
//! arguments enumerate their cells identically.
//!
//! Orientation: edges point along the positive axis. The boundary of a cell
//! spanning axes `a_0 < a_1 < ...` is
//! `sum_i (-1)^i (upper face along a_i - lower face along a_i)`, which makes
//! the unit square boundary run counter-clockwise.

mod chain;
mod cochain;
mod dilate;
pub mod format;
mod set;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use chain::{Chain, MassWeights};
pub use cochain::FormCochain;
pub use dilate::{dilate_into, dilate_pushforward};
pub use set::{boundary_of_set, BinarySet};

/// A coordinate axis of the ambient grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn bit(self) -> u8 {
        1 << self.index()
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    pub fn label(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// Bit set of spanned axes.
pub type AxisMask = u8;

/// Label like `"XY"` for an axis mask.
pub fn mask_label(mask: AxisMask) -> String {
    Axis::ALL
        .iter()
        .filter(|a| mask & a.bit() != 0)
        .map(|a| a.label())
        .collect()
}

/// Parses labels like `X`, `XY`, `YZ` (letters in any order).
pub fn parse_mask_label(label: &str) -> Option<AxisMask> {
    let mut mask = 0u8;
    for ch in label.chars() {
        let bit = match ch {
            'X' => Axis::X.bit(),
            'Y' => Axis::Y.bit(),
            'Z' => Axis::Z.bit(),
            _ => return None,
        };
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
    }
    Some(mask)
}

/// A cell of a cubical complex, addressed by anchor vertex and spanned axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub coords: [usize; 3],
    pub axes: AxisMask,
}

impl Cell {
    pub fn new(coords: [usize; 3], axes: AxisMask) -> Self {
        Cell { coords, axes }
    }

    pub fn vertex2(x: usize, y: usize) -> Self {
        Cell::new([x, y, 0], 0)
    }

    pub fn edge2(x: usize, y: usize, axis: Axis) -> Self {
        Cell::new([x, y, 0], axis.bit())
    }

    /// Pixel `(x, y)` of a planar complex.
    pub fn face2(x: usize, y: usize) -> Self {
        Cell::new([x, y, 0], Axis::X.bit() | Axis::Y.bit())
    }

    pub fn degree(&self) -> usize {
        self.axes.count_ones() as usize
    }

    pub fn spans(&self, axis: Axis) -> bool {
        self.axes & axis.bit() != 0
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.coords;
        write!(f, "({x},{y},{z};{})", mask_label(self.axes))
    }
}

/// Sparse signed incidence, stored column-wise (one column per cell).
#[derive(Clone, Debug, Default)]
struct Incidence {
    start: Vec<usize>,
    entries: Vec<(usize, f64)>,
}

impl Incidence {
    fn column(&self, id: usize) -> &[(usize, f64)] {
        &self.entries[self.start[id]..self.start[id + 1]]
    }
}

/// Immutable cubical grid complex, optionally periodic along each axis.
#[derive(Debug)]
pub struct CubicalComplex {
    dim: usize,
    extent: [usize; 3],
    periodic: [bool; 3],
    /// Number of anchor positions per axis (`n + 1`, or `n` when periodic).
    grid: [usize; 3],
    masks: [Vec<AxisMask>; 4],
    cells: [Vec<Cell>; 4],
    slots: [Vec<u32>; 4],
    /// `boundary[k]`: k-cells -> (k-1)-cells.
    boundary: [Incidence; 4],
    /// `coboundary[k]`: k-cells -> (k+1)-cells.
    coboundary: [Incidence; 4],
}

const NO_CELL: u32 = u32::MAX;

impl PartialEq for CubicalComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.extent == other.extent && self.periodic == other.periodic
    }
}

impl Eq for CubicalComplex {}

impl CubicalComplex {
    /// Builds a complex of the given dimension (2 or 3).
    ///
    /// `extent` and `periodic` must have exactly `dimension` entries. Periodic
    /// axes need at least 3 cells so that no cell touches itself.
    pub fn build(dimension: usize, extent: &[usize], periodic: &[bool]) -> Result<Arc<Self>> {
        if dimension != 2 && dimension != 3 {
            return Err(Error::InvalidComplex(format!(
                "dimension must be 2 or 3, got {dimension}"
            )));
        }
        if extent.len() != dimension {
            return Err(Error::InvalidComplex(format!(
                "expected {dimension} extents, got {}",
                extent.len()
            )));
        }
        if !periodic.is_empty() && periodic.len() != dimension {
            return Err(Error::InvalidComplex(format!(
                "expected {dimension} periodicity flags, got {}",
                periodic.len()
            )));
        }
        let mut ext = [0usize; 3];
        let mut per = [false; 3];
        let mut grid = [1usize; 3];
        for a in 0..dimension {
            ext[a] = extent[a];
            per[a] = periodic.get(a).copied().unwrap_or(false);
            if ext[a] == 0 {
                return Err(Error::InvalidComplex(format!(
                    "extent along {} must be at least 1",
                    Axis::from_index(a).label()
                )));
            }
            if per[a] && ext[a] < 3 {
                return Err(Error::InvalidComplex(format!(
                    "periodic axis {} needs extent >= 3, got {}",
                    Axis::from_index(a).label(),
                    ext[a]
                )));
            }
            grid[a] = if per[a] { ext[a] } else { ext[a] + 1 };
        }
        let total_slots = grid[0]
            .checked_mul(grid[1])
            .and_then(|v| v.checked_mul(grid[2]))
            .filter(|&v| v < (u32::MAX as usize) / 8)
            .ok_or_else(|| Error::InvalidComplex("complex too large".into()))?;

        let mut masks: [Vec<AxisMask>; 4] = Default::default();
        let full: AxisMask = (1u8 << dimension) - 1;
        for mask in 0..=full {
            masks[mask.count_ones() as usize].push(mask);
        }

        let mut cx = CubicalComplex {
            dim: dimension,
            extent: ext,
            periodic: per,
            grid,
            masks,
            cells: Default::default(),
            slots: Default::default(),
            boundary: Default::default(),
            coboundary: Default::default(),
        };

        for k in 0..=dimension {
            let nmask = cx.masks[k].len();
            let mut slots = vec![NO_CELL; total_slots * nmask];
            let mut cells = Vec::new();
            for x in 0..grid[0] {
                for y in 0..grid[1] {
                    for z in 0..grid[2] {
                        for (mi, &mask) in cx.masks[k].iter().enumerate() {
                            let cell = Cell::new([x, y, z], mask);
                            if cx.fits(&cell) {
                                let slot = ((x * grid[1] + y) * grid[2] + z) * nmask + mi;
                                slots[slot] = cells.len() as u32;
                                cells.push(cell);
                            }
                        }
                    }
                }
            }
            cx.cells[k] = cells;
            cx.slots[k] = slots;
        }

        for k in 1..=dimension {
            let mut inc = Incidence {
                start: Vec::with_capacity(cx.cells[k].len() + 1),
                entries: Vec::with_capacity(cx.cells[k].len() * 2 * k),
            };
            inc.start.push(0);
            for cell in &cx.cells[k] {
                let mut col = cx.cell_boundary(cell);
                col.sort_by_key(|&(id, _)| id);
                inc.entries.extend(col);
                inc.start.push(inc.entries.len());
            }
            cx.boundary[k] = inc;
        }
        for k in 0..dimension {
            let n_lo = cx.cells[k].len();
            let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_lo];
            for hi in 0..cx.cells[k + 1].len() {
                for &(lo, s) in cx.boundary[k + 1].column(hi) {
                    cols[lo].push((hi, s));
                }
            }
            let mut inc = Incidence::default();
            inc.start.push(0);
            for col in cols {
                inc.entries.extend(col);
                inc.start.push(inc.entries.len());
            }
            cx.coboundary[k] = inc;
        }
        Ok(Arc::new(cx))
    }

    /// Planar non-periodic grid of `nx × ny` pixels.
    pub fn grid2(nx: usize, ny: usize) -> Result<Arc<Self>> {
        Self::build(2, &[nx, ny], &[false, false])
    }

    /// Non-periodic `nx × ny × nz` voxel grid.
    pub fn grid3(nx: usize, ny: usize, nz: usize) -> Result<Arc<Self>> {
        Self::build(3, &[nx, ny, nz], &[false, false, false])
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Cell counts along each used axis.
    pub fn extent(&self) -> &[usize] {
        &self.extent[..self.dim]
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic[..self.dim]
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic().iter().any(|&p| p)
    }

    pub fn num_cells(&self, degree: usize) -> usize {
        self.cells.get(degree).map_or(0, Vec::len)
    }

    pub fn cells(&self, degree: usize) -> &[Cell] {
        &self.cells[degree]
    }

    pub fn cell(&self, degree: usize, id: usize) -> Cell {
        self.cells[degree][id]
    }

    /// Axis masks of the given degree, in enumeration order.
    pub fn masks(&self, degree: usize) -> &[AxisMask] {
        &self.masks[degree]
    }

    /// Id of a cell, or `None` if it is not part of the complex.
    pub fn cell_id(&self, cell: &Cell) -> Option<usize> {
        let k = cell.degree();
        if k > self.dim || !self.fits(cell) {
            return None;
        }
        let mi = self.masks[k].iter().position(|&m| m == cell.axes)?;
        let [x, y, z] = cell.coords;
        let slot = ((x * self.grid[1] + y) * self.grid[2] + z) * self.masks[k].len() + mi;
        match self.slots[k][slot] {
            NO_CELL => None,
            id => Some(id as usize),
        }
    }

    /// Like [`cell_id`](Self::cell_id) but reports an error for foreign cells.
    pub fn require_id(&self, cell: &Cell) -> Result<usize> {
        self.cell_id(cell)
            .ok_or_else(|| Error::InvalidCell(format!("{cell} is not a cell of this complex")))
    }

    /// Signed boundary column of a k-cell (k >= 1), sorted by face id.
    pub fn boundary_column(&self, degree: usize, id: usize) -> &[(usize, f64)] {
        self.boundary[degree].column(id)
    }

    /// Signed coboundary column of a k-cell: the (k+1)-cells containing it
    /// together with the sign of the k-cell in their boundary.
    pub fn coboundary_column(&self, degree: usize, id: usize) -> &[(usize, f64)] {
        self.coboundary[degree].column(id)
    }

    /// Whether two complexes have identical shape (and hence cell numbering).
    pub fn same_shape(&self, other: &CubicalComplex) -> bool {
        self == other
    }

    /// Complex with every extent multiplied by `factor`.
    pub fn dilated(&self, factor: usize) -> Result<Arc<Self>> {
        let ext: Vec<usize> = self.extent().iter().map(|&n| n * factor).collect();
        Self::build(self.dim, &ext, self.periodic())
    }

    fn fits(&self, cell: &Cell) -> bool {
        if cell.axes >> self.dim != 0 {
            return false;
        }
        for a in 0..3 {
            let c = cell.coords[a];
            if a >= self.dim {
                if c != 0 {
                    return false;
                }
                continue;
            }
            let spans = cell.axes & (1 << a) != 0;
            let limit = if self.periodic[a] || spans {
                self.extent[a]
            } else {
                self.extent[a] + 1
            };
            if c >= limit {
                return false;
            }
        }
        true
    }

    fn step(&self, coords: [usize; 3], axis: usize) -> [usize; 3] {
        let mut c = coords;
        c[axis] += 1;
        if self.periodic[axis] && c[axis] == self.extent[axis] {
            c[axis] = 0;
        }
        c
    }

    fn cell_boundary(&self, cell: &Cell) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(2 * cell.degree());
        let mut push = |id: usize, s: f64| {
            if let Some(e) = out.iter_mut().find(|e| e.0 == id) {
                e.1 += s;
            } else {
                out.push((id, s));
            }
        };
        let spanned: Vec<usize> = (0..3).filter(|a| cell.axes & (1 << a) != 0).collect();
        for (i, &a) in spanned.iter().enumerate() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let mask = cell.axes & !(1 << a);
            let upper = Cell::new(self.step(cell.coords, a), mask);
            let lower = Cell::new(cell.coords, mask);
            push(self.cell_id(&upper).expect("upper face exists"), sign);
            push(self.cell_id(&lower).expect("lower face exists"), -sign);
        }
        out.retain(|e| e.1 != 0.0);
        out
    }

    /// Top-dimensional cell covering pixel/voxel `coords`.
    pub fn top_cell(&self, coords: [usize; 3]) -> Cell {
        Cell::new(coords, (1u8 << self.dim) - 1)
    }

    /// Header fields of the chain file format: `dim`, `extent`, `periodic`.
    pub fn describe(&self) -> String {
        let ext: Vec<String> = self.extent().iter().map(|n| n.to_string()).collect();
        let per: Vec<&str> = self
            .periodic()
            .iter()
            .map(|&p| if p { "1" } else { "0" })
            .collect();
        format!(
            "dim {} extent {} periodic {}",
            self.dim,
            ext.join(" "),
            per.join(" ")
        )
    }
}

/// Axis-aligned box of the vertex lattice used to select solver working sets.
///
/// Periodic axes are always taken in full.
#[derive(Clone, Debug)]
pub(crate) struct CellBox {
    lo: [usize; 3],
    hi: [usize; 3],
    full: [bool; 3],
}

impl CellBox {
    /// Smallest box containing every cell of `cells`, grown by `margin`.
    pub(crate) fn around(cx: &CubicalComplex, cells: impl IntoIterator<Item = Cell>, margin: usize) -> Option<Self> {
        let mut lo = [usize::MAX; 3];
        let mut hi = [0usize; 3];
        let mut any = false;
        for cell in cells {
            any = true;
            for a in 0..cx.dim {
                let c = cell.coords[a];
                let span = usize::from(cell.axes & (1 << a) != 0);
                lo[a] = lo[a].min(c);
                hi[a] = hi[a].max(c + span);
            }
        }
        if !any {
            return None;
        }
        let mut full = [true; 3];
        for a in 0..cx.dim {
            if cx.periodic[a] {
                continue;
            }
            lo[a] = lo[a].saturating_sub(margin);
            hi[a] = (hi[a] + margin).min(cx.extent[a]);
            full[a] = lo[a] == 0 && hi[a] == cx.extent[a];
        }
        Some(CellBox { lo, hi, full })
    }

    pub(crate) fn contains(&self, cell: &Cell) -> bool {
        (0..3).all(|a| {
            if self.full[a] {
                return true;
            }
            let span = usize::from(cell.axes & (1 << a) != 0);
            cell.coords[a] >= self.lo[a] && cell.coords[a] + span <= self.hi[a]
        })
    }
}
