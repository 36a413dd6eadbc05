use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::{Cell, CubicalComplex};
use crate::error::{Error, Result};

/// Per-degree cell weights used by [`Chain::mass`].
///
/// The default weighs every cell by 1 (unit edge length, face area and cube
/// volume), which is the metric shared by the min-cut and LP solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassWeights {
    per_degree: [f64; 4],
}

impl Default for MassWeights {
    fn default() -> Self {
        MassWeights::unit()
    }
}

impl MassWeights {
    pub fn unit() -> Self {
        MassWeights {
            per_degree: [1.0; 4],
        }
    }

    /// Weights for a grid of spacing `h`: a k-cell weighs `h^k`.
    pub fn grid_spacing(h: f64) -> Result<Self> {
        Self::per_degree([1.0, h, h * h, h * h * h])
    }

    pub fn per_degree(weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter(
                "mass weights must be finite and strictly positive".into(),
            ));
        }
        Ok(MassWeights {
            per_degree: weights,
        })
    }

    pub fn weight(&self, degree: usize) -> f64 {
        self.per_degree[degree]
    }

    pub fn is_unit(&self) -> bool {
        self.per_degree == [1.0; 4]
    }
}

/// A k-chain: real coefficients on k-cells of a complex. Zero coefficients
/// are never stored.
#[derive(Clone, Debug)]
pub struct Chain {
    complex: Arc<CubicalComplex>,
    degree: usize,
    coeffs: BTreeMap<usize, f64>,
}

impl PartialEq for Chain {
    fn eq(&self, other: &Self) -> bool {
        self.complex.same_shape(&other.complex)
            && self.degree == other.degree
            && self.coeffs == other.coeffs
    }
}

impl Chain {
    pub fn zero(complex: &Arc<CubicalComplex>, degree: usize) -> Result<Self> {
        if degree > complex.dimension() {
            return Err(Error::Degree(format!(
                "degree {degree} exceeds complex dimension {}",
                complex.dimension()
            )));
        }
        Ok(Chain {
            complex: Arc::clone(complex),
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// Chain from `(cell, coefficient)` pairs; repeated cells accumulate.
    pub fn from_cells(
        complex: &Arc<CubicalComplex>,
        degree: usize,
        terms: impl IntoIterator<Item = (Cell, f64)>,
    ) -> Result<Self> {
        let mut chain = Chain::zero(complex, degree)?;
        for (cell, c) in terms {
            if cell.degree() != degree {
                return Err(Error::Degree(format!(
                    "cell {cell} has degree {}, expected {degree}",
                    cell.degree()
                )));
            }
            let id = complex.require_id(&cell)?;
            chain.add_term(id, c);
        }
        Ok(chain)
    }

    /// Chain from `(cell id, coefficient)` pairs; repeated ids accumulate.
    pub fn from_ids(
        complex: &Arc<CubicalComplex>,
        degree: usize,
        terms: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let mut chain = Chain::zero(complex, degree)?;
        let n = complex.num_cells(degree);
        for (id, c) in terms {
            if id >= n {
                return Err(Error::InvalidCell(format!(
                    "id {id} out of range for {n} cells of degree {degree}"
                )));
            }
            chain.add_term(id, c);
        }
        Ok(chain)
    }

    /// Chain from a dense coefficient vector indexed by cell id.
    pub fn from_dense(complex: &Arc<CubicalComplex>, degree: usize, values: &[f64]) -> Result<Self> {
        if values.len() != complex.num_cells(degree) {
            return Err(Error::InvalidParameter(format!(
                "dense vector has {} entries, complex has {} cells of degree {degree}",
                values.len(),
                complex.num_cells(degree)
            )));
        }
        Chain::from_ids(
            complex,
            degree,
            values.iter().copied().enumerate().filter(|e| e.1 != 0.0),
        )
    }

    pub(crate) fn add_term(&mut self, id: usize, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.coeffs.entry(id).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.coeffs.remove(&id);
        }
    }

    pub fn complex(&self) -> &Arc<CubicalComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, id: usize) -> f64 {
        self.coeffs.get(&id).copied().unwrap_or(0.0)
    }

    pub fn coefficient(&self, cell: &Cell) -> f64 {
        self.complex.cell_id(cell).map_or(0.0, |id| self.get(id))
    }

    /// `(id, coefficient)` pairs in increasing id order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().map(|(&id, &c)| (id, c))
    }

    pub fn cells(&self) -> impl Iterator<Item = (Cell, f64)> + '_ {
        self.iter().map(|(id, c)| (self.complex.cell(self.degree, id), c))
    }

    /// Ids of the cells carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.complex.num_cells(self.degree)];
        for (id, c) in self.iter() {
            v[id] = c;
        }
        v
    }

    /// Weighted l1 norm of the coefficients.
    pub fn mass(&self, weights: &MassWeights) -> f64 {
        weights.weight(self.degree) * self.coeffs.values().fold(0.0, |acc, c| acc + c.abs())
    }

    /// Mass under unit weights.
    pub fn unit_mass(&self) -> f64 {
        self.mass(&MassWeights::unit())
    }

    /// The boundary chain, of degree one lower.
    pub fn boundary(&self) -> Result<Chain> {
        if self.degree == 0 {
            return Err(Error::Degree("boundary of a 0-chain is undefined".into()));
        }
        let mut out = Chain::zero(&self.complex, self.degree - 1)?;
        for (id, c) in self.iter() {
            for &(face, s) in self.complex.boundary_column(self.degree, id) {
                out.add_term(face, s * c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: f64) -> Chain {
        let mut out = Chain {
            complex: Arc::clone(&self.complex),
            degree: self.degree,
            coeffs: BTreeMap::new(),
        };
        for (id, c) in self.iter() {
            out.add_term(id, c * factor);
        }
        out
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Chain, factor: f64) -> Result<Chain> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (id, c) in other.iter() {
            out.add_term(id, factor * c);
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Chain) -> Result<Chain> {
        self.add_scaled(other, 1.0)
    }

    pub fn try_sub(&self, other: &Chain) -> Result<Chain> {
        self.add_scaled(other, -1.0)
    }

    /// Drops coefficients with magnitude at most `eps`.
    pub fn pruned(&self, eps: f64) -> Chain {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| c.abs() > eps);
        out
    }

    /// Whether every coefficient is within `tol` of an integer.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| (c - c.round()).abs() <= tol)
    }

    /// Coefficients rounded to the nearest integer.
    pub fn rounded(&self) -> Chain {
        let mut out = Chain {
            complex: Arc::clone(&self.complex),
            degree: self.degree,
            coeffs: BTreeMap::new(),
        };
        for (id, c) in self.iter() {
            out.add_term(id, c.round());
        }
        out
    }

    /// Largest coefficient difference against another chain on the same complex.
    pub fn max_abs_diff(&self, other: &Chain) -> Result<f64> {
        Ok(self
            .try_sub(other)?
            .coeffs
            .values()
            .fold(0.0f64, |m, c| m.max(c.abs())))
    }

    pub(crate) fn check_compatible(&self, other: &Chain) -> Result<()> {
        if !self.complex.same_shape(&other.complex) {
            return Err(Error::ComplexMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot combine chains of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        self.scale(-1.0)
    }
}

/// Panics if the operands live on different complexes or degrees; use
/// [`Chain::try_add`] for a fallible version.
impl Add for &Chain {
    type Output = Chain;

    fn add(self, rhs: &Chain) -> Chain {
        self.try_add(rhs).expect("incompatible chains")
    }
}

impl Sub for &Chain {
    type Output = Chain;

    fn sub(self, rhs: &Chain) -> Chain {
        self.try_sub(rhs).expect("incompatible chains")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Axis;

    fn square() -> Arc<CubicalComplex> {
        CubicalComplex::grid2(3, 3).unwrap()
    }

    #[test]
    fn unit_face_boundary_has_mass_four() {
        let cx = square();
        let f = Chain::from_cells(&cx, 2, [(Cell::face2(0, 0), 1.0)]).unwrap();
        let b = f.boundary().unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.unit_mass(), 4.0);
        assert_eq!(b.coefficient(&Cell::edge2(0, 0, Axis::X)), 1.0);
        assert_eq!(b.coefficient(&Cell::edge2(1, 0, Axis::Y)), 1.0);
        assert_eq!(b.coefficient(&Cell::edge2(0, 1, Axis::X)), -1.0);
        assert_eq!(b.coefficient(&Cell::edge2(0, 0, Axis::Y)), -1.0);
        assert!(b.boundary().unwrap().is_zero());
    }

    #[test]
    fn adjacent_faces_cancel_shared_edge() {
        let cx = square();
        let f = Chain::from_cells(&cx, 2, [(Cell::face2(0, 0), 1.0), (Cell::face2(1, 0), 1.0)])
            .unwrap();
        let b = f.boundary().unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.coefficient(&Cell::edge2(1, 0, Axis::Y)), 0.0);
    }

    #[test]
    fn mass_examples() {
        let cx = square();
        assert_eq!(Chain::zero(&cx, 1).unwrap().unit_mass(), 0.0);
        let e = Chain::from_cells(&cx, 1, [(Cell::edge2(1, 1, Axis::X), 2.0)]).unwrap();
        assert_eq!(e.unit_mass(), 2.0);
        let w = MassWeights::grid_spacing(0.5).unwrap();
        assert_eq!(e.mass(&w), 1.0);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let cx = square();
        let c = Chain::from_cells(
            &cx,
            1,
            [
                (Cell::edge2(0, 0, Axis::X), 1.0),
                (Cell::edge2(0, 0, Axis::X), -1.0),
                (Cell::edge2(1, 0, Axis::X), 0.0),
            ],
        )
        .unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn rejects_bad_cells_and_degrees() {
        let cx = square();
        assert!(Chain::from_cells(&cx, 1, [(Cell::face2(0, 0), 1.0)]).is_err());
        assert!(Chain::from_cells(&cx, 2, [(Cell::face2(3, 0), 1.0)]).is_err());
        assert!(Chain::zero(&cx, 3).is_err());
        let v = Chain::from_cells(&cx, 0, [(Cell::vertex2(0, 0), 1.0)]).unwrap();
        assert!(v.boundary().is_err());
    }

    #[test]
    fn rejects_mixed_complexes() {
        let a = Chain::from_cells(&square(), 2, [(Cell::face2(0, 0), 1.0)]).unwrap();
        let other = CubicalComplex::grid2(4, 4).unwrap();
        let b = Chain::from_cells(&other, 2, [(Cell::face2(0, 0), 1.0)]).unwrap();
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn nonpositive_weights_rejected() {
        assert!(MassWeights::per_degree([1.0, 0.0, 1.0, 1.0]).is_err());
        assert!(MassWeights::per_degree([1.0, -1.0, 1.0, 1.0]).is_err());
    }
}
