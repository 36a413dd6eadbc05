use std::sync::Arc;

use super::{Chain, CubicalComplex};
use crate::error::{Error, Result};

/// A real-valued k-cochain (discrete k-form), stored densely by cell id.
#[derive(Clone, Debug)]
pub struct FormCochain {
    complex: Arc<CubicalComplex>,
    degree: usize,
    values: Vec<f64>,
}

impl PartialEq for FormCochain {
    fn eq(&self, other: &Self) -> bool {
        self.complex.same_shape(&other.complex)
            && self.degree == other.degree
            && self.values == other.values
    }
}

impl FormCochain {
    pub fn zeros(complex: &Arc<CubicalComplex>, degree: usize) -> Result<Self> {
        if degree > complex.dimension() {
            return Err(Error::Degree(format!(
                "degree {degree} exceeds complex dimension {}",
                complex.dimension()
            )));
        }
        Ok(FormCochain {
            complex: Arc::clone(complex),
            degree,
            values: vec![0.0; complex.num_cells(degree)],
        })
    }

    pub fn from_values(complex: &Arc<CubicalComplex>, degree: usize, values: Vec<f64>) -> Result<Self> {
        let mut form = FormCochain::zeros(complex, degree)?;
        if values.len() != form.values.len() {
            return Err(Error::InvalidParameter(format!(
                "cochain needs {} values, got {}",
                form.values.len(),
                values.len()
            )));
        }
        form.values = values;
        Ok(form)
    }

    /// Cochain whose values are the coefficients of `chain`.
    pub fn from_chain(chain: &Chain) -> FormCochain {
        FormCochain {
            complex: Arc::clone(chain.complex()),
            degree: chain.degree(),
            values: chain.to_dense(),
        }
    }

    /// The values as a chain (used for file output).
    pub fn to_chain(&self) -> Chain {
        Chain::from_dense(&self.complex, self.degree, &self.values).expect("sizes match")
    }

    pub fn complex(&self) -> &Arc<CubicalComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, id: usize) -> f64 {
        self.values[id]
    }

    pub fn set(&mut self, id: usize, value: f64) {
        self.values[id] = value;
    }

    /// The pairing `<phi, c> = sum_cells phi(cell) * c(cell)`.
    pub fn pair(&self, chain: &Chain) -> Result<f64> {
        if !self.complex.same_shape(chain.complex()) {
            return Err(Error::ComplexMismatch);
        }
        if self.degree != chain.degree() {
            return Err(Error::Degree(format!(
                "cannot pair a {}-cochain with a {}-chain",
                self.degree,
                chain.degree()
            )));
        }
        Ok(chain.iter().map(|(id, c)| self.values[id] * c).sum())
    }

    /// Discrete exterior derivative, the adjoint of the boundary operator.
    pub fn coboundary(&self) -> Result<FormCochain> {
        if self.degree >= self.complex.dimension() {
            return Err(Error::Degree(format!(
                "coboundary of a top-degree ({}) cochain is undefined",
                self.degree
            )));
        }
        let k = self.degree + 1;
        let values = (0..self.complex.num_cells(k))
            .map(|id| {
                self.complex
                    .boundary_column(k, id)
                    .iter()
                    .map(|&(e, s)| s * self.values[e])
                    .sum()
            })
            .collect();
        Ok(FormCochain {
            complex: Arc::clone(&self.complex),
            degree: k,
            values,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Axis, Cell};

    #[test]
    fn coboundary_of_single_edge() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let mut phi = FormCochain::zeros(&cx, 1).unwrap();
        let e = cx.require_id(&Cell::edge2(0, 1, Axis::X)).unwrap();
        phi.set(e, 1.0);
        let d = phi.coboundary().unwrap();
        let above = cx.require_id(&Cell::face2(0, 1)).unwrap();
        let below = cx.require_id(&Cell::face2(0, 0)).unwrap();
        assert_eq!(d.get(above), 1.0);
        assert_eq!(d.get(below), -1.0);
        assert_eq!(d.values().iter().filter(|v| **v != 0.0).count(), 2);
    }

    #[test]
    fn bottom_row_edge_has_one_coface() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let mut phi = FormCochain::zeros(&cx, 1).unwrap();
        phi.set(cx.require_id(&Cell::edge2(0, 0, Axis::X)).unwrap(), 1.0);
        let d = phi.coboundary().unwrap();
        assert_eq!(d.get(cx.require_id(&Cell::face2(0, 0)).unwrap()), 1.0);
        assert_eq!(d.values().iter().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn zero_form_has_zero_coboundary() {
        let cx = CubicalComplex::grid3(2, 2, 2).unwrap();
        let phi = FormCochain::zeros(&cx, 1).unwrap();
        assert_eq!(phi.coboundary().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn top_degree_rejected() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        assert!(FormCochain::zeros(&cx, 2).unwrap().coboundary().is_err());
    }
}
