use std::sync::Arc;

use super::{Cell, Chain, CubicalComplex};
use crate::error::{Error, Result};

/// A set of top-dimensional cells (pixels or voxels).
#[derive(Clone, Debug)]
pub struct BinarySet {
    complex: Arc<CubicalComplex>,
    members: Vec<bool>,
}

impl PartialEq for BinarySet {
    fn eq(&self, other: &Self) -> bool {
        self.complex.same_shape(&other.complex) && self.members == other.members
    }
}

impl Eq for BinarySet {}

impl BinarySet {
    pub fn empty(complex: &Arc<CubicalComplex>) -> Self {
        let n = complex.num_cells(complex.dimension());
        BinarySet {
            complex: Arc::clone(complex),
            members: vec![false; n],
        }
    }

    pub fn from_ids(complex: &Arc<CubicalComplex>, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = BinarySet::empty(complex);
        for id in ids {
            if id >= set.members.len() {
                return Err(Error::InvalidCell(format!(
                    "top cell id {id} out of range ({} cells)",
                    set.members.len()
                )));
            }
            set.members[id] = true;
        }
        Ok(set)
    }

    /// Set of the top cells whose anchor coordinates satisfy `pred`.
    pub fn from_fn(complex: &Arc<CubicalComplex>, mut pred: impl FnMut([usize; 3]) -> bool) -> Self {
        let top = complex.dimension();
        let members = complex.cells(top).iter().map(|c| pred(c.coords)).collect();
        BinarySet {
            complex: Arc::clone(complex),
            members,
        }
    }

    /// Set from a membership vector indexed by top-cell id.
    pub fn from_mask(complex: &Arc<CubicalComplex>, members: Vec<bool>) -> Result<Self> {
        if members.len() != complex.num_cells(complex.dimension()) {
            return Err(Error::InvalidParameter(format!(
                "membership vector has {} entries, complex has {} top cells",
                members.len(),
                complex.num_cells(complex.dimension())
            )));
        }
        Ok(BinarySet {
            complex: Arc::clone(complex),
            members,
        })
    }

    pub fn complex(&self) -> &Arc<CubicalComplex> {
        &self.complex
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members[id]
    }

    pub fn contains_cell(&self, coords: [usize; 3]) -> bool {
        let cell = self.complex.top_cell(coords);
        self.complex.cell_id(&cell).is_some_and(|id| self.members[id])
    }

    pub fn insert(&mut self, id: usize) {
        self.members[id] = true;
    }

    pub fn remove(&mut self, id: usize) {
        self.members[id] = false;
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|e| *e.1)
            .map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn symmetric_difference(&self, other: &BinarySet) -> Result<BinarySet> {
        self.zip(other, |a, b| a != b)
    }

    pub fn union(&self, other: &BinarySet) -> Result<BinarySet> {
        self.zip(other, |a, b| a || b)
    }

    pub fn is_subset(&self, other: &BinarySet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    fn zip(&self, other: &BinarySet, op: impl Fn(bool, bool) -> bool) -> Result<BinarySet> {
        if !self.complex.same_shape(&other.complex) {
            return Err(Error::ComplexMismatch);
        }
        Ok(BinarySet {
            complex: Arc::clone(&self.complex),
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    /// Top-degree chain with coefficient 1 on every member.
    pub fn indicator(&self) -> Chain {
        Chain::from_ids(&self.complex, self.complex.dimension(), self.ids().map(|id| (id, 1.0)))
            .expect("member ids are valid")
    }

    /// Top cells of the set, in id order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let top = self.complex.dimension();
        self.ids().map(move |id| self.complex.cell(top, id))
    }
}

/// The oriented boundary current of a set: `boundary(indicator(set))`.
pub fn boundary_of_set(set: &BinarySet) -> Chain {
    set.indicator().boundary().expect("top degree is at least 2")
}
