use std::collections::BTreeMap;

use crate::{Error, Real, Result, Scalar};

/// Sparse tensor without symmetry assumptions; the result type of a
/// contraction. An order-0 tensor holds a single scalar under the empty key.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralTensor<T> {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> GeneralTensor<T> {
    pub fn zeros(order: usize, dim: usize) -> Self {
        Self { order, dim, entries: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (non-zero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: &[usize]) -> T {
        self.entries.get(index).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, index: Vec<usize>, value: T) -> Result<()> {
        self.check_index(&index)?;
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
        Ok(())
    }

    pub(crate) fn add_at(&mut self, index: Vec<usize>, value: T) {
        let slot = self.entries.entry(index).or_insert_with(T::zero);
        *slot = slot.clone() + value;
    }

    pub(crate) fn prune_zeros(&mut self) {
        self.entries.retain(|_, v| !v.is_zero());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &T)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Value of an order-0 tensor.
    pub fn scalar(&self) -> Option<T> {
        (self.order == 0).then(|| self.get(&[]))
    }

    pub fn squared_norm(&self) -> T {
        self.entries.values().fold(T::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    fn check_index(&self, index: &[usize]) -> Result<()> {
        if index.len() != self.order {
            return Err(Error::WrongArity { expected: self.order, got: index.len() });
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        Ok(())
    }
}

impl<T: Real> GeneralTensor<T> {
    /// Euclidean norm of the full coefficient array.
    pub fn norm(&self) -> T {
        self.squared_norm().sqrt()
    }
}
