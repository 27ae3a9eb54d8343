use std::collections::BTreeMap;

use super::{checked_pow, for_each_arrangement, GeneralTensor, DENSE_EXPANSION_CAP};
use crate::{Error, Real, Result, Scalar};

/// Symmetric coefficient tensor of order `q` over `dim` basis vectors.
///
/// Keys are canonical (sorted non-decreasing, zero-based). The value at any
/// permutation of a key equals the stored value; absent keys are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricKernel<T> {
    order: usize,
    dim: usize,
    coeffs: BTreeMap<Vec<usize>, T>,
}

/// `q! / prod_j c_j!` where `c_j` counts how often index `j` occurs in the
/// sorted `key`: the number of full-tensor positions sharing that entry.
pub fn multiplicity(key: &[usize]) -> u64 {
    let mut result: u64 = 1;
    let mut position: u64 = 0;
    let mut run: u64 = 0;
    for (i, idx) in key.iter().enumerate() {
        position += 1;
        if i > 0 && key[i - 1] == *idx {
            run += 1;
        } else {
            run = 1;
        }
        // running product of binomials keeps the value integral at each step
        result = result * position / run;
    }
    result
}

impl<T: Scalar> SymmetricKernel<T> {
    pub fn new(order: usize, dim: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("kernel order must be positive"));
        }
        if dim == 0 {
            return Err(Error::domain("kernel dimension must be positive"));
        }
        Ok(Self { order, dim, coeffs: BTreeMap::new() })
    }

    /// Builds a kernel from `(index tuple, value)` pairs. Tuples may be given
    /// in any order; two tuples that canonicalise to the same key are an
    /// error.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        let mut kernel = Self::new(order, dim)?;
        for (index, value) in entries {
            let key = kernel.canonical(&index)?;
            if kernel.coeffs.contains_key(&key) {
                return Err(Error::DuplicateEntry(key));
            }
            if !value.is_zero() {
                kernel.coeffs.insert(key, value);
            }
        }
        Ok(kernel)
    }

    /// `e_i ⊗ … ⊗ e_i` (`order` factors).
    pub fn atom(order: usize, dim: usize, i: usize) -> Result<Self> {
        Self::from_entries(order, dim, [(vec![i; order], T::one())])
    }

    /// `sum_{k<n} e_k^{⊗order}` with unit coefficients (not normalised).
    pub fn hermite_sum(order: usize, n: usize) -> Result<Self> {
        Self::from_entries(order, n, (0..n).map(|k| (vec![k; order], T::one())))
    }

    /// Order-2 kernel with coefficient `a[i][j]` at `(i, j)`; `a` must be
    /// square and exactly symmetric.
    pub fn from_matrix(a: &[Vec<T>]) -> Result<Self> {
        let n = a.len();
        let mut kernel = Self::new(2, n.max(1))?;
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            for j in i..n {
                if a[i][j] != a[j][i] {
                    return Err(Error::NotSymmetric(vec![i, j]));
                }
                if !a[i][j].is_zero() {
                    kernel.coeffs.insert(vec![i, j], a[i][j].clone());
                }
            }
        }
        Ok(kernel)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// Canonical entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &T)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Value at an arbitrary (not necessarily sorted) index tuple.
    pub fn get(&self, index: &[usize]) -> Result<T> {
        let key = self.canonical(index)?;
        Ok(self.coeffs.get(&key).cloned().unwrap_or_else(T::zero))
    }

    /// Sets the symmetric entry containing `index`, overwriting any
    /// previous value.
    pub fn set(&mut self, index: &[usize], value: T) -> Result<()> {
        let key = self.canonical(index)?;
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    pub fn squared_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (k, v)| {
            acc + T::from_count(multiplicity(k)) * v.clone() * v.clone()
        })
    }

    pub fn scaled(&self, c: &T) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self { order: self.order, dim: self.dim, coeffs }
    }

    /// Full symmetric expansion. Refuses when `dim^order` exceeds `cap`.
    pub fn to_dense(&self, cap: Option<u128>) -> Result<GeneralTensor<T>> {
        let cap = cap.unwrap_or(DENSE_EXPANSION_CAP);
        let size = checked_pow(self.dim, self.order);
        if size > cap {
            return Err(Error::CapExceeded { what: "dense expansion", requested: size, cap });
        }
        let mut dense = GeneralTensor::zeros(self.order, self.dim);
        for (key, value) in &self.coeffs {
            for_each_arrangement(key, |perm| dense.add_at(perm.to_vec(), value.clone()));
        }
        Ok(dense)
    }

    /// Inverse of [`to_dense`](Self::to_dense); every permutation of each
    /// index must carry exactly the same value.
    pub fn from_dense(t: &GeneralTensor<T>) -> Result<Self> {
        let mut kernel = Self::new(t.order(), t.dim())?;
        for (index, value) in t.iter() {
            let mut key = index.to_vec();
            key.sort_unstable();
            if let Some(existing) = kernel.coeffs.get(&key) {
                if existing != value {
                    return Err(Error::NotSymmetric(index.to_vec()));
                }
                continue;
            }
            let mut consistent = true;
            for_each_arrangement(&key, |perm| consistent &= t.get(perm) == *value);
            if !consistent {
                return Err(Error::NotSymmetric(index.to_vec()));
            }
            kernel.coeffs.insert(key, value.clone());
        }
        Ok(kernel)
    }

    pub(crate) fn canonical(&self, index: &[usize]) -> Result<Vec<usize>> {
        if index.len() != self.order {
            return Err(Error::WrongArity { expected: self.order, got: index.len() });
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        let mut key = index.to_vec();
        key.sort_unstable();
        Ok(key)
    }

    pub(crate) fn coeff_map(&self) -> &BTreeMap<Vec<usize>, T> {
        &self.coeffs
    }
}

impl<T: Real> SymmetricKernel<T> {
    pub fn norm(&self) -> T {
        self.squared_norm().sqrt()
    }

    /// Rescales to unit norm.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm.is_zero() || !norm.is_finite() {
            return Err(Error::ZeroKernel);
        }
        // already-normalised kernels come back untouched, bit for bit
        if norm == T::one() {
            return Ok(self.clone());
        }
        Ok(self.scaled(&norm.recip()))
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.squared_norm() - T::one()).abs() <= tol
    }

    /// `n^{-1/2} sum_{k<n} e_k^{⊗order}`: unit norm, `K = n^{-1/2}`.
    pub fn hermite_sum_normalized(order: usize, n: usize) -> Result<Self> {
        let c = T::from_usize(n).ok_or_else(|| Error::domain("n not representable"))?.sqrt().recip();
        Self::from_entries(order, n, (0..n).map(|k| (vec![k; order], c)))
    }
}
