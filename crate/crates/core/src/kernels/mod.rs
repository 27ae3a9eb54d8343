//! Finite-dimensional chaos kernels.
//!
//! A kernel of order `q` over an `N`-dimensional orthonormal basis is a
//! symmetric coefficient tensor. Only canonical (non-decreasing) index tuples
//! are stored; the full tensor is the symmetric extension. Indices are
//! zero-based in the API and one-based in the text exchange format.

mod contraction;
mod format;
mod symmetric;
mod tensor;

pub use contraction::{
    compute_k, contract, contraction_norm_sq, contraction_norm_sq_streamed, normalized_k_squared,
    DEFAULT_DENSE_CAP,
};
pub use symmetric::{multiplicity, SymmetricKernel};
pub use tensor::GeneralTensor;

/// Largest tensor (number of entries) that [`SymmetricKernel::to_dense`]
/// materialises unless told otherwise.
pub const DENSE_EXPANSION_CAP: u128 = 1_000_000;

/// Advances `v` to the next lexicographic permutation, returning `false`
/// after the last one. Repeated values yield each distinct arrangement once.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` once for every distinct ordering of the sorted tuple `key`.
pub(crate) fn for_each_arrangement(key: &[usize], mut f: impl FnMut(&[usize])) {
    let mut perm = key.to_vec();
    loop {
        f(&perm);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
