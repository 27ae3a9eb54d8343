use std::collections::BTreeMap;

use super::{checked_pow, for_each_arrangement, GeneralTensor, SymmetricKernel};
use crate::{Error, Real, Result, Scalar};

/// Above this many entries `contraction_norm_sq` stops materialising
/// `f ⊗_r f` and streams the Gram accumulation instead.
pub const DEFAULT_DENSE_CAP: u128 = 1 << 22;

type Blocks<T> = BTreeMap<Vec<usize>, Vec<(Vec<usize>, T)>>;

/// Every full-tensor position of `f`, grouped by its first `r` indices:
/// `x ↦ [(a, f(x, a))]`.
fn split_by_prefix<T: Scalar>(f: &SymmetricKernel<T>, r: usize) -> Blocks<T> {
    let mut blocks: Blocks<T> = BTreeMap::new();
    for (key, value) in f.coeff_map() {
        for_each_arrangement(key, |perm| {
            blocks
                .entry(perm[..r].to_vec())
                .or_default()
                .push((perm[r..].to_vec(), value.clone()));
        });
    }
    blocks
}

/// `r`-th contraction `f ⊗_r g`: the entry at `(a_1..a_{p-r}, b_1..b_{q-r})`
/// is `sum_x f(x, a) g(x, b)` over the `r` shared indices `x`.
///
/// Both operands are expanded to their full position lists, grouped by the
/// shared block and merged on matching keys. Work is
/// `sum_x |F_x| |G_x|`, with `F_x`, `G_x` the positions sharing prefix `x`.
pub fn contract<T: Scalar>(
    f: &SymmetricKernel<T>,
    g: &SymmetricKernel<T>,
    r: usize,
) -> Result<GeneralTensor<T>> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    let max = f.order().min(g.order());
    if r == 0 || r > max {
        return Err(Error::ContractionOrder { r, max });
    }
    let fb = split_by_prefix(f, r);
    let gb = split_by_prefix(g, r);
    let mut out = GeneralTensor::zeros(f.order() + g.order() - 2 * r, f.dim());
    for (x, f_rest) in &fb {
        let Some(g_rest) = gb.get(x) else { continue };
        for (a, fv) in f_rest {
            for (b, gv) in g_rest {
                let mut idx = Vec::with_capacity(a.len() + b.len());
                idx.extend_from_slice(a);
                idx.extend_from_slice(b);
                out.add_at(idx, fv.clone() * gv.clone());
            }
        }
    }
    out.prune_zeros();
    Ok(out)
}

/// `‖f ⊗_r f‖²` through the Gram identity
/// `‖f ⊗_r f‖² = sum_{x, x'} (sum_a f(x, a) f(x', a))²`,
/// accumulated one row `x` at a time so the order-`2(q-r)` tensor is never
/// built. Memory is linear in the number of full-tensor positions of `f`.
pub fn contraction_norm_sq_streamed<T: Scalar>(f: &SymmetricKernel<T>, r: usize) -> Result<T> {
    let q = f.order();
    if r == 0 || r > q {
        return Err(Error::ContractionOrder { r, max: q });
    }
    let rows = split_by_prefix(f, r);
    let row_ids: BTreeMap<&Vec<usize>, usize> = rows.keys().enumerate().map(|(i, k)| (k, i)).collect();
    // column index: a ↦ [(row id, value)]
    let mut cols: BTreeMap<&Vec<usize>, Vec<(usize, T)>> = BTreeMap::new();
    for (x, entries) in &rows {
        let id = row_ids[x];
        for (a, v) in entries {
            cols.entry(a).or_default().push((id, v.clone()));
        }
    }
    let mut total = T::zero();
    let mut acc = vec![T::zero(); rows.len()];
    let mut touched = Vec::new();
    for entries in rows.values() {
        for (a, v) in entries {
            for (other, w) in &cols[a] {
                if acc[*other].is_zero() {
                    touched.push(*other);
                }
                acc[*other] = acc[*other].clone() + v.clone() * w.clone();
            }
        }
        for &i in &touched {
            total = total + acc[i].clone() * acc[i].clone();
            acc[i] = T::zero();
        }
        touched.clear();
    }
    Ok(total)
}

/// `‖f ⊗_r f‖²`, materialising the contraction when it has at most `cap`
/// entries and streaming otherwise.
pub fn contraction_norm_sq<T: Scalar>(f: &SymmetricKernel<T>, r: usize, cap: Option<u128>) -> Result<T> {
    let q = f.order();
    if r == 0 || r > q {
        return Err(Error::ContractionOrder { r, max: q });
    }
    let size = checked_pow(f.dim(), 2 * (q - r));
    if size <= cap.unwrap_or(DEFAULT_DENSE_CAP) {
        Ok(contract(f, f, r)?.squared_norm())
    } else {
        contraction_norm_sq_streamed(f, r)
    }
}

/// `K = max_{1 <= r < q} ‖h ⊗_r h‖`. The kernel is expected to be
/// normalised; no rescaling is applied.
pub fn compute_k<T: Real>(h: &SymmetricKernel<T>) -> Result<T> {
    if h.order() < 2 {
        return Err(Error::domain("K needs kernel order >= 2"));
    }
    let mut best = T::zero();
    for r in 1..h.order() {
        best = best.max(contraction_norm_sq(h, r, None)?.sqrt());
    }
    Ok(best)
}

/// `K²` of `h / ‖h‖`, computed without square roots:
/// `max_r ‖h ⊗_r h‖² / ‖h‖⁴`. Exact for rational kernels.
pub fn normalized_k_squared<T: Scalar>(h: &SymmetricKernel<T>) -> Result<T> {
    if h.order() < 2 {
        return Err(Error::domain("K needs kernel order >= 2"));
    }
    let norm_sq = h.squared_norm();
    if norm_sq.is_zero() {
        return Err(Error::ZeroKernel);
    }
    let denom = norm_sq.clone() * norm_sq;
    let mut best = T::zero();
    for r in 1..h.order() {
        let v = contraction_norm_sq(h, r, None)? / denom.clone();
        if v > best {
            best = v;
        }
    }
    Ok(best)
}
