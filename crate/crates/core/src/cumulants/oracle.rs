use nalgebra::{DMatrix, SymmetricEigen};

use crate::kernels::SymmetricKernel;
use crate::{Error, Result};

/// `cum_m(Zᵀ A Z − tr A) = 2^{m−1} (m−1)! Σ_k λ_k^m` for symmetric `A`.
pub fn quadratic_form_oracle(a: &DMatrix<f64>, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("cumulant order must be >= 1"));
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch(a.nrows(), a.ncols()));
    }
    if m == 1 {
        return Ok(0.0);
    }
    let eig = SymmetricEigen::new(a.clone());
    let power_sum: f64 = eig.eigenvalues.iter().map(|l| l.powi(m as i32)).sum();
    let mut coeff = 2f64.powi(m as i32 - 1);
    for k in 1..m {
        coeff *= k as f64;
    }
    Ok(coeff * power_sum)
}

/// Oracle applied to the coefficient matrix of a second-order kernel.
pub fn quadratic_form_cumulant(h: &SymmetricKernel<f64>, m: usize) -> Result<f64> {
    if h.order() != 2 {
        return Err(Error::WrongArity { expected: 2, got: h.order() });
    }
    let n = h.dim();
    let mut a = DMatrix::zeros(n, n);
    for (key, v) in h.entries() {
        a[(key[0], key[1])] = *v;
        a[(key[1], key[0])] = *v;
    }
    quadratic_form_oracle(&a, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::{exact_cumulant, CumulantOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_matrix_by_hand() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -2.0]));
        // m = 3: 4 * 2 * (1 - 8) = -56
        assert!((quadratic_form_oracle(&a, 3).unwrap() + 56.0).abs() < 1e-12);
        assert_eq!(quadratic_form_oracle(&a, 1).unwrap(), 0.0);
    }

    #[test]
    fn diagram_formula_agrees_with_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 4, 6] {
            let mut h = SymmetricKernel::<f64>::new(2, n).unwrap();
            for i in 0..n {
                for j in i..n {
                    h.set(&[i, j], rng.random_range(-1.0..1.0)).unwrap();
                }
            }
            for m in 2..=6 {
                let a = exact_cumulant(&h, m, &CumulantOptions::default()).unwrap();
                let b = quadratic_form_cumulant(&h, m).unwrap();
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "n={n} m={m}: {a} vs {b}");
            }
        }
    }
}
