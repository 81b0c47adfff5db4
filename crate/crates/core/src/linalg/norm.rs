//! Operator and Schatten norms.

use nalgebra::ComplexField;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_finite<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix has non-finite entries".into()))
    }
}

/// Absolute values of the nonzero entries when every row and column holds at most one of them.
///
/// Such generalized permutation matrices are `P·D`, whose singular values are `|D|`.
fn monomial_moduli<T: Real>(m: &ComplexMatrix<T>) -> Option<Vec<T>> {
    let support = m.monomial_support()?;
    Some(
        support
            .into_iter()
            .enumerate()
            .map(|(j, i)| i.map_or(T::zero(), |i| m.entry(i, j).modulus()))
            .collect(),
    )
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    check_finite(m)?;
    let mut sv = match monomial_moduli(m) {
        Some(v) => v,
        None => m.as_matrix().clone().singular_values().iter().copied().collect(),
    };
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(sv)
}

/// Largest singular value.
pub fn op_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    Ok(singular_values(m)?[0])
}

/// Unnormalized Schatten norm `(Σ σ_i^p)^{1/p}`; `p = ∞` is the operator norm.
pub fn schatten_norm<T: Real>(m: &ComplexMatrix<T>, p: f64) -> Result<T> {
    if p.is_nan() || p <= 1.0 {
        return Err(Error::UnsupportedExponent(p));
    }
    if p.is_infinite() {
        return op_norm(m);
    }
    check_finite(m)?;
    if p == 2.0 {
        return Ok(m.frobenius_norm());
    }
    let sv = singular_values(m)?;
    let top = sv[0];
    if top.is_zero() {
        return Ok(T::zero());
    }
    let p_t = T::lit(p);
    // scaled by the top singular value so large p cannot overflow
    let sum = sv.iter().map(|s| (*s / top).powf(p_t)).fold(T::zero(), |a, b| a + b);
    Ok(top * sum.powf(T::one() / p_t))
}

/// `‖u*u − 1‖`.
pub fn unitarity_defect<T: Real>(u: &ComplexMatrix<T>) -> Result<T> {
    op_norm(&(&u.adjoint() * u).minus_identity())
}
