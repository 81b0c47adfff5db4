//! Matrix logarithms.
//!
//! Two routes: the power series `log u = −Σ (1−u)^k / k` for `‖u − 1‖ < 1`, and a Schur-based
//! principal logarithm for unitaries that may sit far from the identity.

use nalgebra::{ComplexField, DMatrix, DVector};

use super::norm::{op_norm, unitarity_defect};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

const MAX_SERIES_TERMS: usize = 1 << 20;

/// Power-series logarithm; requires `‖u − 1‖ < 1`.
pub fn log_near_identity<T: Real>(u: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let d = (-u).add_identity();
    let radius = op_norm(&d)?;
    if radius >= T::one() {
        return Err(Error::OutsideLogDomain { distance: radius.as_f64() });
    }
    if radius.is_zero() {
        return Ok(ComplexMatrix::zeros(u.dim()));
    }
    let cutoff = T::lit(T::SERIES_CUTOFF);
    let mut power = d.clone();
    let mut sum = -&d;
    for k in 2..MAX_SERIES_TERMS {
        power = &power * &d;
        let term = power.scale_real(T::one() / T::from_usize(k).expect("term index fits"));
        sum = &sum - &term;
        // Frobenius dominates the operator norm, so this never stops early
        if term.frobenius_norm() < cutoff {
            break;
        }
    }
    Ok(sum)
}

/// Matrix exponential (Padé scaling and squaring).
pub fn expm<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    if a.is_diagonal() {
        let d = a.diagonal_entries();
        return ComplexMatrix::from_raw(DMatrix::from_diagonal(&DVector::from_iterator(
            d.len(),
            d.into_iter().map(|z| z.exp()),
        )));
    }
    ComplexMatrix::from_raw(a.as_matrix().exp())
}

/// Principal logarithm of a unitary matrix.
///
/// The input is diagonalized by a Schur decomposition (normal matrices have diagonal Schur form)
/// and each eigenvalue `e^{iθ}` is sent to `iθ` with `θ ∈ (−π, π)`. Eigenvalues within `1e-10` of
/// `−1` are rejected rather than assigned to one side of the cut.
pub fn unitary_log<T: Real>(u: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let defect = unitarity_defect(u)?;
    if defect >= T::tol(1e-8) {
        return Err(Error::NotUnitary { defect: defect.as_f64() });
    }
    if u.is_diagonal() {
        let logs = principal_logs(&u.diagonal_entries())?;
        return ComplexMatrix::diagonal(&logs);
    }
    if let Some(log) = centred_series_log(u)? {
        return Ok(log);
    }
    let schur = u
        .as_matrix()
        .clone()
        .try_schur(T::default_epsilon(), 30 * u.dim().max(1))
        .ok_or_else(|| Error::InvalidInput("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let eig: Vec<Complex<T>> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    let logs = principal_logs(&eig)?;
    let diag = DMatrix::from_diagonal(&DVector::from_vec(logs));
    Ok(ComplexMatrix::from_raw(&q * diag * q.adjoint()))
}

/// Spectrum clustered around one phase `e^{iφ}`: `log u = iφ + log(e^{−iφ} u)` by the series.
///
/// With `‖e^{−iφ}u − 1‖ < 1/2` every eigenvalue angle sits within `2 asin(1/4)` of `φ`, so if
/// that arc avoids the cut the result is the principal logarithm. Schur stalls on such
/// near-scalar inputs, which is why this route comes first.
fn centred_series_log<T: Real>(u: &ComplexMatrix<T>) -> Result<Option<ComplexMatrix<T>>> {
    let n = u.dim();
    let m = u.as_matrix();
    let mut tr = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        tr += m[(i, i)];
    }
    let r = tr.modulus();
    if r <= T::tol(1e-3) * T::from_usize(n).expect("dim fits") {
        return Ok(None);
    }
    let phase = tr.unscale(r);
    let phi = phase.argument();
    let arc = T::lit(2.0 * 0.25f64.asin());
    if phi.abs() + arc >= T::pi() - T::tol(1e-10) {
        return Ok(None);
    }
    let v = ComplexMatrix::from_raw(m.map(|z| z * phase.conj()));
    let d = (-&v).add_identity();
    let half = T::lit(0.5);
    if d.frobenius_norm() >= half && op_norm(&d)? >= half {
        return Ok(None);
    }
    let log_v = log_near_identity(&v)?;
    Ok(Some(log_v.add_scaled_identity(Complex::new(T::zero(), phi))))
}

fn principal_logs<T: Real>(eigenvalues: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let guard = T::tol(1e-10);
    eigenvalues
        .iter()
        .map(|&z| {
            let to_cut = (z + Complex::new(T::one(), T::zero())).modulus();
            if to_cut < guard {
                Err(Error::BranchCut { distance: to_cut.as_f64() })
            } else {
                Ok(z.ln())
            }
        })
        .collect()
}

impl<T: Real> ComplexMatrix<T> {
    pub(crate) fn add_identity(&self) -> Self {
        let mut d = self.as_matrix().clone();
        for i in 0..self.dim() {
            d[(i, i)] += Complex::new(T::one(), T::zero());
        }
        ComplexMatrix::from_raw(d)
    }

    fn add_scaled_identity(&self, z: Complex<T>) -> Self {
        let mut d = self.as_matrix().clone();
        for i in 0..self.dim() {
            d[(i, i)] += z;
        }
        ComplexMatrix::from_raw(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_skew_hermitian, random_unitary};
    use crate::scalar::{cplx, unit_phase};
    use proptest::prelude::*;

    /// Independent exponential: Taylor series with scaling and squaring.
    fn taylor_expm(a: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
        let norm = a.frobenius_norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = a.scale_real(0.5f64.powi(squarings as i32));
        let mut sum = ComplexMatrix::identity(a.dim());
        let mut term = ComplexMatrix::identity(a.dim());
        for k in 1..40 {
            term = (&term * &scaled).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn identity_has_zero_log() {
        for k in [1, 3, 6] {
            let id = ComplexMatrix::<f64>::identity(k);
            assert_eq!(log_near_identity(&id).unwrap(), ComplexMatrix::zeros(k));
            assert!(unitary_log(&id).unwrap().max_abs_diff(&ComplexMatrix::zeros(k)) == 0.0);
        }
    }

    #[test]
    fn scalar_phase_log() {
        let u = ComplexMatrix::<f64>::scalar(3, unit_phase(0.3 / std::f64::consts::TAU));
        let l = log_near_identity(&u).unwrap();
        assert!(l.max_abs_diff(&ComplexMatrix::scalar(3, cplx(0.0, 0.3))) < 1e-12);
    }

    #[test]
    fn log_inverts_exponential_of_small_skew_hermitian() {
        let a = random_skew_hermitian::<f64>(6, 0.1, 11);
        let u = taylor_expm(&a);
        assert!(log_near_identity(&u).unwrap().max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn nalgebra_exp_matches_taylor_oracle() {
        let a = random_skew_hermitian::<f64>(5, 2.5, 4);
        assert!(expm(&a).max_abs_diff(&taylor_expm(&a)) < 1e-12);
    }

    #[test]
    fn outside_domain_is_rejected() {
        let u = ComplexMatrix::<f64>::scalar(2, cplx(2.0, 0.0));
        assert!(matches!(log_near_identity(&u), Err(Error::OutsideLogDomain { .. })));
        let minus = ComplexMatrix::<f64>::scalar(2, cplx(-1.0, 0.0));
        assert!(matches!(log_near_identity(&minus), Err(Error::OutsideLogDomain { .. })));
    }

    #[test]
    fn unitary_log_diagonal_examples() {
        let w = unit_phase::<f64>(1.0 / 3.0);
        let u = ComplexMatrix::diagonal(&[w, w.conj()]).unwrap();
        let expected = ComplexMatrix::diagonal(&[
            cplx(0.0, std::f64::consts::TAU / 3.0),
            cplx(0.0, -std::f64::consts::TAU / 3.0),
        ])
        .unwrap();
        assert!(unitary_log(&u).unwrap().max_abs_diff(&expected) < 1e-15);

        let cut = ComplexMatrix::<f64>::diagonal(&[cplx(-1.0, 0.0), cplx(1.0, 0.0)]).unwrap();
        assert!(matches!(unitary_log(&cut), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn unitary_log_rejects_non_unitary() {
        let m = ComplexMatrix::<f64>::scalar(2, cplx(1.1, 0.0));
        assert!(matches!(unitary_log(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn unitary_log_conjugated_branch_cut() {
        let w = random_unitary::<f64>(3, 2);
        let d = ComplexMatrix::diagonal(&[cplx(-1.0, 0.0), cplx(0.0, 1.0), cplx(1.0, 0.0)]).unwrap();
        let u = &(&w * &d) * &w.adjoint();
        assert!(matches!(unitary_log(&u), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn single_precision_round_trip() {
        let a = random_skew_hermitian::<f32>(4, 0.2, 8);
        let u = expm(&a);
        assert!(log_near_identity(&u).unwrap().max_abs_diff(&a) < 1e-5);
        assert!(expm(&unitary_log(&u).unwrap()).max_abs_diff(&u) < 1e-5);
    }

    #[test]
    fn near_scalar_unitary_takes_centred_route() {
        // dense perturbation of a scalar phase; Schur stalls on these at large size
        let a = random_skew_hermitian::<f64>(48, 1e-9, 3);
        let phi = 2.0;
        let u = taylor_expm(&a).scale(cplx(phi.cos(), phi.sin()));
        let l = unitary_log(&u).unwrap();
        let want = &a + &ComplexMatrix::scalar(48, cplx(0.0, phi));
        assert!(l.max_abs_diff(&want) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn centred_route_matches_oracle(dim in 1usize..7, seed in any::<u64>(), phi in -2.5f64..2.5) {
            let a = random_skew_hermitian::<f64>(dim, 0.2, seed);
            let u = taylor_expm(&a).scale(cplx(phi.cos(), phi.sin()));
            let want = &a + &ComplexMatrix::scalar(dim, cplx(0.0, phi));
            prop_assert!(unitary_log(&u).unwrap().max_abs_diff(&want) < 1e-9);
        }

        #[test]
        fn series_log_round_trip_and_norm_bound(dim in 1usize..7, seed in any::<u64>(), radius in 0.01f64..0.45) {
            let a = random_skew_hermitian::<f64>(dim, radius, seed);
            let u = taylor_expm(&a);
            let dist = op_norm(&u.minus_identity()).unwrap();
            let l = log_near_identity(&u).unwrap();
            prop_assert!(taylor_expm(&l).max_abs_diff(&u) < 1e-10);
            prop_assert!(op_norm(&l).unwrap() <= 2.0 * dist + 1e-15);
        }

        #[test]
        fn unitary_log_round_trip(dim in 1usize..9, seed in any::<u64>()) {
            let u = random_unitary::<f64>(dim, seed);
            let l = unitary_log(&u).unwrap();
            prop_assert!(taylor_expm(&l).max_abs_diff(&u) < 1e-8);
            // principal log of a unitary is skew-Hermitian
            prop_assert!((&l + &l.adjoint()).max_abs_diff(&ComplexMatrix::zeros(dim)) < 1e-8);
        }
    }
}
