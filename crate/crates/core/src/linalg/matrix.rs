use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{ComplexField, DMatrix};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Which trace functional to apply to a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TraceKind {
    /// `Tr / dim`, so the identity has trace one.
    #[serde(rename = "normalized", alias = "norm")]
    Normalized,
    /// The plain matrix trace; its K-theory lattice is `ℤ`.
    #[serde(rename = "unnormalized", alias = "unnorm")]
    Unnormalized,
}

impl std::str::FromStr for TraceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm" | "normalized" => Ok(TraceKind::Normalized),
            "unnorm" | "unnormalized" => Ok(TraceKind::Unnormalized),
            other => Err(Error::Parse(format!("unknown trace kind {other:?}"))),
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Normalized => "norm",
            TraceKind::Unnormalized => "unnorm",
        })
    }
}

/// Dense square complex matrix with value semantics.
///
/// Constructors that accept external data reject empty, non-square and non-finite input, so every
/// value in circulation has `dim >= 1` and finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    data: DMatrix<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}x{}", self.dim(), self.dim())?;
        if self.dim() <= 8 {
            write!(f, " {}", self.data)?;
        }
        Ok(())
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(data: DMatrix<Complex<T>>) -> Result<Self> {
        if data.nrows() == 0 || data.nrows() != data.ncols() {
            return Err(Error::InvalidInput(format!(
                "matrix must be square and non-empty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        let m = Self { data };
        if !m.is_finite() {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(m)
    }

    /// Wraps data produced by an internal computation on valid inputs.
    pub(crate) fn from_raw(data: DMatrix<Complex<T>>) -> Self {
        debug_assert!(data.nrows() == data.ncols() && data.nrows() > 0);
        Self { data }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("rows must all have length equal to the row count".into()));
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_raw(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(DMatrix::zeros(dim, dim))
    }

    pub fn scalar(dim: usize, c: Complex<T>) -> Self {
        Self::from_raw(DMatrix::from_diagonal_element(dim, dim, c))
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Result<Self> {
        let n = entries.len();
        Self::from_fn(n, |i, j| if i == j { entries[i] } else { Complex::zero() })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_raw(self.data.adjoint())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::from_raw(&self.data * c)
    }

    pub fn scale_real(&self, r: T) -> Self {
        self.scale(Complex::new(r, T::zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.data[(i, j)].is_zero()))
    }

    /// Row of the single nonzero entry of each column, if the matrix is monomial.
    /// A zero column yields `None` in its slot.
    pub(crate) fn monomial_support(&self) -> Option<Vec<Option<usize>>> {
        let n = self.dim();
        let mut row_used = vec![false; n];
        let mut support = Vec::with_capacity(n);
        for j in 0..n {
            let mut found = None;
            for i in 0..n {
                if self.data[(i, j)].is_zero() {
                    continue;
                }
                if found.is_some() || row_used[i] {
                    return None;
                }
                found = Some(i);
                row_used[i] = true;
            }
            support.push(found);
        }
        Some(support)
    }

    pub fn diagonal_entries(&self) -> Vec<Complex<T>> {
        (0..self.dim()).map(|i| self.data[(i, i)]).collect()
    }

    /// Inverse via LU; fails when the matrix is numerically singular. Monomial matrices
    /// (one nonzero per row and column) are inverted exactly.
    pub fn inverse(&self) -> Result<Self> {
        if let Some(support) = self.monomial_support() {
            let n = self.dim();
            let mut inv = DMatrix::zeros(n, n);
            for (j, i) in support.into_iter().enumerate() {
                match i {
                    Some(i) => inv[(j, i)] = Complex::new(T::one(), T::zero()) / self.data[(i, j)],
                    None => return Err(Error::NotInvertible { smallest: 0.0 }),
                }
            }
            return Ok(Self::from_raw(inv));
        }
        self.data
            .clone()
            .try_inverse()
            .filter(|inv| inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            .map(Self::from_raw)
            .ok_or(Error::NotInvertible { smallest: 0.0 })
    }

    /// Integer power; negative exponents go through [`ComplexMatrix::inverse`].
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        Ok(base.pow_unsigned(k.unsigned_abs()))
    }

    pub(crate) fn pow_unsigned(&self, mut k: u64) -> Self {
        let mut acc = Self::identity(self.dim());
        let mut sq = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// `self ⊗ 1_m`: entry `(i, j)` becomes the block `self[i, j]·1_m`.
    pub fn kron_identity(&self, m: usize) -> Self {
        let id = DMatrix::<Complex<T>>::identity(m, m);
        Self::from_raw(self.data.kronecker(&id))
    }

    /// `self - 1`.
    pub fn minus_identity(&self) -> Self {
        let mut d = self.data.clone();
        for i in 0..self.dim() {
            d[(i, i)] -= Complex::one();
        }
        Self::from_raw(d)
    }

    pub fn trace(&self, kind: TraceKind) -> Complex<T> {
        let tr = self.data.trace();
        match kind {
            TraceKind::Unnormalized => tr,
            TraceKind::Normalized => tr.unscale(T::from_usize(self.dim()).expect("dimension fits")),
        }
    }

    /// Largest absolute entry difference; a cheap exact-equality probe for tests and checks.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_same_dim(self, other);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (*a - *b).modulus())
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.modulus_squared()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    /// Converts between precisions, e.g. to compare an `f32` computation with an `f64` reference.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix::from_raw(self.data.map(|z| {
            Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))
        }))
    }
}

fn assert_same_dim<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) {
    assert_eq!(a.dim(), b.dim(), "matrix dimension mismatch");
}

/// Column-oriented product that skips zero entries of the right factor.
///
/// Shift, clock and diagonal matrices stay `O(n²)` to multiply; dense inputs cost the usual
/// `O(n³)`.
fn product<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let n = a.nrows();
    let mut c = DMatrix::<Complex<T>>::zeros(n, b.ncols());
    let a_s = a.as_slice();
    let b_s = b.as_slice();
    let c_s = c.as_mut_slice();
    for j in 0..b.ncols() {
        let c_col = &mut c_s[j * n..(j + 1) * n];
        for k in 0..a.ncols() {
            let bkj = b_s[j * b.nrows() + k];
            if bkj.is_zero() {
                continue;
            }
            let a_col = &a_s[k * n..(k + 1) * n];
            for (ci, ai) in c_col.iter_mut().zip(a_col) {
                if !ai.is_zero() {
                    *ci += *ai * bkj;
                }
            }
        }
    }
    c
}

impl<T: Real> Mul<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_same_dim(self, rhs);
        ComplexMatrix::from_raw(product(&self.data, &rhs.data))
    }
}

impl<T: Real> Mul for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        &self * &rhs
    }
}

impl<T: Real> Add<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_same_dim(self, rhs);
        ComplexMatrix::from_raw(&self.data + &rhs.data)
    }
}

impl<T: Real> Sub<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_same_dim(self, rhs);
        ComplexMatrix::from_raw(&self.data - &rhs.data)
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix::from_raw(-&self.data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(ComplexMatrix::<f64>::new(DMatrix::zeros(2, 3)).is_err());
        assert!(ComplexMatrix::<f64>::new(DMatrix::zeros(0, 0)).is_err());
        let nan = ComplexMatrix::<f64>::from_fn(2, |i, _| if i == 0 { cplx(f64::NAN, 0.0) } else { cplx(1.0, 0.0) });
        assert!(matches!(nan, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn trace_kinds() {
        let id = ComplexMatrix::<f64>::identity(3);
        assert_eq!(id.trace(TraceKind::Normalized), cplx(1.0, 0.0));
        assert_eq!(id.trace(TraceKind::Unnormalized), cplx(3.0, 0.0));
        let d = ComplexMatrix::<f64>::diagonal(&[cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(0.0, 0.0)]).unwrap();
        assert_eq!(d.trace(TraceKind::Unnormalized), cplx(0.0, 0.0));
    }

    #[test]
    fn sparse_product_matches_dense() {
        let a = ComplexMatrix::<f64>::from_fn(5, |i, j| cplx((i * 3 + j) as f64 * 0.1, (i as f64) - (j as f64))).unwrap();
        let b = ComplexMatrix::<f64>::from_fn(5, |i, j| if (i + j) % 2 == 0 { cplx(1.0, -0.5) } else { cplx(0.0, 0.0) })
            .unwrap();
        let dense = a.as_matrix() * b.as_matrix();
        assert!(ComplexMatrix::from_raw(dense).max_abs_diff(&(&a * &b)) < 1e-13);
    }

    #[test]
    fn powers_and_inverse() {
        let a = ComplexMatrix::<f64>::from_rows(&[
            vec![cplx(2.0, 0.0), cplx(1.0, 1.0)],
            vec![cplx(0.0, -1.0), cplx(3.0, 0.0)],
        ])
        .unwrap();
        let id = ComplexMatrix::identity(2);
        assert!((&a.pow(3).unwrap() * &a.pow(-3).unwrap()).max_abs_diff(&id) < 1e-12);
        assert_eq!(a.pow(0).unwrap(), id);
        let singular = ComplexMatrix::<f64>::from_fn(2, |_, _| cplx(1.0, 0.0)).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn monomial_inverse_is_exact() {
        // weighted 3-cycle
        let m = ComplexMatrix::<f64>::from_fn(3, |i, j| match (i, j) {
            (1, 0) => cplx(2.0, 0.0),
            (2, 1) => cplx(0.0, 0.5),
            (0, 2) => cplx(-1.0, 1.0),
            _ => cplx(0.0, 0.0),
        })
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let dense = ComplexMatrix::from_raw(m.as_matrix().clone().try_inverse().unwrap());
        assert!(inv.max_abs_diff(&dense) < 1e-14);
        let zero_col = ComplexMatrix::<f64>::diagonal(&[cplx(1.0, 0.0), cplx(0.0, 0.0)]).unwrap();
        assert!(matches!(zero_col.inverse(), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn kron_identity_layout() {
        let a = ComplexMatrix::<f64>::from_rows(&[vec![cplx(1.0, 0.0), cplx(2.0, 0.0)], vec![cplx(3.0, 0.0), cplx(4.0, 0.0)]])
            .unwrap();
        let k = a.kron_identity(2);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.entry(0, 2), cplx(2.0, 0.0));
        assert_eq!(k.entry(1, 3), cplx(2.0, 0.0));
        assert_eq!(k.entry(0, 3), cplx(0.0, 0.0));
        assert_eq!(a.kron_identity(1), a);
    }

    #[test]
    fn trace_kind_parses_cli_spellings() {
        assert_eq!("norm".parse::<TraceKind>().unwrap(), TraceKind::Normalized);
        assert_eq!("unnorm".parse::<TraceKind>().unwrap(), TraceKind::Unnormalized);
        assert!("tr".parse::<TraceKind>().is_err());
    }
}
