//! Seeded random matrices.
//!
//! Every generator is a pure function of its arguments. Samples are drawn in double precision and
//! then converted, so `f32` and `f64` callers see the same underlying draw.

use nalgebra::{ComplexField, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::norm::op_norm;
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Counter-based seed splitter (SplitMix64 finalizer applied to `seed + γ·index`).
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Ginibre matrix: independent entries with `E|z|² = 1`.
fn ginibre<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re * s), T::lit(im * s))
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of `R`'s diagonal moved
/// into `Q`.
pub fn random_unitary<T: Real>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    assert!(dim >= 1, "dimension must be positive");
    let g = ginibre::<T>(dim, &mut rng(seed));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let modulus = d.modulus();
        if modulus > T::zero() {
            let phase = d.unscale(modulus);
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    ComplexMatrix::from_raw(q)
}

/// `w·diag(1_rank, 0)·w*` for a Haar unitary `w`.
pub fn random_projection<T: Real>(dim: usize, rank: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    if dim == 0 || rank > dim {
        return Err(Error::InvalidInput(format!("rank {rank} out of range for dimension {dim}")));
    }
    let w = random_unitary::<T>(dim, seed);
    let cols = w.as_matrix().columns(0, rank).into_owned();
    Ok(ComplexMatrix::from_raw(&cols * cols.adjoint()))
}

/// Random skew-Hermitian matrix with operator norm exactly `norm` (up to rounding).
pub fn random_skew_hermitian<T: Real>(dim: usize, norm: f64, seed: u64) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_raw(ginibre::<T>(dim, &mut rng(seed)));
    let a = (&g - &g.adjoint()).scale_real(T::lit(0.5));
    rescale(a, norm)
}

/// `1 + E` with `E` a Ginibre matrix rescaled to operator norm `radius`.
pub fn random_near_identity<T: Real>(dim: usize, radius: f64, seed: u64) -> ComplexMatrix<T> {
    let e = rescale(ComplexMatrix::from_raw(ginibre::<T>(dim, &mut rng(seed))), radius);
    e.add_identity()
}

/// `w·diag(s)·v*` with `s` log-uniform in `[1, cond]`, endpoints included, so the condition
/// number is exactly `cond`.
pub fn random_invertible<T: Real>(dim: usize, cond: f64, seed: u64) -> ComplexMatrix<T> {
    let w = random_unitary::<T>(dim, split_seed(seed, 0));
    let v = random_unitary::<T>(dim, split_seed(seed, 1));
    let mut r = rng(split_seed(seed, 2));
    let s: Vec<Complex<T>> = (0..dim)
        .map(|i| {
            let t = if dim == 1 || i == 0 {
                0.0
            } else if i == dim - 1 {
                1.0
            } else {
                r.random::<f64>()
            };
            Complex::new(T::lit(cond.powf(t)), T::zero())
        })
        .collect();
    let d = ComplexMatrix::diagonal(&s).expect("finite diagonal");
    &(&w * &d) * &v.adjoint()
}

fn rescale<T: Real>(m: ComplexMatrix<T>, norm: f64) -> ComplexMatrix<T> {
    let current = op_norm(&m).expect("finite sample");
    if current == T::zero() || norm == 0.0 {
        return ComplexMatrix::zeros(m.dim());
    }
    m.scale_real(T::lit(norm) / current)
}
