//! The de la Harpe–Skandalis pre-determinant on matrix paths, the map `L_τ` on near-identity
//! invertibles, and the determinant modulo a trace lattice.
//!
//! Paths are handled as sample lists. The pre-determinant `(1/2πi)·τ(∫ ξ̇ξ⁻¹)` of a path is
//! evaluated as the telescoping sum `Σ L_τ(ξ_{i+1} ξ_i⁻¹)`, which is exact for paths that are
//! geodesic between samples and needs no quadrature.

use nalgebra::ComplexField;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm, log_near_identity, op_norm, singular_values, unitarity_defect, unitary_log, ComplexMatrix, TraceKind};
use crate::scalar::{inv_two_pi_i, Complex, Real};

const MAX_SUBDIVISION_DEPTH: usize = 20;

/// `L_τ(u) = (1/2πi)·τ(log u)` for `‖u − 1‖ < 1`.
pub fn l_tau<T: Real>(u: &ComplexMatrix<T>, kind: TraceKind) -> Result<Complex<T>> {
    Ok(log_near_identity(u)?.trace(kind) * inv_two_pi_i::<T>())
}

/// Samples `ξ(t₀), …, ξ(t_m)` of a path of invertible matrices.
///
/// Construction enforces invertibility of every sample and refines the sample list until each
/// consecutive ratio satisfies `‖ξ_{i+1} ξ_i⁻¹ − 1‖ < 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathOfInvertibles<T: Real> {
    samples: Vec<ComplexMatrix<T>>,
}

impl<T: Real> PathOfInvertibles<T> {
    pub fn new(samples: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput("a path needs at least two samples".into()));
        }
        let dim = samples[0].dim();
        for s in &samples {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch(dim, s.dim()));
            }
            check_invertible(s)?;
        }
        let mut refined = vec![samples[0].clone()];
        for pair in samples.windows(2) {
            subdivide(&pair[0], &pair[1], 0, &mut refined)?;
        }
        Ok(Self { samples: refined })
    }

    /// Samples `f` at `points` equally spaced parameters in `[0, 1]`.
    pub fn from_fn(points: usize, f: impl Fn(f64) -> ComplexMatrix<T>) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidInput("a path needs at least two samples".into()));
        }
        Self::new((0..points).map(|i| f(i as f64 / (points - 1) as f64)).collect())
    }

    pub fn constant(u: ComplexMatrix<T>) -> Result<Self> {
        Self::new(vec![u.clone(), u])
    }

    pub fn samples(&self) -> &[ComplexMatrix<T>] {
        &self.samples
    }

    pub fn start(&self) -> &ComplexMatrix<T> {
        &self.samples[0]
    }

    pub fn end(&self) -> &ComplexMatrix<T> {
        self.samples.last().expect("at least two samples")
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    /// Pointwise product `(ξ·η)(t) = ξ(t)η(t)` on a shared sample grid.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::InvalidInput("paths must share a sample grid".into()));
        }
        Self::new(self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect())
    }
}

fn check_invertible<T: Real>(s: &ComplexMatrix<T>) -> Result<()> {
    let smallest = *singular_values(s)?.last().expect("dim >= 1");
    if smallest > T::tol(1e-10) {
        Ok(())
    } else {
        Err(Error::NotInvertible { smallest: smallest.as_f64() })
    }
}

fn ratio<T: Real>(next: &ComplexMatrix<T>, prev: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(next * &prev.inverse()?)
}

/// Pushes the samples strictly after `start` up to and including `end`, inserting midpoints
/// until every consecutive ratio is within `1/2` of the identity.
fn subdivide<T: Real>(
    start: &ComplexMatrix<T>,
    end: &ComplexMatrix<T>,
    depth: usize,
    out: &mut Vec<ComplexMatrix<T>>,
) -> Result<()> {
    let r = ratio(end, start)?;
    if op_norm(&r.minus_identity())? < T::lit(0.5) {
        out.push(end.clone());
        return Ok(());
    }
    if depth >= MAX_SUBDIVISION_DEPTH {
        return Err(Error::PathTooCoarse { depth });
    }
    let mid = midpoint(start, end, &r).ok_or(Error::PathTooCoarse { depth })?;
    subdivide(start, &mid, depth + 1, out)?;
    subdivide(&mid, end, depth + 1, out)
}

/// Geodesic midpoint `exp(½·log(ratio))·start` between unitaries, linear midpoint otherwise.
fn midpoint<T: Real>(start: &ComplexMatrix<T>, end: &ComplexMatrix<T>, r: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let unitary_tol = T::tol(1e-8);
    let both_unitary = [start, end].iter().all(|m| unitarity_defect(m).is_ok_and(|d| d < unitary_tol));
    if both_unitary {
        if let Ok(l) = unitary_log(r) {
            return Some(&expm(&l.scale_real(T::lit(0.5))) * start);
        }
    }
    let mid = (start + end).scale_real(T::lit(0.5));
    check_invertible(&mid).ok().map(|_| mid)
}

/// `Δ̃_τ(ξ) = Σ_i L_τ(ξ_{i+1} ξ_i⁻¹)`.
pub fn path_predeterminant<T: Real>(xi: &PathOfInvertibles<T>, kind: TraceKind) -> Result<Complex<T>> {
    let mut acc = Complex::<T>::zero();
    for pair in xi.samples.windows(2) {
        acc += l_tau(&ratio(&pair[1], &pair[0])?, kind)?;
    }
    Ok(acc)
}

/// A subgroup `g·ℤ` of the reals, or `{0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lattice<T> {
    Trivial,
    Generated(T),
}

impl<T: Real> Lattice<T> {
    pub fn generated(generator: T) -> Result<Self> {
        if generator > T::zero() && generator.is_finite() {
            Ok(Lattice::Generated(generator))
        } else {
            Err(Error::InvalidInput(format!("lattice generator must be positive, got {generator}")))
        }
    }

    pub fn integers() -> Self {
        Lattice::Generated(T::one())
    }

    /// The image of `K₀(M_dim)` under the trace: `ℤ` for `Tr`, `(1/dim)·ℤ` for `Tr/dim`.
    pub fn for_trace(kind: TraceKind, dim: usize) -> Self {
        match kind {
            TraceKind::Unnormalized => Self::integers(),
            TraceKind::Normalized => Lattice::Generated(T::one() / T::from_usize(dim).expect("dimension fits")),
        }
    }

    /// Index of the nearest lattice point and the distance to it.
    pub fn nearest(&self, x: T) -> (i64, T) {
        match *self {
            Lattice::Trivial => (0, x.abs()),
            Lattice::Generated(g) => {
                let k = (x / g).round();
                (k.to_i64().unwrap_or(i64::MAX), (x - k * g).abs())
            }
        }
    }

    /// As [`Lattice::nearest`] for a complex value; the distance includes the imaginary part.
    pub fn nearest_complex(&self, z: Complex<T>) -> (i64, T) {
        let (k, _) = self.nearest(z.re);
        let point = match *self {
            Lattice::Trivial => T::zero(),
            Lattice::Generated(g) => T::from_i64(k).expect("index fits") * g,
        };
        (k, (z - Complex::new(point, T::zero())).modulus())
    }
}

/// Class of `Δ̃_τ(ξ)` modulo the lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminantClass<T> {
    pub representative: Complex<T>,
    /// Distance from the real part of the representative to the lattice.
    pub residual: T,
    /// Set when `|Im|` exceeds `1e-8`, which should not happen along a unitary path.
    pub imaginary_flag: bool,
}

/// Determinant of `u` modulo the lattice, computed along a path from `1` to `u`.
pub fn determinant_mod_lattice<T: Real>(
    u: &ComplexMatrix<T>,
    path: &PathOfInvertibles<T>,
    kind: TraceKind,
    lat: Lattice<T>,
) -> Result<DeterminantClass<T>> {
    if u.dim() != path.dim() {
        return Err(Error::DimensionMismatch(u.dim(), path.dim()));
    }
    let tol = T::tol(1e-10);
    let start_gap = op_norm(&path.start().minus_identity())?;
    let end_gap = op_norm(&(path.end() - u))?;
    for gap in [start_gap, end_gap] {
        if gap > tol {
            return Err(Error::EndpointMismatch { distance: gap.as_f64() });
        }
    }
    let representative = path_predeterminant(path, kind)?;
    let (_, residual) = lat.nearest(representative.re);
    Ok(DeterminantClass { representative, residual, imaginary_flag: representative.im.abs() >= T::tol(1e-8) })
}

/// `ξ_p(t) = (1 − p) + e^{2πit}·p` sampled at `points` parameters.
pub fn projection_loop<T: Real>(p: &ComplexMatrix<T>, points: usize) -> Result<PathOfInvertibles<T>> {
    let one_minus_p = &ComplexMatrix::identity(p.dim()) - p;
    PathOfInvertibles::from_fn(points, |t| &one_minus_p + &p.scale(crate::scalar::unit_phase(t)))
}
