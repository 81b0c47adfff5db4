use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_traits::{FromPrimitive, Zero};

use super::chain::{is_cycle, Chain2};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupModel};

/// Values a cochain may take: exact integers, or any float type.
pub trait Coefficient:
    Clone + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + FromPrimitive + fmt::Debug + Send + Sync + 'static
{
}

impl<V> Coefficient for V where
    V: Clone + Zero + Add<Output = V> + Sub<Output = V> + Mul<Output = V> + FromPrimitive + fmt::Debug + Send + Sync + 'static
{
}

type CocycleFn<V> = dyn Fn(&GroupElement, &GroupElement) -> V + Send + Sync;

/// A 2-cochain on a group, held as a function: the groups involved are infinite.
///
/// Being a cocycle is a property checked on samples (see [`cocycle_identity_defect`]), not a
/// construction-time guarantee, except for [`coboundary`] where it holds identically.
#[derive(Clone)]
pub struct Cocycle2<V> {
    model: GroupModel,
    name: String,
    eval: Arc<CocycleFn<V>>,
}

impl<V> fmt::Debug for Cocycle2<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cocycle2({} on {})", self.name, self.model)
    }
}

impl<V: Coefficient> Cocycle2<V> {
    pub fn new(
        model: GroupModel,
        name: impl Into<String>,
        eval: impl Fn(&GroupElement, &GroupElement) -> V + Send + Sync + 'static,
    ) -> Self {
        Self { model, name: name.into(), eval: Arc::new(eval) }
    }

    pub fn zero(model: GroupModel) -> Self {
        Self::new(model, "0", |_, _| V::zero())
    }

    /// `σ(s, t) = s₂·t₁` on `ℤ²`.
    pub fn standard_z2() -> Self {
        Self::new(GroupModel::Zd(2), "sigma_std", |s, t| {
            let (s, t) = (s.exponents().expect("Z^2 element"), t.exponents().expect("Z^2 element"));
            V::from_i64(s[1] * t[0]).expect("integer coefficient")
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Result<V> {
        for g in [a, b] {
            if g.model() != self.model {
                return Err(Error::ModelMismatch(g.model().to_string(), self.model.to_string()));
            }
        }
        Ok((self.eval)(a, b))
    }

    /// `c·σ`.
    pub fn scaled(&self, c: V) -> Self {
        let inner = Arc::clone(&self.eval);
        Self {
            model: self.model,
            name: format!("{:?}*{}", c, self.name),
            eval: Arc::new(move |a, b| c.clone() * inner(a, b)),
        }
    }
}

/// `∂γ(a, b) = γ(a) − γ(ab) + γ(b)`. Normalized whenever `γ(e) = 0`.
pub fn coboundary<V: Coefficient>(
    model: GroupModel,
    gamma: impl Fn(&GroupElement) -> V + Send + Sync + 'static,
) -> Result<Cocycle2<V>> {
    if !model.has_normal_form() {
        return Err(Error::NoNormalForm(model.to_string()));
    }
    Ok(Cocycle2::new(model, "coboundary", move |a, b| {
        let ab = a.multiply(b).expect("arguments checked against the model");
        gamma(a) - gamma(&ab) + gamma(b)
    }))
}

/// `σ(a,b) + σ(ab,c) − σ(a,bc) − σ(b,c)`, zero exactly when the cocycle identity holds at
/// `(a, b, c)`.
pub fn cocycle_identity_defect<V: Coefficient>(
    sigma: &Cocycle2<V>,
    a: &GroupElement,
    b: &GroupElement,
    c: &GroupElement,
) -> Result<V> {
    Ok(sigma.eval(a, b)? + sigma.eval(&a.multiply(b)?, c)? - sigma.eval(a, &b.multiply(c)?)? - sigma.eval(b, c)?)
}

/// `⟨[σ], [c]⟩ = Σ k_j σ(a_j, b_j)`; refuses chains that are not cycles.
pub fn kronecker<V: Coefficient>(sigma: &Cocycle2<V>, c: &Chain2) -> Result<V> {
    if !is_cycle(c)? {
        return Err(Error::NotACycle);
    }
    let mut acc = V::zero();
    for ((a, b), k) in c.terms() {
        acc = acc + V::from_i64(k).expect("integer coefficient") * sigma.eval(a, b)?;
    }
    Ok(acc)
}
