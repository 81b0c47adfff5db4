use super::chain::Chain2;
use crate::error::{Error, Result};
use crate::groups::GroupElement;

/// Bar 2-cycle representing the Hopf class of `∏ [ā_i, b̄_i] = e`.
///
/// With `I_i = [ā₁,b̄₁]⋯[ā_i,b̄_i]`, the result is `Σ d_i` where
/// `d_i = [I_{i−1}|ā_i] + [I_{i−1}ā_i|b̄_i] − [I_{i−1}ā_i b̄_i ā_i⁻¹|ā_i] − [I_i|b̄_i]`.
/// Its boundary telescopes to `[I₀] − [I_g]`, which vanishes exactly when the commutator product
/// is trivial; otherwise `NotARelator` is returned.
pub fn hopf_to_bar(pairs: &[(GroupElement, GroupElement)]) -> Result<Chain2> {
    let Some((first, _)) = pairs.first() else {
        return Ok(Chain2::new());
    };
    let model = first.model();
    let mut prefix = model.identity()?;
    let mut chain = Chain2::new();
    for (a, b) in pairs {
        let pa = prefix.multiply(a)?;
        let pab = pa.multiply(b)?;
        let pab_ainv = pab.multiply(&a.inverse())?;
        let next = prefix.multiply(&a.commutator(b)?)?;
        chain.add_term(1, (prefix.clone(), a.clone()));
        chain.add_term(1, (pa, b.clone()));
        chain.add_term(-1, (pab_ainv, a.clone()));
        chain.add_term(-1, (next.clone(), b.clone()));
        prefix = next;
    }
    if !prefix.is_identity() {
        return Err(Error::NotARelator);
    }
    Ok(chain)
}
