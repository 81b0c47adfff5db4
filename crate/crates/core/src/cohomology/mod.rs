//! Bar-resolution chains, 2-cocycles and the Kronecker pairing.

mod chain;
mod cocycle;
mod hopf;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::Rng;

pub use chain::{
    boundary2, boundary3, is_cycle, standard_z2_cycle, Cell2, Cell3, Chain, Chain1, Chain2, Chain3, ChainTerm,
};
pub use cocycle::{coboundary, cocycle_identity_defect, kronecker, Coefficient, Cocycle2};
pub use hopf::hopf_to_bar;

use crate::error::Result;
use crate::groups::{hom_to_z2, surface_relator, GroupElement, GroupModel, Word};
use crate::linalg::random::split_seed;

/// Uniform random element whose canonical word has exponents in `[-range, range]`.
pub fn random_element(model: GroupModel, range: i64, rng: &mut impl Rng) -> Result<GroupElement> {
    let letters = (0..model.rank()).map(|g| (g, rng.random_range(-range..=range))).collect();
    let w = Word::new(letters);
    match model {
        // a random syllable order so free words are not all sorted
        GroupModel::Free(_) => {
            let mut l = w.letters().to_vec();
            for i in (1..l.len()).rev() {
                l.swap(i, rng.random_range(0..=i));
            }
            model.normal_form(&Word::new(l))
        }
        _ => model.normal_form(&w),
    }
}

/// Random 3-chain with `cells` terms and coefficients in `[-3, 3]`.
pub fn random_chain3(model: GroupModel, cells: usize, range: i64, rng: &mut impl Rng) -> Result<Chain3> {
    let mut c = Chain3::new();
    for _ in 0..cells {
        let k = rng.random_range(-3..=3);
        c.add_term(
            k,
            (random_element(model, range, rng)?, random_element(model, range, rng)?, random_element(model, range, rng)?),
        );
    }
    Ok(c)
}

/// Pseudo-random real function on the group with `γ(e) = 0`, determined by `seed`.
pub fn random_gamma(seed: u64) -> impl Fn(&GroupElement) -> f64 + Send + Sync + Clone {
    move |g: &GroupElement| {
        if g.is_identity() {
            return 0.0;
        }
        let mut h = DefaultHasher::new();
        g.hash(&mut h);
        let bits = split_seed(seed, h.finish());
        (bits >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

/// Hopf relator data shipped with the library: name and generator-image pairs whose commutator
/// product is trivial.
pub fn builtin_hopf_data() -> Result<Vec<(String, Vec<(GroupElement, GroupElement)>)>> {
    let z2 = GroupModel::Zd(2);
    let h = GroupModel::Heisenberg;
    let f2 = GroupModel::Free(2);
    let el = |m: GroupModel, s: &str| m.parse_element(s);
    let mut data = vec![
        ("Z2 [x,y]".to_string(), vec![(el(z2, "x")?, el(z2, "y")?)]),
        ("H3 [a,b][b,a]".to_string(), vec![(el(h, "a")?, el(h, "b")?), (el(h, "b")?, el(h, "a")?)]),
        ("H3 [a,z]".to_string(), vec![(el(h, "a")?, el(h, "z")?)]),
        ("F2 [x,y][y,x]".to_string(), vec![(el(f2, "x")?, el(f2, "y")?), (el(f2, "y")?, el(f2, "x")?)]),
    ];
    for genus in [2, 3] {
        let phi = hom_to_z2(genus)?;
        let pairs = surface_relator(genus)?
            .iter()
            .map(|(a, b)| Ok((phi.apply(a)?, phi.apply(b)?)))
            .collect::<Result<Vec<_>>>()?;
        data.push((format!("Surface(g={genus}) -> Z2"), pairs));
    }
    Ok(data)
}
