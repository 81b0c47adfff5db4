use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupModel};

/// Formal `ℤ`-linear combination of bar cells. Equal cells are merged and zero coefficients
/// dropped on every insertion, so structural equality is equality of chains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain<C: Ord> {
    terms: BTreeMap<C, i64>,
}

pub type Cell2 = (GroupElement, GroupElement);
pub type Cell3 = (GroupElement, GroupElement, GroupElement);

pub type Chain1 = Chain<GroupElement>;
pub type Chain2 = Chain<Cell2>;
pub type Chain3 = Chain<Cell3>;

impl<C: Ord> Default for Chain<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<C: Ord + Clone> Chain<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut c = Self::new();
        for (k, cell) in terms {
            c.add_term(k, cell);
        }
        c
    }

    pub fn add_term(&mut self, k: i64, cell: C) {
        if k == 0 {
            return;
        }
        match self.terms.entry(cell) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += k;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&C, i64)> {
        self.terms.iter().map(|(c, &k)| (c, k))
    }

    pub fn coefficient(&self, cell: &C) -> i64 {
        self.terms.get(cell).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, k) in other.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(c, v)| (v * k, c.clone())))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1))
    }
}

impl Chain2 {
    pub fn cell(k: i64, a: GroupElement, b: GroupElement) -> Self {
        Self::from_terms([(k, (a, b))])
    }

    /// Drops the degenerate cells `[e|b]` and `[a|e]`, on which every normalized cocycle vanishes.
    pub fn normalized(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|((a, b), _)| !a.is_identity() && !b.is_identity())
                .map(|(c, k)| (k, c.clone())),
        )
    }

    pub fn model(&self) -> Option<GroupModel> {
        self.terms().next().map(|((a, _), _)| a.model())
    }
}

/// `∂₂[a|b] = [a] − [ab] + [b]`.
pub fn boundary2(c: &Chain2) -> Result<Chain1> {
    let mut out = Chain1::new();
    for ((a, b), k) in c.terms() {
        out.add_term(k, a.clone());
        out.add_term(-k, a.multiply(b)?);
        out.add_term(k, b.clone());
    }
    Ok(out)
}

/// `∂₃[a|b|c] = [b|c] − [ab|c] + [a|bc] − [a|b]`.
pub fn boundary3(c: &Chain3) -> Result<Chain2> {
    let mut out = Chain2::new();
    for ((a, b, d), k) in c.terms() {
        out.add_term(k, (b.clone(), d.clone()));
        out.add_term(-k, (a.multiply(b)?, d.clone()));
        out.add_term(k, (a.clone(), b.multiply(d)?));
        out.add_term(-k, (a.clone(), b.clone()));
    }
    Ok(out)
}

pub fn is_cycle(c: &Chain2) -> Result<bool> {
    Ok(boundary2(c)?.is_zero())
}

/// `[x|y] − [y|x]` in `ℤ²`, the fundamental 2-cycle.
pub fn standard_z2_cycle() -> Chain2 {
    let z2 = GroupModel::Zd(2);
    let x = z2.generator(0).expect("rank 2");
    let y = z2.generator(1).expect("rank 2");
    Chain2::from_terms([(1, (x.clone(), y.clone())), (-1, (y, x))])
}

/// One serialized chain term, `{"k": -1, "a": "y", "b": "x"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTerm {
    pub k: i64,
    pub a: String,
    pub b: String,
}

impl Chain2 {
    pub fn to_terms(&self) -> Vec<ChainTerm> {
        self.terms()
            .map(|((a, b), k)| ChainTerm { k, a: a.to_text(), b: b.to_text() })
            .collect()
    }

    pub fn from_chain_terms(model: GroupModel, terms: &[ChainTerm]) -> Result<Self> {
        let mut c = Chain2::new();
        for t in terms {
            c.add_term(t.k, (model.parse_element(&t.a)?, model.parse_element(&t.b)?));
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_terms()).expect("chain terms serialize")
    }

    pub fn from_json(model: GroupModel, json: &str) -> Result<Self> {
        let terms: Vec<ChainTerm> = serde_json::from_str(json)?;
        if !model.has_normal_form() {
            return Err(Error::NoNormalForm(model.to_string()));
        }
        Self::from_chain_terms(model, &terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(text: &str) -> GroupElement {
        GroupModel::Zd(2).parse_element(text).unwrap()
    }

    #[test]
    fn merging_and_zero_removal() {
        let mut c = Chain2::new();
        c.add_term(2, (z2("x"), z2("y")));
        c.add_term(-2, (z2("x"), z2("y")));
        assert!(c.is_zero());
        c.add_term(1, (z2("x"), z2("y")));
        c.add_term(3, (z2("x"), z2("y")));
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&(z2("x"), z2("y"))), 4);
    }

    #[test]
    fn boundary2_examples() {
        let d = boundary2(&Chain2::cell(1, z2("x"), z2("y"))).unwrap();
        let expected = Chain1::from_terms([(1, z2("x")), (-1, z2("x y")), (1, z2("y"))]);
        assert_eq!(d, expected);
        let e = z2("e");
        assert_eq!(boundary2(&Chain2::cell(1, e.clone(), e.clone())).unwrap(), Chain1::from_terms([(1, e)]));
        assert!(boundary2(&standard_z2_cycle()).unwrap().is_zero());
    }

    #[test]
    fn boundary3_examples() {
        let e = z2("e");
        assert!(boundary3(&Chain3::from_terms([(1, (e.clone(), e.clone(), e))])).unwrap().is_zero());
        let (x, y) = (z2("x"), z2("y"));
        let d = boundary3(&Chain3::from_terms([(1, (x.clone(), y.clone(), x.clone()))])).unwrap();
        let expected = Chain2::from_terms([
            (1, (y.clone(), x.clone())),
            (-1, (z2("x y"), x.clone())),
            (1, (x.clone(), z2("x y"))),
            (-1, (x, y)),
        ]);
        assert_eq!(d, expected);
    }

    #[test]
    fn cycle_examples() {
        assert!(is_cycle(&standard_z2_cycle()).unwrap());
        assert!(!is_cycle(&Chain2::cell(1, z2("x"), z2("y"))).unwrap());
        assert!(is_cycle(&Chain2::new()).unwrap());
    }

    #[test]
    fn json_round_trip_and_layout() {
        let c = standard_z2_cycle();
        let json = c.to_json();
        assert!(json.contains(r#"{"k":-1,"a":"y","b":"x"}"#), "{json}");
        assert_eq!(Chain2::from_json(GroupModel::Zd(2), &json).unwrap(), c);
        assert!(Chain2::from_json(GroupModel::Zd(2), r#"[{"k":1,"a":"q","b":"x"}]"#).is_err());
        assert!(Chain2::from_json(GroupModel::Surface(2), "[]").is_err());
    }

    #[test]
    fn normalized_drops_degenerate_cells() {
        let e = z2("e");
        let c = standard_z2_cycle().plus(&Chain2::cell(3, e.clone(), z2("x")));
        assert_eq!(c.normalized(), standard_z2_cycle());
    }
}
